"""Loading and validation of problem-instance JSON files.

An instance file declares the mode registry, the candidate system states, an
optional auxiliary state, and whatever networks or strategy the command needs:

    {
      "modes": ["s0", "s1", "b0"],
      "system_modes": ["s0", "s1"],          (optional role annotation)
      "aux_modes": ["b0"],                   (optional role annotation)
      "states": [ {"terms": [...]}, ... ],
      "aux": {"terms": [...]},               (optional, default constant 1)
      "network": {...},                      (optional)
      "networks": {"name": {...}, ...},      (optional)
      "strategy": {...},                     (optional)
      "measure": "s0"                        (optional default measured mode)
    }

Polynomial objects follow the standard serialization ({"terms": [{"exp", "re",
"im"}]}); their "modes" field may be omitted inside an instance file, in which
case the instance registry applies.  Unknown fields anywhere are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .errors import SchemaError
from .measurement import CascadeStage, strategy_from_dict
from .modes import DEFAULT_PHOTON_CAP, ModeRegistry
from .network import LinearNetwork, network_from_dict
from .poly import CreationPolynomial

_TOP_FIELDS = {
    "modes",
    "system_modes",
    "aux_modes",
    "states",
    "aux",
    "network",
    "networks",
    "strategy",
    "measure",
}
_POLY_FIELDS = {"modes", "terms"}
_TERM_FIELDS = {"exp", "re", "im"}
_NETWORK_FIELDS = {"matrix", "elements"}


@dataclass(frozen=True)
class Instance:
    registry: ModeRegistry
    states: tuple[CreationPolynomial, ...]
    aux: CreationPolynomial
    system_modes: tuple[str, ...] | None
    aux_modes: tuple[str, ...] | None
    networks: dict[str, LinearNetwork]
    strategy: CascadeStage | None
    measure: str | None

    def network(self, name: str | None = None) -> LinearNetwork:
        if name is None:
            if "main" in self.networks:
                return self.networks["main"]
            if len(self.networks) == 1:
                return next(iter(self.networks.values()))
            raise SchemaError(
                "instance declares no unique network; pass a network name "
                f"(available: {sorted(self.networks)})"
            )
        try:
            return self.networks[name]
        except KeyError:
            raise SchemaError(
                f"unknown network {name!r} (available: {sorted(self.networks)})"
            ) from None


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _check_poly_dict(data, where: str) -> None:
    _require(isinstance(data, Mapping), f"{where} must be an object")
    unknown = set(data) - _POLY_FIELDS
    _require(not unknown, f"{where} has unknown fields {sorted(unknown)}")
    _require("terms" in data, f"{where} needs a 'terms' list")
    _require(isinstance(data["terms"], list), f"{where}.terms must be a list")
    for k, term in enumerate(data["terms"]):
        _require(isinstance(term, Mapping), f"{where}.terms[{k}] must be an object")
        unknown = set(term) - _TERM_FIELDS
        _require(not unknown, f"{where}.terms[{k}] has unknown fields {sorted(unknown)}")
        for key in _TERM_FIELDS:
            _require(key in term, f"{where}.terms[{k}] needs '{key}'")
        _require(
            isinstance(term["exp"], list)
            and all(isinstance(e, int) and e >= 0 for e in term["exp"]),
            f"{where}.terms[{k}].exp must be nonnegative integers",
        )
        for key in ("re", "im"):
            _require(
                isinstance(term[key], (int, float)) and not isinstance(term[key], bool),
                f"{where}.terms[{k}].{key} must be a number",
            )


def _check_network_dict(data, where: str) -> None:
    _require(isinstance(data, Mapping), f"{where} must be an object")
    unknown = set(data) - _NETWORK_FIELDS
    _require(not unknown, f"{where} has unknown fields {sorted(unknown)}")
    _require(
        ("matrix" in data) != ("elements" in data),
        f"{where} needs exactly one of 'matrix' or 'elements'",
    )


def parse_instance(
    data,
    photon_cap: int = DEFAULT_PHOTON_CAP,
    unitarity_tol: float = 1e-10,
) -> Instance:
    """Validate a decoded instance object and build the typed pieces.

    Raises SchemaError on structural problems.  Numeric validation failures
    (a non-unitary matrix) surface as UnitarityViolation from the network
    constructor and are left to the caller to map onto an exit code.
    """
    _require(isinstance(data, Mapping), "instance must be a JSON object")
    unknown = set(data) - _TOP_FIELDS
    _require(not unknown, f"instance has unknown fields {sorted(unknown)}")
    _require("modes" in data, "instance needs a 'modes' list")
    _require(
        isinstance(data["modes"], list)
        and data["modes"]
        and all(isinstance(m, str) for m in data["modes"]),
        "'modes' must be a non-empty list of strings",
    )
    try:
        registry = ModeRegistry(tuple(data["modes"]), photon_cap=photon_cap)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None

    _require("states" in data, "instance needs a 'states' list")
    _require(
        isinstance(data["states"], list) and data["states"],
        "'states' must be a non-empty list",
    )
    states = []
    for k, raw in enumerate(data["states"]):
        _check_poly_dict(raw, f"states[{k}]")
        try:
            states.append(CreationPolynomial.from_dict(raw, registry))
        except Exception as exc:
            raise SchemaError(f"states[{k}]: {exc}") from None

    if "aux" in data:
        _check_poly_dict(data["aux"], "aux")
        try:
            aux = CreationPolynomial.from_dict(data["aux"], registry)
        except Exception as exc:
            raise SchemaError(f"aux: {exc}") from None
    else:
        aux = CreationPolynomial.constant(registry, 1.0)

    roles = {}
    for field_name in ("system_modes", "aux_modes"):
        if field_name in data:
            value = data[field_name]
            _require(
                isinstance(value, list) and all(isinstance(m, str) for m in value),
                f"'{field_name}' must be a list of mode labels",
            )
            for label in value:
                _require(label in registry, f"{field_name} entry {label!r} not in modes")
            roles[field_name] = tuple(value)
    if "system_modes" in roles and "aux_modes" in roles:
        clash = set(roles["system_modes"]) & set(roles["aux_modes"])
        _require(not clash, f"modes {sorted(clash)} declared both system and aux")

    networks: dict[str, LinearNetwork] = {}
    if "network" in data:
        _check_network_dict(data["network"], "network")
        networks["main"] = network_from_dict(data["network"], registry, unitarity_tol)
    if "networks" in data:
        _require(isinstance(data["networks"], Mapping), "'networks' must be an object")
        for name, raw in data["networks"].items():
            _check_network_dict(raw, f"networks[{name}]")
            networks[str(name)] = network_from_dict(raw, registry, unitarity_tol)

    strategy = None
    if "strategy" in data:
        strategy = strategy_from_dict(data["strategy"], registry, unitarity_tol)

    measure = data.get("measure")
    if measure is not None:
        _require(isinstance(measure, str), "'measure' must be a mode label")
        _require(measure in registry, f"measure mode {measure!r} not in modes")

    return Instance(
        registry=registry,
        states=tuple(states),
        aux=aux,
        system_modes=roles.get("system_modes"),
        aux_modes=roles.get("aux_modes"),
        networks=networks,
        strategy=strategy,
        measure=measure,
    )


def load_instance(
    path: str,
    photon_cap: int = DEFAULT_PHOTON_CAP,
    unitarity_tol: float = 1e-10,
) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from None
    return parse_instance(data, photon_cap=photon_cap, unitarity_tol=unitarity_tol)
