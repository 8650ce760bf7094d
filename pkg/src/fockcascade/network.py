"""Linear-optical networks as unitary maps on mode operators.

A :class:`LinearNetwork` holds a unitary matrix U over an ordered mode
registry (input order equals output order).  Sending a state through the
network substitutes every input creation operator by the matching linear
combination of output creation operators,

    a^dag_i  ->  sum_j U[j, i] * c^dag_j,

which preserves total photon number and vacuum norms.  Builders are provided
for the elementary devices (beam splitter, phase shifter), plus composition
and Haar-random sampling for tests.
"""

from __future__ import annotations

import json
from typing import Mapping

import numpy as np

from .errors import UnitarityViolation
from .modes import ModeRegistry
from .poly import CreationPolynomial, Exponents

CONSTRUCTION_TOL = 1e-10
COMPOSITION_TOL = 1e-8


class LinearNetwork:
    """Unitary mode map over a registry; validated at construction."""

    __slots__ = ("matrix", "registry")

    def __init__(self, matrix, registry: ModeRegistry, tol: float = CONSTRUCTION_TOL):
        m = np.asarray(matrix, dtype=complex)
        n = registry.size
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match {n} modes")
        deviation = np.abs(m.conj().T @ m - np.eye(n)).max()
        if deviation > tol:
            raise UnitarityViolation(deviation, tol)
        m = m.copy()
        m.setflags(write=False)
        self.matrix = m
        self.registry = registry

    def __repr__(self) -> str:
        return f"LinearNetwork({self.registry.size} modes)"

    def to_dict(self) -> dict:
        return {
            "matrix": [
                [{"re": z.real, "im": z.imag} for z in row] for row in self.matrix
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def from_matrix(entries, registry: ModeRegistry, tol: float = CONSTRUCTION_TOL) -> LinearNetwork:
    """Validated network from an explicit complex matrix."""
    return LinearNetwork(entries, registry, tol)


def identity(registry: ModeRegistry) -> LinearNetwork:
    return LinearNetwork(np.eye(registry.size), registry)


def beam_splitter(
    theta: float, phi: float, i: str, j: str, registry: ModeRegistry
) -> LinearNetwork:
    """Two-mode mixer: identity except the block

        [[cos(theta),            e^{i phi} sin(theta)],
         [-e^{-i phi} sin(theta), cos(theta)          ]]

    on modes ``i`` and ``j``.  ``theta = pi/4, phi = 0`` is a 50/50 splitter.
    """
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    a, b = registry.index(i), registry.index(j)
    m = np.eye(registry.size, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    m[a, a] = c
    m[a, b] = np.exp(1j * phi) * s
    m[b, a] = -np.exp(-1j * phi) * s
    m[b, b] = c
    return LinearNetwork(m, registry)


def phase_shifter(phi: float, i: str, registry: ModeRegistry) -> LinearNetwork:
    """Identity with e^{i phi} on one diagonal entry."""
    m = np.eye(registry.size, dtype=complex)
    m[registry.index(i), registry.index(i)] = np.exp(1j * phi)
    return LinearNetwork(m, registry)


def compose(a: LinearNetwork, b: LinearNetwork, tol: float = COMPOSITION_TOL) -> LinearNetwork:
    """Network applying ``a`` first, then ``b`` (matrix product b a)."""
    a.registry.require_same(b.registry)
    return LinearNetwork(b.matrix @ a.matrix, a.registry, tol)


def haar_random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary via QR of a complex Gaussian matrix.

    The R diagonal is phase-fixed so the distribution is exactly Haar rather
    than QR-convention dependent.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_network(registry: ModeRegistry, rng: np.random.Generator) -> LinearNetwork:
    return LinearNetwork(haar_random_unitary(registry.size, rng), registry)


def substitute(state: CreationPolynomial, net: LinearNetwork) -> CreationPolynomial:
    """Rewrite a state polynomial in terms of the network's output operators.

    Every input operator a^dag_i is replaced by sum_j U[j,i] c^dag_j and the
    result re-expanded.  Total degree is preserved term by term; the vacuum
    norm is preserved up to roundoff because U is unitary.
    """
    state.registry.require_same(net.registry)
    registry = state.registry
    if state.is_zero():
        return state

    # Linear image of each input mode, then cached powers per mode.
    images: list[CreationPolynomial] = []
    for i in range(registry.size):
        col = {
            _unit(registry.size, j): net.matrix[j, i]
            for j in range(registry.size)
            if net.matrix[j, i] != 0
        }
        images.append(CreationPolynomial(registry, col))
    powers: dict[tuple[int, int], CreationPolynomial] = {}

    def image_power(i: int, e: int) -> CreationPolynomial:
        key = (i, e)
        if key not in powers:
            if e == 1:
                powers[key] = images[i]
            else:
                powers[key] = image_power(i, e - 1) * images[i]
        return powers[key]

    total = CreationPolynomial.zero(registry)
    for exps, coeff in state.items():
        term = CreationPolynomial.constant(registry, coeff)
        for i, e in enumerate(exps):
            if e:
                term = term * image_power(i, e)
        total = total + term
    return total


def _unit(size: int, j: int) -> Exponents:
    exps = [0] * size
    exps[j] = 1
    return tuple(exps)


def network_from_dict(data: Mapping, registry: ModeRegistry, tol: float = CONSTRUCTION_TOL) -> LinearNetwork:
    """Build a network from its JSON form.

    Two shapes are accepted: ``{"matrix": [[{re, im}, ...], ...]}`` or
    ``{"elements": [...]}`` where each element is ``{"bs": {"theta", "phi",
    "i", "j"}}`` or ``{"ps": {"phi", "i"}}``, composed left to right.
    """
    if "matrix" in data:
        rows = data["matrix"]
        m = np.array(
            [[complex(cell["re"], cell["im"]) for cell in row] for row in rows]
        )
        return LinearNetwork(m, registry, tol)
    if "elements" in data:
        net = identity(registry)
        for element in data["elements"]:
            if "bs" in element:
                spec = element["bs"]
                stage = beam_splitter(
                    spec["theta"], spec.get("phi", 0.0), spec["i"], spec["j"], registry
                )
            elif "ps" in element:
                spec = element["ps"]
                stage = phase_shifter(spec["phi"], spec["i"], registry)
            else:
                raise ValueError(f"unknown network element {element}")
            net = compose(net, stage)
        return net
    raise ValueError("network object needs a 'matrix' or 'elements' field")
