"""Photon-number measurement on one mode, and conditional cascades.

Measuring mode c of a state polynomial starts from the expansion in powers of
that mode's creation operator,

    p = sum_n (c^dag)^n * q_n(other modes),

collected by :func:`expand_by_mode`.  Observing N photons on c leaves the
remaining modes in the unnormalized conditional state ``q_N|0>`` (the raw
expansion coefficient; no N! factor folded in), while the physical outcome
probability is

    weight(N) = N! * ||q_N|0>||^2 / ||p|0>||^2.

Weights over all N sum to one.  :func:`run_cascade` iterates the procedure:
mix the surviving modes in a network, measure one mode, and pick the next
stage (or a decision label) based on the outcome, keeping zero-probability
branches in the tree but flagged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import StrategyError, ZeroStateError
from .modes import ModeRegistry
from .network import LinearNetwork, network_from_dict, substitute
from .poly import CreationPolynomial, Exponents, factorial, vacuum_norm_sq


@dataclass(frozen=True)
class ModeExpansion:
    """Polynomial split by the power of one measured mode.

    ``coefficients[n]`` lives on the registry with the measured mode removed;
    ``order`` is the highest power present.  ``coefficient(n)`` zero-extends
    past the stored range so callers can work with a set-level order larger
    than this polynomial's own.
    """

    measured: str
    source_registry: ModeRegistry
    reduced_registry: ModeRegistry
    coefficients: tuple[CreationPolynomial, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, n: int) -> CreationPolynomial:
        if n < 0:
            raise ValueError("expansion index must be nonnegative")
        if n >= len(self.coefficients):
            return CreationPolynomial.zero(self.reduced_registry)
        return self.coefficients[n]

    def reassemble(self) -> CreationPolynomial:
        """Reconstruct the original polynomial (exact, term permutation only)."""
        pos = self.source_registry.index(self.measured)
        terms: dict[Exponents, complex] = {}
        for n, part in enumerate(self.coefficients):
            for exps, coeff in part.items():
                full = exps[:pos] + (n,) + exps[pos:]
                terms[full] = coeff
        return CreationPolynomial(self.source_registry, terms)


def expand_by_mode(p: CreationPolynomial, measured: str) -> ModeExpansion:
    """Collect terms of ``p`` by their power on one mode.

    Each term with exponent n on the measured mode lands in coefficient n with
    that factor removed; the coefficients live on the reduced registry.
    """
    registry = p.registry
    pos = registry.index(measured)
    reduced = registry.without(measured)
    order = p.degree_in(measured)
    buckets: list[dict[Exponents, complex]] = [dict() for _ in range(order + 1)]
    for exps, coeff in p.items():
        n = exps[pos]
        buckets[n][exps[:pos] + exps[pos + 1 :]] = coeff
    return ModeExpansion(
        measured=measured,
        source_registry=registry,
        reduced_registry=reduced,
        coefficients=tuple(CreationPolynomial(reduced, b) for b in buckets),
    )


@dataclass(frozen=True)
class ConditionalState:
    """Result of observing ``outcome`` photons on the measured mode.

    ``state`` is the unnormalized residual polynomial on the remaining modes;
    ``weight`` is the probability of this outcome.
    """

    outcome: int
    state: CreationPolynomial
    weight: float


def condition(total_state: CreationPolynomial, measured: str, outcome: int) -> ConditionalState:
    """Conditional state and outcome probability for one photon count.

    Outcomes above the mode's maximal degree give the zero state with weight
    zero (not an error); a zero total state is rejected.
    """
    if outcome < 0:
        raise ValueError("photon count must be nonnegative")
    if total_state.is_zero():
        raise ZeroStateError("cannot condition the zero state")
    expansion = expand_by_mode(total_state, measured)
    part = expansion.coefficient(outcome)
    if part.is_zero():
        return ConditionalState(outcome=outcome, state=part, weight=0.0)
    weight = (
        factorial(outcome, total_state.registry.photon_cap)
        * vacuum_norm_sq(part)
        / vacuum_norm_sq(total_state)
    )
    return ConditionalState(outcome=outcome, state=part, weight=weight)


def outcome_distribution(
    total_state: CreationPolynomial, measured: str
) -> list[tuple[int, float]]:
    """All outcome probabilities for measuring one mode; they sum to one."""
    if total_state.is_zero():
        raise ZeroStateError("cannot measure the zero state")
    expansion = expand_by_mode(total_state, measured)
    norm_total = vacuum_norm_sq(total_state)
    cap = total_state.registry.photon_cap
    return [
        (n, factorial(n, cap) * vacuum_norm_sq(expansion.coefficient(n)) / norm_total)
        for n in range(expansion.order + 1)
    ]


# -- cascades ---------------------------------------------------------------

Branch = Union["CascadeStage", str]


@dataclass(frozen=True)
class CascadeStage:
    """One stage of a conditional cascade.

    The stage optionally mixes the surviving modes in ``network`` (None means
    no mixing), then measures ``measure``.  ``branches`` maps each photon
    count either to the next stage or to a leaf decision label.  Outcomes
    without an entry become uncovered leaves (label None).
    """

    measure: str
    network: LinearNetwork | None = None
    branches: Mapping[int, Branch] = field(default_factory=dict)


@dataclass
class OutcomeNode:
    """Node of the evaluated outcome tree.

    ``probability`` is cumulative from the root; ``conditional_weight`` is the
    outcome probability given the parent.  Leaves carry a decision ``label``
    (None when the strategy left the outcome uncovered).  Zero-probability
    branches are kept, flagged, and never expanded further.
    """

    history: tuple[int, ...]
    conditional_weight: float
    probability: float
    state: CreationPolynomial
    zero_weight: bool
    covered: bool
    label: str | None = None
    children: list["OutcomeNode"] = field(default_factory=list)

    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list["OutcomeNode"]:
        if self.is_leaf():
            return [self]
        out: list[OutcomeNode] = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def to_dict(self) -> dict:
        node = {
            "history": list(self.history),
            "weight": _sig12(self.conditional_weight),
            "probability": _sig12(self.probability),
            "zero_weight": self.zero_weight,
        }
        if self.is_leaf():
            node["label"] = self.label
            node["covered"] = self.covered
        else:
            node["children"] = [child.to_dict() for child in self.children]
        return node


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


ZERO_WEIGHT_TOL = 1e-12


def run_cascade(input_state: CreationPolynomial, stage: CascadeStage) -> OutcomeNode:
    """Evaluate a cascade strategy on one input state.

    Returns the root of the outcome tree.  Every possible photon count at each
    stage gets a node (zero-weight ones flagged); cumulative probabilities
    over any frontier of the tree sum to one.
    """
    if input_state.is_zero():
        raise ZeroStateError("cannot run a cascade on the zero state")
    root = OutcomeNode(
        history=(),
        conditional_weight=1.0,
        probability=1.0,
        state=input_state,
        zero_weight=False,
        covered=True,
    )
    _expand_stage(root, stage)
    return root


def _expand_stage(node: OutcomeNode, stage: CascadeStage) -> None:
    state = node.state
    registry = state.registry
    if stage.measure not in registry:
        raise StrategyError(
            f"strategy measures mode {stage.measure!r} which is not available "
            f"(already measured or unknown)"
        )
    if stage.network is not None:
        stage.network.registry.require_same(registry)
        state = substitute(state, stage.network)
    expansion = expand_by_mode(state, stage.measure)
    norm_total = vacuum_norm_sq(state)
    cap = registry.photon_cap
    for n in range(expansion.order + 1):
        part = expansion.coefficient(n)
        weight = factorial(n, cap) * vacuum_norm_sq(part) / norm_total
        zero = weight < ZERO_WEIGHT_TOL
        child = OutcomeNode(
            history=node.history + (n,),
            conditional_weight=weight,
            probability=node.probability * weight,
            state=part,
            zero_weight=zero,
            covered=True,
        )
        node.children.append(child)
        branch = stage.branches.get(n)
        if isinstance(branch, CascadeStage) and not zero:
            _expand_stage(child, branch)
        elif isinstance(branch, str):
            child.label = branch
        elif branch is None:
            child.covered = False


def strategy_depth(stage: CascadeStage) -> int:
    depths = [
        strategy_depth(branch)
        for branch in stage.branches.values()
        if isinstance(branch, CascadeStage)
    ]
    return 1 + (max(depths) if depths else 0)


def validate_strategy(
    stage: CascadeStage, registry: ModeRegistry, max_photons: int
) -> None:
    """Static hygiene pass over a strategy tree.

    Checks that every stage measures a still-available mode, that stage
    networks match the surviving registry, and that no branch key references
    an impossible photon count (more photons than can remain at that point).
    """
    if stage.measure not in registry:
        raise StrategyError(f"stage measures unavailable mode {stage.measure!r}")
    if stage.network is not None and stage.network.registry != registry:
        raise StrategyError(
            f"stage network modes {stage.network.registry.labels} do not match "
            f"surviving modes {registry.labels}"
        )
    if registry.size == 1 and any(
        isinstance(b, CascadeStage) for b in stage.branches.values()
    ):
        raise StrategyError("cannot descend below the last mode")
    for n, branch in stage.branches.items():
        if not isinstance(n, int) or n < 0:
            raise StrategyError(f"branch key {n!r} is not a photon count")
        if n > max_photons:
            raise StrategyError(
                f"branch for outcome {n} is unreachable (at most {max_photons} "
                f"photons can arrive here)"
            )
        if isinstance(branch, CascadeStage):
            validate_strategy(branch, registry.without(stage.measure), max_photons - n)
        elif not isinstance(branch, str):
            raise StrategyError(f"branch must be a stage or a label, got {branch!r}")


def strategy_from_dict(
    data: Mapping, registry: ModeRegistry, tol: float = 1e-10
) -> CascadeStage:
    """Recursive strategy JSON: {"network": ... | null, "measure": ...,
    "branches": {"<N>": <stage or leaf label>}}."""
    allowed = {"network", "measure", "branches"}
    unknown = set(data) - allowed
    if unknown:
        raise StrategyError(f"unknown strategy fields {sorted(unknown)}")
    if "measure" not in data:
        raise StrategyError("strategy stage needs a 'measure' field")
    net = None
    if data.get("network") is not None:
        net = network_from_dict(data["network"], registry, tol)
    branches: dict[int, Branch] = {}
    reduced = registry.without(data["measure"]) if registry.size > 1 else None
    for key, value in data.get("branches", {}).items():
        try:
            n = int(key)
        except (TypeError, ValueError):
            raise StrategyError(f"branch key {key!r} is not a photon count") from None
        if isinstance(value, str):
            branches[n] = value
        elif isinstance(value, Mapping):
            if reduced is None:
                raise StrategyError("cannot descend below the last mode")
            branches[n] = strategy_from_dict(value, reduced, tol)
        else:
            raise StrategyError(f"branch {key!r} must be a label or a stage object")
    return CascadeStage(measure=data["measure"], network=net, branches=branches)
