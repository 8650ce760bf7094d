"""Distinguishability verdicts for sets of orthogonal photon-number states.

A :class:`DiscriminationInstance` bundles K mutually orthogonal homogeneous
L-photon states (the candidates to identify), an auxiliary state on disjoint
modes, and optionally a measurement cascade strategy.  Three checks are
provided:

* :func:`stage_orthogonality`: after one network and one photon-number
  measurement, are the conditional states of every pair orthogonal at every
  outcome?  Perfect single-stage identification requires exactly this.
* :func:`cascade_discrimination`: does a full strategy end with every
  nonzero-probability leaf reachable by exactly one input state?
* :func:`necessity_probe`: quantitative form of the no-go bound; whenever the
  no-aux overlap vector is nonzero, the with-aux one is bounded away from
  zero by the smallest singular value of the transfer matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StrategyError
from .measurement import (
    CascadeStage,
    condition,
    expand_by_mode,
    run_cascade,
    validate_strategy,
)
from .network import LinearNetwork, substitute
from .nogo import (
    aux_transfer_tables,
    coefficient_overlaps_from_expansions,
    system_expansions,
    transfer_matrix,
    _check_aux,
    _check_states,
)
from .poly import CreationPolynomial, vacuum_inner_product, vacuum_norm_sq

INPUT_ORTHOGONALITY_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-9
VACUOUS_WEIGHT_TOL = 1e-12
PROBE_SLACK = 1e-8


@dataclass(frozen=True)
class DiscriminationInstance:
    """Candidate state set, auxiliary state, and optional strategy."""

    states: tuple[CreationPolynomial, ...]
    aux: CreationPolynomial
    strategy: CascadeStage | None = None

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        _check_states(states)
        _check_aux(self.aux, states)
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                overlap = abs(vacuum_inner_product(states[i], states[j]))
                scale = math.sqrt(
                    vacuum_norm_sq(states[i]) * vacuum_norm_sq(states[j])
                )
                if overlap > INPUT_ORTHOGONALITY_TOL * max(scale, 1.0):
                    raise ValueError(
                        f"candidate states {i} and {j} are not orthogonal "
                        f"(|<i|j>| = {overlap:.3e})"
                    )

    def total_states(self, net: LinearNetwork) -> list[CreationPolynomial]:
        return [substitute(self.aux * psi, net) for psi in self.states]


@dataclass(frozen=True)
class PairOutcomeRecord:
    """Orthogonality bookkeeping for one pair at one outcome."""

    i: int
    j: int
    outcome: int
    inner_product: complex
    weight_i: float
    weight_j: float
    orthogonal: bool     # inner-product test at scaled tolerance
    vacuous: bool        # some weight below the vacuous threshold
    distinguished: bool  # vacuous or orthogonal


@dataclass(frozen=True)
class StageReport:
    measured: str
    max_outcome: int
    records: tuple[PairOutcomeRecord, ...]
    verdict: bool

    def to_dict(self) -> dict:
        return {
            "measured": self.measured,
            "max_outcome": self.max_outcome,
            "verdict": self.verdict,
            "records": [
                {
                    "i": r.i,
                    "j": r.j,
                    "outcome": r.outcome,
                    "inner_product": {
                        "re": _sig12(r.inner_product.real),
                        "im": _sig12(r.inner_product.imag),
                    },
                    "weight_i": _sig12(r.weight_i),
                    "weight_j": _sig12(r.weight_j),
                    "orthogonal": r.orthogonal,
                    "vacuous": r.vacuous,
                    "distinguished": r.distinguished,
                }
                for r in self.records
            ],
        }


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def stage_orthogonality(
    instance: DiscriminationInstance, net: LinearNetwork, measured: str
) -> StageReport:
    """Pairwise conditional-state orthogonality after one measurement.

    Every unordered pair is checked at every outcome from 0 up to the largest
    possible photon count on the measured mode.  A pair counts as
    distinguished at an outcome when the scaled inner-product test passes or
    when at least one conditional weight is vacuously small; both conditions
    are reported separately.
    """
    totals = instance.total_states(net)
    aux_order = expand_by_mode(substitute(instance.aux, net), measured).order
    _, system_order = system_expansions(instance.states, net, measured)
    max_outcome = aux_order + system_order

    records = []
    for i in range(len(totals)):
        for j in range(i + 1, len(totals)):
            for outcome in range(max_outcome + 1):
                cond_i = condition(totals[i], measured, outcome)
                cond_j = condition(totals[j], measured, outcome)
                inner = vacuum_inner_product(cond_i.state, cond_j.state)
                scale = math.sqrt(
                    vacuum_norm_sq(cond_i.state) * vacuum_norm_sq(cond_j.state)
                )
                orthogonal = abs(inner) <= ORTHOGONALITY_TOL * max(scale, 1.0)
                vacuous = min(cond_i.weight, cond_j.weight) < VACUOUS_WEIGHT_TOL
                records.append(
                    PairOutcomeRecord(
                        i=i,
                        j=j,
                        outcome=outcome,
                        inner_product=inner,
                        weight_i=cond_i.weight,
                        weight_j=cond_j.weight,
                        orthogonal=orthogonal,
                        vacuous=vacuous,
                        distinguished=vacuous or orthogonal,
                    )
                )
    return StageReport(
        measured=measured,
        max_outcome=max_outcome,
        records=tuple(records),
        verdict=all(r.distinguished for r in records),
    )


@dataclass(frozen=True)
class LeafRecord:
    history: tuple[int, ...]
    label: str | None
    probabilities: tuple[float, ...]   # one per input state
    reachable_states: tuple[int, ...]  # states arriving with nonzero probability
    ambiguous: bool


@dataclass(frozen=True)
class CascadeReport:
    verdict: bool
    leaves: tuple[LeafRecord, ...]

    @property
    def ambiguous_leaves(self) -> tuple[LeafRecord, ...]:
        return tuple(leaf for leaf in self.leaves if leaf.ambiguous)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "leaves": [
                {
                    "history": list(leaf.history),
                    "label": leaf.label,
                    "probabilities": [_sig12(p) for p in leaf.probabilities],
                    "reachable_states": list(leaf.reachable_states),
                    "ambiguous": leaf.ambiguous,
                }
                for leaf in self.leaves
            ],
        }


def cascade_discrimination(instance: DiscriminationInstance) -> CascadeReport:
    """Run the strategy on every candidate and judge leaf-level ambiguity.

    Passes when every outcome history reached with nonzero probability is
    reached by exactly one input state.  Raises StrategyError when the
    strategy leaves a reachable outcome without a branch or label, or when it
    references impossible outcomes or consumed modes.
    """
    if instance.strategy is None:
        raise StrategyError("instance has no strategy to check")
    totals = [instance.aux * psi for psi in instance.states]
    registry = totals[0].registry
    max_photons = max(t.degree for t in totals)
    validate_strategy(instance.strategy, registry, max_photons)

    leaf_map: dict[tuple[int, ...], dict] = {}
    for idx, total in enumerate(totals):
        tree = run_cascade(total, instance.strategy)
        for leaf in tree.leaves():
            entry = leaf_map.setdefault(
                leaf.history,
                {"label": leaf.label, "covered": leaf.covered,
                 "probs": [0.0] * len(totals)},
            )
            entry["probs"][idx] = leaf.probability
            if not leaf.zero_weight:
                entry["label"] = leaf.label
                entry["covered"] = leaf.covered

    leaves = []
    for history in sorted(leaf_map):
        entry = leaf_map[history]
        reachable = tuple(
            idx for idx, p in enumerate(entry["probs"]) if p >= VACUOUS_WEIGHT_TOL
        )
        if reachable and not entry["covered"]:
            raise StrategyError(
                f"strategy leaves reachable outcome history {history} uncovered"
            )
        leaves.append(
            LeafRecord(
                history=history,
                label=entry["label"],
                probabilities=tuple(entry["probs"]),
                reachable_states=reachable,
                ambiguous=len(reachable) > 1,
            )
        )
    return CascadeReport(
        verdict=all(not leaf.ambiguous for leaf in leaves),
        leaves=tuple(leaves),
    )


@dataclass(frozen=True)
class PairProbe:
    i: int
    j: int
    no_aux_norm: float      # ||U'||_2
    with_aux_norm: float    # ||V||_2
    lower_bound: float      # sigma_min * ||U'||_2 - slack
    bound_holds: bool
    implication_holds: bool  # U' nonzero  =>  V nonzero


@dataclass(frozen=True)
class ProbeReport:
    sigma_min: float
    diagonal_value: float
    pairs: tuple[PairProbe, ...]
    all_hold: bool

    def to_dict(self) -> dict:
        return {
            "sigma_min": _sig12(self.sigma_min),
            "diagonal_value": _sig12(self.diagonal_value),
            "all_hold": self.all_hold,
            "pairs": [
                {
                    "i": p.i,
                    "j": p.j,
                    "no_aux_norm": _sig12(p.no_aux_norm),
                    "with_aux_norm": _sig12(p.with_aux_norm),
                    "lower_bound": _sig12(p.lower_bound),
                    "bound_holds": p.bound_holds,
                    "implication_holds": p.implication_holds,
                }
                for p in self.pairs
            ],
        }


def necessity_probe(
    instance: DiscriminationInstance, net: LinearNetwork, measured: str
) -> ProbeReport:
    """Check the quantitative no-go bound on one instance.

    For each pair, compares ||V||_2 against sigma_min(M') * ||U'||_2 minus a
    small numerical slack, and asserts the implication "no-aux overlaps
    nonzero implies with-aux overlaps nonzero".
    """
    state_exps, system_order = system_expansions(instance.states, net, measured)
    aux_exp = expand_by_mode(substitute(instance.aux, net), measured)
    tables = aux_transfer_tables(aux_exp, system_order)
    m_prime = transfer_matrix(tables)
    sigma_min = float(np.linalg.svd(m_prime, compute_uv=False).min())

    totals = instance.total_states(net)
    n_a = aux_exp.order
    pairs = []
    for i in range(len(totals)):
        for j in range(i + 1, len(totals)):
            u_prime = coefficient_overlaps_from_expansions(
                state_exps[i], state_exps[j], system_order
            )
            v_vec = np.array(
                [
                    vacuum_inner_product(
                        condition(totals[i], measured, n_a + system_order - s).state,
                        condition(totals[j], measured, n_a + system_order - s).state,
                    )
                    for s in range(system_order + 1)
                ]
            )
            u_norm = float(np.linalg.norm(u_prime))
            v_norm = float(np.linalg.norm(v_vec))
            lower = sigma_min * u_norm - PROBE_SLACK
            bound_holds = v_norm >= lower
            u_nonzero = u_norm > ORTHOGONALITY_TOL
            if not u_nonzero:
                implication = True
            elif lower > 0.0:
                # The bound certifies a strictly positive with-aux norm.
                implication = v_norm >= lower
            else:
                # Bound too weak to falsify numerically at this scale.
                implication = True
            pairs.append(
                PairProbe(
                    i=i,
                    j=j,
                    no_aux_norm=u_norm,
                    with_aux_norm=v_norm,
                    lower_bound=lower,
                    bound_holds=bound_holds,
                    implication_holds=bool(implication),
                )
            )
    return ProbeReport(
        sigma_min=sigma_min,
        diagonal_value=tables.leading_aux_norm,
        pairs=tuple(pairs),
        all_hold=all(p.bound_holds and p.implication_holds for p in pairs),
    )
