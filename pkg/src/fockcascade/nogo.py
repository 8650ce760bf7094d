"""Auxiliary-photon no-go machinery for conditional measurements.

Setting: K homogeneous L-photon "system" states and one auxiliary state, on
disjoint input modes, are mixed in a linear network and the photon number of
one output mode c is measured.  For a state pair (i, j), collect

* ``V[s]``, the overlaps of the conditional states after observing
  N = n_a + n_s - s photons (s = 0..n_s) with the auxiliary state present,
* ``U'[p]``, the vacuum overlaps of the expansion coefficients of the bare
  system states in powers of c (top degree n_s down to 0),

where n_a and n_s are the highest powers of c in the transformed auxiliary
and system polynomials.  The two vectors are connected by a lower-triangular
transfer matrix whose entries depend only on the auxiliary state,

    V = M' U',     diag(M') = D = || top aux coefficient |0> ||^2 > 0,

so det(M') = D^(n_s + 1) never vanishes: the with-aux overlaps vanish exactly
when the no-aux ones do, and auxiliary photons cannot create or destroy
complete distinguishability.

Two independent computational routes are implemented.  ``V`` comes from raw
conditioning of the product state; ``M' U'`` comes from coefficient tables
built by the reordering recursions below.  ``verify_no_go`` runs both and
reports the residual, the triangular structure, and the determinant identity.

Component conventions used throughout (all indices nonnegative):

    direct:     C[s, n, m] = <0| Qs_i(ns-n)^dag Qa(na-s+n)^dag
                                 Qa(na-s+m) Qs_j(ns-m) |0>
    recursion:  C[s, n, m] = delta_{n,m} * <Qs_i(ns-n), Qs_j(ns-n)>
                                         * <Qa(na-s+n), Qa(na-s+n)>
                  - sum_{k=1}^{min(n, s-m)} k! C(na-s+m+k, k) C(ns-n+k, k)
                                          * C[s-k, n-k, m]     (for n >= m)

with C symmetric under n <-> m.  Expanding the recursion gives auxiliary-only
coefficients A[s, p, n, m] (real, symmetric in n, m) with

    C[s, n, m] = sum_p A[s, p, n, m] * U'[p],

row sums B[s, p] of which fill the strict lower triangle of the transfer
matrix while every diagonal entry is D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .measurement import ModeExpansion, condition, expand_by_mode
from .network import LinearNetwork, substitute
from .poly import CreationPolynomial, vacuum_inner_product, vacuum_norm_sq

RESIDUAL_TOL = 1e-8
DET_TOL = 1e-8
DIAG_TOL = 1e-10
ZERO_VECTOR_TOL = 1e-9


# -- input validation --------------------------------------------------------


def _check_states(states: Sequence[CreationPolynomial]) -> int:
    if len(states) < 2:
        raise ValueError("need at least two system states")
    degrees = set()
    for k, psi in enumerate(states):
        if psi.is_zero():
            raise ValueError(f"system state {k} is the zero polynomial")
        if not psi.is_homogeneous():
            raise ValueError(f"system state {k} is not homogeneous")
        degrees.add(psi.degree)
    if len(degrees) != 1:
        raise ValueError(f"system states carry different photon numbers {sorted(degrees)}")
    return degrees.pop()


def _check_aux(aux: CreationPolynomial, states: Sequence[CreationPolynomial]) -> None:
    if aux.is_zero():
        raise ValueError("auxiliary state is the zero polynomial")
    aux_support = aux.support()
    for k, psi in enumerate(states):
        overlap = aux_support & psi.support()
        if overlap:
            raise ValueError(
                f"auxiliary state shares input modes {sorted(overlap)} with "
                f"system state {k}; supports must be disjoint"
            )


def system_expansions(
    states: Sequence[CreationPolynomial], net: LinearNetwork, measured: str
) -> tuple[list[ModeExpansion], int]:
    """Expansions of the transformed states, plus the set-level top power.

    The top power ``n_s`` is the maximum over the whole state set; individual
    expansion coefficients above a state's own degree read as zero.
    """
    expansions = [expand_by_mode(substitute(psi, net), measured) for psi in states]
    return expansions, max(e.order for e in expansions)


# -- overlap vectors (conditioning route) ------------------------------------


def conditional_overlap_vector(
    aux: CreationPolynomial,
    psi_i: CreationPolynomial,
    psi_j: CreationPolynomial,
    net: LinearNetwork,
    measured: str,
    system_order: int | None = None,
) -> np.ndarray:
    """Overlaps of with-aux conditional states over the top outcome window.

    Entry s (s = 0..n_s) is ``<psi_i^N | psi_j^N>`` at N = n_a + n_s - s,
    computed by conditioning the full product state of each input.
    """
    _check_states([psi_i, psi_j])
    _check_aux(aux, [psi_i, psi_j])
    _, pair_order = system_expansions([psi_i, psi_j], net, measured)
    n_s = pair_order if system_order is None else int(system_order)
    n_a = expand_by_mode(substitute(aux, net), measured).order
    total_i = substitute(aux * psi_i, net)
    total_j = substitute(aux * psi_j, net)
    out = np.zeros(n_s + 1, dtype=complex)
    for s in range(n_s + 1):
        outcome = n_a + n_s - s
        cond_i = condition(total_i, measured, outcome).state
        cond_j = condition(total_j, measured, outcome).state
        out[s] = vacuum_inner_product(cond_i, cond_j)
    return out


def no_aux_overlap_vector(
    psi_i: CreationPolynomial,
    psi_j: CreationPolynomial,
    net: LinearNetwork,
    measured: str,
    system_order: int | None = None,
) -> np.ndarray:
    """Same conditioning route with no auxiliary photons present.

    Entry r is the conditional overlap at outcome N = n_s - r.  With the
    conventions used here this equals the coefficient overlap vector entry by
    entry, but it is computed through the measurement path, not from the
    expansions.
    """
    _check_states([psi_i, psi_j])
    _, pair_order = system_expansions([psi_i, psi_j], net, measured)
    n_s = pair_order if system_order is None else int(system_order)
    total_i = substitute(psi_i, net)
    total_j = substitute(psi_j, net)
    out = np.zeros(n_s + 1, dtype=complex)
    for r in range(n_s + 1):
        outcome = n_s - r
        cond_i = condition(total_i, measured, outcome).state
        cond_j = condition(total_j, measured, outcome).state
        out[r] = vacuum_inner_product(cond_i, cond_j)
    return out


def coefficient_overlap_vector(
    psi_i: CreationPolynomial,
    psi_j: CreationPolynomial,
    net: LinearNetwork,
    measured: str,
    system_order: int | None = None,
) -> np.ndarray:
    """Vacuum overlaps of the expansion coefficients, top power first.

    Entry p (p = 0..n_s) is ``<0| Qs_i(ns-p)^dag Qs_j(ns-p) |0>``.
    """
    _check_states([psi_i, psi_j])
    (exp_i, exp_j), pair_order = system_expansions([psi_i, psi_j], net, measured)
    n_s = pair_order if system_order is None else int(system_order)
    return coefficient_overlaps_from_expansions(exp_i, exp_j, n_s)


def coefficient_overlaps_from_expansions(
    exp_i: ModeExpansion, exp_j: ModeExpansion, system_order: int
) -> np.ndarray:
    out = np.zeros(system_order + 1, dtype=complex)
    for p in range(system_order + 1):
        out[p] = vacuum_inner_product(
            exp_i.coefficient(system_order - p), exp_j.coefficient(system_order - p)
        )
    return out


# -- overlap components (direct and recursive) -------------------------------


def _check_component_indices(s: int, n: int, m: int, n_a: int, n_s: int) -> None:
    if not 0 <= s <= n_a + n_s:
        raise IndexError(f"s={s} outside [0, {n_a + n_s}]")
    lo, hi = max(0, s - n_a), min(s, n_s)
    for name, value in (("n", n), ("m", m)):
        if not lo <= value <= hi:
            raise IndexError(f"{name}={value} outside [{lo}, {hi}] for s={s}")


def overlap_component(
    aux_exp: ModeExpansion,
    exp_i: ModeExpansion,
    exp_j: ModeExpansion,
    system_order: int,
    s: int,
    n: int,
    m: int,
) -> complex:
    """Direct evaluation of the component C[s, n, m] from the expansions."""
    n_a = aux_exp.order
    _check_component_indices(s, n, m, n_a, system_order)
    bra = aux_exp.coefficient(n_a - s + n) * exp_i.coefficient(system_order - n)
    ket = aux_exp.coefficient(n_a - s + m) * exp_j.coefficient(system_order - m)
    return vacuum_inner_product(bra, ket)


def overlap_component_recursive(
    aux_exp: ModeExpansion,
    exp_i: ModeExpansion,
    exp_j: ModeExpansion,
    system_order: int,
    s: int,
    n: int,
    m: int,
) -> complex:
    """Component C[s, n, m] evaluated through the reordering recursion.

    Valid on the domain n >= m; use the n <-> m symmetry to reach the other
    half.  Agreement with :func:`overlap_component` is a correctness check on
    the whole table machinery.
    """
    if n < m:
        raise ValueError("recursion domain is n >= m; swap indices by symmetry")
    n_a = aux_exp.order
    n_s = system_order
    _check_component_indices(s, n, m, n_a, n_s)
    memo: dict[tuple[int, int, int], complex] = {}

    def rec(s_: int, n_: int, m_: int) -> complex:
        if n_ < m_:
            n_, m_ = m_, n_
        key = (s_, n_, m_)
        if key in memo:
            return memo[key]
        value = 0.0 + 0.0j
        if n_ == m_:
            value += vacuum_inner_product(
                exp_i.coefficient(n_s - n_), exp_j.coefficient(n_s - n_)
            ) * vacuum_inner_product(
                aux_exp.coefficient(n_a - s_ + n_), aux_exp.coefficient(n_a - s_ + n_)
            )
        for k in range(1, min(n_, s_ - m_) + 1):
            weight = (
                math.factorial(k)
                * math.comb(n_a - s_ + m_ + k, k)
                * math.comb(n_s - n_ + k, k)
            )
            value -= weight * rec(s_ - k, n_ - k, m_)
        memo[key] = value
        return value

    return rec(s, n, m)


# -- auxiliary-only tables and the transfer matrix ----------------------------


@dataclass(frozen=True)
class OverlapTransfer:
    """Auxiliary-only coefficient tables.

    ``aux_norms[r]`` is ``||Qa(r)|0>||^2`` for r = 0..n_a;
    ``leading_aux_norm`` (the diagonal value D) is its last entry.
    ``coeff[(s, p, n, m)]`` are the expansion coefficients A (stored for
    n >= m and mirrored on access); ``stage_sums[(s, p)]`` their strict
    lower-triangle row sums B.
    """

    aux_order: int
    system_order: int
    aux_norms: tuple[float, ...]
    coeff: dict[tuple[int, int, int, int], float]
    stage_sums: dict[tuple[int, int], float]

    @property
    def leading_aux_norm(self) -> float:
        return self.aux_norms[-1]

    def coefficient(self, s: int, p: int, n: int, m: int) -> float:
        if n < m:
            n, m = m, n
        return self.coeff.get((s, p, n, m), 0.0)


def aux_transfer_tables(aux_exp: ModeExpansion, system_order: int) -> OverlapTransfer:
    """Build the A and B tables from the auxiliary expansion alone.

    The diagonal seed is A[s, n, n, n] = ||Qa(n_a - s + n)|0>||^2; all other
    entries follow from the reordering recursion

        A[s, p, n, m] = - sum_{k=1}^{min(n-p, s-m)}
            k! C(n_a-s+m+k, k) C(n_s-n+k, k) * A[s-k, p, n-k, m]   (n >= m),

    mirrored to n < m.  Entries outside the index window
    max(0, n+m-s) <= p <= min(n, m) vanish identically.
    """
    n_a = aux_exp.order
    n_s = int(system_order)
    if n_s < 0:
        raise ValueError("system order must be nonnegative")
    aux_norms = tuple(
        vacuum_norm_sq(aux_exp.coefficient(r)) for r in range(n_a + 1)
    )
    if aux_norms[-1] <= 0:
        raise ValueError("leading auxiliary coefficient has zero norm")

    coeff: dict[tuple[int, int, int, int], float] = {}

    def lookup(s: int, p: int, n: int, m: int) -> float:
        if n < m:
            n, m = m, n
        return coeff.get((s, p, n, m), 0.0)

    for s in range(n_s + 1):
        lo = max(0, s - n_a)
        for n in range(lo, s + 1):
            for m in range(lo, n + 1):
                for p in range(max(0, n + m - s), m + 1):
                    value = aux_norms[n_a - s + n] if p == n == m else 0.0
                    for k in range(1, min(n - p, s - m) + 1):
                        weight = (
                            math.factorial(k)
                            * math.comb(n_a - s + m + k, k)
                            * math.comb(n_s - n + k, k)
                        )
                        value -= weight * lookup(s - k, p, n - k, m)
                    coeff[(s, p, n, m)] = value

    stage_sums: dict[tuple[int, int], float] = {}
    for s in range(n_s + 1):
        lo = max(0, s - n_a)
        for p in range(max(0, s - 2 * n_a), s):
            total = 0.0
            for n in range(lo, s + 1):
                for m in range(lo, s + 1):
                    if min(n, m) < s:
                        total += lookup(s, p, n, m)
            stage_sums[(s, p)] = total

    return OverlapTransfer(
        aux_order=n_a,
        system_order=n_s,
        aux_norms=aux_norms,
        coeff=coeff,
        stage_sums=stage_sums,
    )


def transfer_matrix(tables: OverlapTransfer) -> np.ndarray:
    """Lower-triangular matrix sending the coefficient overlaps to the
    conditional ones: D on the diagonal, stage sums below it."""
    n_s = tables.system_order
    out = np.zeros((n_s + 1, n_s + 1))
    d = tables.leading_aux_norm
    for s in range(n_s + 1):
        out[s, s] = d
        for p in range(max(0, s - 2 * tables.aux_order), s):
            out[s, p] = tables.stage_sums.get((s, p), 0.0)
    return out


# -- end-to-end verification ---------------------------------------------------


@dataclass(frozen=True)
class PairCheck:
    """Residual check for one state pair."""

    i: int
    j: int
    with_aux: tuple[complex, ...]       # conditional overlaps, aux present
    no_aux: tuple[complex, ...]         # conditional overlaps, aux removed
    coefficient: tuple[complex, ...]    # expansion-coefficient overlaps
    predicted: tuple[complex, ...]      # transfer matrix applied to the above
    residual: float
    residual_bound: float
    with_aux_zero: bool
    coefficient_zero: bool
    zero_equivalent: bool
    passed: bool


@dataclass(frozen=True)
class NoGoReport:
    """Full verification record for one instance."""

    description: str
    aux_order: int
    system_order: int
    leading_aux_norm: float
    transfer: tuple[tuple[float, ...], ...]
    determinant: float
    determinant_expected: float
    determinant_ok: bool
    diagonal_ok: bool
    triangular_ok: bool
    pairs: tuple[PairCheck, ...]
    passed: bool

    @property
    def max_residual(self) -> float:
        return max(p.residual for p in self.pairs)

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "aux_order": self.aux_order,
            "system_order": self.system_order,
            "diagonal_value": _sig12(self.leading_aux_norm),
            "transfer_matrix": [[_sig12(x) for x in row] for row in self.transfer],
            "determinant": _sig12(self.determinant),
            "determinant_expected": _sig12(self.determinant_expected),
            "determinant_ok": self.determinant_ok,
            "diagonal_ok": self.diagonal_ok,
            "triangular_ok": self.triangular_ok,
            "passed": self.passed,
            "pairs": [
                {
                    "i": p.i,
                    "j": p.j,
                    "with_aux": _cvec(p.with_aux),
                    "no_aux": _cvec(p.no_aux),
                    "coefficient": _cvec(p.coefficient),
                    "predicted": _cvec(p.predicted),
                    "residual": _sig12(p.residual),
                    "residual_bound": _sig12(p.residual_bound),
                    "with_aux_zero": p.with_aux_zero,
                    "coefficient_zero": p.coefficient_zero,
                    "zero_equivalent": p.zero_equivalent,
                    "passed": p.passed,
                }
                for p in self.pairs
            ],
        }


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _cvec(values) -> list[dict]:
    return [{"re": _sig12(z.real), "im": _sig12(z.imag)} for z in values]


def verify_no_go(
    aux: CreationPolynomial,
    states: Sequence[CreationPolynomial],
    net: LinearNetwork,
    measured: str,
    residual_tol: float = RESIDUAL_TOL,
    det_tol: float = DET_TOL,
    diag_tol: float = DIAG_TOL,
    description: str = "",
    _corrupt_transfer: float = 0.0,
) -> NoGoReport:
    """Run both computational routes on every state pair and compare.

    For each unordered pair the conditioning route produces the with-aux
    overlap vector; the table route predicts it from the coefficient overlaps.
    The instance passes when every pair residual satisfies

        max|V - M'U'| <= residual_tol * max(1, max|V|),

    the transfer matrix is lower-triangular with constant diagonal D (within
    diag_tol relative), its determinant matches D^(n_s+1) within det_tol
    relative, and the zero-vector conditions agree pairwise.
    """
    _check_states(states)
    _check_aux(aux, states)
    state_exps, n_s = system_expansions(states, net, measured)
    aux_exp = expand_by_mode(substitute(aux, net), measured)
    n_a = aux_exp.order

    tables = aux_transfer_tables(aux_exp, n_s)
    m_prime = transfer_matrix(tables)
    if _corrupt_transfer:
        # Failure-path test hook: damage a diagonal entry so the checks trip.
        m_prime[n_s, n_s] += _corrupt_transfer
    d = tables.leading_aux_norm

    determinant = float(np.linalg.det(m_prime))
    determinant_expected = d ** (n_s + 1)
    determinant_ok = (
        abs(determinant - determinant_expected) <= det_tol * determinant_expected
    )
    diagonal_ok = all(
        abs(m_prime[s, s] - d) <= diag_tol * abs(d) for s in range(n_s + 1)
    )
    triangular_ok = bool(np.all(np.triu(m_prime, 1) == 0.0))

    totals = [substitute(aux * psi, net) for psi in states]
    bare = [substitute(psi, net) for psi in states]
    norm_scale = [
        [math.sqrt(vacuum_norm_sq(exp.coefficient(n_s - p))) for p in range(n_s + 1)]
        for exp in state_exps
    ]

    pairs = []
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            v_vec = np.array(
                [
                    vacuum_inner_product(
                        condition(totals[i], measured, n_a + n_s - s).state,
                        condition(totals[j], measured, n_a + n_s - s).state,
                    )
                    for s in range(n_s + 1)
                ]
            )
            u_vec = np.array(
                [
                    vacuum_inner_product(
                        condition(bare[i], measured, n_s - r).state,
                        condition(bare[j], measured, n_s - r).state,
                    )
                    for r in range(n_s + 1)
                ]
            )
            u_prime = coefficient_overlaps_from_expansions(
                state_exps[i], state_exps[j], n_s
            )
            predicted = m_prime @ u_prime
            residual = float(np.abs(v_vec - predicted).max())
            bound = residual_tol * max(1.0, float(np.abs(v_vec).max()))

            u_scale = max(
                max(a * b for a, b in zip(norm_scale[i], norm_scale[j])), 1.0
            )
            coefficient_zero = bool(np.abs(u_prime).max() <= ZERO_VECTOR_TOL * u_scale)
            with_aux_zero = bool(
                np.abs(v_vec).max() <= ZERO_VECTOR_TOL * u_scale * max(d, 1.0)
            )
            zero_equivalent = coefficient_zero == with_aux_zero
            pair_ok = residual <= bound and zero_equivalent
            pairs.append(
                PairCheck(
                    i=i,
                    j=j,
                    with_aux=tuple(v_vec),
                    no_aux=tuple(u_vec),
                    coefficient=tuple(u_prime),
                    predicted=tuple(predicted),
                    residual=residual,
                    residual_bound=bound,
                    with_aux_zero=with_aux_zero,
                    coefficient_zero=coefficient_zero,
                    zero_equivalent=zero_equivalent,
                    passed=pair_ok,
                )
            )

    passed = (
        determinant_ok
        and diagonal_ok
        and triangular_ok
        and all(p.passed for p in pairs)
    )
    return NoGoReport(
        description=description,
        aux_order=n_a,
        system_order=n_s,
        leading_aux_norm=d,
        transfer=tuple(tuple(float(x) for x in row) for row in m_prime),
        determinant=determinant,
        determinant_expected=determinant_expected,
        determinant_ok=determinant_ok,
        diagonal_ok=diagonal_ok,
        triangular_ok=triangular_ok,
        pairs=tuple(pairs),
        passed=passed,
    )
