"""Shared test utilities: independent brute-force references and generators."""

from __future__ import annotations

import math

import numpy as np

from fockcascade import (
    CreationPolynomial,
    FockBasis,
    ModeRegistry,
    vacuum_inner_product,
    vacuum_norm_sq,
)


def bracket_int(powers: list[tuple[str, int]]) -> int:
    """Exact integer vacuum expectation of a single-mode ladder string.

    ``powers`` lists (kind, count) factors left to right, kind 'a' for
    annihilation and 'c' for creation.  The state is tracked as an exact
    integer-weighted combination of number states, using only
    a|n> = n |n-1> on the unnormalized vectors (a^dag)^n |0>:

        a   (a^dag)^n |0> = n (a^dag)^(n-1) |0>
        a^dag (a^dag)^n |0> = (a^dag)^(n+1) |0>

    and <0| (a^dag)^n |0> = [n == 0].  Completely independent of the package
    arithmetic (pure Python ints).
    """
    state: dict[int, int] = {0: 1}
    for kind, count in reversed(powers):
        for _ in range(count):
            new: dict[int, int] = {}
            for n, w in state.items():
                if kind == "c":
                    new[n + 1] = new.get(n + 1, 0) + w
                else:
                    if n > 0:
                        new[n - 1] = new.get(n - 1, 0) + w * n
            state = new
            if not state:
                return 0
    return state.get(0, 0)


def dense_lowering(mode: int, basis: FockBasis) -> np.ndarray:
    """Dense annihilation operator for one mode on a truncated Fock basis."""
    out = np.zeros((basis.dimension, basis.dimension))
    for col, occ in enumerate(basis.states):
        n = occ[mode]
        if n == 0:
            continue
        lowered = list(occ)
        lowered[mode] -= 1
        out[basis.index[tuple(lowered)], col] = math.sqrt(n)
    return out


def dense_annihilation_string(exps: tuple[int, ...], basis: FockBasis) -> np.ndarray:
    """Dense matrix for prod_i a_i^{e_i}."""
    out = np.eye(basis.dimension)
    for mode, e in enumerate(exps):
        low = dense_lowering(mode, basis)
        for _ in range(e):
            out = low @ out
    return out


def random_poly(
    rng: np.random.Generator,
    registry: ModeRegistry,
    max_degree: int,
    homogeneous: bool = False,
) -> CreationPolynomial:
    """Random polynomial with standard-normal complex coefficients."""
    from fockcascade.sampling import homogeneous_exponents

    degrees = [max_degree] if homogeneous else range(max_degree + 1)
    terms = {}
    for degree in degrees:
        if degree == 0:
            terms[(0,) * registry.size] = complex(
                rng.standard_normal(), rng.standard_normal()
            )
            continue
        for exps in homogeneous_exponents(registry, registry.labels, degree):
            terms[exps] = complex(rng.standard_normal(), rng.standard_normal())
    return CreationPolynomial(registry, terms)


def orthogonal_states(
    rng: np.random.Generator,
    registry: ModeRegistry,
    labels: tuple[str, ...],
    degree: int,
    count: int,
) -> list[CreationPolynomial]:
    """Random homogeneous states made mutually orthogonal by Gram-Schmidt."""
    from fockcascade.sampling import random_homogeneous_state

    states: list[CreationPolynomial] = []
    attempts = 0
    while len(states) < count:
        attempts += 1
        if attempts > 50 * count:
            raise RuntimeError("could not build an orthogonal set")
        cand = random_homogeneous_state(rng, registry, labels, degree)
        for prev in states:
            cand = cand - (
                vacuum_inner_product(prev, cand) / vacuum_norm_sq(prev)
            ) * prev
        if vacuum_norm_sq(cand) > 1e-6:
            states.append(cand.scale(1.0 / math.sqrt(vacuum_norm_sq(cand))))
    return states
