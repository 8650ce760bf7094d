"""Distinguishability verdicts and the necessity probe."""

import math

import numpy as np
import pytest

from fockcascade import (
    CascadeStage,
    CreationPolynomial,
    DiscriminationInstance,
    ModeRegistry,
    StrategyError,
    beam_splitter,
    cascade_discrimination,
    identity,
    necessity_probe,
    random_nogo_instance,
    stage_orthogonality,
)
from fockcascade.sampling import random_aux_state
from helpers import orthogonal_states

REG2 = ModeRegistry(("m1", "m2"))


def plus_minus_pair(reg=REG2):
    r = 1.0 / math.sqrt(2.0)
    plus = r * (CreationPolynomial.mode(reg, "m1") + CreationPolynomial.mode(reg, "m2"))
    minus = r * (CreationPolynomial.mode(reg, "m1") - CreationPolynomial.mode(reg, "m2"))
    return plus, minus


def constant_aux(reg):
    return CreationPolynomial.constant(reg, 1.0)


class TestInstanceValidation:
    def test_orthogonality_required(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = p + 0.5 * CreationPolynomial.mode(REG2, "m2")
        with pytest.raises(ValueError):
            DiscriminationInstance(states=(p, q), aux=constant_aux(REG2))

    def test_valid_instance(self):
        plus, minus = plus_minus_pair()
        DiscriminationInstance(states=(plus, minus), aux=constant_aux(REG2))

    def test_aux_support_must_be_disjoint(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = CreationPolynomial.mode(REG2, "m2")
        with pytest.raises(ValueError):
            DiscriminationInstance(states=(p, q), aux=CreationPolynomial.mode(REG2, "m1"))


class TestStageOrthogonality:
    def test_disjoint_support_is_vacuous(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = CreationPolynomial.mode(REG2, "m2")
        inst = DiscriminationInstance(states=(p, q), aux=constant_aux(REG2))
        report = stage_orthogonality(inst, identity(REG2), "m1")
        assert report.verdict
        # every outcome has at least one vanishing weight
        assert all(r.vacuous for r in report.records)

    def test_superposed_pair_fails_identity(self):
        plus, minus = plus_minus_pair()
        inst = DiscriminationInstance(states=(plus, minus), aux=constant_aux(REG2))
        report = stage_orthogonality(inst, identity(REG2), "m1")
        assert not report.verdict
        failing = [r for r in report.records if not r.distinguished]
        assert failing
        for r in failing:
            assert abs(abs(r.inner_product) - 0.5) < 1e-12

    def test_superposed_pair_passes_after_splitter(self):
        plus, minus = plus_minus_pair()
        inst = DiscriminationInstance(states=(plus, minus), aux=constant_aux(REG2))
        splitter = beam_splitter(np.pi / 4, 0.0, "m1", "m2", REG2)
        report = stage_orthogonality(inst, splitter, "m1")
        assert report.verdict

    def test_records_carry_both_weights(self):
        plus, minus = plus_minus_pair()
        inst = DiscriminationInstance(states=(plus, minus), aux=constant_aux(REG2))
        report = stage_orthogonality(inst, identity(REG2), "m1")
        for r in report.records:
            assert 0.0 <= r.weight_i <= 1.0
            assert 0.0 <= r.weight_j <= 1.0


def full_measurement_strategy(reg, total_photons=1, network=None, depth_labels=("m1", "m2")):
    """Measure every mode in order, labelling leaves by their history."""
    first, second = depth_labels

    def leaf(n1, n2):
        return f"saw-{n1}{n2}"

    branches = {
        n1: CascadeStage(
            measure=second,
            branches={n2: leaf(n1, n2) for n2 in range(total_photons - n1 + 1)},
        )
        for n1 in range(total_photons + 1)
    }
    return CascadeStage(measure=first, network=network, branches=branches)


class TestCascadeDiscrimination:
    def test_disjoint_states_pass(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = CreationPolynomial.mode(REG2, "m2")
        inst = DiscriminationInstance(
            states=(p, q),
            aux=constant_aux(REG2),
            strategy=full_measurement_strategy(REG2),
        )
        report = cascade_discrimination(inst)
        assert report.verdict
        assert not report.ambiguous_leaves

    def test_superposed_pair_fails_identity_boxes(self):
        plus, minus = plus_minus_pair()
        inst = DiscriminationInstance(
            states=(plus, minus),
            aux=constant_aux(REG2),
            strategy=full_measurement_strategy(REG2),
        )
        report = cascade_discrimination(inst)
        assert not report.verdict
        histories = {leaf.history for leaf in report.ambiguous_leaves}
        assert (1, 0) in histories and (0, 1) in histories

    def test_superposed_pair_passes_with_splitter(self):
        plus, minus = plus_minus_pair()
        splitter = beam_splitter(np.pi / 4, 0.0, "m1", "m2", REG2)
        inst = DiscriminationInstance(
            states=(plus, minus),
            aux=constant_aux(REG2),
            strategy=full_measurement_strategy(REG2, network=splitter),
        )
        report = cascade_discrimination(inst)
        assert report.verdict

    def test_verdict_stable_under_reordering(self):
        plus, minus = plus_minus_pair()
        for states in [(plus, minus), (minus, plus)]:
            inst = DiscriminationInstance(
                states=states,
                aux=constant_aux(REG2),
                strategy=full_measurement_strategy(REG2),
            )
            assert not cascade_discrimination(inst).verdict
        splitter = beam_splitter(np.pi / 4, 0.0, "m1", "m2", REG2)
        for states in [(plus, minus), (minus, plus)]:
            inst = DiscriminationInstance(
                states=states,
                aux=constant_aux(REG2),
                strategy=full_measurement_strategy(REG2, network=splitter),
            )
            assert cascade_discrimination(inst).verdict

    def test_verdict_stable_under_relabeling(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = CreationPolynomial.mode(REG2, "m2")
        relabelled = CascadeStage(
            measure="m1",
            branches={
                n1: CascadeStage(
                    measure="m2",
                    branches={n2: f"alt-{n1}-{n2}" for n2 in range(2 - n1)},
                )
                for n1 in range(2)
            },
        )
        inst = DiscriminationInstance(
            states=(p, q), aux=constant_aux(REG2), strategy=relabelled
        )
        assert cascade_discrimination(inst).verdict

    def test_uncovered_reachable_outcome_raises(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = CreationPolynomial.mode(REG2, "m2")
        sparse = CascadeStage(measure="m1", branches={1: "first"})  # misses N=0
        inst = DiscriminationInstance(
            states=(p, q), aux=constant_aux(REG2), strategy=sparse
        )
        with pytest.raises(StrategyError):
            cascade_discrimination(inst)

    def test_missing_strategy_raises(self):
        p = CreationPolynomial.mode(REG2, "m1")
        q = CreationPolynomial.mode(REG2, "m2")
        inst = DiscriminationInstance(states=(p, q), aux=constant_aux(REG2))
        with pytest.raises(StrategyError):
            cascade_discrimination(inst)


class TestTheoremEndToEnd:
    def test_stage_verdicts_agree_with_and_without_aux(self):
        # Whenever the single-stage check fails with auxiliary photons it
        # also fails with the auxiliary removed, and vice versa.
        rng = np.random.default_rng(61)
        hits = {True: 0, False: 0}
        for _ in range(20):
            n_sys = int(rng.integers(2, 4))
            degree = int(rng.integers(1, 3))
            labels = tuple(f"s{k}" for k in range(n_sys)) + ("b0",)
            reg = ModeRegistry(labels)
            states = orthogonal_states(rng, reg, labels[:-1], degree, 2)
            aux = random_aux_state(rng, reg, ("b0",), int(rng.integers(1, 3)))
            from fockcascade.network import random_network

            net = random_network(reg, rng)
            measured = labels[int(rng.integers(0, len(labels)))]
            with_aux = stage_orthogonality(
                DiscriminationInstance(states=tuple(states), aux=aux), net, measured
            )
            without = stage_orthogonality(
                DiscriminationInstance(states=tuple(states), aux=constant_aux(reg)),
                net,
                measured,
            )
            hits[with_aux.verdict] += 1
            if not with_aux.verdict:
                assert not without.verdict
            if not without.verdict:
                assert not with_aux.verdict
        # the sample should include failing stages (passing ones are rare)
        assert hits[False] > 0


class TestNecessityProbe:
    def test_constant_aux_gives_identity_transfer(self):
        plus, minus = plus_minus_pair()
        inst = DiscriminationInstance(states=(plus, minus), aux=constant_aux(REG2))
        report = necessity_probe(inst, identity(REG2), "m1")
        assert abs(report.sigma_min - 1.0) < 1e-12
        for pair in report.pairs:
            assert abs(pair.with_aux_norm - pair.no_aux_norm) < 1e-12
        assert report.all_hold

    def test_bound_holds_on_random_instances(self):
        rng = np.random.default_rng(62)
        checked = 0
        while checked < 15:
            inst = random_nogo_instance(rng, force_aux_photons=True)
            if len(inst.system_labels) < 2:
                continue  # a 1-mode homogeneous space has no orthogonal pair
            states = orthogonal_states(
                rng,
                inst.registry,
                inst.system_labels,
                inst.states[0].degree,
                2,
            )
            disc = DiscriminationInstance(states=tuple(states), aux=inst.aux)
            report = necessity_probe(disc, inst.network, inst.measured)
            assert report.all_hold
            if any(p.no_aux_norm > 1e-6 for p in report.pairs):
                checked += 1

    def test_distinguishable_pair_keeps_implication(self):
        reg = ModeRegistry(("s0", "s1", "b0"))
        psi1 = CreationPolynomial.mode(reg, "s0")
        psi2 = CreationPolynomial.mode(reg, "s1")
        aux = CreationPolynomial.mode(reg, "b0")
        inst = DiscriminationInstance(states=(psi1, psi2), aux=aux)
        net = beam_splitter(0.6, 0.1, "s0", "b0", reg)
        report = necessity_probe(inst, net, "s0")
        assert report.all_hold
