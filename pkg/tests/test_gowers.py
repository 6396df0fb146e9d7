"""Directional uniformity norms, exact residuals, rounding repair, sweeps."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from pdce.errors import (
    NotBounded,
    ProductTooLarge,
    RoundingAmbiguous,
    WrongTarget,
)
from pdce.funcspace import FunctionVector, Int, Mod, Torus, closeness
from pdce.gowers import (
    ComplexFunction,
    gowers_norm,
    phase_function,
    repair,
    residual,
    rounding_margin,
    sample_exact_solution,
    stability_sweep,
)
from pdce.groups import FiniteGroup
from pdce.solutions import Instance, solution_module


def cyclic_instance(n: int, k: int) -> Instance:
    g = FiniteGroup([n])
    return Instance(g, [g.full_subgroup() for _ in range(k)], Torus())


def axes_instance(n: int) -> Instance:
    g = FiniteGroup([n, n])
    return Instance(g, [g.subgroup([[1, 0]]), g.subgroup([[0, 1]])], Torus())


class TestGowersNorm:
    def test_norm_of_constants_is_one(self):
        g = FiniteGroup([5])
        f = ComplexFunction(g, np.ones(5, dtype=complex))
        assert gowers_norm(f, [g.full_subgroup()]) == pytest.approx(1.0, abs=1e-12)

    def test_matches_direct_nested_sum(self):
        # oracle: the k-fold nested average computed literally
        g = FiniteGroup([3])
        rng = random.Random(4)
        vals = np.array(
            [np.exp(2j * np.pi * rng.random()) * rng.random() for _ in range(3)]
        )
        f = ComplexFunction(g, vals)
        subs = [g.full_subgroup(), g.full_subgroup()]
        total = 0j
        for z in g.elements():
            for u1 in subs[0].elements():
                for u2 in subs[1].elements():
                    term = 1.0 + 0j
                    for eps1, eps2 in itertools.product((0, 1), repeat=2):
                        w = g.sub(g.sub(z, g.scale(eps1, u1)), g.scale(eps2, u2))
                        v = vals[g.index_of(w)]
                        term *= v if (eps1 + eps2) % 2 == 0 else np.conj(v)
                    total += term
        direct = (total.real / (3 * 3 * 3)) ** Fraction(1, 4)
        assert gowers_norm(f, subs) == pytest.approx(float(direct), abs=1e-12)

    def test_exact_solutions_are_extremal(self):
        rng = random.Random(77)
        for inst in (cyclic_instance(4, 2), axes_instance(3)):
            for _ in range(3):
                f = sample_exact_solution(inst, rng)
                cf = ComplexFunction.from_torus(f)
                assert gowers_norm(cf, inst.subgroups) == pytest.approx(1.0, abs=1e-10)

    def test_delta_function_norm_is_reciprocal_order(self):
        for n in (2, 3, 7, 16):
            g = FiniteGroup([n])
            f = ComplexFunction.indicator(g, (0,))
            got = gowers_norm(f, [g.full_subgroup()])
            assert got == pytest.approx(1.0 / n, abs=1e-12)

    def test_norm_never_exceeds_one_for_bounded(self):
        rng = random.Random(3)
        g = FiniteGroup([2, 2])
        subs = [g.subgroup([[1, 0]]), g.subgroup([[0, 1]])]
        for _ in range(5):
            vals = np.array(
                [rng.random() * np.exp(2j * np.pi * rng.random()) for _ in range(4)]
            )
            f = ComplexFunction(g, vals)
            assert gowers_norm(f, subs) <= 1.0 + 1e-12

    def test_unbounded_values_rejected(self):
        g = FiniteGroup([2])
        with pytest.raises(NotBounded):
            ComplexFunction(g, np.array([2.0 + 0j, 0j]))

    def test_mod_functions_embed_on_the_circle(self):
        g = FiniteGroup([4])
        f = FunctionVector(g, Mod(4), [0, 1, 2, 3])
        cf = ComplexFunction.from_torus(f)
        assert np.allclose(cf.values, np.exp(2j * np.pi * np.arange(4) / 4))


class TestResidual:
    def test_zero_iff_member(self):
        inst = axes_instance(2)
        mod = solution_module(inst, (0, 1))
        member = FunctionVector(
            inst.group, Torus(), [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(5, 6)]
        )
        assert mod.contains(member)
        assert residual(member, inst.subgroups) == 0
        off = FunctionVector(
            inst.group, Torus(), [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(5, 6)]
        )
        assert not mod.contains(off)
        assert residual(off, inst.subgroups) > 0

    def test_wrong_target(self):
        g = FiniteGroup([2])
        f = FunctionVector(g, Int(), [0, 1])
        with pytest.raises(WrongTarget):
            residual(f, [g.full_subgroup()])

    def test_budget(self):
        inst = cyclic_instance(8, 3)
        f = sample_exact_solution(inst, random.Random(0))
        with pytest.raises(ProductTooLarge):
            residual(f, inst.subgroups, budget=10)


class TestRepair:
    def test_margin_value_on_axes(self):
        inst = axes_instance(2)
        margin = rounding_margin(inst)
        assert margin is not None and margin > 0
        # rows are fourfold inclusion-exclusion patterns: max abs row sum 4
        assert margin == Fraction(1, 8)

    def test_below_margin_recovers_membership_and_distance(self):
        rng = random.Random(15)
        for inst in (axes_instance(2), cyclic_instance(6, 2)):
            mod = solution_module(inst, inst.full_label())
            margin = rounding_margin(inst)
            assert margin is not None
            delta = margin / 3
            for s in range(10):
                exact = sample_exact_solution(inst, rng)
                noisy_vals = [
                    Torus().normalize(
                        v + delta * Fraction(rng.randint(-1000, 1000), 1000)
                    )
                    for v in exact.values
                ]
                noisy = FunctionVector(inst.group, Torus(), noisy_vals)
                g = repair(noisy, inst)
                assert mod.contains(g)
                assert closeness(noisy, g) <= 2 * delta

    def test_repair_is_identity_on_members(self):
        rng = random.Random(8)
        inst = axes_instance(3)
        f = sample_exact_solution(inst, rng)
        g = repair(f, inst)
        assert list(g.values) == list(f.values)

    def test_half_integer_evaluation_is_ambiguous(self):
        g = FiniteGroup([2])
        inst = Instance(g, [g.full_subgroup()], Torus())
        # the single difference evaluates to exactly 1/2
        f = FunctionVector(g, Torus(), [Fraction(0), Fraction(1, 2)])
        with pytest.raises(RoundingAmbiguous):
            repair(f, inst)

    def test_wrong_target_for_margin(self):
        g = FiniteGroup([2])
        inst = Instance(g, [g.full_subgroup()], Int())
        with pytest.raises(WrongTarget):
            rounding_margin(inst)


class TestSampling:
    def test_samples_are_members(self):
        rng = random.Random(1)
        for inst in (axes_instance(2), cyclic_instance(5, 2), cyclic_instance(4, 3)):
            mod = solution_module(inst, inst.full_label())
            for _ in range(5):
                f = sample_exact_solution(inst, rng)
                assert mod.contains(f)

    def test_deterministic_for_fixed_seed(self):
        inst = axes_instance(2)
        a = sample_exact_solution(inst, random.Random(42))
        b = sample_exact_solution(inst, random.Random(42))
        assert list(a.values) == list(b.values)


class TestSweep:
    def test_csv_shape_and_determinism(self):
        inst = axes_instance(2)
        grid = [Fraction(0), Fraction(1, 100)]
        rep1 = stability_sweep(inst, grid, samples=4, rng_seed=3)
        rep2 = stability_sweep(inst, grid, samples=4, rng_seed=3)
        assert rep1.to_csv() == rep2.to_csv()
        lines = rep1.to_csv().strip().splitlines()
        assert lines[0] == "delta,sample,residual,repair_d0,success"
        assert len(lines) == 1 + 2 * 4

    def test_zero_noise_always_succeeds(self):
        inst = axes_instance(2)
        rep = stability_sweep(inst, [Fraction(0)], samples=5, rng_seed=0)
        assert all(row.success for row in rep.rows)
        assert all(row.residual == 0 for row in rep.rows)

    def test_below_margin_rows_succeed(self):
        inst = axes_instance(2)
        margin = rounding_margin(inst)
        rep = stability_sweep(inst, [margin / 4], samples=8, rng_seed=2)
        assert all(row.success for row in rep.rows)


class TestPhase:
    def test_phase_function_rounds_to_rationals(self):
        g = FiniteGroup([4])
        vals = np.exp(2j * np.pi * np.array([0, 0.2501, 0.5, 0.7499]))
        f = phase_function(g, vals, max_denominator=4)
        assert f.target.kind == "torus"
        assert list(f.values) == [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
