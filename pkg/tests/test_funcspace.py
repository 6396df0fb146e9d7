"""Value targets, function vectors, difference operators, and the d0 metric."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pdce.errors import ParseError, SpaceMismatch
from pdce.funcspace import (
    FunctionVector,
    Int,
    Mod,
    Rational,
    Torus,
    closeness,
    coset_indicators,
    d0_from_distances,
    diff_tuple_matrix,
    target_from_json,
    translate_matrix,
)
from pdce.groups import FiniteGroup


class TestTargets:
    def test_parse_render_round_trip(self):
        cases = [
            (Int(), [3, -2, 0]),
            (Mod(5), [0, 4, 2]),
            (Rational(), ["1/3", "-2/7", "4"]),
            (Torus(), ["0", "1/2", "2/3"]),
        ]
        for target, raws in cases:
            for raw in raws:
                v = target.parse(raw)
                assert target.parse(target.render(v)) == v

    def test_normalization(self):
        assert Mod(4).normalize(-1) == 3
        assert Torus().normalize(Fraction(7, 3)) == Fraction(1, 3)
        assert Torus().normalize(Fraction(-1, 4)) == Fraction(3, 4)

    def test_parse_errors_are_input_errors(self):
        with pytest.raises(ParseError):
            Int().parse("x")
        with pytest.raises(ParseError):
            Mod(3).parse("1/2")
        with pytest.raises(ParseError):
            Torus().parse("1/0")

    def test_target_from_json(self):
        assert target_from_json({"kind": "mod", "m": 6}).m == 6
        assert target_from_json({"kind": "torus"}).kind == "torus"
        with pytest.raises(ParseError):
            target_from_json({"kind": "nope"})
        with pytest.raises(ParseError):
            target_from_json({"kind": "mod"})

    def test_torus_distance_is_circular(self):
        t = Torus()
        assert t.distance(Fraction(1, 10), Fraction(9, 10)) == Fraction(1, 5)
        assert t.distance(Fraction(0), Fraction(1, 2)) == Fraction(1, 2)

    @given(st.fractions(), st.fractions(), st.fractions())
    @settings(max_examples=50, deadline=None)
    def test_torus_distance_metric_axioms(self, a, b, c):
        t = Torus()
        a, b, c = t.normalize(a), t.normalize(b), t.normalize(c)
        assert t.distance(a, b) == t.distance(b, a)
        assert t.distance(a, a) == 0
        assert t.distance(a, c) <= t.distance(a, b) + t.distance(b, c)
        # translation invariance
        assert t.distance(t.normalize(a + c), t.normalize(b + c)) == t.distance(a, b)


class TestD0:
    def oracle(self, dists):
        """Smallest a with #{i : d_i > a} <= a * n, by scanning candidates."""
        n = len(dists)
        candidates = sorted(set(dists) | {Fraction(j, n) for j in range(n + 1)})
        for a in candidates:
            if sum(1 for d in dists if d > a) <= a * n:
                return a
        return Fraction(1)

    @given(st.lists(st.fractions(min_value=0, max_value=1), min_size=1, max_size=8))
    @settings(max_examples=80, deadline=None)
    def test_matches_oracle(self, dists):
        dists = [Fraction(d) for d in dists]
        got = d0_from_distances(dists)
        assert got == self.oracle(dists)
        # the defining predicate holds at the returned value
        n = len(dists)
        assert sum(1 for d in dists if d > got) <= got * n

    def test_empty_and_zero(self):
        assert d0_from_distances([]) == 0
        assert d0_from_distances([Fraction(0), Fraction(0)]) == 0

    def test_small_exceptional_set_is_cheap(self):
        # one far-off point among many identical ones costs only 1/n
        dists = [Fraction(0)] * 9 + [Fraction(1, 2)]
        assert d0_from_distances(dists) == Fraction(1, 10)


class TestFunctionVector:
    def test_closeness_properties(self):
        g = FiniteGroup([4])
        t = Torus()
        f = FunctionVector(g, t, [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
        h = FunctionVector(g, t, [Fraction(1, 8)] * 4)
        assert closeness(f, f) == 0
        assert closeness(f, h) == closeness(h, f)

    def test_space_mismatch(self):
        t = Torus()
        f = FunctionVector(FiniteGroup([2]), t, [Fraction(0), Fraction(0)])
        h = FunctionVector(FiniteGroup([3]), t, [Fraction(0)] * 3)
        with pytest.raises(SpaceMismatch):
            closeness(f, h)

    def test_translate_matches_pointwise(self):
        g = FiniteGroup([3, 2])
        f = FunctionVector(g, Int(), list(range(6)))
        shifted = f.translate((1, 1))
        for z in g.elements():
            assert shifted.at(z) == f.at(g.sub(z, (1, 1)))

    def test_diff_tuple_matches_inclusion_exclusion(self):
        g = FiniteGroup([4])
        f = FunctionVector(g, Int(), [0, 1, 4, 9])
        d = f.diff_tuple([(1,), (2,)])
        for z in g.elements():
            expect = (f.at(g.sub(g.sub(z, (1,)), (2,))) - f.at(g.sub(z, (1,)))
                      - f.at(g.sub(z, (2,))) + f.at(z))
            assert d.at(z) == expect

    def test_from_callable(self):
        g = FiniteGroup([2, 2])
        f = FunctionVector.from_callable(g, Int(), lambda z: z[0] + 2 * z[1])
        assert list(f.values) == [0, 2, 1, 3]


class TestMatrices:
    def test_translate_matrix_acts_as_translation(self):
        g = FiniteGroup([3])
        m = translate_matrix(g, (1,))
        vals = [10, 20, 30]
        moved = [sum(int(m[i, j]) * vals[j] for j in range(3)) for i in range(3)]
        f = FunctionVector(g, Int(), vals)
        assert moved == list(f.translate((1,)).values)

    def test_diff_tuple_matrix_matches_function_diff(self):
        g = FiniteGroup([2, 2])
        us = [(1, 0), (1, 1)]
        m = diff_tuple_matrix(g, us)
        f = FunctionVector(g, Int(), [3, 1, 4, 1])
        direct = f.diff_tuple([(1, 0), (1, 1)])
        via = [sum(int(m[i, j]) * f.values[j] for j in range(4)) for i in range(4)]
        assert via == list(direct.values)

    def test_coset_indicators_partition(self):
        g = FiniteGroup([4])
        sub = g.subgroup([[2]])
        ind = coset_indicators(g, sub)
        assert ind.shape == (2, 4)
        # each element lies in exactly one coset
        for j in range(4):
            assert sum(int(ind[i, j]) for i in range(2)) == 1
