"""Finite abelian groups, subgroups, and independence of direction families."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from pdce.errors import ParentMismatch
from pdce.groups import FiniteGroup, is_linearly_independent, subgroup_sum


orders_strategy = st.lists(st.integers(1, 6), min_size=1, max_size=3)


class TestFiniteGroup:
    @given(orders_strategy)
    @settings(max_examples=30, deadline=None)
    def test_element_indexing_round_trip(self, orders):
        g = FiniteGroup(orders)
        elements = list(g.elements())
        assert len(elements) == g.order
        assert len(set(elements)) == g.order
        for i, z in enumerate(elements):
            assert g.index_of(z) == i

    @given(orders_strategy, st.randoms(use_true_random=False))
    @settings(max_examples=30, deadline=None)
    def test_arithmetic_is_componentwise(self, orders, rng):
        g = FiniteGroup(orders)
        x = tuple(rng.randrange(n) for n in orders)
        y = tuple(rng.randrange(n) for n in orders)
        assert g.add(x, y) == tuple((a + b) % n for a, b, n in zip(x, y, orders))
        assert g.sub(x, y) == tuple((a - b) % n for a, b, n in zip(x, y, orders))
        assert g.scale(3, x) == tuple((3 * a) % n for a, n in zip(x, orders))

    def test_describe(self):
        assert FiniteGroup([2, 4]).describe() == "Z/2 x Z/4"
        assert FiniteGroup([5]).describe() == "Z/5"


def brute_closure(group: FiniteGroup, gens) -> set:
    seen = {tuple([0] * group.rank)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for z in frontier:
            for g in gens:
                w = group.add(z, g)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


class TestSubgroup:
    @given(orders_strategy, st.randoms(use_true_random=False))
    @settings(max_examples=30, deadline=None)
    def test_subgroup_equals_brute_closure(self, orders, rng):
        g = FiniteGroup(orders)
        gens = [tuple(rng.randrange(n) for n in orders)
                for _ in range(rng.randint(0, 2))]
        sub = g.subgroup([list(x) for x in gens])
        assert set(sub.elements()) == brute_closure(g, gens)
        assert sub.order == len(sub.elements())
        assert g.order % sub.order == 0
        # canonical generators generate the same set
        regen = g.subgroup([list(x) for x in sub.canonical_gens])
        assert set(regen.elements()) == set(sub.elements())

    def test_full_subgroup(self):
        g = FiniteGroup([2, 3])
        assert g.full_subgroup().order == 6
        assert g.full_subgroup().is_full

    def test_subgroup_sum_is_brute_union_closure(self):
        g = FiniteGroup([4, 4])
        a = g.subgroup([[1, 0]])
        b = g.subgroup([[0, 2]])
        s = subgroup_sum([a, b])
        assert set(s.elements()) == brute_closure(g, [(1, 0), (0, 2)])

    def test_parent_mismatch(self):
        a = FiniteGroup([2]).subgroup([[1]])
        b = FiniteGroup([3]).subgroup([[1]])
        with pytest.raises(ParentMismatch):
            subgroup_sum([a, b])


class TestIndependence:
    def brute_independent(self, subs) -> bool:
        """Every element of the sum decomposes uniquely."""
        total = {}
        for combo in itertools.product(*[s.elements() for s in subs]):
            z = combo[0]
            g = subs[0].group
            for w in combo[1:]:
                z = g.add(z, w)
            total.setdefault(z, 0)
            total[z] += 1
        counts = set(total.values())
        return counts == {1} or not counts

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=30, deadline=None)
    def test_matches_brute_force(self, rng):
        g = FiniteGroup([rng.randint(2, 4), rng.randint(2, 4)])
        subs = []
        for _ in range(rng.randint(1, 3)):
            gens = [[rng.randrange(n) for n in g.orders]
                    for _ in range(rng.randint(0, 2))]
            subs.append(g.subgroup(gens))
        assert is_linearly_independent(subs) == self.brute_independent(subs)

    def test_known_cases(self):
        g = FiniteGroup([2, 2])
        e1, e2 = g.subgroup([[1, 0]]), g.subgroup([[0, 1]])
        diag = g.subgroup([[1, 1]])
        assert is_linearly_independent([e1, e2])
        assert not is_linearly_independent([e1, e2, diag])
