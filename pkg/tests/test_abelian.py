"""Exact integer linear algebra: diagonalization, lattices, solvers."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdce import abelian as ab
from pdce import _snf_py
from pdce._kernels import COMPILED_AVAILABLE
from pdce.errors import CompositionNotZero


def int_matrix(max_dim=6, max_entry=9):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-max_entry, max_entry), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            )
        )
    )


def mat(rows):
    return ab.as_matrix(rows)


def mat_equal(a, b) -> bool:
    return a.shape == b.shape and all(
        a[i, j] == b[i, j] for i in range(a.shape[0]) for j in range(a.shape[1])
    )


def is_identity(a) -> bool:
    return mat_equal(a, ab.eye(a.shape[0]))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


class TestSnf:
    @given(int_matrix())
    @settings(max_examples=60, deadline=None)
    def test_factorization_exact(self, rows):
        m = mat(rows)
        res = ab.snf(m, inverses=True)
        assert mat_equal(ab.mmul(ab.mmul(res.U, m), res.V), res.D)
        # transform matrices are unimodular: integer inverses exist
        assert is_identity(ab.mmul(res.U, res.Uinv))
        assert is_identity(ab.mmul(res.V, res.Vinv))
        # nonnegative diagonal with a divisibility chain, zeros last
        d = res.diag
        assert all(v >= 0 for v in d)
        for a, b in zip(d, d[1:]):
            if a == 0:
                assert b == 0
            else:
                assert b % a == 0
        # D is diagonal
        for i in range(res.D.shape[0]):
            for j in range(res.D.shape[1]):
                if i != j:
                    assert res.D[i, j] == 0

    def test_zero_and_degenerate_shapes(self):
        for shape in [(1, 1), (3, 1), (1, 3), (2, 5)]:
            z = ab.zeros(*shape)
            res = ab.snf(z)
            assert all(v == 0 for v in res.diag)
        res = ab.snf(mat([[0, 0], [0, 6]]))
        assert res.diag == [6, 0]

    def test_known_diagonals(self):
        assert ab.snf(mat([[2, 4], [6, 8]])).diag == [2, 4]
        assert ab.snf(mat([[1, 0], [0, 1]])).diag == [1, 1]
        assert ab.snf(mat([[2, 0], [0, 3]])).diag == [1, 6]

    def test_huge_entries_fall_back_exactly(self):
        big = 10**30
        m = mat([[big, 1], [0, big]])
        res = ab.snf(m, inverses=True)
        assert mat_equal(ab.mmul(ab.mmul(res.U, m), res.V), res.D)
        assert res.diag[0] == 1 and res.diag[1] == big * big

    @pytest.mark.skipif(not COMPILED_AVAILABLE, reason="compiled kernel not built")
    def test_compiled_matches_pure(self):
        from pdce import _snf_c

        rng = random.Random(11)
        for _ in range(40):
            rows = rng.randint(1, 7)
            cols = rng.randint(1, 7)
            data = [
                [rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)
            ]
            fast = _snf_c.smith_reduce_i64(data, True, True, True, True)
            slow = _snf_py.smith_reduce(data, True, True, True, True)
            assert fast[0] == slow[0]
            # both factorizations must reproduce the same diagonal exactly
            for diag, u, v, _, _ in (fast, slow):
                m = mat(data)
                lhs = ab.mmul(ab.mmul(mat(u), m), mat(v))
                for i in range(rows):
                    for j in range(cols):
                        assert lhs[i, j] == (diag[i] if i == j and i < len(diag) else 0)


# ---------------------------------------------------------------------------
# Hermite form and row/column lattices
# ---------------------------------------------------------------------------


class TestHermite:
    @given(int_matrix(max_dim=5))
    @settings(max_examples=40, deadline=None)
    def test_row_basis_canonical_under_row_mixing(self, rows):
        m = mat(rows)
        basis = ab.row_basis(m)
        # shuffling rows, negating rows, and adding one row to another
        # leaves the canonical basis unchanged
        mixed = [list(r) for r in rows]
        random.Random(3).shuffle(mixed)
        if len(mixed) > 1:
            mixed[0] = [a + 2 * b for a, b in zip(mixed[0], mixed[1])]
        mixed.append([0] * m.shape[1])
        assert mat_equal(basis, ab.row_basis(mat(mixed)))

    @given(int_matrix(max_dim=4, max_entry=4))
    @settings(max_examples=40, deadline=None)
    def test_row_basis_spans_original_rows(self, rows):
        m = mat(rows)
        basis = ab.row_basis(m)
        # every original row is an integer combination of basis rows
        bt = mat([[basis[i, j] for i in range(basis.shape[0])] for j in range(basis.shape[1])])
        for r in rows:
            assert ab.solve_int(bt, r) is not None

    def test_hnf_cols_canonical(self):
        a = mat([[2, 1], [0, 3]])
        b = mat([[1, 2], [3, 0]])  # same column lattice, swapped generators
        assert mat_equal(ab.hnf_cols(a), ab.hnf_cols(b))


class TestKernels:
    @given(int_matrix(max_dim=5))
    @settings(max_examples=40, deadline=None)
    def test_kernel_annihilates_and_is_complete(self, rows):
        m = mat(rows)
        k = ab.kernel_basis(m)
        prod = ab.mmul(m, k)
        assert all(prod[i, j] == 0 for i in range(prod.shape[0]) for j in range(prod.shape[1]))
        assert k.shape[1] == m.shape[1] - ab.rank_exact(m)

    def test_kernel_mod_brute_force(self):
        rng = random.Random(5)
        for m_mod in (2, 3, 4, 6):
            for _ in range(6):
                rows, cols = rng.randint(1, 3), rng.randint(1, 3)
                m = mat([[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)])
                k = ab.kernel_basis_mod(m, m_mod)
                # every column is a kernel vector mod m
                prod = ab.mmul(m, k)
                assert all(int(prod[i, j]) % m_mod == 0
                           for i in range(rows) for j in range(k.shape[1]))
                # every exhaustive kernel vector lies in the column span mod m
                for vec in itertools.product(range(m_mod), repeat=cols):
                    if all(sum(int(m[i, j]) * vec[j] for j in range(cols)) % m_mod == 0
                           for i in range(rows)):
                        assert ab.solve_mod(k, list(vec), m_mod) is not None

    def test_kernel_of_zero_map_is_everything(self):
        k = ab.kernel_basis(ab.zeros(0, 4))
        assert k.shape == (4, 4)
        assert ab.rank_exact(k) == 4


class TestSolvers:
    @given(int_matrix(max_dim=5), st.lists(st.integers(-4, 4), min_size=5, max_size=5))
    @settings(max_examples=40, deadline=None)
    def test_solve_int_round_trip(self, rows, w):
        m = mat(rows)
        w = w[: m.shape[1]]
        rhs = [sum(int(m[i, j]) * w[j] for j in range(m.shape[1])) for i in range(m.shape[0])]
        sol = ab.solve_int(m, rhs)
        assert sol is not None
        got = [sum(int(m[i, j]) * sol[j] for j in range(m.shape[1])) for i in range(m.shape[0])]
        assert got == rhs

    def test_solve_int_unsolvable(self):
        assert ab.solve_int(mat([[2]]), [1]) is None
        assert ab.solve_int(mat([[2, 4], [0, 0]]), [2, 1]) is None

    def test_solve_mod_matches_brute_force(self):
        rng = random.Random(9)
        for m_mod in (2, 4, 6):
            for _ in range(8):
                rows, cols = rng.randint(1, 3), rng.randint(1, 3)
                m = mat([[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)])
                rhs = [rng.randrange(m_mod) for _ in range(rows)]
                sol = ab.solve_mod(m, rhs, m_mod)
                brute = any(
                    all(sum(int(m[i, j]) * v[j] for j in range(cols)) % m_mod
                        == rhs[i] % m_mod for i in range(rows))
                    for v in itertools.product(range(m_mod), repeat=cols)
                )
                assert (sol is not None) == brute
                if sol is not None:
                    assert all(
                        sum(int(m[i, j]) * sol[j] for j in range(cols)) % m_mod
                        == rhs[i] % m_mod
                        for i in range(rows)
                    )

    def test_solve_rational_exact(self):
        m = mat([[2, 3], [4, 6]])
        sol = ab.solve_rational(m, [1, 2])
        assert sol is not None
        assert 2 * sol[0] + 3 * sol[1] == 1
        assert ab.solve_rational(m, [1, 3]) is None
        # rational right-hand sides are accepted
        sol = ab.solve_rational(mat([[3]]), [Fraction(1, 2)])
        assert sol == [Fraction(1, 6)]


class TestLattices:
    def brute_points(self, basis, box=6):
        """All lattice points with coefficients in a small box."""
        n, k = basis.shape
        pts = set()
        for coeffs in itertools.product(range(-box, box + 1), repeat=k):
            pts.add(tuple(sum(int(basis[i, j]) * coeffs[j] for j in range(k))
                          for i in range(n)))
        return pts

    def test_intersection_brute_force(self):
        a = mat([[2, 0], [0, 3]])
        b = mat([[3, 0], [0, 2]])
        inter = ab.lattice_intersection(a, b)
        # pointwise over a box: membership in the intersection lattice is
        # exactly joint membership in both lattices
        for p in itertools.product(range(-8, 9), repeat=2):
            joint = (ab.solve_int(a, list(p)) is not None
                     and ab.solve_int(b, list(p)) is not None)
            assert (ab.solve_int(inter, list(p)) is not None) == joint

    def test_preimage_lattice_membership(self):
        m = mat([[1, 1], [0, 2]])
        lat = mat([[2, 0], [0, 4]])
        pre = ab.preimage_lattice(m, lat)
        for j in range(pre.shape[1]):
            x = [int(pre[i, j]) for i in range(2)]
            img = [sum(int(m[i, t]) * x[t] for t in range(2)) for i in range(2)]
            assert ab.solve_int(lat, img) is not None
        # completeness on a small box
        for x in itertools.product(range(-4, 5), repeat=2):
            img = [sum(int(m[i, t]) * x[t] for t in range(2)) for i in range(2)]
            if ab.solve_int(lat, img) is not None:
                assert ab.solve_int(pre, list(x)) is not None


# ---------------------------------------------------------------------------
# presented groups and homomorphisms
# ---------------------------------------------------------------------------


class TestPresentedGroup:
    def test_invariant_factors_known(self):
        g = ab.PresentedGroup(2, mat([[2, 0], [0, 4]]))
        assert g.invariant_factors == (2, 4)
        assert g.describe() == "Z/2 + Z/4"
        g = ab.PresentedGroup(2, mat([[2, 0], [0, 3]]))
        assert g.invariant_factors == (6,)
        g = ab.PresentedGroup(3, mat([[1, 0], [0, 5], [0, 0]]))
        assert g.invariant_factors == (5, 0)
        assert g.describe() == "Z/5 + Z"
        assert g.free_rank == 1

    def test_trivial_group(self):
        g = ab.PresentedGroup(2, mat([[1, 0], [0, 1]]))
        assert g.is_trivial and g.describe() == "0" and g.order() == 1

    def test_coords_are_additive(self):
        g = ab.PresentedGroup(2, mat([[4, 0], [0, 6]]))
        rng = random.Random(2)
        for _ in range(25):
            x = [rng.randint(-9, 9), rng.randint(-9, 9)]
            y = [rng.randint(-9, 9), rng.randint(-9, 9)]
            cx, cy = g.coords_of(x), g.coords_of(y)
            cs = g.coords_of([a + b for a, b in zip(x, y)])
            assert cs == tuple(
                (a + b) % d if d else a + b
                for a, b, d in zip(cx, cy, g.invariant_factors)
            )

    def test_dual_preserves_factors_and_marks_circles(self):
        g = ab.PresentedGroup(3, mat([[2, 0], [0, 3], [0, 0]]))
        d = ab.dual(g)
        assert d.invariant_factors == g.invariant_factors
        assert d.is_dual and "T" in d.describe()


class TestHomology:
    def test_composition_must_vanish(self):
        z = ab.PresentedGroup(1)
        f = ab.GroupHom(z, z, mat([[2]]))
        with pytest.raises(CompositionNotZero):
            ab.homology(f, f)

    def test_circle_of_free_groups(self):
        # Z --2--> Z --0--> Z : homology at the middle is Z/2
        z = ab.PresentedGroup(1)
        two = ab.GroupHom(z, z, mat([[2]]))
        zero = ab.GroupHom(z, z, mat([[0]]))
        h = ab.homology(two, zero)
        assert h.group.invariant_factors == (2,)

    def test_exact_sequence_has_trivial_homology(self):
        # Z --(1,1)--> Z^2 --(1,-1)--> Z is exact in the middle
        z1 = ab.PresentedGroup(1)
        z2 = ab.PresentedGroup(2)
        inj = ab.GroupHom(z1, z2, mat([[1], [1]]))
        proj = ab.GroupHom(z2, z1, mat([[1, -1]]))
        assert ab.homology(inj, proj).group.is_trivial
