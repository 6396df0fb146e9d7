"""Exact arithmetic for finitely generated abelian groups.

Everything here is integer-exact: Smith normal form with unimodular
transforms, Hermite (echelon) lattice bases, linear solvers over Z,
Z/m and Q, presented groups ``Z^n / (column lattice of relations)``,
homomorphisms with well-formedness checks, and kernel / image /
cokernel / homology constructions.

Matrices are two-dimensional ``numpy`` arrays with ``dtype=object``
holding Python ints (or ``Fraction`` for the rational helpers), so all
arithmetic is arbitrary precision.  Column convention: a lattice is the
set of integer combinations of the *columns* of its basis matrix, and a
group element is a column vector of generator coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._kernels import hermite_rows, smith_reduce
from .errors import CompositionNotZero, DomainError

__all__ = [
    "as_matrix",
    "as_vector",
    "zeros",
    "eye",
    "mmul",
    "hstack",
    "vstack",
    "SnfResult",
    "snf",
    "kernel_basis",
    "kernel_basis_mod",
    "solve_int",
    "solve_mod",
    "solve_rational",
    "rank_exact",
    "rank_mod",
    "hnf_cols",
    "row_basis",
    "lattices_equal_cols",
    "preimage_lattice",
    "lattice_intersection",
    "LatticeSolver",
    "PresentedGroup",
    "GroupHom",
    "kernel",
    "image",
    "cokernel",
    "Homology",
    "homology",
    "dual",
]


# ---------------------------------------------------------------------------
# matrix plumbing
# ---------------------------------------------------------------------------


def as_matrix(data, cols: int | None = None) -> np.ndarray:
    """Coerce nested sequences / arrays to a 2-D object array.

    ``cols`` disambiguates the width of a matrix with zero rows.  Integer
    entries are normalized to Python ints so arithmetic never overflows.
    """
    if isinstance(data, np.ndarray) and data.dtype == object and data.ndim == 2:
        return data
    if data is None:
        return np.empty((0, 0 if cols is None else cols), dtype=object)
    rows = [list(r) for r in data]
    if not rows:
        return np.empty((0, 0 if cols is None else cols), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged rows in matrix input")
    out = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = int(v) if isinstance(v, (int, np.integer)) else v
    return out


def as_vector(data) -> list:
    """Coerce a sequence to a plain list with Python-int entries."""
    return [int(v) if isinstance(v, (int, np.integer)) else v for v in data]


def zeros(m: int, n: int) -> np.ndarray:
    return np.full((m, n), 0, dtype=object)


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def mmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product that tolerates zero-width operands."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a @ b


def hstack(blocks: Sequence[np.ndarray]) -> np.ndarray:
    blocks = [b for b in blocks]
    if not blocks:
        raise ValueError("empty hstack")
    m = blocks[0].shape[0]
    if any(b.shape[0] != m for b in blocks):
        raise ValueError("hstack row mismatch")
    width = sum(b.shape[1] for b in blocks)
    out = np.empty((m, width), dtype=object)
    at = 0
    for b in blocks:
        out[:, at : at + b.shape[1]] = b
        at += b.shape[1]
    return out


def vstack(blocks: Sequence[np.ndarray]) -> np.ndarray:
    blocks = [b for b in blocks]
    if not blocks:
        raise ValueError("empty vstack")
    n = blocks[0].shape[1]
    if any(b.shape[1] != n for b in blocks):
        raise ValueError("vstack column mismatch")
    height = sum(b.shape[0] for b in blocks)
    out = np.empty((height, n), dtype=object)
    at = 0
    for b in blocks:
        out[at : at + b.shape[0], :] = b
        at += b.shape[0]
    return out


def _to_lists(mat: np.ndarray) -> list[list[int]]:
    return [[int(v) for v in row] for row in mat]


def _mat_from_lists(rows: list[list[int]], cols: int) -> np.ndarray:
    if not rows:
        return np.empty((0, cols), dtype=object)
    out = np.empty((len(rows), cols), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = v
    return out


def _mat_vec(mat: list[list[int]], vec: list[int]) -> list[int]:
    return [sum(r[k] * vec[k] for k in range(len(vec))) for r in mat]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class SnfResult:
    """U @ M @ V == D with U, V unimodular and D in Smith normal form."""

    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    diag: list[int]
    Uinv: np.ndarray | None = None
    Vinv: np.ndarray | None = None

    @property
    def invariant_factors(self) -> list[int]:
        """Diagonal entries with units dropped (trailing zeros kept)."""
        return [d for d in self.diag if d != 1]


def snf(mat, inverses: bool = False) -> SnfResult:
    """Smith normal form with transform matrices.

    The diagonal is nonnegative and each entry divides the next; zero
    entries come last.
    """
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    diag, u, v, ui, vi = smith_reduce(_to_lists(m_arr), True, True, inverses, inverses)
    d = zeros(m, n)
    for i, val in enumerate(diag):
        d[i, i] = val
    return SnfResult(
        D=d,
        U=_mat_from_lists(u, m),
        V=_mat_from_lists(v, n),
        diag=list(diag),
        Uinv=_mat_from_lists(ui, m) if ui is not None else None,
        Vinv=_mat_from_lists(vi, n) if vi is not None else None,
    )


# ---------------------------------------------------------------------------
# lattices and solvers
# ---------------------------------------------------------------------------


def kernel_basis(mat) -> np.ndarray:
    """Basis (columns) of the integer kernel {x : mat @ x = 0}."""
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return eye(n)
    diag, _, v, _, _ = smith_reduce(_to_lists(m_arr), False, True, False, False)
    limit = len(diag)
    free = [j for j in range(n) if j >= limit or diag[j] == 0]
    out = np.empty((n, len(free)), dtype=object)
    for idx, j in enumerate(free):
        for i in range(n):
            out[i, idx] = v[i][j]
    return out


def kernel_basis_mod(mat, modulus: int) -> np.ndarray:
    """Full-rank basis (columns) of the lattice {x : mat @ x = 0 (mod modulus)}.

    Uses the Smith form directly, never adjoining ``modulus * I``: with
    U M V = D the condition becomes d_i y_i = 0 (mod modulus), i.e. y_i
    is a multiple of modulus / gcd(d_i, modulus).
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    if n == 0:
        return zeros(0, 0)
    if m == 0:
        return eye(n)
    diag, _, v, _, _ = smith_reduce(_to_lists(m_arr), False, True, False, False)
    out = np.empty((n, n), dtype=object)
    for j in range(n):
        s = modulus // math.gcd(diag[j], modulus) if j < len(diag) else 1
        for i in range(n):
            out[i, j] = v[i][j] * s
    return out


class LatticeSolver:
    """Repeated exact solves ``A @ x = b`` against a fixed integer matrix."""

    def __init__(self, mat):
        m_arr = as_matrix(mat)
        self.shape = m_arr.shape
        m, n = m_arr.shape
        if m == 0:
            diag, u, v = [], [], [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        else:
            diag, u, v, _, _ = smith_reduce(_to_lists(m_arr), True, True, False, False)
        self._diag = diag
        self._u = u
        self._v = v
        self._m = m
        self._n = n

    def solve(self, b) -> list[int] | None:
        vec = as_vector(b)
        if len(vec) != self._m:
            raise ValueError("right-hand side has wrong length")
        c = _mat_vec(self._u, vec)
        y = [0] * self._n
        for i in range(self._m):
            d = self._diag[i] if i < len(self._diag) else 0
            if d == 0:
                if c[i] != 0:
                    return None
            else:
                if c[i] % d != 0:
                    return None
                if i < self._n:
                    y[i] = c[i] // d
        return _mat_vec(self._v, y)

    def contains(self, b) -> bool:
        """Is b in the column lattice of A?"""
        vec = as_vector(b)
        if len(vec) != self._m:
            raise ValueError("right-hand side has wrong length")
        c = _mat_vec(self._u, vec)
        for i in range(self._m):
            d = self._diag[i] if i < len(self._diag) else 0
            if d == 0:
                if c[i] != 0:
                    return False
            elif c[i] % d != 0:
                return False
        return True


def solve_int(mat, b) -> list[int] | None:
    """One integer solution of ``mat @ x = b``, or None if there is none."""
    return LatticeSolver(mat).solve(b)


def solve_mod(mat, b, modulus: int) -> list[int] | None:
    """One solution of ``mat @ x = b (mod modulus)`` with coordinates in [0, modulus)."""
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    scaled = eye(m)
    for i in range(m):
        scaled[i, i] = modulus
    sol = solve_int(hstack([m_arr, scaled]), b)
    if sol is None:
        return None
    return [x % modulus for x in sol[:n]]


def solve_rational(mat, b) -> list[Fraction] | None:
    """One rational solution of ``mat @ x = b`` (entries int or Fraction)."""
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    aug = [[Fraction(m_arr[i, j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * p for a, p in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for idx, col in enumerate(pivots):
        x[col] = aug[idx][n]
    return x


def rank_exact(mat) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination with full pivoting."""
    a = _to_lists(as_matrix(mat))
    m = len(a)
    n = len(a[0]) if m else 0
    denom = 1
    r = 0
    while r < min(m, n):
        pivot = None
        best = None
        for i in range(r, m):
            for j in range(r, n):
                v = a[i][j]
                if v != 0 and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != r:
            a[pi], a[r] = a[r], a[pi]
        if pj != r:
            for row in a:
                row[pj], row[r] = row[r], row[pj]
        p = a[r][r]
        for i in range(r + 1, m):
            air = a[i][r]
            row_i = a[i]
            row_r = a[r]
            for j in range(r + 1, n):
                row_i[j] = (row_i[j] * p - air * row_r[j]) // denom
            row_i[r] = 0
        denom = p
        r += 1
    return r


def rank_mod(mat, p: int = 1_000_003) -> int:
    """Rank of an integer matrix over the field F_p (a lower bound for rank over Q)."""
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    if m == 0 or n == 0:
        return 0
    a = np.array([[int(m_arr[i, j]) % p for j in range(n)] for i in range(m)], dtype=np.int64)
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if a[i, col] % p:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = (a[r] * inv) % p
        rest = a[r + 1 :, col].copy()
        if rest.any():
            a[r + 1 :] = (a[r + 1 :] - np.outer(rest, a[r])) % p
        r += 1
        if r == m:
            break
    return r


def hnf_cols(mat) -> np.ndarray:
    """Canonical basis (columns) of the column lattice of ``mat``."""
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    rows = sorted({tuple(int(m_arr[i, j]) for i in range(m)) for j in range(n)})
    basis = hermite_rows([list(r) for r in rows])
    out = np.empty((m, len(basis)), dtype=object)
    for j, row in enumerate(basis):
        for i in range(m):
            out[i, j] = row[i]
    return out


def row_basis(mat) -> np.ndarray:
    """Canonical basis (rows) of the row lattice of ``mat``.

    Tall matrices are first compressed through the Smith form: the row
    lattice of M equals the row lattice of D @ Vinv, which has at most
    min(m, n) nonzero rows, so the echelon pass runs on a small matrix.
    """
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    rows = sorted({tuple(int(v) for v in row) for row in m_arr})
    if len(rows) > 2 * n + 8:
        diag, _, _, _, vinv = smith_reduce([list(r) for r in rows], False, False, False, True)
        rows = [
            [diag[i] * vinv[i][j] for j in range(n)]
            for i in range(len(diag))
            if diag[i] != 0
        ]
        basis = hermite_rows(rows)
    else:
        basis = hermite_rows([list(r) for r in rows])
    return _mat_from_lists(basis, n)


def lattices_equal_cols(a, b) -> bool:
    """Do two column-generating sets span the same lattice?"""
    ha, hb = hnf_cols(a), hnf_cols(b)
    return ha.shape == hb.shape and bool(np.array_equal(ha, hb))


def preimage_lattice(mat, image_lattice) -> np.ndarray:
    """Canonical basis (columns) of {x : mat @ x is in the column lattice given}."""
    m_arr = as_matrix(mat)
    m, n = m_arr.shape
    lat = as_matrix(image_lattice, cols=0)
    if lat.shape[0] != m:
        raise ValueError("lattice lives in the wrong ambient space")
    if lat.shape[1] == 0:
        return hnf_cols(kernel_basis(m_arr))
    k = kernel_basis(hstack([m_arr, lat]))
    return hnf_cols(k[:n, :])


def lattice_intersection(a, b) -> np.ndarray:
    """Canonical basis (columns) of the intersection of two column lattices."""
    a_arr, b_arr = as_matrix(a), as_matrix(b)
    if a_arr.shape[0] != b_arr.shape[0]:
        raise ValueError("lattices live in different ambient spaces")
    if a_arr.shape[1] == 0 or b_arr.shape[1] == 0:
        return zeros(a_arr.shape[0], 0)
    neg_b = np.negative(b_arr)
    k = kernel_basis(hstack([a_arr, neg_b]))
    return hnf_cols(mmul(a_arr, k[: a_arr.shape[1], :]))


# ---------------------------------------------------------------------------
# presented groups
# ---------------------------------------------------------------------------


class PresentedGroup:
    """Finitely generated abelian group ``Z^n_gens / columns(relations)``.

    ``is_dual`` marks the group as a Pontryagin dual: the invariant
    factors are unchanged (finite cyclic groups are self-dual) but each
    free factor renders as a circle ``T`` instead of ``Z``.
    """

    def __init__(self, n_gens: int, relations=None, is_dual: bool = False):
        self.n_gens = int(n_gens)
        self.relations = as_matrix(relations, cols=0)
        if self.relations.shape[0] != self.n_gens:
            if self.relations.shape == (0, 0):
                self.relations = zeros(self.n_gens, 0)
            else:
                raise ValueError(
                    f"relations have {self.relations.shape[0]} rows for {self.n_gens} generators"
                )
        self.is_dual = bool(is_dual)
        self._structure_cache = None
        self._solver_cache: LatticeSolver | None = None

    # -- internal caches ----------------------------------------------------

    @property
    def _structure(self):
        if self._structure_cache is None:
            diag, u, _, uinv, _ = smith_reduce(
                _to_lists(self.relations), True, False, True, False
            )
            limit = len(diag)
            kept = [i for i in range(limit) if diag[i] != 1]
            kept += list(range(limit, self.n_gens))
            factors = [diag[i] for i in kept if i < limit]
            factors += [0] * (self.n_gens - limit)
            self._structure_cache = (factors, kept, u, uinv)
        return self._structure_cache

    @property
    def _solver(self) -> LatticeSolver:
        if self._solver_cache is None:
            self._solver_cache = LatticeSolver(self.relations)
        return self._solver_cache

    # -- structure ----------------------------------------------------------

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonunit cyclic orders in divisibility order; 0 marks a free factor."""
        return tuple(self._structure[0])

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    def order(self) -> int | None:
        """Number of elements, or None when infinite."""
        if self.free_rank:
            return None
        return math.prod(self.invariant_factors) if self.invariant_factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def rank(self) -> int:
        """Number of canonical cyclic/free factors."""
        return len(self.invariant_factors)

    def describe(self) -> str:
        """Human-readable isomorphism type, e.g. ``Z/2 + Z/4 + Z^2``."""
        if self.is_trivial:
            return "0"
        parts: list[str] = []
        free = 0
        for d in self.invariant_factors:
            if d == 0:
                free += 1
            else:
                parts.append(f"Z/{d}")
        if free:
            sym = "T" if self.is_dual else "Z"
            parts.append(sym if free == 1 else f"{sym}^{free}")
        return " + ".join(parts)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PresentedGroup({self.describe()}, n_gens={self.n_gens})"

    # -- elements -----------------------------------------------------------

    def coords_of(self, x) -> tuple[int, ...]:
        """Canonical coordinates of an element (one per invariant factor).

        Finite factors are reduced mod their order; free coordinates are
        plain integers.  Two vectors represent the same element iff their
        canonical coordinates agree.
        """
        vec = as_vector(x)
        if len(vec) != self.n_gens:
            raise ValueError("element has wrong number of coordinates")
        factors, kept, u, _ = self._structure
        y = _mat_vec(u, vec)
        return tuple(
            y[k] % d if d else y[k] for k, d in zip(kept, factors)
        )

    def canonical_rep(self, j: int) -> list[int]:
        """Generator-coordinate vector mapping to the j-th canonical factor's generator."""
        factors, kept, _, uinv = self._structure
        if not 0 <= j < len(factors):
            raise IndexError("no such canonical factor")
        col = kept[j]
        return [uinv[i][col] for i in range(self.n_gens)]

    def is_zero(self, x) -> bool:
        return self._solver.contains(x)

    def elements_equal(self, x, y) -> bool:
        return self.is_zero([a - b for a, b in zip(as_vector(x), as_vector(y))])

    def element_order(self, x) -> int | None:
        """Order of the element, or None when infinite."""
        factors, _, _, _ = self._structure
        coords = self.coords_of(x)
        out = 1
        for c, d in zip(coords, factors):
            if d == 0:
                if c != 0:
                    return None
            elif c % d:
                out = out * (d // math.gcd(c % d, d)) // math.gcd(out, d // math.gcd(c % d, d))
        return out


class GroupHom:
    """Homomorphism between presented groups given by an integer matrix.

    The matrix sends generator coordinates of the source to generator
    coordinates of the target.  Well-formedness (every source relation
    maps into the target relation lattice) is checked on construction
    unless ``check=False``.
    """

    def __init__(self, source: PresentedGroup, target: PresentedGroup, matrix, check: bool = True):
        self.source = source
        self.target = target
        self.matrix = as_matrix(matrix, cols=source.n_gens)
        if self.matrix.shape != (target.n_gens, source.n_gens):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not map "
                f"{source.n_gens} generators to {target.n_gens}"
            )
        if check:
            rel = source.relations
            for j in range(rel.shape[1]):
                img = _mat_vec(_to_lists(self.matrix), [int(v) for v in rel[:, j]])
                if not target.is_zero(img):
                    raise ValueError(
                        f"matrix does not respect source relation {j}: not a homomorphism"
                    )

    def __call__(self, x) -> list[int]:
        vec = as_vector(x)
        if len(vec) != self.source.n_gens:
            raise ValueError("element has wrong number of coordinates")
        return _mat_vec(_to_lists(self.matrix), vec)

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target is not self.source:
            raise ValueError("composition domain mismatch")
        return GroupHom(other.source, self.target, mmul(self.matrix, other.matrix), check=False)

    def is_zero(self) -> bool:
        return all(
            self.target.is_zero([int(v) for v in self.matrix[:, j]])
            for j in range(self.matrix.shape[1])
        )


def kernel(h: GroupHom) -> tuple[PresentedGroup, GroupHom]:
    """Kernel subgroup and its inclusion into the source."""
    emb = preimage_lattice(h.matrix, h.target.relations)
    rel = preimage_lattice(emb, h.source.relations)
    ker = PresentedGroup(emb.shape[1], rel, is_dual=h.source.is_dual)
    return ker, GroupHom(ker, h.source, emb, check=False)


def image(h: GroupHom) -> tuple[PresentedGroup, GroupHom]:
    """Image subgroup (on the source generators' images) and its map into the target."""
    rel = preimage_lattice(h.matrix, h.target.relations)
    img = PresentedGroup(h.source.n_gens, rel, is_dual=h.target.is_dual)
    return img, GroupHom(img, h.target, h.matrix, check=False)


def cokernel(h: GroupHom) -> tuple[PresentedGroup, GroupHom]:
    """Cokernel target/image and the projection from the target."""
    coker = PresentedGroup(
        h.target.n_gens,
        hstack([h.matrix, h.target.relations]),
        is_dual=h.target.is_dual,
    )
    return coker, GroupHom(h.target, coker, eye(h.target.n_gens), check=False)


@dataclass
class Homology:
    """Homology group at the middle of ``A -f-> B -g-> C`` plus a classifier.

    ``classify(x)`` takes the generator coordinates of a cycle in B
    (an element with g(x) = 0) and returns its canonical coordinates in
    the homology group.
    """

    group: PresentedGroup
    cycles: np.ndarray
    _cycle_solver: LatticeSolver = field(repr=False)

    def classify(self, x) -> tuple[int, ...]:
        w = self._cycle_solver.solve(x)
        if w is None:
            raise DomainError("element is not a cycle")
        return self.group.coords_of(w)


def homology(f: GroupHom, g: GroupHom) -> Homology:
    """Homology ker(g)/im(f) for maps A -f-> B -g-> C with g∘f = 0."""
    if f.target is not g.source:
        raise ValueError("maps are not composable")
    composite = mmul(g.matrix, f.matrix)
    for j in range(composite.shape[1]):
        col = composite[:, j]
        if all(v == 0 for v in col):
            continue
        if not g.target.is_zero([int(v) for v in col]):
            raise CompositionNotZero("composite map is nonzero; homology undefined")
    cycles = preimage_lattice(g.matrix, g.target.relations)
    rel = preimage_lattice(cycles, hstack([f.matrix, f.target.relations]))
    grp = PresentedGroup(cycles.shape[1], rel, is_dual=f.target.is_dual)
    return Homology(group=grp, cycles=cycles, _cycle_solver=LatticeSolver(cycles))


def dual(group: PresentedGroup) -> PresentedGroup:
    """Pontryagin dual: same invariant factors, dual flag flipped."""
    return PresentedGroup(group.n_gens, np.copy(group.relations), is_dual=not group.is_dual)
