"""Concrete finite abelian groups ``Z/n_1 x ... x Z/n_k`` and their subgroups.

Elements are tuples of nonnegative ints reduced mod the factor orders.
Enumeration order is row-major (last coordinate fastest), and function
vectors over a group use ``index_of`` / ``element_at`` to map between
elements and flat positions.

A subgroup is stored canonically as the Hermite basis of its preimage
lattice in ``Z^k`` (the integer span of the generators together with
``diag(orders)``), which makes equality, membership, order and quotient
computations exact and representation-independent.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Iterable, Iterator, Sequence

from ._kernels import hermite_rows
from .abelian import (
    LatticeSolver,
    PresentedGroup,
    as_matrix,
    hnf_cols,
    lattice_intersection,
)
from .errors import ParentMismatch

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "subgroup_sum",
    "is_linearly_independent",
    "coset_representatives",
]


class FiniteGroup:
    """Direct product of finite cyclic groups, ``Z/n_1 x ... x Z/n_k``."""

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(n) for n in orders)
        if any(n < 1 for n in orders):
            raise ValueError("cyclic factor orders must be positive")
        self.orders = orders
        self.rank = len(orders)
        self.order = math.prod(orders)
        self._presented: PresentedGroup | None = None

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.orders == other.orders

    def __hash__(self) -> int:
        return hash(("FiniteGroup", self.orders))

    def __repr__(self) -> str:
        return f"FiniteGroup({list(self.orders)})"

    def describe(self) -> str:
        return " x ".join(f"Z/{n}" for n in self.orders) if self.rank else "0"

    # -- elements -----------------------------------------------------------

    def reduce(self, z: Sequence[int]) -> tuple[int, ...]:
        if len(z) != self.rank:
            raise ValueError(f"element length {len(z)} != rank {self.rank}")
        return tuple(int(v) % n for v, n in zip(z, self.orders))

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.orders))

    def neg(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((-a) % n for a, n in zip(x, self.orders))

    def scale(self, c: int, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((c * a) % n for a, n in zip(x, self.orders))

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements in row-major order (last coordinate fastest)."""
        return itertools.product(*(range(n) for n in self.orders))

    def index_of(self, z: Sequence[int]) -> int:
        z = self.reduce(z)
        idx = 0
        for v, n in zip(z, self.orders):
            idx = idx * n + v
        return idx

    def element_at(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.order:
            raise IndexError("element index out of range")
        out = []
        for n in reversed(self.orders):
            out.append(idx % n)
            idx //= n
        return tuple(reversed(out))

    # -- structure ----------------------------------------------------------

    def as_presented(self) -> PresentedGroup:
        """The same group presented as Z^k modulo diag(orders)."""
        if self._presented is None:
            rel = [[self.orders[i] if i == j else 0 for j in range(self.rank)] for i in range(self.rank)]
            self._presented = PresentedGroup(self.rank, rel)
        return self._presented

    def subgroup(self, gens: Iterable[Sequence[int]]) -> "Subgroup":
        return Subgroup(self, gens)

    def full_subgroup(self) -> "Subgroup":
        basis = [[1 if i == j else 0 for j in range(self.rank)] for i in range(self.rank)]
        return Subgroup(self, basis)

    def zero_subgroup(self) -> "Subgroup":
        return Subgroup(self, [])


class Subgroup:
    """Subgroup of a :class:`FiniteGroup`, canonicalized via its preimage lattice."""

    def __init__(self, group: FiniteGroup, gens: Iterable[Sequence[int]]):
        self.group = group
        k = group.rank
        gen_rows = [list(group.reduce(g)) for g in gens]
        diag = [[group.orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
        self.lattice_rows: list[list[int]] = hermite_rows(gen_rows + diag)
        self.canonical_gens: list[tuple[int, ...]] = [
            g for g in (group.reduce(r) for r in self.lattice_rows) if any(g)
        ]
        self._solver: LatticeSolver | None = None
        self._quotient: PresentedGroup | None = None

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.group == other.group
            and self.lattice_rows == other.lattice_rows
        )

    def __hash__(self) -> int:
        return hash((self.group, tuple(map(tuple, self.lattice_rows))))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, gens={self.canonical_gens})"

    # -- structure ----------------------------------------------------------

    @property
    def order(self) -> int:
        det = math.prod(self.lattice_rows[i][i] for i in range(self.group.rank))
        return self.group.order // det

    @property
    def is_full(self) -> bool:
        return self.order == self.group.order

    def contains(self, z: Sequence[int]) -> bool:
        if self._solver is None:
            cols = [[row[i] for row in self.lattice_rows] for i in range(len(self.lattice_rows))]
            self._solver = LatticeSolver(as_matrix(list(map(list, zip(*self.lattice_rows))), cols=len(self.lattice_rows)))
        return self._solver.contains(list(self.group.reduce(z)))

    def elements(self) -> list[tuple[int, ...]]:
        """All subgroup elements, sorted by ambient enumeration index."""
        zero = self.group.zero
        seen = {zero}
        queue = deque([zero])
        while queue:
            z = queue.popleft()
            for g in self.canonical_gens:
                w = self.group.add(z, g)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return sorted(seen, key=self.group.index_of)

    def quotient(self) -> PresentedGroup:
        """The quotient group `ambient / self` presented on the ambient generators."""
        if self._quotient is None:
            rel = [[row[i] for row in self.lattice_rows] for i in range(self.group.rank)]
            self._quotient = PresentedGroup(self.group.rank, rel)
        return self._quotient

    def coset_label(self, z: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of z + self in the quotient group."""
        return self.quotient().coords_of(list(self.group.reduce(z)))

    def index(self) -> int:
        return self.group.order // self.order

    # -- lattice operations ---------------------------------------------------

    def sum(self, other: "Subgroup") -> "Subgroup":
        if self.group != other.group:
            raise ParentMismatch("subgroups of different ambient groups")
        return Subgroup(self.group, self.canonical_gens + other.canonical_gens)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        if self.group != other.group:
            raise ParentMismatch("subgroups of different ambient groups")
        a = as_matrix(list(map(list, zip(*self.lattice_rows))), cols=len(self.lattice_rows))
        b = as_matrix(list(map(list, zip(*other.lattice_rows))), cols=len(other.lattice_rows))
        meet = lattice_intersection(a, b)
        return Subgroup(self.group, [list(meet[:, j]) for j in range(meet.shape[1])])

    def __or__(self, other: "Subgroup") -> "Subgroup":
        return self.sum(other)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return self.intersect(other)


def subgroup_sum(subs: Sequence[Subgroup]) -> Subgroup:
    """Sum of several subgroups of a common ambient group."""
    if not subs:
        raise ValueError("need at least one subgroup")
    group = subs[0].group
    gens: list[tuple[int, ...]] = []
    for s in subs:
        if s.group != group:
            raise ParentMismatch("subgroups of different ambient groups")
        gens.extend(s.canonical_gens)
    return Subgroup(group, gens)


def is_linearly_independent(subs: Sequence[Subgroup]) -> bool:
    """Do the subgroups form a direct sum inside their ambient group?

    True iff the only way to write 0 as a sum of one element from each
    subgroup is with every summand 0, i.e. the order of the sum equals
    the product of the orders.
    """
    total = subgroup_sum(subs)
    prod = math.prod(s.order for s in subs)
    return total.order == prod


def coset_representatives(group: FiniteGroup, sub: Subgroup) -> list[tuple[int, ...]]:
    """One representative per coset of ``sub``, minimal in enumeration order."""
    if sub.group != group:
        raise ParentMismatch("subgroup of a different ambient group")
    seen: set[tuple[int, ...]] = set()
    reps: list[tuple[int, ...]] = []
    for z in group.elements():
        label = sub.coset_label(z)
        if label not in seen:
            seen.add(label)
            reps.append(z)
    return reps
