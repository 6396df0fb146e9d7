"""Group cohomology of finite abelian groups with module coefficients.

Coefficients are modules M with an action of the group W: either a
finitely generated abelian group presented on integer generators (with
the action given by one integer matrix per cyclic factor of W), or a
torus ``T^n`` acted on by integer matrices.  Cohomology is computed from
the inhomogeneous bar complex

    C^p = Maps(W^p, M),
    (df)(z_1..z_{p+1}) = z_1 f(z_2..z_{p+1})
                         + sum_i (-1)^i f(z_1, .., z_i + z_{i+1}, .., z_{p+1})
                         + (-1)^{p+1} f(z_1..z_p),

assembled as one integer matrix per degree.  Torus coefficients are
resolved on the Pontryagin dual side: transpose the matrices, reverse
the arrows, and dualize the resulting homology.

For cyclic W there is also the closed two-periodic form

    M --(r - 1)--> M --(1 + r + .. + r^{N-1})--> M --(r - 1)--> ...

whose homology gives H^p directly; :func:`cohomology_cyclic` implements
it and serves as an independent cross-check of the bar route.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from . import abelian as ab
from .abelian import (
    GroupHom,
    PresentedGroup,
    as_matrix,
    eye,
    mmul,
    zeros,
)
from .budget import current_budget
from .errors import BudgetExceeded, ParseError
from .groups import FiniteGroup

__all__ = [
    "CoefModule",
    "bar_coboundary_matrix",
    "cohomology_bar",
    "cohomology_cyclic",
]


class CoefModule:
    """A W-module: presented abelian group (or torus) plus generator actions.

    ``actions[i]`` is the integer matrix by which the i-th cyclic factor
    generator of W acts on module coordinates.  With ``circle=True`` the
    module is ``T^rank`` (the presentation must be free) and the matrices
    act on circle coordinates mod 1.
    """

    def __init__(
        self,
        group: FiniteGroup,
        presented: PresentedGroup,
        actions: Sequence | None = None,
        circle: bool = False,
    ):
        self.group = group
        self.presented = presented
        self.circle = bool(circle)
        if self.circle and presented.relations.shape[1]:
            raise ValueError("torus coefficients use a free presentation")
        n = presented.n_gens
        if actions is None:
            actions = [eye(n) for _ in range(group.rank)]
        self.actions = [as_matrix(a, cols=n) for a in actions]
        if len(self.actions) != group.rank:
            raise ValueError(
                f"need one action matrix per cyclic factor ({group.rank}), got {len(self.actions)}"
            )
        for i, a in enumerate(self.actions):
            if a.shape != (n, n):
                raise ValueError(f"action {i} must be {n} x {n}")
        self._validate()
        self._rho_cache: dict[tuple[int, ...], np.ndarray] = {}

    # -- validation -----------------------------------------------------------

    def _endo_equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        """Equality as endomorphisms of the module (exact for the torus case)."""
        diff = a - b
        if self.circle:
            return not np.any(diff != 0)
        return all(
            self.presented.is_zero([int(v) for v in diff[:, j]])
            for j in range(diff.shape[1])
        )

    def _validate(self):
        n = self.presented.n_gens
        ident = eye(n)
        for i, a in enumerate(self.actions):
            if not self.circle:
                # must descend to the quotient: relations map into relations
                GroupHom(self.presented, self.presented, a, check=True)
            power = ident
            for _ in range(self.group.orders[i]):
                power = mmul(a, power)
            if not self._endo_equal(power, ident):
                raise ValueError(
                    f"action {i} does not have order dividing {self.group.orders[i]}"
                )
        for i in range(len(self.actions)):
            for j in range(i + 1, len(self.actions)):
                if not self._endo_equal(
                    mmul(self.actions[i], self.actions[j]),
                    mmul(self.actions[j], self.actions[i]),
                ):
                    raise ValueError(f"actions {i} and {j} do not commute")

    @property
    def is_trivial_action(self) -> bool:
        n = self.presented.n_gens
        ident = eye(n)
        return all(not np.any(a - ident) for a in self.actions)

    def rho(self, z: Sequence[int]) -> np.ndarray:
        """Action matrix of the group element z."""
        z = self.group.reduce(z)
        if z not in self._rho_cache:
            n = self.presented.n_gens
            out = eye(n)
            for a, power in zip(self.actions, z):
                for _ in range(power):
                    out = mmul(a, out)
            self._rho_cache[z] = out
        return self._rho_cache[z]

    def describe(self) -> str:
        base = ab.dual(self.presented).describe() if self.circle else self.presented.describe()
        return base + ("" if self.is_trivial_action else " (nontrivial action)")

    # -- JSON -----------------------------------------------------------------

    @classmethod
    def from_json(cls, group: FiniteGroup, obj, field: str = "coefficient") -> "CoefModule":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ParseError("expected an object with a 'kind'", field=field)
        kind = obj["kind"]
        rank = obj.get("rank", 1)
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
            raise ParseError("rank must be a nonnegative integer", field=f"{field}.rank")
        if kind == "mod":
            m = obj.get("m")
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise ParseError("mod coefficients need a positive 'm'", field=f"{field}.m")
            rel = zeros(rank, rank)
            for i in range(rank):
                rel[i, i] = m
            presented = PresentedGroup(rank, rel)
            circle = False
        elif kind == "int":
            presented = PresentedGroup(rank)
            circle = False
        elif kind == "torus":
            presented = PresentedGroup(rank)
            circle = True
        else:
            raise ParseError(f"unknown coefficient kind {kind!r}", field=f"{field}.kind")
        actions = obj.get("actions")
        if actions is not None:
            if not isinstance(actions, list):
                raise ParseError("actions must be a list of matrices", field=f"{field}.actions")
            try:
                actions = [as_matrix(a, cols=rank) for a in actions]
            except (ValueError, TypeError):
                raise ParseError("malformed action matrix", field=f"{field}.actions") from None
        try:
            return cls(group, presented, actions, circle)
        except ValueError as exc:
            raise ParseError(str(exc), field=f"{field}.actions") from None


# ---------------------------------------------------------------------------
# bar complex
# ---------------------------------------------------------------------------


def _tuple_index(group: FiniteGroup, tup: Sequence[Sequence[int]]) -> int:
    idx = 0
    for z in tup:
        idx = idx * group.order + group.index_of(z)
    return idx


def bar_coboundary_matrix(
    coef: CoefModule, p: int, budget: int | None = None
) -> np.ndarray:
    """Integer matrix of d: Maps(W^p, M) -> Maps(W^{p+1}, M) in coordinates.

    Cochain coordinates list the p-tuples of W in enumeration order, with
    one block of module coordinates per tuple.
    """
    if p < 0:
        raise ValueError("degree must be nonnegative")
    w = coef.group
    n = coef.presented.n_gens
    limit = current_budget(budget)
    rows = (w.order ** (p + 1)) * n
    cols = (w.order**p) * n
    if rows > limit:
        raise BudgetExceeded(
            f"bar matrix would have {rows} rows, over the budget of {limit}"
        )
    out = zeros(rows, cols)
    elements = list(w.elements())
    for tup in itertools.product(elements, repeat=p + 1):
        r0 = _tuple_index(w, tup) * n
        # action term: z_1 . f(z_2, ..., z_{p+1})
        c0 = _tuple_index(w, tup[1:]) * n
        rho = coef.rho(tup[0])
        for i in range(n):
            for j in range(n):
                v = rho[i, j]
                if v:
                    out[r0 + i, c0 + j] += v
        # merge terms: (-1)^i f(..., z_i + z_{i+1}, ...)
        for i in range(1, p + 1):
            merged = tup[: i - 1] + (w.add(tup[i - 1], tup[i]),) + tup[i + 1 :]
            c0 = _tuple_index(w, merged) * n
            sgn = -1 if i % 2 else 1
            for t in range(n):
                out[r0 + t, c0 + t] += sgn
        # truncation term: (-1)^{p+1} f(z_1, ..., z_p)
        c0 = _tuple_index(w, tup[:p]) * n
        sgn = -1 if (p + 1) % 2 else 1
        for t in range(n):
            out[r0 + t, c0 + t] += sgn
    return out


def _free_sum(presented: PresentedGroup, copies: int) -> PresentedGroup:
    """Direct sum of ``copies`` copies of a presented group."""
    n = presented.n_gens
    r = presented.relations.shape[1]
    rel = zeros(n * copies, r * copies)
    for c in range(copies):
        rel[c * n : (c + 1) * n, c * r : (c + 1) * r] = presented.relations
    return PresentedGroup(n * copies, rel)


def cohomology_bar(coef: CoefModule, p: int, budget: int | None = None) -> PresentedGroup:
    """H^p of the acting group with the given coefficients, via the bar complex."""
    if p < 0:
        raise ValueError("degree must be nonnegative")
    w = coef.group
    d_p = bar_coboundary_matrix(coef, p, budget)
    if p == 0:
        if coef.circle:
            # kernel on the torus side is dual to the cokernel of the transpose
            coker = PresentedGroup(d_p.shape[1], d_p.T.copy())
            return ab.dual(coker)
        c0 = _free_sum(coef.presented, 1)
        c1 = _free_sum(coef.presented, w.order)
        ker, _ = ab.kernel(GroupHom(c0, c1, d_p, check=False))
        return ker
    d_prev = bar_coboundary_matrix(coef, p - 1, budget)
    if coef.circle:
        ranks = [d_prev.shape[1], d_p.shape[1], d_p.shape[0]]
        groups = [PresentedGroup(r) for r in ranks]
        f = GroupHom(groups[2], groups[1], d_p.T.copy(), check=False)
        g = GroupHom(groups[1], groups[0], d_prev.T.copy(), check=False)
        return ab.dual(ab.homology(f, g).group)
    c_prev = _free_sum(coef.presented, w.order ** (p - 1))
    c_here = _free_sum(coef.presented, w.order**p)
    c_next = _free_sum(coef.presented, w.order ** (p + 1))
    f = GroupHom(c_prev, c_here, d_prev, check=False)
    g = GroupHom(c_here, c_next, d_p, check=False)
    return ab.homology(f, g).group


# ---------------------------------------------------------------------------
# cyclic closed form
# ---------------------------------------------------------------------------


def cohomology_cyclic(coef: CoefModule, p: int) -> PresentedGroup:
    """H^p for a cyclic acting group, via the two-periodic resolution.

    With r the generator action, the complex alternates the difference
    map r - 1 and the norm map 1 + r + ... + r^{N-1}; cohomology in odd
    degrees is ker(norm)/im(difference) and in even positive degrees
    ker(difference)/im(norm).
    """
    if coef.group.rank != 1:
        raise ValueError("closed form applies to cyclic acting groups")
    if p < 0:
        raise ValueError("degree must be nonnegative")
    big_n = coef.group.orders[0]
    n = coef.presented.n_gens
    r = coef.actions[0]
    diff = r - eye(n)
    norm = zeros(n, n)
    power = eye(n)
    for _ in range(big_n):
        norm = norm + power
        power = mmul(r, power)
    if coef.circle:
        free = PresentedGroup(n)
        if p == 0:
            return ab.dual(PresentedGroup(n, diff.T.copy()))
        first, second = (norm, diff) if p % 2 else (diff, norm)
        f = GroupHom(free, free, first.T.copy(), check=False)
        g = GroupHom(free, free, second.T.copy(), check=False)
        return ab.dual(ab.homology(f, g).group)
    grp = coef.presented
    hom_diff = GroupHom(grp, grp, diff, check=False)
    hom_norm = GroupHom(grp, grp, norm, check=False)
    if p == 0:
        ker, _ = ab.kernel(hom_diff)
        return ker
    if p % 2:
        return ab.homology(hom_diff, hom_norm).group
    return ab.homology(hom_norm, hom_diff).group
