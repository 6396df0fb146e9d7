"""Function spaces F(Z, A): maps from a finite abelian group into a value group.

Supported value targets:

* ``Mod(m)``   — integers mod m,
* ``Int()``    — the integers,
* ``Rational()`` — the rationals (exact ``Fraction`` arithmetic),
* ``Torus()``  — rationals mod 1 (the subgroup of the circle where exact
  arithmetic is possible).

A :class:`FunctionVector` stores one value per group element in row-major
enumeration order.  Translation acts by ``(translate(u) f)(z) = f(z - u)``
and the difference operator is ``diff(u) = translate(u) - identity``;
iterated differences expand into the usual signed sum over subsets of the
directions.  ``closeness`` is the exact "small outside a small set" metric
used to compare near-solutions: the least epsilon such that the pointwise
distance exceeds epsilon on at most an epsilon fraction of points.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .abelian import as_matrix, zeros
from .errors import ParseError, SpaceMismatch, WrongTarget
from .groups import FiniteGroup

__all__ = [
    "Target",
    "Mod",
    "Int",
    "Rational",
    "Torus",
    "target_from_json",
    "FunctionVector",
    "translate_matrix",
    "diff_tuple_matrix",
    "coset_indicators",
    "d0_from_distances",
    "closeness",
]


# ---------------------------------------------------------------------------
# value targets
# ---------------------------------------------------------------------------


class Target:
    """A value group for function spaces; concrete kinds below."""

    kind: str = "?"

    def normalize(self, v):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, c: int, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return self.normalize(a) == self.zero()

    def distance(self, a, b) -> Fraction:
        """Distance in [0, 1] between two values (circle metric where applicable)."""
        raise NotImplementedError

    def parse(self, raw):
        raise NotImplementedError

    def render(self, v):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, Target) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self):
        return (self.kind,)

    def __repr__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        return self.kind


def _parse_int(raw, what: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, (int, np.integer, str)):
        raise ParseError(f"expected an integer {what}, got {raw!r}")
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {raw!r}") from None


def _parse_fraction(raw, what: str) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"expected a rational {what}, got {raw!r}")
    if isinstance(raw, (int, np.integer)):
        return Fraction(int(raw))
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"expected a rational {what} like '3/4', got {raw!r}") from None
    raise ParseError(f"expected a rational {what}, got {raw!r}")


class Mod(Target):
    """Integers modulo m."""

    kind = "mod"

    def __init__(self, m: int):
        m = int(m)
        if m < 1:
            raise ValueError("modulus must be positive")
        self.m = m

    def key(self):
        return ("mod", self.m)

    def describe(self) -> str:
        return f"Z/{self.m}"

    def normalize(self, v):
        return int(v) % self.m

    def zero(self):
        return 0

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def scale(self, c, a):
        return (c * a) % self.m

    def distance(self, a, b) -> Fraction:
        d = (int(a) - int(b)) % self.m
        return Fraction(min(d, self.m - d), self.m)

    def parse(self, raw):
        return self.normalize(_parse_int(raw, "value"))

    def render(self, v):
        return int(v)

    def to_json(self):
        return {"kind": "mod", "m": self.m}


class Int(Target):
    """The integers."""

    kind = "int"

    def describe(self) -> str:
        return "Z"

    def normalize(self, v):
        return int(v)

    def zero(self):
        return 0

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, c, a):
        return c * a

    def distance(self, a, b) -> Fraction:
        return min(Fraction(abs(int(a) - int(b))), Fraction(1))

    def parse(self, raw):
        return _parse_int(raw, "value")

    def render(self, v):
        return int(v)

    def to_json(self):
        return {"kind": "int"}


class Rational(Target):
    """The rationals with exact arithmetic."""

    kind = "rational"

    def describe(self) -> str:
        return "Q"

    def normalize(self, v):
        return Fraction(v)

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def scale(self, c, a):
        return c * a

    def distance(self, a, b) -> Fraction:
        return min(abs(Fraction(a) - Fraction(b)), Fraction(1))

    def parse(self, raw):
        return _parse_fraction(raw, "value")

    def render(self, v):
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def to_json(self):
        return {"kind": "rational"}


class Torus(Target):
    """Rationals modulo 1: the exactly representable part of the circle."""

    kind = "torus"

    def describe(self) -> str:
        return "T"

    def normalize(self, v):
        return Fraction(v) % 1

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return (a + b) % 1

    def neg(self, a):
        return (-a) % 1

    def scale(self, c, a):
        return (c * a) % 1

    def distance(self, a, b) -> Fraction:
        d = (Fraction(a) - Fraction(b)) % 1
        return min(d, 1 - d)

    def parse(self, raw):
        return self.normalize(_parse_fraction(raw, "value"))

    def render(self, v):
        v = Fraction(v) % 1
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def to_json(self):
        return {"kind": "torus"}


def target_from_json(obj, field: str = "target") -> Target:
    """Build a target from its JSON description {"kind": ..., ...}."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("expected an object with a 'kind'", field=field)
    kind = obj["kind"]
    if kind == "mod":
        if "m" not in obj:
            raise ParseError("mod target needs 'm'", field=field)
        m = _parse_int(obj["m"], "modulus")
        if m < 1:
            raise ParseError("modulus must be positive", field=f"{field}.m")
        return Mod(m)
    if kind == "int":
        return Int()
    if kind == "rational":
        return Rational()
    if kind == "torus":
        return Torus()
    raise ParseError(f"unknown target kind {kind!r}", field=f"{field}.kind")


# ---------------------------------------------------------------------------
# function vectors
# ---------------------------------------------------------------------------


class FunctionVector:
    """A function from a finite abelian group into a value target.

    Values are stored in the group's row-major enumeration order.
    """

    def __init__(self, group: FiniteGroup, target: Target, values: Sequence):
        values = list(values)
        if len(values) != group.order:
            raise ValueError(f"expected {group.order} values, got {len(values)}")
        self.group = group
        self.target = target
        self.values = [target.normalize(v) for v in values]

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, group: FiniteGroup, target: Target) -> "FunctionVector":
        return cls(group, target, [target.zero()] * group.order)

    @classmethod
    def indicator(cls, group: FiniteGroup, target: Target, point: Sequence[int]) -> "FunctionVector":
        vals = [target.zero()] * group.order
        vals[group.index_of(point)] = target.normalize(1)
        return cls(group, target, vals)

    @classmethod
    def from_callable(cls, group: FiniteGroup, target: Target, fn: Callable) -> "FunctionVector":
        return cls(group, target, [fn(z) for z in group.elements()])

    # -- basics -----------------------------------------------------------------

    def _check_space(self, other: "FunctionVector"):
        if self.group != other.group or self.target != other.target:
            raise SpaceMismatch(
                f"functions live on different spaces: "
                f"({self.group.describe()}, {self.target.describe()}) vs "
                f"({other.group.describe()}, {other.target.describe()})"
            )

    def at(self, z: Sequence[int]):
        return self.values[self.group.index_of(z)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FunctionVector)
            and self.group == other.group
            and self.target == other.target
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.group, self.target, tuple(self.values)))

    def is_zero(self) -> bool:
        z = self.target.zero()
        return all(v == z for v in self.values)

    def __add__(self, other: "FunctionVector") -> "FunctionVector":
        self._check_space(other)
        t = self.target
        return FunctionVector(
            self.group, t, [t.add(a, b) for a, b in zip(self.values, other.values)]
        )

    def __sub__(self, other: "FunctionVector") -> "FunctionVector":
        self._check_space(other)
        t = self.target
        return FunctionVector(
            self.group, t, [t.sub(a, b) for a, b in zip(self.values, other.values)]
        )

    def __neg__(self) -> "FunctionVector":
        t = self.target
        return FunctionVector(self.group, t, [t.neg(a) for a in self.values])

    def scale(self, c: int) -> "FunctionVector":
        t = self.target
        return FunctionVector(self.group, t, [t.scale(c, a) for a in self.values])

    # -- translation and differences -------------------------------------------

    def translate(self, u: Sequence[int]) -> "FunctionVector":
        """(translate(u) f)(z) = f(z - u)."""
        g = self.group
        vals = [self.values[g.index_of(g.sub(z, u))] for z in g.elements()]
        return FunctionVector(g, self.target, vals)

    def diff(self, u: Sequence[int]) -> "FunctionVector":
        """Difference in direction u: translate(u) f - f."""
        return self.translate(u) - self

    def diff_tuple(self, us: Sequence[Sequence[int]]) -> "FunctionVector":
        """Iterated difference along a tuple of directions.

        Expands the product of the single-direction operators into the
        signed sum over subsets: sum over S of (-1)^(k - |S|) f(z - sum_S u_i).
        """
        g, t = self.group, self.target
        k = len(us)
        out = [t.zero()] * g.order
        for bits in itertools.product((0, 1), repeat=k):
            shift = g.zero
            for pick, u in zip(bits, us):
                if pick:
                    shift = g.add(shift, u)
            sign = 1 if (k - sum(bits)) % 2 == 0 else -1
            for idx, z in enumerate(g.elements()):
                v = self.values[g.index_of(g.sub(z, shift))]
                out[idx] = t.add(out[idx], t.scale(sign, v))
        return FunctionVector(g, t, out)

    def render_values(self) -> list:
        return [self.target.render(v) for v in self.values]


# ---------------------------------------------------------------------------
# operators as integer matrices
# ---------------------------------------------------------------------------


def translate_matrix(group: FiniteGroup, u: Sequence[int]) -> np.ndarray:
    """Permutation matrix of translate(u) acting on value vectors."""
    n = group.order
    out = zeros(n, n)
    for idx, z in enumerate(group.elements()):
        out[idx, group.index_of(group.sub(z, u))] = 1
    return out


def diff_tuple_matrix(group: FiniteGroup, us: Sequence[Sequence[int]]) -> np.ndarray:
    """Integer matrix of the iterated difference operator along ``us``."""
    n = group.order
    k = len(us)
    out = zeros(n, n)
    for bits in itertools.product((0, 1), repeat=k):
        shift = group.zero
        for pick, u in zip(bits, us):
            if pick:
                shift = group.add(shift, u)
        sign = 1 if (k - sum(bits)) % 2 == 0 else -1
        for idx, z in enumerate(group.elements()):
            col = group.index_of(group.sub(z, shift))
            out[idx, col] += sign
    return out


def coset_indicators(group: FiniteGroup, sub) -> np.ndarray:
    """0/1 matrix whose rows are the indicator vectors of the cosets of ``sub``.

    The rows form a basis of the subspace of functions invariant under
    translation by every element of the subgroup.
    """
    labels: dict[tuple, int] = {}
    rows: list[list[int]] = []
    for idx, z in enumerate(group.elements()):
        lab = sub.coset_label(z)
        if lab not in labels:
            labels[lab] = len(rows)
            rows.append([0] * group.order)
        rows[labels[lab]][idx] = 1
    return as_matrix(rows, cols=group.order)


# ---------------------------------------------------------------------------
# exact closeness metric
# ---------------------------------------------------------------------------


def d0_from_distances(dists: Sequence[Fraction]) -> Fraction:
    """Least epsilon such that more than epsilon * n of the distances exceed it — exactly.

    The count n_exceed(eps) = #{dist > eps} minus eps*n is decreasing and
    right-continuous, so the infimum is attained at the first candidate
    where the count condition holds; every crossing point is either a
    distance value or a fraction j/n, hence lies in the candidate set.
    """
    n = len(dists)
    if n == 0:
        return Fraction(0)
    candidates = sorted(set(dists) | {Fraction(j, n) for j in range(n + 1)})
    for a in candidates:
        if sum(1 for d in dists if d > a) <= a * n:
            return a
    return Fraction(1)


def closeness(f: FunctionVector, g: FunctionVector) -> Fraction:
    """The d0 distance between two functions: least epsilon such that
    dist(f(z), g(z)) > epsilon on at most epsilon * |Z| points.

    Computed exactly over the rationals by scanning the candidate set
    consisting of the pointwise distances and the fractions j / |Z|.
    """
    f._check_space(g)
    t = f.target
    return d0_from_distances([t.distance(a, b) for a, b in zip(f.values, g.values)])
