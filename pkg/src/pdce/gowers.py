"""Directional Gowers norms, exact residuals, and constraint-rounding repair.

Floating point lives here and only here, confined to the norm recursion:
the norm of a disk-valued function is averaged numerically.  Everything
with a membership claim — the residual of a near-solution and the repair
step that projects it back onto the solution module — runs in exact
rational arithmetic end to end.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import abelian as ab
from .abelian import kernel_basis, solve_rational
from .budget import current_budget
from .errors import (
    NotBounded,
    ParentMismatch,
    ProductTooLarge,
    RoundingAmbiguous,
    SpaceMismatch,
    WrongTarget,
)
from .funcspace import FunctionVector, Torus, closeness, d0_from_distances
from .groups import FiniteGroup, Subgroup
from .solutions import Instance, solution_module

__all__ = [
    "ComplexFunction",
    "gowers_norm",
    "residual",
    "rounding_margin",
    "repair",
    "phase_function",
    "sample_exact_solution",
    "SweepRow",
    "SweepReport",
    "stability_sweep",
]

_BOUND_TOL = 1e-12
_REAL_TOL = 1e-9
_HALF_TOL = Fraction(1, 10**9)


class ComplexFunction:
    """A function from a finite abelian group into the closed unit disk."""

    def __init__(self, space: FiniteGroup, values: Sequence):
        self.space = space
        arr = np.asarray(list(values), dtype=complex)
        if arr.shape != (space.order,):
            raise SpaceMismatch(
                f"expected {space.order} values for {space.describe()}, got {arr.shape}"
            )
        worst = float(np.max(np.abs(arr))) if arr.size else 0.0
        if worst > 1.0 + _BOUND_TOL:
            raise NotBounded(f"value of magnitude {worst} exceeds the unit disk")
        self.values = arr

    @classmethod
    def from_torus(cls, f: FunctionVector) -> "ComplexFunction":
        """The phase function e(f) = exp(2 pi i f) of a circle-valued function."""
        if f.target.kind not in ("torus", "rational", "mod"):
            raise WrongTarget(f"cannot take phases of {f.target.describe()} values")
        if f.target.kind == "mod":
            vals = [Fraction(v, f.target.m) for v in f.values]
        else:
            vals = f.values
        return cls(f.group, [cmath.exp(2j * cmath.pi * float(v)) for v in vals])

    @classmethod
    def indicator(cls, space: FiniteGroup, point: Sequence[int]) -> "ComplexFunction":
        vals = [0.0] * space.order
        vals[space.index_of(point)] = 1.0
        return cls(space, vals)

    def scale(self, c: complex) -> "ComplexFunction":
        return ComplexFunction(self.space, self.values * c)


def _check_directions(space: FiniteGroup, subgroups: Sequence[Subgroup]):
    for i, u in enumerate(subgroups):
        if u.group != space:
            raise ParentMismatch(f"direction {i} lives in {u.group.describe()}, not {space.describe()}")


def gowers_norm(f: ComplexFunction, subgroups: Sequence[Subgroup]) -> float:
    """The directional Gowers norm of f along the given chain of subgroups.

    Follows the recursion norm(f)^(2^k) = avg over u in U_k of
    norm(D_u f)^(2^(k-1)), with the multiplicative difference
    D_u f(z) = f(z - u) * conj(f(z)); the innermost average is the plain
    mean.  The final average is checked to be real up to 1e-9 and clamped
    at zero before taking the 2^k-th root.
    """
    _check_directions(f.space, subgroups)
    space = f.space
    elements = list(space.elements())
    perms = [
        [
            np.array([space.index_of(space.sub(z, u)) for z in elements], dtype=np.intp)
            for u in sub.elements()
        ]
        for sub in subgroups
    ]

    def averaged_power(arr: np.ndarray, depth: int) -> complex:
        if depth == 0:
            return complex(arr.mean())
        conj = np.conj(arr)
        total = 0j
        for perm in perms[depth - 1]:
            total += averaged_power(arr[perm] * conj, depth - 1)
        return total / len(perms[depth - 1])

    k = len(subgroups)
    value = averaged_power(f.values, k)
    if k == 0:
        return abs(value)
    if abs(value.imag) > _REAL_TOL:
        raise ArithmeticError(f"averaged power has imaginary part {value.imag}")
    return max(value.real, 0.0) ** (1.0 / (1 << k))


def residual(f: FunctionVector, subgroups: Sequence[Subgroup], budget: int | None = None) -> Fraction:
    """Exact d0 distance from zero of the fully differenced function.

    The iterated difference along every full tuple (u_1, ..., u_k) is a
    function on the materialized product U_1 x ... x U_k x Z; its d0
    distance from zero is the quantity a stability statement bounds.
    """
    if f.target.kind != "torus":
        raise WrongTarget("residuals are computed for circle-valued functions")
    _check_directions(f.group, subgroups)
    points = f.group.order
    for sub in subgroups:
        points *= sub.order
    limit = current_budget(budget)
    if points > limit:
        raise ProductTooLarge(
            f"differenced function would have {points} points, over the budget of {limit}"
        )
    target = f.target
    dists: list[Fraction] = []
    for us in itertools.product(*(list(sub.elements()) for sub in subgroups)):
        diffed = f.diff_tuple(list(us))
        dists.extend(target.distance(v, 0) for v in diffed.values)
    return d0_from_distances(dists)


# ---------------------------------------------------------------------------
# constraint rounding
# ---------------------------------------------------------------------------


def _full_torus_module(inst: Instance):
    if inst.target.kind != "torus":
        raise WrongTarget("constraint rounding works on the circle target")
    return solution_module(inst, inst.full_label())


def rounding_margin(inst: Instance) -> Fraction | None:
    """Perturbation radius below which rounding provably recovers a solution.

    With C the canonical constraint row basis, a perturbation of sup-norm
    under 1/(2 * max row sum of |C|) moves each constraint value by less
    than 1/2, so nearest-integer rounding recovers the unperturbed
    integers.  None means the module is all of the ambient space.
    """
    module = _full_torus_module(inst)
    rows = module.ann_rows
    if rows is None or rows.shape[0] == 0:
        return None
    worst = max(sum(abs(int(v)) for v in row) for row in rows)
    return Fraction(1, 2 * worst) if worst else None


def repair(f: FunctionVector, inst: Instance) -> FunctionVector:
    """Round a near-solution onto the solution module, exactly.

    Evaluates the constraint rows on f, rounds each value to the nearest
    integer, and subtracts the least-square-norm rational correction
    that restores integrality.  The result is a module member by
    construction; no closeness is promised unless the perturbation was
    below the rounding margin.
    """
    module = _full_torus_module(inst)
    if f.group != inst.group:
        raise SpaceMismatch(
            f"function lives on {f.group.describe()}, instance on {inst.group.describe()}"
        )
    if not inst.spans_group():
        raise ValueError("repair needs a normalized instance (directions spanning the group)")
    rows = module.ann_rows
    if rows is None or rows.shape[0] == 0:
        return FunctionVector(f.group, f.target, list(f.values))
    r, n = rows.shape
    values = [Fraction(v) for v in f.values]
    evaluated = [sum(int(rows[i, j]) * values[j] for j in range(n)) for i in range(r)]
    residue: list[Fraction] = []
    for i, val in enumerate(evaluated):
        floor = math.floor(val)
        frac = val - floor
        if abs(frac - Fraction(1, 2)) < _HALF_TOL:
            raise RoundingAmbiguous(
                f"constraint row {i} evaluates within 1e-9 of a half-integer"
            )
        nearest = floor if frac < Fraction(1, 2) else floor + 1
        residue.append(val - nearest)
    particular = solve_rational(rows, residue)
    assert particular is not None  # rows form a basis, so every target is reachable
    kernel = kernel_basis(rows)
    d = kernel.shape[1]
    if d:
        gram = ab.mmul(kernel.T.copy(), kernel)
        rhs = [sum(int(kernel[j, i]) * particular[j] for j in range(n)) for i in range(d)]
        coeffs = solve_rational(gram, rhs)
        assert coeffs is not None
        delta = [
            particular[j] - sum(int(kernel[j, i]) * coeffs[i] for i in range(d))
            for j in range(n)
        ]
    else:
        delta = particular
    target = f.target
    repaired = FunctionVector(
        f.group, target, [target.sub(v, dv) for v, dv in zip(values, delta)]
    )
    assert module.contains(repaired)
    return repaired


def phase_function(
    space: FiniteGroup,
    values: Sequence,
    tau: float = 0.5,
    max_denominator: int = 10**6,
) -> FunctionVector:
    """Extract the circle-valued phase of a disk-valued function.

    Values of magnitude below the threshold tau are replaced by the unit
    1 (phase zero); phases are rationalized to at most the given
    denominator so the result can enter exact repair.
    """
    out = []
    for v in values:
        v = complex(v)
        if abs(v) >= tau:
            phase = (cmath.phase(v) / (2 * cmath.pi)) % 1.0
            out.append(Fraction(phase).limit_denominator(max_denominator) % 1)
        else:
            out.append(Fraction(0))
    return FunctionVector(space, Torus(), out)


# ---------------------------------------------------------------------------
# stability sweep
# ---------------------------------------------------------------------------


def sample_exact_solution(inst: Instance, rng: random.Random) -> FunctionVector:
    """A random exact member of the full solution module over the circle.

    The constraint rows are diagonalized once; in the diagonal
    coordinates each constrained coordinate ranges over a finite cyclic
    set of torsion classes and each free coordinate over random small
    rationals, so every draw satisfies the constraints exactly.
    """
    module = _full_torus_module(inst)
    rows = module.ann_rows
    n = inst.group.order
    if rows is None or rows.shape[0] == 0:
        v = ab.eye(n)
        diag: list[int] = []
    else:
        res = ab.snf(rows)
        v, diag = res.V, [d for d in res.diag if d != 0]
    y: list[Fraction] = []
    for i in range(n):
        if i < len(diag):
            y.append(Fraction(rng.randrange(diag[i]), diag[i]))
        else:
            q = rng.randint(1, 12)
            y.append(Fraction(rng.randrange(q), q))
    target = inst.target
    vals = [
        target.normalize(sum(int(v[j, i]) * y[i] for i in range(n))) for j in range(n)
    ]
    return FunctionVector(inst.group, target, vals)


@dataclass
class SweepRow:
    delta: Fraction
    sample: int
    residual: Fraction
    repair_d0: Fraction | None
    success: bool


@dataclass
class SweepReport:
    """Empirical stability chart: perturbation size against repair quality."""

    instance: str
    margin: Fraction | None
    samples: int
    seed: int
    rows: list[SweepRow]

    def to_csv(self) -> str:
        lines = ["delta,sample,residual,repair_d0,success"]
        for row in self.rows:
            repair_part = "" if row.repair_d0 is None else str(row.repair_d0)
            lines.append(
                f"{row.delta},{row.sample},{row.residual},{repair_part},"
                f"{'true' if row.success else 'false'}"
            )
        return "\n".join(lines) + "\n"


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def stability_sweep(
    inst: Instance,
    delta_grid: Sequence,
    samples: int,
    rng_seed: int,
) -> SweepReport:
    """Sample exact solutions, perturb, and chart residual against repair.

    For each grid value, each sample draws an exact solution, adds
    independent uniform rational noise of magnitude at most delta to
    every coordinate, and records the exact residual, the d0 distance
    moved by repair, and whether that distance stayed within 2 * delta.
    Deterministic for a fixed seed; each (delta, sample) pair gets its
    own derived random stream.
    """
    grid = sorted(_as_fraction(d) for d in delta_grid)
    margin = rounding_margin(inst)
    scale = 10**6
    rows: list[SweepRow] = []
    for delta in grid:
        for s in range(samples):
            rng = random.Random(f"{rng_seed}:{delta}:{s}")
            exact = sample_exact_solution(inst, rng)
            target = inst.target
            noisy_vals = [
                target.normalize(v + delta * Fraction(rng.randint(-scale, scale), scale))
                for v in exact.values
            ]
            noisy = FunctionVector(inst.group, target, noisy_vals)
            resid = residual(noisy, inst.subgroups)
            try:
                repaired = repair(noisy, inst)
                dist = closeness(noisy, repaired)
                rows.append(SweepRow(delta, s, resid, dist, dist <= 2 * delta))
            except RoundingAmbiguous:
                rows.append(SweepRow(delta, s, resid, None, False))
    return SweepReport(inst.describe(), margin, samples, rng_seed, rows)
