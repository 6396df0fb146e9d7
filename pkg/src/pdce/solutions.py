"""Solution modules and structure complexes of difference-equation systems.

An :class:`Instance` fixes a finite abelian group Z, subgroups U_1..U_k,
and a value target A.  The k-fold system asks for functions f: Z -> A with

    d_{u_1} d_{u_2} ... d_{u_k} f = 0   for all u_i in U_i,

where d_u f = f(. - u) - f.  For every subset e of {1..k} the *solution
module* M_e collects the functions killed by the |e|-fold subsystem in
the directions of e; these are nested (M_a inside M_b when a is a subset
of b) and assemble into the *structure complex*

    0 -> M_{} -> sum_{|a|=1} M_a -> sum_{|a|=2} M_a -> ... -> M_e -> 0

with boundary blocks given by signed inclusions.  Its homology measures
how far solutions of the full system are from sums of solutions of the
(k-1)-fold subsystems; the top quotient is the obstruction group tested
by :func:`is_degenerate` / :func:`class_of`.

Finiteness is used through exactness instead of enumeration: discrete
targets present every module on an explicit generator lattice, while the
circle target works entirely with annihilator lattices on the Pontryagin
dual side.  Zero-sum problems (tuples of U_i-invariant functions summing
to zero) get the same treatment via :func:`zero_sum_complex`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import abelian as ab
from .abelian import (
    GroupHom,
    LatticeSolver,
    PresentedGroup,
    as_matrix,
    eye,
    hnf_cols,
    hstack,
    kernel_basis,
    kernel_basis_mod,
    lattice_intersection,
    mmul,
    preimage_lattice,
    rank_exact,
    rank_mod,
    row_basis,
    snf,
    solve_int,
    solve_mod,
    solve_rational,
    vstack,
    zeros,
)
from .errors import DomainError, NotASolution, ParseError
from .funcspace import (
    FunctionVector,
    Int,
    Mod,
    Rational,
    Target,
    Torus,
    diff_tuple_matrix,
    target_from_json,
    translate_matrix,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    coset_representatives,
    is_linearly_independent,
    subgroup_sum,
)

__all__ = [
    "Instance",
    "instance_from_json",
    "instance_to_json",
    "SolutionModule",
    "solution_module",
    "zero_sum_module",
    "StructureComplex",
    "structure_complex",
    "zero_sum_complex",
    "reduced_complex",
    "HomologyReport",
    "homology_at",
    "ReductionCheck",
    "reduce_check",
    "is_degenerate",
    "degeneracy_witness",
    "SolutionClass",
    "class_of",
    "ExactnessReport",
    "rational_exactness",
    "NormalizedInstance",
    "normalize_instance",
]


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------


class Instance:
    """A difference-equation setting: group, direction subgroups, value target."""

    def __init__(
        self,
        group: FiniteGroup,
        subgroups: Sequence[Subgroup],
        target: Target,
        functions: dict[str, FunctionVector] | None = None,
        params: dict | None = None,
    ):
        subgroups = list(subgroups)
        if not subgroups:
            raise ValueError("an instance needs at least one direction subgroup")
        for i, s in enumerate(subgroups):
            if s.group != group:
                raise ValueError(f"subgroup {i} lives in a different ambient group")
        self.group = group
        self.subgroups = subgroups
        self.target = target
        self.functions = dict(functions or {})
        for name, f in self.functions.items():
            if f.group != group or f.target != target:
                raise ValueError(f"function {name!r} lives on the wrong space")
        self.params = dict(params or {})
        self._modules: dict = {}

    @property
    def k(self) -> int:
        return len(self.subgroups)

    def full_label(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    def with_target(self, target: Target) -> "Instance":
        """Same group and directions, different value target, no functions."""
        return Instance(self.group, self.subgroups, target, {}, dict(self.params))

    def spans_group(self) -> bool:
        return subgroup_sum(self.subgroups).is_full

    def independent(self) -> bool:
        return is_linearly_independent(self.subgroups)

    def describe(self) -> str:
        return (
            f"Z = {self.group.describe()}, k = {self.k}, target {self.target.describe()}"
        )


def _check_label(e, k: int) -> tuple[int, ...]:
    lab = tuple(sorted({int(i) for i in e}))
    if any(i < 0 or i >= k for i in lab):
        raise ValueError(f"subset {lab} out of range for k={k}")
    return lab


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------


def instance_from_json(obj) -> Instance:
    """Parse and validate the instance JSON format (see README)."""
    if not isinstance(obj, dict):
        raise ParseError("instance must be a JSON object")
    if "format" in obj and obj["format"] != 1:
        raise ParseError(f"unsupported format {obj['format']!r}", field="format")
    if "group" not in obj:
        raise ParseError("missing 'group'", field="group")
    raw_group = obj["group"]
    if not isinstance(raw_group, list) or not all(
        isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in raw_group
    ):
        raise ParseError("group must be a list of positive integers", field="group")
    group = FiniteGroup(raw_group)

    if "subgroups" not in obj:
        raise ParseError("missing 'subgroups'", field="subgroups")
    raw_subs = obj["subgroups"]
    if not isinstance(raw_subs, list) or not raw_subs:
        raise ParseError("subgroups must be a nonempty list", field="subgroups")
    subgroups = []
    for i, gens in enumerate(raw_subs):
        if not isinstance(gens, list):
            raise ParseError("subgroup must be a list of generators", field=f"subgroups[{i}]")
        for j, g in enumerate(gens):
            if (
                not isinstance(g, list)
                or len(g) != group.rank
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in g)
            ):
                raise ParseError(
                    f"generator must be a list of {group.rank} integers",
                    field=f"subgroups[{i}][{j}]",
                )
        subgroups.append(group.subgroup(gens))

    if "target" not in obj:
        raise ParseError("missing 'target'", field="target")
    target = target_from_json(obj["target"])

    functions: dict[str, FunctionVector] = {}
    raw_funcs = obj.get("functions", {})
    if not isinstance(raw_funcs, dict):
        raise ParseError("functions must be an object", field="functions")
    for name, vals in raw_funcs.items():
        if not isinstance(vals, list) or len(vals) != group.order:
            raise ParseError(
                f"function needs exactly {group.order} values",
                field=f"functions.{name}",
            )
        parsed = []
        for idx, v in enumerate(vals):
            try:
                parsed.append(target.parse(v))
            except ParseError as exc:
                raise ParseError(str(exc), field=f"functions.{name}[{idx}]") from None
        functions[name] = FunctionVector(group, target, parsed)

    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("params must be an object", field="params")
    return Instance(group, subgroups, target, functions, params)


def instance_to_json(instance: Instance) -> dict:
    return {
        "format": 1,
        "group": list(instance.group.orders),
        "subgroups": [
            [list(g) for g in s.canonical_gens] for s in instance.subgroups
        ],
        "target": instance.target.to_json(),
        "functions": {
            name: f.render_values() for name, f in instance.functions.items()
        },
        "params": dict(instance.params),
    }


# ---------------------------------------------------------------------------
# solution and zero-sum modules
# ---------------------------------------------------------------------------


@dataclass
class SolutionModule:
    """One module of functions (or function tuples) cut out by difference constraints.

    ``constraint`` is an integer matrix on the ambient coordinate space;
    membership means the constraint vanishes in the target (identically,
    mod m, or mod 1).  Discrete targets carry a generator lattice ``gens``
    whose columns span the module, with ``presented`` the abstract group
    on those generators.  The circle target carries the annihilator row
    lattice instead, with ``presented`` the Pontryagin dual Z^n/Ann.
    """

    label: tuple[int, ...]
    target: Target
    ambient_dim: int
    slots: int  # 1 for plain solution modules; |label| for zero-sum tuples
    constraint: np.ndarray
    gens: np.ndarray | None = None
    presented: PresentedGroup | None = None
    ann_rows: np.ndarray | None = None
    _gens_solver: LatticeSolver | None = field(default=None, repr=False)

    def abstract(self) -> PresentedGroup | None:
        """Isomorphism type as an abstract group (None for the rational target)."""
        if self.target.kind == "torus":
            return ab.dual(self.presented)
        return self.presented

    @property
    def dim(self) -> int | None:
        """Dimension over Q (rational target only)."""
        if self.target.kind == "rational":
            return self.gens.shape[1]
        return None

    def describe(self) -> str:
        if self.target.kind == "rational":
            return f"Q^{self.dim}"
        return self.abstract().describe()

    def gens_solver(self) -> LatticeSolver:
        if self._gens_solver is None:
            self._gens_solver = LatticeSolver(self.gens)
        return self._gens_solver

    # -- membership -----------------------------------------------------------

    def contains_values(self, values: Sequence) -> bool:
        """Exact membership of a raw ambient coordinate vector."""
        if len(values) != self.ambient_dim:
            raise ValueError(
                f"expected {self.ambient_dim} coordinates, got {len(values)}"
            )
        c = self.constraint
        kind = self.target.kind
        for i in range(c.shape[0]):
            acc = sum(c[i, j] * values[j] for j in range(self.ambient_dim))
            if kind == "mod":
                if acc % self.target.m != 0:
                    return False
            elif kind == "torus":
                if Fraction(acc).denominator != 1:
                    return False
            else:
                if acc != 0:
                    return False
        return True

    def contains(self, f: FunctionVector) -> bool:
        if self.slots != 1:
            raise ValueError("tuple module: use contains_tuple")
        if f.target != self.target:
            raise ValueError("function has the wrong value target")
        return self.contains_values(f.values)

    def contains_tuple(self, funcs: Sequence[FunctionVector]) -> bool:
        if len(funcs) != self.slots:
            raise ValueError(f"expected {self.slots} functions")
        values: list = []
        for f in funcs:
            if f.target != self.target:
                raise ValueError("function has the wrong value target")
            values.extend(f.values)
        return self.contains_values(values)


def _module_from_constraint(
    label: tuple[int, ...],
    target: Target,
    ambient_dim: int,
    slots: int,
    constraint: np.ndarray,
) -> SolutionModule:
    # A tall constraint block is replaced by the canonical basis of its row
    # lattice; membership and kernels are unchanged and everything downstream
    # works on a matrix with at most ambient_dim rows.
    if constraint.shape[0] > 2 * ambient_dim + 8:
        constraint = row_basis(constraint)
    kind = target.kind
    if kind == "int":
        gens = kernel_basis(constraint)
        presented = PresentedGroup(gens.shape[1])
        return SolutionModule(label, target, ambient_dim, slots, constraint, gens, presented)
    if kind == "mod":
        lattice = kernel_basis_mod(constraint, target.m)
        scaled = eye(ambient_dim)
        for i in range(ambient_dim):
            scaled[i, i] = target.m
        relations = preimage_lattice(lattice, scaled)
        presented = PresentedGroup(lattice.shape[1], relations)
        return SolutionModule(label, target, ambient_dim, slots, constraint, lattice, presented)
    if kind == "rational":
        gens = kernel_basis(constraint)
        return SolutionModule(label, target, ambient_dim, slots, constraint, gens, None)
    if kind == "torus":
        ann = row_basis(constraint)
        cols = as_matrix(list(map(list, zip(*[list(r) for r in ann]))), cols=ann.shape[0]) if ann.shape[0] else zeros(ambient_dim, 0)
        presented = PresentedGroup(ambient_dim, cols)
        return SolutionModule(
            label, target, ambient_dim, slots, constraint, None, presented, ann
        )
    raise ValueError(f"unsupported target kind {kind!r}")


def _solution_constraint(instance: Instance, e: tuple[int, ...]) -> np.ndarray:
    group = instance.group
    n = group.order
    if not e:
        return eye(n)
    gen_lists = [instance.subgroups[i].canonical_gens for i in e]
    if any(not gl for gl in gen_lists):
        # some direction subgroup is trivial: the iterated difference
        # vanishes identically and every function solves the subsystem
        return zeros(0, n)
    blocks = [
        diff_tuple_matrix(group, tup) for tup in itertools.product(*gen_lists)
    ]
    return vstack(blocks)


def solution_module(instance: Instance, e) -> SolutionModule:
    """Module of solutions of the subsystem in the directions of ``e``.

    It suffices to impose the iterated differences along tuples of
    canonical subgroup generators: every direction tuple is a group-ring
    combination of translated generator tuples, so the kernels agree.
    """
    label = _check_label(e, instance.k)
    key = ("solution", label)
    if key not in instance._modules:
        constraint = _solution_constraint(instance, label)
        instance._modules[key] = _module_from_constraint(
            label, instance.target, instance.group.order, 1, constraint
        )
    return instance._modules[key]


def _zero_sum_constraint(instance: Instance, e: tuple[int, ...]) -> np.ndarray:
    group = instance.group
    n = group.order
    amb = len(e) * n
    if not e:
        return zeros(0, 0)
    rows: list[np.ndarray] = []
    ident = eye(n)
    for slot, i in enumerate(e):
        for g in instance.subgroups[i].canonical_gens:
            d = translate_matrix(group, g) - ident
            block = zeros(n, amb)
            block[:, slot * n : (slot + 1) * n] = d
            rows.append(block)
    summ = zeros(n, amb)
    for slot in range(len(e)):
        summ[:, slot * n : (slot + 1) * n] = ident
    rows.append(summ)
    return vstack(rows)


def zero_sum_module(instance: Instance, e) -> SolutionModule:
    """Tuples (f_i)_{i in e} of U_i-invariant functions with sum zero."""
    label = _check_label(e, instance.k)
    key = ("zero-sum", label)
    if key not in instance._modules:
        constraint = _zero_sum_constraint(instance, label)
        instance._modules[key] = _module_from_constraint(
            label, instance.target, len(label) * instance.group.order, len(label), constraint
        )
    return instance._modules[key]


# ---------------------------------------------------------------------------
# structure complexes
# ---------------------------------------------------------------------------


def _covering_pairs(b: tuple[int, ...]):
    """Subsets a = b minus one element, with the sign (-1)^position."""
    for j in range(len(b)):
        yield b[:j] + b[j + 1 :], -1 if j % 2 else 1


@dataclass
class HomologyReport:
    """Homology of a structure complex at one position."""

    position: int
    target: Target
    group: PresentedGroup | None = None
    dim: int | None = None

    @property
    def is_trivial(self) -> bool:
        if self.group is not None:
            return self.group.is_trivial
        return self.dim == 0

    @property
    def free_rank(self) -> int:
        if self.group is not None:
            return self.group.free_rank
        return self.dim

    def describe(self) -> str:
        if self.group is not None:
            return self.group.describe()
        return "0" if self.dim == 0 else f"Q^{self.dim}"


class StructureComplex:
    """The complex of solution (or zero-sum) modules over the subsets of ``e``.

    Position l of the complex holds the direct sum of the modules over
    the size-l subsets of e, and the boundary from position l-1 to l has
    blocks sign * inclusion.  With ``within=c`` each block M_a is replaced
    by M_{a intersect c} (the complex reduced to c), which is split exact
    at positions >= 1 whenever e is not contained in c.
    """

    def __init__(
        self,
        instance: Instance,
        e=None,
        kind: str = "solution",
        within: tuple[int, ...] | None = None,
        checked: bool = False,
    ):
        if kind not in ("solution", "zero-sum"):
            raise ValueError(f"unknown complex kind {kind!r}")
        self.instance = instance
        self.kind = kind
        self.e = _check_label(e if e is not None else range(instance.k), instance.k)
        self.within = _check_label(within, instance.k) if within is not None else None
        if self.within is not None and kind != "solution":
            raise ValueError("reduction applies to solution complexes")
        self.target = instance.target
        self.length = len(self.e)
        self.labels: list[list[tuple[int, ...]]] = [
            list(itertools.combinations(self.e, l)) for l in range(self.length + 1)
        ]
        self.modules: dict[tuple[int, ...], SolutionModule] = {}
        for pos in self.labels:
            for a in pos:
                self.modules[a] = self._module_for(a)
        self.ambient_dim = {
            a: self.modules[a].ambient_dim for pos in self.labels for a in pos
        }
        n = instance.group.order
        self._slot_dim = n
        # raw ambient boundary matrices (int64; entries are signs)
        self.ambient_boundaries: list[np.ndarray | None] = [None]
        for l in range(1, self.length + 1):
            self.ambient_boundaries.append(self._ambient_boundary(l))
        kind_t = self.target.kind
        if kind_t in ("int", "mod"):
            self._build_discrete(checked)
        elif kind_t == "torus":
            self._build_dual(checked)
        else:
            self._build_rational()

    # -- shared assembly -------------------------------------------------------

    def _module_for(self, a: tuple[int, ...]) -> SolutionModule:
        if self.kind == "zero-sum":
            return zero_sum_module(self.instance, a)
        key = a if self.within is None else tuple(i for i in a if i in self.within)
        return solution_module(self.instance, key)

    def _inject_blocks(self, a: tuple[int, ...], b: tuple[int, ...]):
        """Ambient injection M_a -> M_b as (row offset, col offset, size) blocks."""
        n = self._slot_dim
        if self.kind == "solution":
            return [(0, 0, self.ambient_dim[a])]
        out = []
        for pos_a, i in enumerate(a):
            pos_b = b.index(i)
            out.append((pos_b * n, pos_a * n, n))
        return out

    def _ambient_boundary(self, l: int) -> np.ndarray:
        rows = sum(self.ambient_dim[b] for b in self.labels[l])
        cols = sum(self.ambient_dim[a] for a in self.labels[l - 1])
        out = np.full((max(rows, 0), max(cols, 0)), 0, dtype=np.int64)
        row_off = {}
        at = 0
        for b in self.labels[l]:
            row_off[b] = at
            at += self.ambient_dim[b]
        col_off = {}
        at = 0
        for a in self.labels[l - 1]:
            col_off[a] = at
            at += self.ambient_dim[a]
        for b in self.labels[l]:
            for a, sgn in _covering_pairs(b):
                for r, c, size in self._inject_blocks(a, b):
                    for t in range(size):
                        out[row_off[b] + r + t, col_off[a] + c + t] += sgn
        return out

    def check_boundaries(self) -> bool:
        """Assert the composite of consecutive raw boundaries is exactly zero."""
        for l in range(1, self.length):
            a, b = self.ambient_boundaries[l], self.ambient_boundaries[l + 1]
            if a.shape[0] and b.shape[0] and a.shape[1]:
                if np.any(b @ a):
                    raise AssertionError(
                        f"boundary composite at positions {l},{l + 1} is nonzero"
                    )
        return True

    def _direct_sum(self, pos: int) -> tuple[PresentedGroup, dict]:
        groups = [self.modules[a].presented for a in self.labels[pos]]
        n_total = sum(g.n_gens for g in groups)
        r_total = sum(g.relations.shape[1] for g in groups)
        rel = zeros(n_total, r_total)
        offsets = {}
        at, rat = 0, 0
        for a, g in zip(self.labels[pos], groups):
            rel[at : at + g.n_gens, rat : rat + g.relations.shape[1]] = g.relations
            offsets[a] = (at, g.n_gens)
            at += g.n_gens
            rat += g.relations.shape[1]
        return PresentedGroup(n_total, rel), offsets

    # -- discrete targets --------------------------------------------------------

    def _inclusion_on_gens(self, a: tuple[int, ...], b: tuple[int, ...]) -> np.ndarray:
        """Matrix W with gens_b @ W = inject(gens_a), on presented generators."""
        ma, mb = self.modules[a], self.modules[b]
        if ma is mb:
            return eye(ma.presented.n_gens)
        solver = mb.gens_solver()
        blocks = self._inject_blocks(a, b)
        w = zeros(mb.presented.n_gens, ma.presented.n_gens)
        for j in range(ma.gens.shape[1]):
            vec = [0] * mb.ambient_dim
            for r, c, size in blocks:
                for t in range(size):
                    vec[r + t] += int(ma.gens[c + t, j])
            sol = solver.solve(vec)
            if sol is None:
                raise AssertionError("inclusion of nested solution modules failed")
            for i, v in enumerate(sol):
                w[i, j] = v
        return w

    def _build_discrete(self, checked: bool):
        self.sums = []
        self.offsets = []
        for pos in range(self.length + 1):
            s, off = self._direct_sum(pos)
            self.sums.append(s)
            self.offsets.append(off)
        trivial = PresentedGroup(0)
        self.boundaries = [GroupHom(trivial, self.sums[0], zeros(self.sums[0].n_gens, 0), check=False)]
        for l in range(1, self.length + 1):
            mat = zeros(self.sums[l].n_gens, self.sums[l - 1].n_gens)
            for b in self.labels[l]:
                rb, nb = self.offsets[l][b]
                for a, sgn in _covering_pairs(b):
                    ca, na = self.offsets[l - 1][a]
                    w = self._inclusion_on_gens(a, b)
                    for i in range(nb):
                        for j in range(na):
                            if w[i, j]:
                                mat[rb + i, ca + j] += sgn * w[i, j]
            self.boundaries.append(
                GroupHom(self.sums[l - 1], self.sums[l], mat, check=checked)
            )
        self.boundaries.append(
            GroupHom(self.sums[self.length], trivial, zeros(0, self.sums[self.length].n_gens), check=False)
        )

    # -- circle target (dual side) -----------------------------------------------

    def _build_dual(self, checked: bool):
        self.dual_sums = []
        self.dual_offsets = []
        for pos in range(self.length + 1):
            s, off = self._direct_sum(pos)
            self.dual_sums.append(s)
            self.dual_offsets.append(off)
        trivial = PresentedGroup(0)
        # dual arrows run from position l to position l-1 (transposed injections)
        self.dual_boundaries: list[GroupHom | None] = [
            GroupHom(self.dual_sums[0], trivial, zeros(0, self.dual_sums[0].n_gens), check=False)
        ]
        for l in range(1, self.length + 1):
            mat = zeros(self.dual_sums[l - 1].n_gens, self.dual_sums[l].n_gens)
            for b in self.labels[l]:
                cb, nb = self.dual_offsets[l][b]
                for a, sgn in _covering_pairs(b):
                    ra, na = self.dual_offsets[l - 1][a]
                    for r, c, size in self._inject_blocks(a, b):
                        for t in range(size):
                            mat[ra + c + t, cb + r + t] += sgn
            self.dual_boundaries.append(
                GroupHom(self.dual_sums[l], self.dual_sums[l - 1], mat, check=checked)
            )
        self.dual_boundaries.append(
            GroupHom(trivial, self.dual_sums[self.length], zeros(self.dual_sums[self.length].n_gens, 0), check=False)
        )

    # -- rational target -----------------------------------------------------------

    def _build_rational(self):
        self.dims = [
            sum(self.modules[a].dim for a in pos) if pos else 0 for pos in self.labels
        ]
        self._rank_cache: dict[int, tuple[int, bool]] = {}

    def _boundary_on_bases(self, l: int) -> np.ndarray:
        """Columns: ambient images of the basis vectors entering position l."""
        cols: list[list[int]] = []
        rows = self.ambient_boundaries[l].shape[0]
        amb = self.ambient_boundaries[l]
        col_off = {}
        at = 0
        for a in self.labels[l - 1]:
            col_off[a] = at
            at += self.ambient_dim[a]
        for a in self.labels[l - 1]:
            g = self.modules[a].gens
            for j in range(g.shape[1]):
                vec = [0] * rows
                base = col_off[a]
                for i in range(g.shape[0]):
                    v = int(g[i, j])
                    if v:
                        col = base + i
                        column = amb[:, col]
                        nz = np.nonzero(column)[0]
                        for r in nz:
                            vec[r] += int(column[r]) * v
                cols.append(vec)
        if not cols:
            return zeros(rows, 0)
        return as_matrix(list(map(list, zip(*cols))), cols=len(cols))

    def _rational_rank(self, l: int, exact: bool) -> tuple[int, bool]:
        """Rank of the boundary into position l; flag says whether it is exact."""
        if l < 1 or l > self.length:
            return 0, True
        cached = self._rank_cache.get(l)
        if cached is not None and (cached[1] or not exact):
            return cached
        mat = self._boundary_on_bases(l)
        if exact:
            val = (rank_exact(mat), True)
        else:
            val = (rank_mod(mat), False)
        self._rank_cache[l] = val
        return val

    # -- homology ---------------------------------------------------------------

    def homology_at(self, position: int) -> HomologyReport:
        l = int(position)
        if not 0 <= l <= self.length:
            raise ValueError(f"position must be between 0 and {self.length}")
        kind = self.target.kind
        if kind in ("int", "mod"):
            h = ab.homology(self.boundaries[l], self.boundaries[l + 1])
            return HomologyReport(l, self.target, group=h.group)
        if kind == "torus":
            h = ab.homology(self.dual_boundaries[l + 1], self.dual_boundaries[l])
            return HomologyReport(l, self.target, group=ab.dual(h.group))
        # rational: certified fast path first (mod-p ranks only underestimate,
        # and the homology dimension cannot be negative, so a certified zero
        # is exact); otherwise recompute both ranks exactly
        r_in, in_exact = self._rational_rank(l, exact=False)
        r_out, out_exact = self._rational_rank(l + 1, exact=False)
        dim = self.dims[l] - r_in - r_out
        if dim == 0 and not (in_exact and out_exact):
            return HomologyReport(l, self.target, dim=0)
        if not (in_exact and out_exact):
            r_in, _ = self._rational_rank(l, exact=True)
            r_out, _ = self._rational_rank(l + 1, exact=True)
            dim = self.dims[l] - r_in - r_out
        return HomologyReport(l, self.target, dim=dim)

    def position_describe(self, position: int) -> str:
        l = int(position)
        if self.target.kind == "rational":
            return "0" if self.dims[l] == 0 else f"Q^{self.dims[l]}"
        if self.target.kind == "torus":
            parts = [self.modules[a].describe() for a in self.labels[l]]
        else:
            parts = [self.modules[a].describe() for a in self.labels[l]]
        nontrivial = [p for p in parts if p != "0"]
        return " + ".join(nontrivial) if nontrivial else "0"


def structure_complex(instance: Instance, e=None, checked: bool = False) -> StructureComplex:
    """The complex of solution modules over subsets of ``e`` (default all)."""
    return StructureComplex(instance, e=e, kind="solution", checked=checked)


def zero_sum_complex(instance: Instance, e=None, checked: bool = False) -> StructureComplex:
    """The complex of zero-sum modules over subsets of ``e`` (default all)."""
    return StructureComplex(instance, e=e, kind="zero-sum", checked=checked)


def reduced_complex(instance: Instance, within, e=None, checked: bool = False) -> StructureComplex:
    """Structure complex with every block M_a replaced by M_{a ∩ within}."""
    return StructureComplex(
        instance, e=e, kind="solution", within=_check_label(within, instance.k), checked=checked
    )


def homology_at(instance: Instance, e, position: int, kind: str = "solution") -> HomologyReport:
    """Homology of the (solution or zero-sum) structure complex at one position."""
    return StructureComplex(instance, e=e, kind=kind).homology_at(position)


@dataclass
class ReductionCheck:
    """Exactness report for a complex reduced to a sub-family of directions."""

    within: tuple[int, ...]
    e: tuple[int, ...]
    reports: list[HomologyReport]

    @property
    def split_case(self) -> bool:
        """True when e is not contained in the reduction set (split complex)."""
        return not set(self.e) <= set(self.within)

    @property
    def exact_above_bottom(self) -> bool:
        return all(r.is_trivial for r in self.reports)


def reduce_check(instance: Instance, within, e=None) -> ReductionCheck:
    """Homology of the reduced complex at all positions >= 1.

    When ``e`` is not contained in ``within`` the reduced complex splits
    (it carries a contracting homotopy), so every report must be trivial.
    """
    cx = reduced_complex(instance, within, e=e)
    reports = [cx.homology_at(l) for l in range(1, cx.length + 1)]
    return ReductionCheck(cx.within, cx.e, reports)


# ---------------------------------------------------------------------------
# degeneracy and obstruction classes
# ---------------------------------------------------------------------------


def _require_solution(instance: Instance, f: FunctionVector) -> SolutionModule:
    if f.group != instance.group:
        raise NotASolution("function lives on a different group")
    if f.target != instance.target:
        raise NotASolution("function has a different value target")
    top = solution_module(instance, instance.full_label())
    if not top.contains(f):
        raise NotASolution("function does not solve the full system")
    return top


def _facet_modules(instance: Instance) -> list[SolutionModule]:
    full = instance.full_label()
    return [
        solution_module(instance, tuple(j for j in full if j != i)) for i in full
    ]


def _annihilator_meet(mods: Sequence[SolutionModule]) -> np.ndarray:
    """Intersection of the annihilator lattices, as canonical columns."""
    def cols_of(m: SolutionModule) -> np.ndarray:
        ann = m.ann_rows
        return as_matrix(
            list(map(list, zip(*[list(r) for r in ann]))), cols=ann.shape[0]
        ) if ann.shape[0] else zeros(m.ambient_dim, 0)

    meet = cols_of(mods[0])
    for m in mods[1:]:
        meet = lattice_intersection(meet, cols_of(m))
    return meet


def is_degenerate(instance: Instance, f: FunctionVector) -> bool:
    """Is the solution a sum of solutions of the (k-1)-direction subsystems?"""
    _require_solution(instance, f)
    facets = _facet_modules(instance)
    kind = instance.target.kind
    if kind == "int":
        return solve_int(hstack([m.gens for m in facets]), f.values) is not None
    if kind == "mod":
        return solve_mod(hstack([m.gens for m in facets]), f.values, instance.target.m) is not None
    if kind == "rational":
        return solve_rational(hstack([m.gens for m in facets]), f.values) is not None
    meet = _annihilator_meet(facets)
    # f is in the facet sum iff every character vanishing on all facet
    # modules also vanishes on f (annihilator duality for finite groups)
    for j in range(meet.shape[1]):
        pairing = sum(Fraction(int(meet[i, j])) * f.values[i] for i in range(meet.shape[0]))
        if pairing.denominator != 1:
            return False
    return True


def degeneracy_witness(instance: Instance, f: FunctionVector) -> list[FunctionVector] | None:
    """Solutions f_i of the facet subsystems with sum f, or None.

    The i-th returned function solves the subsystem omitting direction i.
    """
    _require_solution(instance, f)
    facets = _facet_modules(instance)
    group, target = instance.group, instance.target
    n = group.order
    kind = target.kind
    if kind in ("int", "mod", "rational"):
        stacked = hstack([m.gens for m in facets])
        if kind == "int":
            sol = solve_int(stacked, f.values)
        elif kind == "mod":
            sol = solve_mod(stacked, f.values, target.m)
        else:
            sol = solve_rational(stacked, f.values)
        if sol is None:
            return None
        out = []
        at = 0
        for m in facets:
            g = m.gens
            w = sol[at : at + g.shape[1]]
            at += g.shape[1]
            vals = [sum(g[i, j] * w[j] for j in range(g.shape[1])) for i in range(n)]
            out.append(FunctionVector(group, target, vals))
        return out
    # circle target: solve the stacked congruence  B g = (f, 0)  mod Z exactly.
    # Rows of B: one coordinate-sum row per point (the pieces must add up
    # to f) over one block row per facet annihilator (each piece must lie
    # in its facet module).  Diagonalizing B reduces the congruence to one
    # scalar condition per elementary divisor, so solvability is decided
    # exactly and the witness denominators need no a-priori bound.
    k = instance.k
    cols = k * n
    blocks: list[np.ndarray] = []
    ident = eye(n)
    row = zeros(n, cols)
    for slot in range(k):
        row[:, slot * n : (slot + 1) * n] = ident
    blocks.append(row)
    rhs: list[Fraction] = [Fraction(v) for v in f.values]
    for slot, m in enumerate(facets):
        ann = m.ann_rows
        if ann.shape[0]:
            block = zeros(ann.shape[0], cols)
            block[:, slot * n : (slot + 1) * n] = ann
            blocks.append(block)
            rhs.extend([Fraction(0)] * ann.shape[0])
    system = vstack(blocks)
    res = snf(system)
    n_rows = system.shape[0]
    image = [
        sum(Fraction(int(res.U[i, j])) * rhs[j] for j in range(n_rows))
        for i in range(n_rows)
    ]
    h = [Fraction(0)] * cols
    for i in range(n_rows):
        d = res.diag[i] if i < len(res.diag) else 0
        if d == 0:
            if image[i].denominator != 1:
                return None
        else:
            h[i] = image[i] / d
    flat = [
        sum(Fraction(int(res.V[i, j])) * h[j] for j in range(cols))
        for i in range(cols)
    ]
    out = []
    for slot in range(k):
        vals = [target.normalize(flat[slot * n + i]) for i in range(n)]
        out.append(FunctionVector(group, target, vals))
    return out


@dataclass
class SolutionClass:
    """Class of a solution in the top quotient M_full / sum of facet modules."""

    quotient: PresentedGroup | None
    coords: tuple
    dim: int | None = None  # rational target: dimension of the quotient space

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def describe(self) -> str:
        grp = self.quotient.describe() if self.quotient is not None else f"Q^{self.dim}"
        shown = ", ".join(str(c) for c in self.coords)
        return f"class [{shown}] in {grp}"


class _RationalEchelon:
    """Incremental exact row reduction used to extend a basis."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, vec: Sequence) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                c = v[p]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        v = self.reduce(vec)
        for p in range(self.dim):
            if v[p]:
                inv = 1 / v[p]
                v = [a * inv for a in v]
                self.rows.append(v)
                self.pivots.append(p)
                return True
        return False


def class_of(instance: Instance, f: FunctionVector) -> SolutionClass:
    """Canonical coordinates of [f] in M_full / (sum of facet modules)."""
    top = _require_solution(instance, f)
    facets = _facet_modules(instance)
    target = instance.target
    kind = target.kind
    if kind in ("int", "mod"):
        stacked = [m.gens for m in facets]
        if kind == "mod":
            scaled = eye(instance.group.order)
            for i in range(instance.group.order):
                scaled[i, i] = target.m
            stacked = stacked + [scaled]
        rel = preimage_lattice(top.gens, hstack(stacked))
        quotient = PresentedGroup(top.gens.shape[1], rel)
        if kind == "mod":
            w = solve_mod(top.gens, f.values, target.m)
        else:
            w = solve_int(top.gens, f.values)
        if w is None:
            raise NotASolution("function is not in the solution module")
        return SolutionClass(quotient, quotient.coords_of(w))
    if kind == "rational":
        ech = _RationalEchelon(instance.group.order)
        for m in facets:
            for j in range(m.gens.shape[1]):
                ech.add([m.gens[i, j] for i in range(m.gens.shape[0])])
        extension: list[list[int]] = []
        for j in range(top.gens.shape[1]):
            col = [int(top.gens[i, j]) for i in range(top.gens.shape[0])]
            if ech.add(col):
                extension.append(col)
        mats = [m.gens for m in facets] + (
            [as_matrix(list(map(list, zip(*extension))), cols=len(extension))]
            if extension
            else []
        )
        sol = solve_rational(hstack(mats) if mats else zeros(instance.group.order, 0), f.values)
        if sol is None:
            raise NotASolution("function is not in the solution module")
        tail = tuple(sol[len(sol) - len(extension) :]) if extension else ()
        return SolutionClass(None, tail, dim=len(extension))
    # circle target: the quotient is dual to (meet of facet annihilators) / Ann_full
    meet = _annihilator_meet(facets)
    top_ann = top.ann_rows
    ann_top_cols = (
        as_matrix(
            list(map(list, zip(*[list(r) for r in top_ann]))), cols=top_ann.shape[0]
        )
        if top_ann.shape[0]
        else zeros(top.ambient_dim, 0)
    )
    rel = preimage_lattice(meet, ann_top_cols)
    q = PresentedGroup(meet.shape[1], rel)
    factors = q.invariant_factors
    coords = []
    for j, d in enumerate(factors):
        w = q.canonical_rep(j)
        char = [sum(int(meet[i, t]) * w[t] for t in range(meet.shape[1])) for i in range(meet.shape[0])]
        pairing = sum(Fraction(c) * v for c, v in zip(char, f.values)) % 1
        if d == 0:
            # circle factor of the quotient: the coordinate is the pairing itself
            coords.append(pairing)
            continue
        val = pairing * d
        if val.denominator != 1:
            raise AssertionError("character value has unexpected denominator")
        coords.append(int(val) % d)
    return SolutionClass(ab.dual(q), tuple(coords))


# ---------------------------------------------------------------------------
# rational exactness
# ---------------------------------------------------------------------------


@dataclass
class ExactnessReport:
    """Rational homology dimensions of the solution and zero-sum complexes."""

    solution_dims: dict[int, int]
    zero_sum_dims: dict[int, int]

    @property
    def solution_exact(self) -> bool:
        return all(d == 0 for d in self.solution_dims.values())

    @property
    def zero_sum_exact(self) -> bool:
        return all(d == 0 for d in self.zero_sum_dims.values())

    @property
    def ok(self) -> bool:
        return self.solution_exact and self.zero_sum_exact


def rational_exactness(instance: Instance) -> ExactnessReport:
    """Check vanishing of rational homology in the theorem range.

    The solution complex is checked at positions 2..k and the zero-sum
    complex at positions 3..k, matching the ranges in which exactness is
    asserted for linearly independent direction subgroups.
    """
    inst_q = instance.with_target(Rational())
    k = inst_q.k
    sol = StructureComplex(inst_q, kind="solution")
    sol_dims = {l: sol.homology_at(l).dim for l in range(2, k + 1)}
    zs = StructureComplex(inst_q, kind="zero-sum")
    zs_dims = {l: zs.homology_at(l).dim for l in range(3, k + 1)}
    return ExactnessReport(sol_dims, zs_dims)


# ---------------------------------------------------------------------------
# normalization (directions that do not span the group)
# ---------------------------------------------------------------------------


@dataclass
class NormalizedInstance:
    """An instance transported onto the subgroup spanned by its directions.

    When the direction subgroups do not span Z, every computation splits
    over the cosets of their sum.  ``reduced`` is the same system on a
    group isomorphic to that sum; ``embed``/``project`` translate elements
    both ways, and functions move coset by coset.
    """

    original: Instance
    reduced: Instance
    coset_reps: list[tuple[int, ...]]
    changed: bool
    _embed: Callable
    _project: Callable

    @property
    def coset_count(self) -> int:
        return len(self.coset_reps)

    def embed(self, z) -> tuple[int, ...]:
        """Element of the reduced group -> element of the original group."""
        return self._embed(tuple(z))

    def project(self, z) -> tuple[int, ...]:
        """Element of the span subgroup -> element of the reduced group."""
        return self._project(tuple(z))

    def split_function(self, f: FunctionVector) -> list[FunctionVector]:
        """Restrictions of f to each coset, as functions on the reduced group."""
        out = []
        g0, g1 = self.original.group, self.reduced.group
        for rep in self.coset_reps:
            vals = [
                f.at(g0.add(rep, self.embed(zp))) for zp in g1.elements()
            ]
            out.append(FunctionVector(g1, self.original.target, vals))
        return out

    def merge_function(self, parts: Sequence[FunctionVector]) -> FunctionVector:
        if len(parts) != self.coset_count:
            raise ValueError(f"expected {self.coset_count} coset functions")
        g0, g1 = self.original.group, self.reduced.group
        vals = [None] * g0.order
        for rep, part in zip(self.coset_reps, parts):
            for zp in g1.elements():
                vals[g0.index_of(g0.add(rep, self.embed(zp)))] = part.at(zp)
        return FunctionVector(g0, self.original.target, vals)


def normalize_instance(instance: Instance) -> NormalizedInstance:
    """Transport an instance onto the span of its direction subgroups."""
    group = instance.group
    total = subgroup_sum(instance.subgroups)
    if total.is_full:
        ident = lambda z: tuple(z)
        return NormalizedInstance(
            instance, instance, [group.zero], False, ident, ident
        )
    k = group.rank
    basis_rows = total.lattice_rows  # k x k, full rank
    bt = as_matrix(list(map(list, zip(*basis_rows))), cols=k)  # columns = basis vectors
    diag = zeros(k, k)
    for i in range(k):
        diag[i, i] = group.orders[i]
    presented = PresentedGroup(k, preimage_lattice(bt, diag))
    new_orders = list(presented.invariant_factors)
    if any(d == 0 for d in new_orders):
        raise AssertionError("span of subgroups of a finite group must be finite")
    reduced_group = FiniteGroup(new_orders)
    reps = [presented.canonical_rep(j) for j in range(len(new_orders))]

    def embed(zp: tuple[int, ...]) -> tuple[int, ...]:
        w = [sum(int(zp[j]) * reps[j][i] for j in range(len(new_orders))) for i in range(k)]
        return group.reduce([sum(int(bt[i, t]) * w[t] for t in range(k)) for i in range(k)])

    span_solver = LatticeSolver(hstack([bt, diag]))

    def project(z: tuple[int, ...]) -> tuple[int, ...]:
        sol = span_solver.solve(list(group.reduce(z)))
        if sol is None:
            raise DomainError(f"element {tuple(z)} is outside the span of the directions")
        return reduced_group.reduce(presented.coords_of(sol[:k]))

    new_subs = [
        reduced_group.subgroup([project(g) for g in s.canonical_gens])
        for s in instance.subgroups
    ]
    reduced = Instance(reduced_group, new_subs, instance.target, {}, dict(instance.params))
    return NormalizedInstance(
        instance,
        reduced,
        coset_representatives(group, total),
        True,
        embed,
        project,
    )
