"""Built-in worked examples with their documented expected outcomes.

Each entry builds a finite instance parametrized by a cyclic order N,
runs the checks that are known in closed form for it, and reports
expected against computed values.  The catalog doubles as a regression
corpus: `verify_example` is what the command-line `verify` subcommand
runs, and the acceptance tests call it directly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import UnknownExample
from .funcspace import FunctionVector, Int, Mod, Rational, Torus
from .groups import FiniteGroup
from .solutions import (
    Instance,
    class_of,
    homology_at,
    solution_module,
    zero_sum_complex,
)

__all__ = [
    "Check",
    "VerifyReport",
    "catalog_names",
    "example_instance",
    "verify_example",
    "DEFAULT_N",
]

DEFAULT_N = {
    "affine": 4,
    "shkredov": 3,
    "square-diag": 2,
    "almost-lin-ind-3": 2,
    "floor3": 2,
    "product-extra": 2,
    "conze-lesigne": 2,
    "zero-sum-li": 2,
}

_ALIASES = {"not-shkredov": "square-diag"}


@dataclass
class Check:
    label: str
    expected: str
    computed: str

    @property
    def ok(self) -> bool:
        return self.expected == self.computed

    def describe(self) -> str:
        mark = "ok  " if self.ok else "FAIL"
        return f"  [{mark}] {self.label}: expected {self.expected}, computed {self.computed}"


@dataclass
class VerifyReport:
    example: str
    n: int
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def describe(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'}  {self.example} (N = {self.n}, {self.seconds:.2f}s)"
        return "\n".join([head] + [c.describe() for c in self.checks])

    def to_json(self) -> dict:
        return {
            "example": self.example,
            "N": self.n,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [
                {"label": c.label, "expected": c.expected, "computed": c.computed, "ok": c.ok}
                for c in self.checks
            ],
        }


def _cyclic_name(n: int) -> str:
    return "0" if n == 1 else f"Z/{n}"


# ---------------------------------------------------------------------------
# instance builders
# ---------------------------------------------------------------------------


def _affine_instance(n: int) -> Instance:
    group = FiniteGroup([n])
    full = group.full_subgroup()
    return Instance(group, [full, full], Torus())


def _shkredov_instance(n: int) -> Instance:
    group = FiniteGroup([n, n])
    return Instance(
        group, [group.subgroup([(1, 0)]), group.subgroup([(0, 1)])], Torus()
    )


def _square_diag_instance(n: int) -> Instance:
    group = FiniteGroup([n, n])
    subs = [group.subgroup([g]) for g in [(1, 0), (0, 1), (1, 1)]]
    return Instance(group, subs, Torus())


def _almost_lin_ind_3_instance(n: int) -> Instance:
    group = FiniteGroup([n, n, n])
    subs = [group.subgroup([g]) for g in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]]
    return Instance(group, subs, Torus())


def _floor3_instance(n: int) -> Instance:
    group = FiniteGroup([n, n, n])
    subs = [
        group.subgroup([(0, 1, 0), (0, 0, 1)]),
        group.subgroup([(1, 0, 0), (0, 0, 1)]),
        group.subgroup([(1, 0, 0), (0, 1, 0)]),
        group.subgroup([(1, -1, 0), (0, 1, -1)]),
    ]
    return Instance(group, subs, Int())


def _product_extra_instance(n: int) -> Instance:
    group = FiniteGroup([n, n, n])
    subs = [group.subgroup([g]) for g in [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)]]
    return Instance(group, subs, Torus())


def _conze_lesigne_instance(n: int) -> Instance:
    group = FiniteGroup([n, n, n, n])
    v = group.subgroup([(1, 0, 0, 0), (0, 1, 0, 0)])
    w = group.subgroup([(0, 0, 1, 0), (0, 0, 0, 1)])
    return Instance(group, [v, v, w, w], Torus())


def _zero_sum_li_instance(n: int) -> Instance:
    group = FiniteGroup([n, n, n])
    subs = [group.subgroup([g]) for g in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]]
    return Instance(group, subs, Torus())


_BUILDERS: dict[str, Callable[[int], Instance]] = {
    "affine": _affine_instance,
    "shkredov": _shkredov_instance,
    "square-diag": _square_diag_instance,
    "almost-lin-ind-3": _almost_lin_ind_3_instance,
    "floor3": _floor3_instance,
    "product-extra": _product_extra_instance,
    "conze-lesigne": _conze_lesigne_instance,
    "zero-sum-li": _zero_sum_li_instance,
}


def catalog_names() -> list[str]:
    return sorted(_BUILDERS) + sorted(_ALIASES)


def _resolve(name: str) -> str:
    key = _ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise UnknownExample(
            f"unknown example {name!r}; choose from {', '.join(catalog_names())}",
            field="example",
        )
    return key


def example_instance(name: str, n: int | None = None) -> Instance:
    """The catalog instance for a name (with its default target)."""
    key = _resolve(name)
    return _BUILDERS[key](int(n) if n is not None else DEFAULT_N[key])


# ---------------------------------------------------------------------------
# the example-specific functions
# ---------------------------------------------------------------------------


def square_diag_floor(n: int) -> FunctionVector:
    """The integer-valued carry function floor((x + (-y mod N)) / N) on (Z/N)^2.

    Scaled by N it equals x + (-y mod N) - (x - y mod N), a sum of three
    terms each invariant under one of the axis/diagonal directions, so it
    solves the three-direction system exactly over the integers.
    """
    group = FiniteGroup([n, n])
    return FunctionVector.from_callable(
        group, Int(), lambda z: (z[0] + (-z[1]) % n) // n
    )


def floor3_function(n: int) -> FunctionVector:
    """The integer carry floor((x + y + z) / N) of three digits on (Z/N)^3."""
    group = FiniteGroup([n, n, n])
    return FunctionVector.from_callable(
        group, Int(), lambda z: (z[0] + z[1] + z[2]) // n
    )


def _cl_sigma(s: tuple[int, int], x: tuple[int, int], n: int) -> Fraction:
    """Skew-rotation phase on the (1/N)-grid: {s1}{x2} - floor({x2}+{s2}) {x1+s1}."""
    s1, s2 = s[0] % n, s[1] % n
    x1, x2 = x[0] % n, x[1] % n
    carry = (x2 + s2) // n
    return (Fraction(s1 * x2, n * n) - carry * Fraction((x1 + s1) % n, n)) % 1


def _cl_commutator(s: tuple[int, int], t: tuple[int, int], n: int) -> Fraction:
    """Central commutator phase {s1}{t2} - {t1}{s2} on the (1/N)-grid."""
    return Fraction((s[0] % n) * (t[1] % n) - (t[0] % n) * (s[1] % n), n * n) % 1


def conze_lesigne_function(n: int) -> FunctionVector:
    """The commutator phase as a circle-valued function on (Z/N)^4 = {(s, t)}."""
    group = FiniteGroup([n, n, n, n])
    return FunctionVector.from_callable(
        group, Torus(), lambda z: _cl_commutator((z[0], z[1]), (z[2], z[3]), n)
    )


# ---------------------------------------------------------------------------
# per-example verification
# ---------------------------------------------------------------------------


def _verify_affine(n: int) -> list[Check]:
    inst = _affine_instance(n)
    module = solution_module(inst, (0, 1))
    expected = "Z" if n == 1 else f"Z/{n} + Z"
    checks = [
        Check("character group of the solution module", expected, module.presented.describe())
    ]
    group = inst.group
    sample = FunctionVector.from_callable(
        group, Torus(), lambda z: (Fraction(1, 3) + Fraction(z[0], n)) % 1
    )
    checks.append(
        Check("a + cz is a solution", "True", str(module.contains(sample)))
    )
    if n >= 2:
        spike_vals = [Fraction(0)] * n
        spike_vals[0] = Fraction(1, 3)
        spike = FunctionVector(group, Torus(), spike_vals)
        checks.append(
            Check("1/3-spike is not a solution", "False", str(module.contains(spike)))
        )
    return checks


def _verify_shkredov(n: int) -> list[Check]:
    inst = _shkredov_instance(n)
    checks = []
    for target in (Int(), Mod(n), Rational(), Torus()):
        h = homology_at(inst.with_target(target), (0, 1), 2)
        checks.append(
            Check(
                f"top homology trivial, target {target.describe()}",
                "True",
                str(h.is_trivial),
            )
        )
    return checks


def _verify_square_diag(n: int) -> list[Check]:
    inst = _square_diag_instance(n)
    full = inst.full_label()
    h_torus = homology_at(inst, full, 3)
    checks = [
        Check("circle target: all solutions degenerate", "True", str(h_torus.is_trivial)),
    ]
    int_inst = inst.with_target(Int())
    h_int = homology_at(int_inst, full, 3)
    checks.append(
        Check("integer target: quotient by degenerate", _cyclic_name(n), h_int.group.describe())
    )
    h_mod = homology_at(inst.with_target(Mod(n)), full, 3)
    checks.append(
        Check(f"mod-{n} target: quotient by degenerate", _cyclic_name(n), h_mod.group.describe())
    )
    floor = square_diag_floor(n)
    module = solution_module(int_inst, full)
    checks.append(Check("carry function solves the system", "True", str(module.contains(floor))))
    identity_holds = all(
        n * floor.at(z) == z[0] + (-z[1]) % n - ((z[0] - z[1]) % n)
        for z in inst.group.elements()
    )
    checks.append(
        Check("N * carry = x + (-y mod N) - (x-y mod N)", "True", str(identity_holds))
    )
    if n >= 2:
        cls = class_of(int_inst, floor)
        checks.append(Check("carry class nonzero", "True", str(not cls.is_zero)))
    return checks


def _verify_almost_lin_ind_3(n: int) -> list[Check]:
    inst = _almost_lin_ind_3_instance(n)
    full = inst.full_label()
    h = homology_at(inst, full, 4)
    checks = [
        Check(
            "circle target: quotient by degenerate",
            "0" if n == 1 else _cyclic_name(n),
            h.group.describe(),
        )
    ]
    h_int = homology_at(inst.with_target(Int()), full, 4)
    checks.append(
        Check("integer target: all solutions degenerate", "True", str(h_int.is_trivial))
    )
    return checks


def _verify_floor3(n: int) -> list[Check]:
    inst = _floor3_instance(n)
    floor = floor3_function(n)
    module = solution_module(inst, inst.full_label())
    checks = [
        Check("carry function solves the system", "True", str(module.contains(floor)))
    ]
    identity_holds = all(
        n * floor.at(z) == z[0] + z[1] + z[2] - ((z[0] + z[1] + z[2]) % n)
        for z in inst.group.elements()
    )
    checks.append(
        Check("N * carry = x + y + z - (x+y+z mod N)", "True", str(identity_holds))
    )
    return checks


def _verify_product_extra(n: int) -> list[Check]:
    inst = _product_extra_instance(n)
    full = inst.full_label()
    checks = []
    for target in (Int(), Mod(n), Rational(), Torus()):
        h = homology_at(inst.with_target(target), full, 4)
        checks.append(
            Check(
                f"all solutions degenerate, target {target.describe()}",
                "True",
                str(h.is_trivial),
            )
        )
    return checks


def _verify_conze_lesigne(n: int) -> list[Check]:
    inst = _conze_lesigne_instance(n)
    grid = [(a, b) for a in range(n) for b in range(n)]
    identity_holds = all(
        (
            _cl_sigma(t, x, n)
            + _cl_sigma(s, ((x[0] + t[0]) % n, (x[1] + t[1]) % n), n)
            - _cl_sigma(s, x, n)
            - _cl_sigma(t, ((x[0] + s[0]) % n, (x[1] + s[1]) % n), n)
            - _cl_commutator(s, t, n)
        ) % 1
        == 0
        for s in grid
        for t in grid
        for x in grid
    )
    checks = [Check("commutation identity exact on the (1/N)-grid", "True", str(identity_holds))]
    c = conze_lesigne_function(n)
    module = solution_module(inst, inst.full_label())
    checks.append(Check("commutator phase solves the system", "True", str(module.contains(c))))
    cls = class_of(inst, c)
    checks.append(Check("commutator class nonzero", "True", str(not cls.is_zero)))
    return checks


def _verify_zero_sum_li(n: int) -> list[Check]:
    inst = _zero_sum_li_instance(n)
    checks = []
    for target in (Int(), Mod(n), Rational(), Torus()):
        cx = zero_sum_complex(inst.with_target(target))
        for position in (0, 1, 3):
            h = cx.homology_at(position)
            checks.append(
                Check(
                    f"zero-sum homology trivial at {position}, target {target.describe()}",
                    "True",
                    str(h.is_trivial),
                )
            )
    return checks


_VERIFIERS: dict[str, Callable[[int], list[Check]]] = {
    "affine": _verify_affine,
    "shkredov": _verify_shkredov,
    "square-diag": _verify_square_diag,
    "almost-lin-ind-3": _verify_almost_lin_ind_3,
    "floor3": _verify_floor3,
    "product-extra": _verify_product_extra,
    "conze-lesigne": _verify_conze_lesigne,
    "zero-sum-li": _verify_zero_sum_li,
}


def verify_example(name: str, n: int | None = None) -> VerifyReport:
    """Build the named example and run its documented checks."""
    key = _resolve(name)
    n = int(n) if n is not None else DEFAULT_N[key]
    if n < 1:
        raise UnknownExample("N must be a positive integer", field="N")
    start = time.perf_counter()
    checks = _VERIFIERS[key](n)
    return VerifyReport(key, n, checks, time.perf_counter() - start)
