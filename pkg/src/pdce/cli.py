"""Command line interface.

Every subcommand reads an instance file (JSON, ``format: 1``), prints a
human-readable summary to stdout, and optionally writes a JSON report
with ``-o``.  Exact rational quantities appear as ``"p/q"`` strings in
reports; floating-point norms are printed with twelve digits.

Exit codes: 0 on success, 1 when a well-formed request is refused on
mathematical grounds (not a solution, wrong value target, ambiguous
rounding, a failed verification), 2 for malformed input or a computation
exceeding its budget.
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .catalog import catalog_names, verify_example
from .cohomology import CoefModule, cohomology_bar, cohomology_cyclic
from .errors import DomainError, InputError, ParseError
from .funcspace import FunctionVector, closeness
from .gowers import (
    ComplexFunction,
    gowers_norm,
    repair as repair_function,
    residual as exact_residual,
    rounding_margin,
    stability_sweep,
)
from .groups import FiniteGroup, subgroup_sum
from .solutions import (
    Instance,
    class_of,
    degeneracy_witness,
    instance_from_json,
    instance_to_json,
    is_degenerate,
    normalize_instance,
    solution_module,
    structure_complex,
    zero_sum_complex,
)


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------


def _guard(fn):
    """Map library errors onto exit codes 1 (domain) and 2 (input)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except InputError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _load_raw(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read instance file: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("instance must be a JSON object")
    return obj


def _load_instance(path: Path) -> Instance:
    return instance_from_json(_load_raw(path))


def _parse_label(raw: str | None, inst: Instance) -> tuple[int, ...]:
    """Direction subset from a 1-based comma list; defaults to all of them."""
    if raw is None:
        return inst.full_label()
    picked: list[int] = []
    for tok in raw.split(","):
        tok = tok.strip()
        try:
            i = int(tok)
        except ValueError:
            raise ParseError(f"not an integer: {tok!r}", field="e") from None
        if not 1 <= i <= inst.k:
            raise ParseError(
                f"direction {i} out of range 1..{inst.k}", field="e"
            )
        picked.append(i - 1)
    if len(set(picked)) != len(picked):
        raise ParseError("directions must be distinct", field="e")
    return tuple(sorted(picked))


def _show_label(label: tuple[int, ...]) -> list[int]:
    return [i + 1 for i in label]


def _coset_count(inst: Instance) -> int:
    return inst.group.order // subgroup_sum(inst.subgroups).order


def _normalization(inst: Instance) -> tuple[dict, list[str]]:
    """Report fragment and text note when the directions span a proper subgroup."""
    if inst.spans_group():
        return {"spans_group": True}, []
    c = _coset_count(inst)
    note = (
        f"note: the directions span an index-{c} subgroup; "
        f"everything splits over {c} cosets"
    )
    return {"spans_group": False, "coset_count": c}, [note]


def _instance_payload(inst: Instance) -> dict:
    full = instance_to_json(inst)
    return {
        "group": full["group"],
        "subgroups": full["subgroups"],
        "target": full["target"],
    }


def _emit(command: str, inst: Instance | None, result: dict,
          lines: list[str], out_path: Path | None) -> None:
    click.echo("\n".join(lines))
    if out_path is None:
        return
    payload: dict = {"command": command}
    if inst is not None:
        payload["instance"] = _instance_payload(inst)
        norm, _ = _normalization(inst)
        payload["normalization"] = norm
    payload["result"] = result
    out_path.write_text(json.dumps(payload, indent=2) + "\n")
    click.echo(f"report written to {out_path}")


def _module_payload(mod) -> dict:
    out: dict = {
        "description": mod.describe(),
        "ambient_dim": mod.ambient_dim,
        "slots": mod.slots,
    }
    if mod.target.kind == "rational":
        out["dim"] = mod.dim
    else:
        abstract = mod.abstract()
        out["invariant_factors"] = list(abstract.invariant_factors)
        out["free_rank"] = abstract.free_rank
        out["dual"] = abstract.is_dual
        order = abstract.order()
        if order is not None:
            out["order"] = order
    if mod.gens is not None:
        out["generator_count"] = int(mod.gens.shape[1])
    if mod.ann_rows is not None:
        out["constraint_rows"] = int(mod.ann_rows.shape[0])
    return out


def _named_functions(inst: Instance) -> dict[str, FunctionVector]:
    if not inst.functions:
        raise ParseError("instance has no functions", field="functions")
    return inst.functions


def _json_number(v):
    return v if isinstance(v, int) else str(v)


_instance_opt = click.option(
    "-i", "--instance", "instance_path", required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Instance JSON file.",
)
_out_opt = click.option(
    "-o", "--out", "out_path", default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write a JSON report to this path.",
)
_e_opt = click.option(
    "--e", "e_raw", default=None, metavar="LIST",
    help="Direction subset as a 1-based comma list, e.g. '1,3' (default: all).",
)
_budget_opt = click.option(
    "--budget", type=int, default=None,
    help="Override the size budget (also settable via PDCE_BUDGET).",
)


@click.group()
@click.version_option(package_name="pdce")
def main() -> None:
    """Exact solvers for systems of difference equations on finite abelian groups."""


# ---------------------------------------------------------------------------
# solve / homology / zerosum
# ---------------------------------------------------------------------------


@main.command()
@_instance_opt
@_e_opt
@_out_opt
@_guard
def solve(instance_path: Path, e_raw: str | None, out_path: Path | None) -> None:
    """Compute the exact solution module for one direction subset."""
    inst = _load_instance(instance_path)
    label = _parse_label(e_raw, inst)
    mod = solution_module(inst, label)
    _, notes = _normalization(inst)
    lines = [inst.describe(), *notes,
             f"solution module for directions {_show_label(label)}: {mod.describe()}"]
    if mod.target.kind != "rational" and mod.abstract().order() is not None:
        lines.append(f"module order: {mod.abstract().order()}")
    result = {"e": _show_label(label), "module": _module_payload(mod)}
    _emit("solve", inst, result, lines, out_path)


def _homology_command(kind: str, instance_path: Path, e_raw: str | None,
                      ell: int | None, out_path: Path | None) -> None:
    inst = _load_instance(instance_path)
    label = _parse_label(e_raw, inst)
    if ell is not None and not 0 <= ell <= len(label):
        raise ParseError(f"position must lie in 0..{len(label)}", field="ell")
    build = structure_complex if kind == "solution" else zero_sum_complex
    cx = build(inst, e=label)
    positions = [ell] if ell is not None else list(range(len(label) + 1))
    _, notes = _normalization(inst)
    lines = [inst.describe(), *notes,
             f"{kind} complex on directions {_show_label(label)}:"]
    rows = []
    for pos in positions:
        rep = cx.homology_at(pos)
        lines.append(f"  H at position {pos}: {rep.describe()}")
        row = {
            "position": pos,
            "homology": rep.describe(),
            "trivial": rep.is_trivial,
        }
        if rep.group is not None:
            row["invariant_factors"] = list(rep.group.invariant_factors)
            row["dual"] = rep.group.is_dual
        else:
            row["dim"] = rep.dim
        rows.append(row)
    result = {"e": _show_label(label), "kind": kind, "homology": rows}
    _emit(kind if kind == "homology" else "zerosum", inst, result, lines, out_path)


@main.command()
@_instance_opt
@_e_opt
@click.option("--ell", type=int, default=None,
              help="Single complex position (default: every position).")
@_out_opt
@_guard
def homology(instance_path: Path, e_raw: str | None, ell: int | None,
             out_path: Path | None) -> None:
    """Homology of the solution structure complex."""
    _homology_command("solution", instance_path, e_raw, ell, out_path)


@main.command()
@_instance_opt
@_e_opt
@click.option("--ell", type=int, default=None,
              help="Single complex position (default: every position).")
@_out_opt
@_guard
def zerosum(instance_path: Path, e_raw: str | None, ell: int | None,
            out_path: Path | None) -> None:
    """Homology of the zero-sum structure complex."""
    _homology_command("zero-sum", instance_path, e_raw, ell, out_path)


# ---------------------------------------------------------------------------
# decompose / class
# ---------------------------------------------------------------------------


@main.command()
@_instance_opt
@_out_opt
@_guard
def decompose(instance_path: Path, out_path: Path | None) -> None:
    """Test each function for degeneracy and produce a sum decomposition."""
    inst = _load_instance(instance_path)
    _, notes = _normalization(inst)
    lines = [inst.describe(), *notes]
    result: dict = {"functions": {}}
    for name, f in _named_functions(inst).items():
        degenerate = is_degenerate(inst, f)
        witness = degeneracy_witness(inst, f) if degenerate else None
        if witness is None:
            lines.append(f"{name}: not degenerate")
        else:
            lines.append(
                f"{name}: degenerate; decomposed into {len(witness)} "
                "invariant summands"
            )
        result["functions"][name] = {
            "degenerate": degenerate,
            "witness": [w.render_values() for w in witness] if witness else None,
        }
    _emit("decompose", inst, result, lines, out_path)


@main.command("class")
@_instance_opt
@_out_opt
@_guard
def class_command(instance_path: Path, out_path: Path | None) -> None:
    """Locate each function in the quotient modulo degenerate solutions."""
    inst = _load_instance(instance_path)
    _, notes = _normalization(inst)
    lines = [inst.describe(), *notes]
    result: dict = {"functions": {}}
    for name, f in _named_functions(inst).items():
        cls = class_of(inst, f)
        lines.append(f"{name}: {cls.describe()}"
                     + ("  (degenerate)" if cls.is_zero else "  (nonzero class)"))
        quotient = (
            cls.quotient.describe() if cls.quotient is not None else f"Q^{cls.dim}"
        )
        result["functions"][name] = {
            "quotient": quotient,
            "coords": [_json_number(c) for c in cls.coords],
            "zero": cls.is_zero,
        }
    _emit("class", inst, result, lines, out_path)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------


@main.command()
@_instance_opt
@click.option("--p", required=True, type=int, help="Cohomological degree.")
@_budget_opt
@_out_opt
@_guard
def cohomology(instance_path: Path, p: int, budget: int | None,
               out_path: Path | None) -> None:
    """Group cohomology of a finite abelian group with the given coefficients.

    The instance file needs a "cohomology" section (top level, or inside
    "params") holding "group" (a list of cyclic orders) and "coefficient"
    (kind "int", "mod" with "m", or "torus", with optional "rank" and
    "actions", one integer matrix per cyclic factor of the group).
    """
    raw = _load_raw(instance_path)
    section = raw.get("cohomology")
    if section is None and isinstance(raw.get("params"), dict):
        section = raw["params"].get("cohomology")
    if section is None:
        raise ParseError("missing 'cohomology' section", field="cohomology")
    if not isinstance(section, dict):
        raise ParseError("cohomology section must be an object", field="cohomology")
    orders = section.get("group")
    if (
        not isinstance(orders, list)
        or not orders
        or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1
                   for n in orders)
    ):
        raise ParseError(
            "group must be a nonempty list of positive integers",
            field="cohomology.group",
        )
    group = FiniteGroup(orders)
    coef = CoefModule.from_json(group, section.get("coefficient"),
                                field="cohomology.coefficient")
    if p < 0:
        raise ParseError("degree must be nonnegative", field="p")
    bar = cohomology_bar(coef, p, budget=budget)
    lines = [f"group {group.describe()}, coefficients {coef.describe()}",
             f"H^{p} = {bar.describe()}"]
    result: dict = {
        "p": p,
        "group": list(group.orders),
        "coefficient": coef.describe(),
        "cohomology": bar.describe(),
        "invariant_factors": list(bar.invariant_factors),
        "free_rank": bar.free_rank,
        "dual": bar.is_dual,
    }
    if group.rank == 1:
        cyc = cohomology_cyclic(coef, p)
        agree = (
            cyc.invariant_factors == bar.invariant_factors
            and cyc.is_dual == bar.is_dual
        )
        lines.append(
            f"cyclic closed form: {cyc.describe()}"
            + (" (agrees)" if agree else " (DISAGREES)")
        )
        result["cyclic"] = cyc.describe()
        result["cyclic_agrees"] = agree
    _emit("cohomology", None, result, lines, out_path)


# ---------------------------------------------------------------------------
# gowers / repair / sweep
# ---------------------------------------------------------------------------


@main.command()
@_instance_opt
@_budget_opt
@_out_opt
@_guard
def gowers(instance_path: Path, budget: int | None, out_path: Path | None) -> None:
    """Directional uniformity norm (and exact residual) of each function."""
    inst = _load_instance(instance_path)
    _, notes = _normalization(inst)
    lines = [inst.describe(), *notes]
    result: dict = {"functions": {}}
    for name, f in _named_functions(inst).items():
        cf = ComplexFunction.from_torus(f)
        norm = gowers_norm(cf, inst.subgroups)
        entry: dict = {"norm": f"{norm:.12f}"}
        lines.append(f"{name}: directional norm = {norm:.12f}")
        if inst.target.kind == "torus":
            res = exact_residual(f, inst.subgroups, budget=budget)
            entry["residual"] = str(res)
            lines.append(f"{name}: exact residual = {res}")
        result["functions"][name] = entry
    _emit("gowers", inst, result, lines, out_path)


@main.command()
@_instance_opt
@_out_opt
@_guard
def repair(instance_path: Path, out_path: Path | None) -> None:
    """Round each circle-valued function onto the exact solution module."""
    inst = _load_instance(instance_path)
    norm = normalize_instance(inst)
    work = norm.reduced if norm.changed else inst
    margin = rounding_margin(work)
    _, notes = _normalization(inst)
    lines = [inst.describe(), *notes]
    lines.append(
        f"rounding margin: {margin}" if margin is not None
        else "rounding margin: none (no active constraints)"
    )
    full_module = solution_module(inst, inst.full_label())
    result: dict = {
        "margin": str(margin) if margin is not None else None,
        "functions": {},
    }
    for name, f in _named_functions(inst).items():
        if norm.changed:
            parts = [repair_function(p, work) for p in norm.split_function(f)]
            g = norm.merge_function(parts)
        else:
            g = repair_function(f, inst)
        dist = closeness(f, g)
        member = full_module.contains(g)
        lines.append(f"{name}: moved d0 = {dist}; member = {member}")
        result["functions"][name] = {
            "repaired": g.render_values(),
            "distance": str(dist),
            "member": member,
        }
    _emit("repair", inst, result, lines, out_path)


@main.command()
@_instance_opt
@click.option("--delta-grid", "grid_raw", default="0,1/1000,1/100,1/10",
              metavar="LIST", show_default=True,
              help="Comma list of perturbation sizes (rationals).")
@click.option("--samples", type=int, default=10, show_default=True,
              help="Samples per grid value.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Random seed.")
@_out_opt
@_guard
def sweep(instance_path: Path, grid_raw: str, samples: int, seed: int,
          out_path: Path | None) -> None:
    """Perturb exact solutions and chart residual against repair distance.

    Emits CSV (columns delta, sample, residual, repair_d0, success); with
    -o the CSV goes to the file and a summary is printed instead.
    """
    inst = _load_instance(instance_path)
    grid: list[Fraction] = []
    for idx, tok in enumerate(grid_raw.split(",")):
        try:
            grid.append(Fraction(tok.strip()))
        except (ValueError, ZeroDivisionError):
            raise ParseError(
                f"not a rational number: {tok.strip()!r}",
                field=f"delta-grid[{idx}]",
            ) from None
    if samples < 1:
        raise ParseError("need at least one sample", field="samples")
    norm = normalize_instance(inst)
    work = norm.reduced if norm.changed else inst
    _, notes = _normalization(inst)
    for note in notes:
        click.echo(note, err=True)
    report = stability_sweep(work, grid, samples, seed)
    csv_text = report.to_csv()
    if out_path is None:
        click.echo(csv_text, nl=False)
        return
    out_path.write_text(csv_text)
    lines = [work.describe(),
             f"margin: {report.margin}" if report.margin is not None
             else "margin: none (no active constraints)"]
    for delta in sorted({row.delta for row in report.rows}):
        hits = [row for row in report.rows if row.delta == delta]
        good = sum(1 for row in hits if row.success)
        lines.append(f"delta = {delta}: {good}/{len(hits)} repairs within 2*delta")
    lines.append(f"CSV written to {out_path}")
    click.echo("\n".join(lines))


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@main.command()
@click.argument("name", required=False)
@click.option("--N", "n", type=int, default=None,
              help="Cyclic order for the construction (each example has a default).")
@_out_opt
@_guard
def verify(name: str | None, n: int | None, out_path: Path | None) -> None:
    """Check one worked example end to end (omit NAME to list them)."""
    if name is None:
        click.echo("\n".join(catalog_names()))
        return
    report = verify_example(name, n)
    click.echo(report.describe())
    if out_path is not None:
        out_path.write_text(json.dumps(report.to_json(), indent=2) + "\n")
        click.echo(f"report written to {out_path}")
    if not report.passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
