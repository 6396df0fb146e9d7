"""Exact computation for partial difference equations on finite abelian groups.

The package provides integer-exact Smith/Hermite linear algebra, finitely
generated abelian groups and their homomorphisms, solution modules of
systems of difference equations, structure complexes with homology,
degeneracy tests and obstruction classes, group cohomology, directional
uniformity norms, and constraint-rounding repair of near-solutions, plus
the ``pdce`` command line front end.
"""

from ._kernels import COMPILED_AVAILABLE
from .abelian import PresentedGroup, SnfResult, snf
from .catalog import catalog_names, example_instance, verify_example
from .cohomology import CoefModule, cohomology_bar, cohomology_cyclic
from .funcspace import (
    FunctionVector,
    Int,
    Mod,
    Rational,
    Torus,
    closeness,
)
from .gowers import (
    ComplexFunction,
    gowers_norm,
    repair,
    residual,
    rounding_margin,
    sample_exact_solution,
    stability_sweep,
)
from .groups import FiniteGroup, Subgroup, is_linearly_independent, subgroup_sum
from .solutions import (
    Instance,
    class_of,
    degeneracy_witness,
    homology_at,
    instance_from_json,
    instance_to_json,
    is_degenerate,
    normalize_instance,
    rational_exactness,
    solution_module,
    structure_complex,
    zero_sum_complex,
    zero_sum_module,
)

__version__ = "0.1.0"

__all__ = [
    "COMPILED_AVAILABLE",
    "CoefModule",
    "ComplexFunction",
    "FiniteGroup",
    "FunctionVector",
    "Instance",
    "Int",
    "Mod",
    "PresentedGroup",
    "Rational",
    "SnfResult",
    "Subgroup",
    "Torus",
    "__version__",
    "catalog_names",
    "class_of",
    "closeness",
    "cohomology_bar",
    "cohomology_cyclic",
    "degeneracy_witness",
    "example_instance",
    "gowers_norm",
    "homology_at",
    "instance_from_json",
    "instance_to_json",
    "is_degenerate",
    "is_linearly_independent",
    "normalize_instance",
    "rational_exactness",
    "repair",
    "residual",
    "rounding_margin",
    "sample_exact_solution",
    "snf",
    "solution_module",
    "stability_sweep",
    "structure_complex",
    "subgroup_sum",
    "verify_example",
    "zero_sum_complex",
    "zero_sum_module",
]
