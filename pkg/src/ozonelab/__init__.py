"""Exact symbolic computation for finitely presented connected graded algebras.

The package computes graded bases by truncated rewriting completion, centers
and normal elements degree by degree, ozone groups by a sandwich of certified
lower and exhaustive upper bounds, fixed rings with Molien cross-checks,
smash-product centers with a dual-route consistency check, and ranks from
Hilbert series, all over cyclotomic fields with exact arithmetic.
"""

__version__ = "0.1.0"

from .cyclo import CycNum, parse_scalar, root_order, scalar_to_str, zeta

__all__ = [
    "CycNum",
    "parse_scalar",
    "root_order",
    "scalar_to_str",
    "zeta",
    "__version__",
]
