"""Exact Kazhdan-Lusztig polynomial workbench for Weyl groups.

Computes R- and P-polynomials by several independent routes (Hecke algebra
inversion, the defining recursions, Deodhar cell point counting, and a
nested-truncation chain formula) and cross-validates them against each
other.  Everything is exact integer arithmetic; nothing is floating point.
"""

from .coxeter import (
    CartanDatum,
    Element,
    GroupTooLarge,
    NonFiniteType,
    Root,
    WeylGroup,
    weyl_group,
)
from .deodhar import CellDescriptor, CellShape, NotReduced, Subexpression
from .hecke import HeckeAlgebra, HeckeElt, NonPolynomialR
from .klcore import (
    IntervalTooLarge,
    KLEngine,
    NegativeCoefficient,
    NotComparable,
    PolyTable,
    ValidationFailure,
    cross_validate,
)
from .laurent import HalfLaurent, NonIntegralExponent

__version__ = "0.1.0"

__all__ = [
    "CartanDatum",
    "CellDescriptor",
    "CellShape",
    "Element",
    "GroupTooLarge",
    "HalfLaurent",
    "HeckeAlgebra",
    "HeckeElt",
    "IntervalTooLarge",
    "KLEngine",
    "NegativeCoefficient",
    "NonFiniteType",
    "NonIntegralExponent",
    "NonPolynomialR",
    "NotComparable",
    "NotReduced",
    "PolyTable",
    "Root",
    "Subexpression",
    "ValidationFailure",
    "WeylGroup",
    "cross_validate",
    "weyl_group",
    "__version__",
]
