"""Exact-arithmetic engine for graded surface models.

Gentle and DG gentle presentations, Hochschild cohomology through the
reduced overlap complex with an independent bar-complex oracle, the
surface to algebra dictionary, weak duals, semi-universal deformation
families, and a finite curved A-infinity checker.
"""

from .errors import InputError, InternalInvariantError, ReductionDivergence, SurfalgError
from .quiver import Algebra, Arrow, Element, GradedQuiver, Path

__all__ = [
    "Algebra",
    "Arrow",
    "Element",
    "GradedQuiver",
    "InputError",
    "InternalInvariantError",
    "Path",
    "ReductionDivergence",
    "SurfalgError",
]
