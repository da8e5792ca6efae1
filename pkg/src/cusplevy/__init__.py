"""Numerical laboratory for superdiffusive billiards with a cusp at a flat point.

Subpackages cover the totally skewed alpha-stable toolkit, cadlag step paths
with the J1/M1/M2 Skorokhod distances, the dispersing-billiard collision map
and its first-return structure, observables with cusp integral profiles and
excursion diagnostics, intermittent interval maps, and a configuration-driven
experiment runner.
"""

from .backend import BACKEND, HAVE_COMPILED

__version__ = "0.1.0"

__all__ = ["BACKEND", "HAVE_COMPILED", "__version__"]
