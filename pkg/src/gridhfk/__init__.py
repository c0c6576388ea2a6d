"""Knot Floer homology of knots in the 3-sphere from grid diagrams.

Typical use::

    from gridhfk import torus_grid, hfk_hat, e2_page
    g = torus_grid(2, 3)
    print(hfk_hat(g))          # t^{-1}+q+q^2t
    print(e2_page(g).tau())    # TauResult(value=-1, reason=None)
"""

from .filtered import GradingError, Mode, build_graded_complexes, enumerate_generators
from .grid import (
    GridDiagram,
    GridError,
    load_grid,
    mirror_grid,
    parse_grid,
    serialize_grid,
    torus_grid,
    unknot_grid,
    validate,
    winding_table,
)
from .homology import StripError, associated_graded_poly, hfk_hat, reduce, strip_s_factor
from .moves import IllegalMove, Move, apply_move, legal_moves, simplify
from .poly import BigradedPoly, format_poly, parse_poly
from .spectral import SpectralPages, TauResult, e2_page, symmetry_complete, tau

__all__ = [
    "BigradedPoly",
    "GradingError",
    "GridDiagram",
    "GridError",
    "IllegalMove",
    "Mode",
    "Move",
    "SpectralPages",
    "StripError",
    "TauResult",
    "apply_move",
    "associated_graded_poly",
    "build_graded_complexes",
    "e2_page",
    "enumerate_generators",
    "format_poly",
    "hfk_hat",
    "legal_moves",
    "load_grid",
    "mirror_grid",
    "parse_grid",
    "parse_poly",
    "reduce",
    "serialize_grid",
    "simplify",
    "strip_s_factor",
    "symmetry_complete",
    "tau",
    "torus_grid",
    "unknot_grid",
    "validate",
    "winding_table",
]
