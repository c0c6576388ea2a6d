"""E^1/E^2 pages of the knot filtration spectral sequence and tau.

``d1`` out of Alexander grading ``a`` is the connecting map of
``0 -> C^{a-1}/C^{a-2} -> C^a/C^{a-2} -> C^a/C^{a-1} -> 0``.  Its rank is
read off by adjoining to the piece ``a - 1`` one new generator per homology
class of piece ``a``, with boundary equal to the part of that class's full
boundary lying in grading ``a - 1``, and measuring how homology drops.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .filtered import GradingError, boundary_with_drops, build_grid_complex
from .grid import mirror_grid
from .homology import (
    ReductionGraph,
    StripError,
    boundary_rows,
    dims_by_maslov,
    gf2_rank,
    piece_poly,
    reduce,
    strip_s_factor,
)
from .poly import BigradedPoly, s_power

log = logging.getLogger(__name__)


def symmetry_complete(p):
    """Fill in negative Alexander gradings from ``(a, m) -> (-a, m - 2a)``."""
    out = {k: v for k, v in p.items() if k[0] >= 0}
    for (a, m), d in p.items():
        if a > 0:
            out[(-a, m - 2 * a)] = d
    for (a, m), d in p.items():
        if a < 0 and out.get((a, m)) != d:
            raise ValueError(
                f"term ({a}, {m}) = {d} conflicts with its reflection "
                f"{out.get((a, m), 0)}"
            )
    return BigradedPoly(out)


def shift(p, da, dm):
    return BigradedPoly(((a + da, m + dm), d) for (a, m), d in p.items())


# ---------------------------------------------------------------- d1 on the grid


def boundary_cycle(cx, classes_a, a):
    """Grading ``a - 1`` part of the full boundary of each class of piece ``a``.

    Returns one set of piece ``a - 1`` indices per class.
    """
    src = cx.pieces[a]
    dst = cx.pieces.get(a - 1)
    index = dst.index() if dst is not None else {}
    cycles = []
    for cls in classes_a:
        z = set()
        for k in cls.chain:
            for target, drop in boundary_with_drops(cx.grid, src.basis[k], cx.table):
                if drop == 1:
                    z ^= {index[target]}
        cycles.append(z)
    return cycles


def _augmented_dims(piece, cycles, gradings):
    """Homology of ``piece`` with a new generator killing each cycle."""
    base = len(piece)
    edges = [list(t) for t in piece.diff] + [sorted(z) for z in cycles]
    graph = ReductionGraph(edges, track_labels=False).run()
    dims = {}
    for v in graph.survivors():
        m = gradings[v - base] if v >= base else piece.maslov(v)
        dims[m] = dims.get(m, 0) + 1
    return dims


def connecting_ranks(h_before, h_after, added):
    """Ranks of ``delta: G_m -> H_{m-1}`` from the long exact sequence.

    ``H_m(B) = H_m(C) - r_{m+1} + N_m - r_m`` is solved from the top
    grading down.
    """
    if not added:
        return {}
    ranks = {}
    above = 0
    for m in range(max(added), min(added) - 1, -1):
        r = h_before.get(m, 0) - above + added.get(m, 0) - h_after.get(m, 0)
        if r < 0 or r > added.get(m, 0):
            raise GradingError(f"inconsistent connecting rank {r} at Maslov {m}")
        if r:
            ranks[m] = r
        above = r
    return ranks


@dataclass
class GridPages:
    """Unstripped ``E^1`` and ``d1`` data of one grid complex.

    ``d1[(a, m)]`` is the rank of ``d1`` out of bidegree ``(a, m)``; it is
    known for every ``a`` with ``a - 1 >= min_alexander``.
    """

    n: int
    min_alexander: int | None
    e1: BigradedPoly
    d1: BigradedPoly
    classes: dict = field(repr=False)


def grid_pages(g, min_alexander=None, complex_=None, check=False, threads=1):
    """Reduce every piece and compute all unstripped ``d1`` ranks."""
    cx = complex_ or build_grid_complex(g, min_alexander, check=check, threads=threads)
    classes = {a: reduce(p, check=check) for a, p in cx.pieces.items()}
    e1 = BigradedPoly()
    for a, cl in classes.items():
        e1 = e1 + piece_poly(a, dims_by_maslov(cl))
    d1 = {}
    for a in sorted(cx.pieces):
        if a - 1 not in cx.pieces or not classes[a]:
            continue
        cycles = boundary_cycle(cx, classes[a], a)
        gradings = [c.maslov for c in classes[a]]
        before = dims_by_maslov(classes[a - 1])
        after = _augmented_dims(cx.pieces[a - 1], cycles, gradings)
        added = {}
        for m in gradings:
            added[m] = added.get(m, 0) + 1
        for m, r in connecting_ranks(before, after, added).items():
            d1[(a, m)] = r
    return GridPages(g.n, cx.min_alexander, e1, BigradedPoly(d1), classes)


def d1_rank(g, alexander, maslov, complex_=None):
    """Rank of unstripped ``d1: E^1_(a, m) -> E^1_(a-1, m-1)`` on the grid complex."""
    pages = grid_pages(g, alexander - 1, complex_=complex_)
    return pages.d1.get((alexander, maslov), 0)


def d1_rank_gaussian(cx, a, m):
    """Oracle: rank of ``[z]`` in ``H_{m-1}`` via dense elimination.

    Computes ``rank(B + Z) - rank(B)`` with ``B`` the boundaries into Maslov
    ``m - 1`` of piece ``a - 1`` and ``Z`` the connecting cycles of piece
    ``a`` classes at Maslov ``m``.
    """
    src, dst = cx.pieces[a], cx.pieces[a - 1]
    classes = [c for c in reduce(src) if c.maslov == m]
    if not classes:
        return 0
    buckets = dst.by_maslov()
    members = buckets.get(m - 1, [])
    position = {k: i for i, k in enumerate(members)}
    rows = boundary_rows(dst, buckets).get(m, [])
    cycles = []
    for z in boundary_cycle(cx, classes, a):
        mask = 0
        for k in z:
            if k not in position:
                raise GradingError("connecting cycle leaves Maslov grading m - 1")
            mask ^= 1 << position[k]
        cycles.append(mask)
    return gf2_rank(rows + cycles) - gf2_rank(rows)


# ---------------------------------------------------------------- stripped pages


@dataclass
class TauResult:
    value: int | None
    reason: str | None = None

    @property
    def determinate(self):
        return self.value is not None

    def to_json(self):
        return {"value": self.value, "reason": self.reason}


@dataclass
class SpectralPages:
    """Stripped pages: ``e1`` = HFK, ``d1_ranks`` by source bidegree, ``e2``."""

    e1: BigradedPoly
    d1_ranks: BigradedPoly
    e2: BigradedPoly

    def tau(self):
        return tau_from_e2(self.e2)


def e2_from_ranks(e1, ranks):
    e2 = e1 - ranks - shift(ranks, -1, -1)
    bad = {k: v for k, v in e2.items() if v < 0}
    if bad:
        raise GradingError(f"negative E^2 dimensions {bad}")
    return e2


def stripped_ranks(pages):
    """Divide unstripped ``d1`` ranks by the S factor (top-down)."""
    lo = None if pages.min_alexander is None else pages.min_alexander + 1
    return strip_s_factor(pages.d1, pages.n, lo)


def spectral_pages_full(g, check=False, threads=1):
    """Pages from the full-range grid complex, with exact S-factor checks."""
    pages = grid_pages(g, None, check=check, threads=threads)
    e1 = strip_s_factor(pages.e1, g.n)
    ranks = stripped_ranks(pages)
    e2 = e2_from_ranks(e1, ranks)
    e2_unstripped = e2_from_ranks(pages.e1, pages.d1)
    if e2 * s_power(g.n - 1) != e2_unstripped:
        raise StripError(
            "unstripped E^2 is not E^2 times the S factor",
            residual=e2_unstripped - e2 * s_power(g.n - 1),
        )
    return SpectralPages(e1, ranks, e2)


def spectral_pages_nonneg(g, check=False, threads=1):
    """Pages from ``A >= 0`` pieces of the grid and of its mirror.

    ``d1`` out of gradings ``a >= 1`` comes from the grid.  The mirror's
    complex is dual to the knot's with gradings negated, so the rank out of
    ``(a, m)`` with ``a <= 0`` equals the mirror's rank out of
    ``(1 - a, 1 - m)``.
    """
    pages = grid_pages(g, 0, check=check, threads=threads)
    e1 = symmetry_complete(strip_s_factor(pages.e1, g.n, 0))
    expected = (e1 * s_power(g.n - 1)).restrict(0)
    if expected != pages.e1:
        raise StripError(
            "nonnegative E^1 is not the completed HFK times the S factor",
            residual=expected - pages.e1,
        )
    upper = stripped_ranks(pages)
    mirror_pages = grid_pages(mirror_grid(g), 0, check=check, threads=threads)
    lower = stripped_ranks(mirror_pages)
    ranks = dict(upper.items())
    for (a, m), r in lower.items():
        ranks[(1 - a, 1 - m)] = r
    ranks = BigradedPoly(ranks)
    e2 = e2_from_ranks(e1, ranks)
    e2_unstripped = e2_from_ranks(pages.e1, pages.d1).restrict(1)
    if (e2 * s_power(g.n - 1)).restrict(1) != e2_unstripped:
        raise StripError("unstripped E^2 is not E^2 times the S factor")
    return SpectralPages(e1, ranks, e2)


def e2_page(g, range_="nonneg", check=False, threads=1):
    """Stripped ``E^1``, ``d1`` ranks and ``E^2`` for ``range_`` 'nonneg' or 'full'."""
    if range_ == "full":
        return spectral_pages_full(g, check=check, threads=threads)
    if range_ == "nonneg":
        return spectral_pages_nonneg(g, check=check, threads=threads)
    raise ValueError(f"unknown range {range_!r}")


def tau_from_e2(e2):
    """tau from a stripped ``E^2`` page, without guessing higher differentials.

    A single Maslov-0 class in ``E^2`` must survive to ``E^infinity`` (the
    pages only ever shrink in each Maslov grading), so its Alexander grading
    is tau.  More than one leaves tau undetermined.
    """
    total = e2.total()
    if total % 2 != 1:
        raise GradingError(f"E^2 has even total dimension {total}")
    zero = [(a, d) for (a, m), d in e2.items() if m == 0]
    if not zero:
        raise GradingError(f"no Maslov-0 class in E^2 = {e2}")
    if len(zero) == 1 and zero[0][1] == 1:
        return TauResult(zero[0][0])
    return TauResult(
        None, f"higher differentials not forced: Maslov-0 part of E^2 is {zero}"
    )


def tau(g, range_="nonneg", threads=1):
    return e2_page(g, range_, threads=threads).tau()
