"""Generators, gradings and the rectangle differential of the grid complex.

A generator is a permutation ``sigma`` (column -> row) identified with the
lattice points ``(c, sigma[c])``.  Permutations are plain tuples here; the
accelerated kernels in :mod:`gridhfk._kernels` work on Lehmer codes.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .grid import GridDiagram, winding_table

# above this grid size the numba kernels take over enumeration and boundaries
JIT_THRESHOLD = 8


class GradingError(ArithmeticError):
    """A grading came out non-integral or inconsistent; signals a bug."""


class Mode(enum.Enum):
    FULL = "full"      # filtered differential: rectangles may contain X
    GRADED = "graded"  # associated graded: rectangles avoid X as well


@dataclass(frozen=True)
class Generator:
    sigma: tuple
    alexander: int
    grid: GridDiagram = field(repr=False, compare=False)

    @cached_property
    def maslov(self):
        return maslov_grading(self.grid, self.sigma)


def alexander_grading(wt, sigma):
    """``A(sigma) = a - sum of winding numbers over the points of sigma``."""
    total = wt.a - sum(int(wt.w[c, r]) for c, r in enumerate(sigma))
    if total.denominator != 1:
        raise GradingError(f"non-integral Alexander grading {total} for {sigma}")
    return int(total)


# ---------------------------------------------------------------- Maslov


@dataclass(frozen=True)
class RegionDecomposition:
    """The staircase curves from ``sigma`` to ``sigma0`` and the 2-chain they bound.

    ``curves`` holds closed polygons as vertex lists (first vertex not
    repeated); ``coeffs[c, r]`` is the multiplicity of cell ``(c, r)``.
    """

    curves: tuple
    coeffs: np.ndarray

    def curve_edges(self):
        """Unit edges of the curves as a signed dict ``{(p, q): mult}``."""
        edges = {}
        for poly in self.curves:
            for k, p in enumerate(poly):
                q = poly[(k + 1) % len(poly)]
                for a, b in _unit_steps(p, q):
                    _add_edge(edges, a, b, 1)
        return {e: m for e, m in edges.items() if m}

    def boundary_edges(self):
        """Unit edges of the boundary of ``sum coeffs[c, r] * cell(c, r)``."""
        edges = {}
        n = self.coeffs.shape[0]
        for c in range(n):
            for r in range(n):
                k = int(self.coeffs[c, r])
                if not k:
                    continue
                corners = [(c, r), (c + 1, r), (c + 1, r + 1), (c, r + 1)]
                for t in range(4):
                    _add_edge(edges, corners[t], corners[(t + 1) % 4], k)
        return {e: m for e, m in edges.items() if m}


def _unit_steps(p, q):
    (x0, y0), (x1, y1) = p, q
    if x0 != x1 and y0 != y1:
        raise ValueError("segments must be axis-parallel")
    dx = (x1 > x0) - (x1 < x0)
    dy = (y1 > y0) - (y1 < y0)
    x, y = x0, y0
    while (x, y) != (x1, y1):
        yield (x, y), (x + dx, y + dy)
        x, y = x + dx, y + dy


def _add_edge(edges, a, b, k):
    # store each undirected edge once, with sign for orientation
    if a < b:
        edges[(a, b)] = edges.get((a, b), 0) + k
    else:
        edges[(b, a)] = edges.get((b, a), 0) - k


def region_decomposition(g, sigma):
    """Build the curves joining ``sigma`` to the O-corner generator.

    Starting from the smallest column where ``sigma`` and ``sigma0`` disagree,
    alternate a horizontal step from a ``sigma`` point to the ``sigma0`` point
    in the same row and a vertical step back to ``sigma``, until the curve
    closes; repeat for any disagreement left over.  Cell coefficients are the
    winding numbers of the curves around cell centres.
    """
    n = g.n
    sigma0 = g.o_rows
    inv0 = [0] * n
    for c, r in enumerate(sigma0):
        inv0[r] = c
    coeffs = np.zeros((n, n), dtype=np.int64)
    used = [False] * n
    curves = []
    for start in range(n):
        if used[start] or sigma[start] == sigma0[start]:
            continue
        poly = []
        cur = start
        while True:
            used[cur] = True
            nxt = inv0[sigma[cur]]
            row = sigma[cur]
            poly.append((cur, row))
            poly.append((nxt, row))
            # vertical step at x = nxt from row up/down to sigma[nxt]
            lo, hi = sorted((row, sigma[nxt]))
            sign = 1 if sigma[nxt] > row else -1
            coeffs[:nxt, lo:hi] += sign
            cur = nxt
            if cur == start:
                break
        curves.append(tuple(poly))
    return RegionDecomposition(tuple(curves), coeffs)


def _corner_sum(coeffs, points):
    """Sum of coefficients of the closed cells containing each lattice point."""
    n = coeffs.shape[0]
    total = 0
    for i, j in points:
        for c in (i - 1, i):
            for r in (j - 1, j):
                if 0 <= c < n and 0 <= r < n:
                    total += int(coeffs[c, r])
    return total


def maslov_grading(g, sigma):
    """Maslov grading from the region bounded by the staircase curves."""
    n = g.n
    coeffs = region_decomposition(g, sigma).coeffs
    quarter = _corner_sum(coeffs, enumerate(sigma))
    quarter += _corner_sum(coeffs, enumerate(g.o_rows))
    white = sum(int(coeffs[c, r]) for c, r in enumerate(g.o_rows))
    m = Fraction(quarter, 4) + 1 - n - 2 * white
    if m.denominator != 1:
        raise GradingError(f"non-integral Maslov grading {m} for {sigma}")
    return int(m)


# ---------------------------------------------------------------- rectangles


class RectangleTable:
    """Dot counts for every torus rectangle, indexed by corner and size.

    ``count[kind][c0, w, r0, h]`` is the number of dots of ``kind`` ('x' or
    'o') in the rectangle whose lower-left lattice corner is ``(c0, r0)``,
    with width ``w`` and height ``h`` measured around the torus.
    """

    def __init__(self, g):
        n = g.n
        self.n = n
        self.count = {}
        for kind, rows in (("x", g.x_rows), ("o", g.o_rows)):
            dots = np.zeros((n, n), dtype=np.int64)
            for c, r in enumerate(rows):
                dots[c, r] = 1
            tiled = np.tile(dots, (2, 2))
            pre = np.zeros((2 * n + 1, 2 * n + 1), dtype=np.int64)
            pre[1:, 1:] = tiled.cumsum(0).cumsum(1)
            c0 = np.arange(n)[:, None, None, None]
            w = np.arange(n + 1)[None, :, None, None]
            r0 = np.arange(n)[None, None, :, None]
            h = np.arange(n + 1)[None, None, None, :]
            self.count[kind] = (
                pre[c0 + w, r0 + h] - pre[c0, r0 + h] - pre[c0 + w, r0] + pre[c0, r0]
            )
        self.free_o = self.count["o"] == 0
        self.free_xo = self.free_o & (self.count["x"] == 0)


def _points_inside(sigma, n, c0, r0, w, h):
    for dc in range(1, w):
        k = (c0 + dc) % n
        if 0 < (sigma[k] - r0) % n < h:
            return True
    return False


def rectangles(g, sigma, i, j):
    """The two rectangles from ``sigma`` to its ``(i, j)`` transposition.

    Each is ``(c0, r0, w, h)``: one starts at ``(i, sigma[i])``, the other at
    ``(j, sigma[j])``, and both end on the other point of ``sigma``.
    """
    n = g.n
    si, sj = sigma[i], sigma[j]
    return (
        (i, si, j - i, (sj - si) % n),
        (j, sj, n - (j - i), (si - sj) % n),
    )


def boundary(g, sigma, mode=Mode.FULL, table=None):
    """Generators appearing in ``d(sigma)``, as a list of tuples.

    For each column pair exactly one of the two rectangles from ``sigma``
    must be admissible: no O, no point of ``sigma`` inside, and in graded
    mode no X either.
    """
    if table is None:
        table = RectangleTable(g)
    free = table.free_xo if mode is Mode.GRADED else table.free_o
    n = g.n
    out = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            hits = 0
            for c0, r0, w, h in rectangles(g, sigma, i, j):
                if free[c0, w, r0, h] and not _points_inside(sigma, n, c0, r0, w, h):
                    hits += 1
            if hits == 1:
                s = list(sigma)
                s[i], s[j] = s[j], s[i]
                out.append(tuple(s))
    return out


def boundary_with_drops(g, sigma, table=None):
    """Full-mode boundary paired with the X count of the contributing rectangle."""
    if table is None:
        table = RectangleTable(g)
    n = g.n
    out = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            found = []
            for c0, r0, w, h in rectangles(g, sigma, i, j):
                if table.free_o[c0, w, r0, h] and not _points_inside(
                    sigma, n, c0, r0, w, h
                ):
                    found.append(int(table.count["x"][c0, w, r0, h]))
            if len(found) == 1:
                s = list(sigma)
                s[i], s[j] = s[j], s[i]
                out.append((tuple(s), found[0]))
    return out


# ---------------------------------------------------------------- enumeration


def _enumerate_python(w, bound, n, first_rows=None):
    """Permutations with sum of ``w[c, sigma[c]]`` at most ``bound``.

    Depth-first over columns; a branch is cut once the partial sum plus the
    cheapest completion (column-wise minimum over unused rows) exceeds
    ``bound``.
    """
    w = [[int(w[c, r]) for r in range(n)] for c in range(n)]
    used = [False] * n
    sigma = [0] * n
    out = []

    def rest_min(col):
        total = 0
        for c in range(col, n):
            best = None
            for r in range(n):
                if not used[r] and (best is None or w[c][r] < best):
                    best = w[c][r]
            total += best
        return total

    def rec(col, partial):
        if col == n:
            out.append(tuple(sigma))
            return
        rows = first_rows if (col == 0 and first_rows is not None) else range(n)
        for r in rows:
            if used[r]:
                continue
            s = partial + w[col][r]
            used[r] = True
            if s + rest_min(col + 1) <= bound:
                sigma[col] = r
                rec(col + 1, s)
            used[r] = False

    if rest_min(0) <= bound:
        rec(0, 0)
    return out


def generator_sums(g, min_alexander=None, wt=None, use_jit=None, threads=1):
    """All ``(sigma, alexander)`` with ``alexander >= min_alexander``.

    Order is lexicographic in ``sigma``.  ``use_jit`` defaults to on for
    grids of size at least ``JIT_THRESHOLD``; ``threads`` only affects the
    compiled path.
    """
    if wt is None:
        wt = winding_table(g)
    if wt.a.denominator != 1:
        raise GradingError(f"Alexander shift {wt.a} is not an integer")
    a = int(wt.a)
    n = g.n
    if min_alexander is None:
        bound = int(np.abs(wt.w).sum())
    else:
        bound = a - min_alexander
    if use_jit is None:
        use_jit = n >= JIT_THRESHOLD
    if use_jit:
        from . import _kernels

        perms = _kernels.enumerate_perms(wt.w, bound, n, threads)
        sums = wt.w[np.arange(n)[None, :], perms].sum(axis=1)
        return [(tuple(int(v) for v in p), a - int(s)) for p, s in zip(perms, sums)]
    perms = _enumerate_python(wt.w, bound, n)
    return [(p, a - sum(int(wt.w[c, r]) for c, r in enumerate(p))) for p in perms]


def enumerate_generators(g, min_alexander=None, use_jit=None):
    """Yield :class:`Generator` objects with ``A >= min_alexander`` (all if None)."""
    for sigma, alex in generator_sums(g, min_alexander, use_jit=use_jit):
        yield Generator(sigma, alex, g)


def all_permutations(n):
    return list(itertools.permutations(range(n)))


# ---------------------------------------------------------------- graded pieces


@dataclass
class GradedComplex:
    """One Alexander grading of the associated graded complex.

    ``basis`` lists generators; ``diff[k]`` holds the indices of the basis
    elements in the graded boundary of ``basis[k]``.  Maslov gradings are
    filled in lazily through :meth:`maslov`.
    """

    alexander: int
    basis: list
    diff: list
    grid: GridDiagram = field(repr=False)
    _maslov: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.basis)

    def maslov(self, k):
        m = self._maslov.get(k)
        if m is None:
            m = self._maslov[k] = maslov_grading(self.grid, self.basis[k])
        return m

    def by_maslov(self):
        """Basis indices bucketed by Maslov grading (computes every grading)."""
        buckets = {}
        for k in range(len(self.basis)):
            buckets.setdefault(self.maslov(k), []).append(k)
        return buckets

    def index(self):
        return {s: k for k, s in enumerate(self.basis)}


@dataclass
class GridComplex:
    """Everything computed from one enumeration of a grid's generators.

    ``alexander`` maps each enumerated generator to its grading; ``pieces``
    maps a grading to its :class:`GradedComplex`.
    """

    grid: GridDiagram
    min_alexander: int | None
    alexander: dict
    pieces: dict
    table: RectangleTable = field(repr=False)

    def full_boundary(self, sigma):
        return boundary(self.grid, sigma, Mode.FULL, self.table)


def build_grid_complex(g, min_alexander=None, use_jit=None, check=False, threads=1):
    """Enumerate generators and build every graded piece with ``A >= min_alexander``."""
    wt = winding_table(g)
    if use_jit is None:
        use_jit = g.n >= JIT_THRESHOLD
    gens = generator_sums(g, min_alexander, wt=wt, use_jit=use_jit, threads=threads)
    table = RectangleTable(g)
    alex = dict(gens)
    grouped = {}
    for sigma, a in gens:
        grouped.setdefault(a, []).append(sigma)
    pieces = {}
    if use_jit:
        from . import _kernels

        for a, basis in grouped.items():
            diff = _kernels.graded_differential(g, basis, table)
            pieces[a] = GradedComplex(a, basis, diff, g)
    else:
        for a, basis in grouped.items():
            index = {s: k for k, s in enumerate(basis)}
            diff = [
                [index[t] for t in boundary(g, s, Mode.GRADED, table)] for s in basis
            ]
            pieces[a] = GradedComplex(a, basis, diff, g)
    if check:
        for piece in pieces.values():
            check_square_zero(piece)
    return GridComplex(g, min_alexander, alex, pieces, table)


def build_graded_complexes(g, alexander_range=(0, None), use_jit=None):
    """Graded pieces for Alexander gradings in ``[lo, hi]`` (``None`` = unbounded)."""
    lo, hi = alexander_range
    cx = build_grid_complex(g, lo, use_jit=use_jit)
    return [
        cx.pieces[a]
        for a in sorted(cx.pieces, reverse=True)
        if hi is None or a <= hi
    ]


def check_square_zero(piece):
    """Raise if the graded differential of ``piece`` does not square to zero."""
    for k, targets in enumerate(piece.diff):
        acc = set()
        for t in targets:
            acc.symmetric_difference_update(piece.diff[t])
        if acc:
            raise GradingError(
                f"d^2 != 0 on {piece.basis[k]} in Alexander grading {piece.alexander}"
            )
