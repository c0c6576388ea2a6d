"""Acceptance criteria, one test each, with their stated time limits.

Every test records a single ``PASS``/``FAIL``/``SKIP`` line, printed in the
pytest terminal summary (and directly when this file is run as a script).
"""

import os
import random
import time

import pytest

from gridhfk.filtered import Mode, RectangleTable, boundary, build_grid_complex, enumerate_generators
from gridhfk.grid import load_grid, mirror_grid, torus_grid, unknot_grid
from gridhfk.homology import (
    associated_graded_poly,
    dims_by_maslov,
    euler_characteristic,
    gaussian_homology,
    hfk_hat,
    is_symmetric,
    laurent_at_one,
    reduce,
    strip_s_factor,
)
from gridhfk.moves import apply_move, legal_moves
from gridhfk.poly import ONE, S_FACTOR, BigradedPoly, parse_poly
from gridhfk.spectral import e2_page, grid_pages, symmetry_complete
from conftest import ACCEPTANCE_LINES, FIGURE_EIGHT_D8, TREFOIL_DT, extended_enabled
from oracles import alternating_hfk, random_grids

ROW_8_19 = "t^{-3}+qt^{-2}+q^2+q^5t^2+q^6t^3"
ROW_10_124 = "q^{-8}t^{-4}+q^{-7}t^{-3}+q^{-4}t^{-1}+q^{-3}+q^{-2}t+q^{-1}t^3+t^4"
KT_POLY = "(q^{-2}+q^{-1})t^{-2}+4(q^{-1}+1)t^{-1}+7+6q+4(q+q^2)t+(q^2+q^3)t^2"
C_POLY = (
    "(q^{-3}+q^{-2})t^{-3}+3(q^{-2}+q^{-1})t^{-2}+3(q^{-1}+1)t^{-1}+3+2q"
    "+3(q+q^2)t+3(q^2+q^3)t^2+(q^3+q^4)t^3"
)

SMALL_FIXTURES = {
    "unknot_2": unknot_grid(2),
    "unknot_3": unknot_grid(3),
    "trefoil": torus_grid(2, 3),
    "trefoil_DT": TREFOIL_DT,
    "figure_eight": FIGURE_EIGHT_D8,
    "cinquefoil": torus_grid(2, 5),
    "8_19": torus_grid(3, 4),
}


def record(number, ok, detail, seconds=None):
    status = "PASS" if ok else "FAIL"
    timing = "" if seconds is None else f" [{seconds:.2f}s]"
    line = f"criterion {number:2d}: {status} {detail}{timing}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_c01_unknot():
    with Timer() as t:
        results = []
        for n in (2, 3):
            pages = e2_page(unknot_grid(n), "full")
            results.append((pages.e1 == ONE, pages.tau().value == 0))
    ok = all(a and b for a, b in results) and t.seconds < 0.1
    record(1, ok, "unknot n=2,3: HFK = 1, tau = 0", t.seconds)


def test_c02_trefoil():
    with Timer() as t:
        g = torus_grid(2, 3)
        pages = e2_page(g)
        hfk = pages.e1
        by_a = {a: sum(d for (b, _), d in hfk.items() if b == a) for a in (-1, 0, 1)}
        one_diagonal = len(hfk.diagonals()) == 1
        unstripped_top = grid_pages(g, 0).d1.get((1, 2), 0)
        stripped_top = pages.d1_ranks.get((1, 2), 0)
        tau = pages.tau().value
        census = sorted((x.alexander, x.maslov) for x in enumerate_generators(TREFOIL_DT, 0))
    ok = (
        by_a == {-1: 1, 0: 1, 1: 1}
        and hfk.total() == 3
        and one_diagonal
        and unstripped_top == 1
        and stripped_top == 1
        and tau in (1, -1)
        and census == [(0, 1)] * 5 + [(1, 2)]
        and t.seconds < 1
    )
    record(
        2,
        ok,
        f"trefoil HFK {hfk}, d1 rank {stripped_top} out of the top class, tau {tau}, "
        f"census {census.count((1, 2))} at A=1 / {census.count((0, 1))} at A=0",
        t.seconds,
    )


def test_c03_figure_eight():
    with Timer() as t:
        pages = e2_page(FIGURE_EIGHT_D8)
    oracle = BigradedPoly(alternating_hfk({-1: -1, 0: 3, 1: -1}, 0))
    ok = (
        pages.e1 == parse_poly("q^{-1}t^{-1}+3+qt") == oracle
        and pages.tau().value == 0
        and t.seconds < 1
    )
    record(3, ok, f"figure-eight HFK {pages.e1}, tau {pages.tau().value}", t.seconds)


def test_c04_8_19():
    with Timer() as t:
        pages = e2_page(torus_grid(3, 4))
    row = parse_poly(ROW_8_19)
    tau = pages.tau().value
    ok = ((pages.e1 == row and tau == -3) or (pages.e1 == row.mirror() and tau == 3)) and t.seconds < 5
    record(4, ok, f"T(3,4): {pages.e1}, tau {tau}", t.seconds)


def test_c05_10_124():
    with Timer() as t:
        pages = e2_page(torus_grid(3, 5))
    row = parse_poly(ROW_10_124)
    tau = pages.tau().value
    ok = ((pages.e1 == row and tau == 4) or (pages.e1 == row.mirror() and tau == -4)) and t.seconds < 60
    record(5, ok, f"T(3,5): {pages.e1}, tau {tau}", t.seconds)


def test_c06_reduction_vs_gaussian():
    with Timer() as t:
        grids = random_grids(2024, 200, sizes=(2, 3, 4, 5, 6))
        pieces = mismatches = 0
        for g in grids:
            for piece in build_grid_complex(g, None).pieces.values():
                pieces += 1
                if dims_by_maslov(reduce(piece)) != gaussian_homology(piece):
                    mismatches += 1
    ok = mismatches == 0 and t.seconds < 60
    record(6, ok, f"{pieces} pieces of 200 random grids, {mismatches} mismatches", t.seconds)


def _stabilization_factor_holds(g, h):
    if h.n <= 6:
        return associated_graded_poly(h) == associated_graded_poly(g) * S_FACTOR
    # the S factor only lowers Alexander grading, so A >= 0 parts determine each other
    return associated_graded_poly(h, 0) == (associated_graded_poly(g, 0) * S_FACTOR).restrict(0)


def test_c07_move_invariance():
    rng = random.Random(77)
    grids = random_grids(7, 50, sizes=(3, 4, 5, 6)) + list(SMALL_FIXTURES.values())
    checked = stabilizations = 0
    bad = []
    with Timer() as t:
        for g in grids:
            base = hfk_hat(g)
            moves = legal_moves(g)
            for m in (rng.choice(moves) for _ in range(20)):
                h = apply_move(g, m)
                checked += 1
                if hfk_hat(h) != base:
                    bad.append((g, m))
                if m.kind == "stabilize":
                    stabilizations += 1
                    if not _stabilization_factor_holds(g, h):
                        bad.append((g, m, "factor"))
    ok = not bad and t.seconds < 120
    record(
        7,
        ok,
        f"{checked} moves on {len(grids)} grids ({stabilizations} stabilizations), "
        f"{len(bad)} failures",
        t.seconds,
    )


def test_c08_symmetry():
    bad = []
    for name, g in SMALL_FIXTURES.items():
        full = hfk_hat(g, "full")
        half = strip_s_factor(associated_graded_poly(g, 0), g.n, 0)
        if symmetry_complete(half) != full or e2_page(g, "full").e2 != e2_page(g).e2:
            bad.append(name)
    record(8, not bad, f"full range = completed A >= 0 on {len(SMALL_FIXTURES)} fixtures {bad or ''}")


def test_c09_euler_characteristic():
    bad = []
    for name, g in list(SMALL_FIXTURES.items()) + [("10_124", torus_grid(3, 5))]:
        chi = euler_characteristic(hfk_hat(g))
        if not is_symmetric(chi) or abs(laurent_at_one(chi)) != 1:
            bad.append(name)
    published = {"KT_2,1": KT_POLY, "C_2,1": C_POLY}
    for name, text in published.items():
        if euler_characteristic(parse_poly(text)) != {0: 1}:
            bad.append(name)
    kt = os.environ.get("GRIDHFK_KT_GRID")
    note = "KT grid not supplied, published polynomials checked"
    if kt:
        if euler_characteristic(hfk_hat(load_grid(kt))) != {0: 1}:
            bad.append("KT grid")
        note = "KT grid checked"
    record(9, not bad, f"symmetric, +-1 at t=1 on 8 computed fixtures; {note} {bad or ''}")


def test_c10_s_factor_exact():
    grids = list(SMALL_FIXTURES.values()) + random_grids(2024, 200, sizes=(2, 3, 4, 5, 6))
    failures = 0
    for g in grids:
        try:
            strip_s_factor(associated_graded_poly(g), g.n)
            e2_page(g, "full")
        except ArithmeticError:
            failures += 1
    record(10, failures == 0, f"{len(grids)} full-range divisions, {failures} with a remainder")


@pytest.mark.extended
def test_c11_extended():
    kt, c = os.environ.get("GRIDHFK_KT_GRID"), os.environ.get("GRIDHFK_C_GRID")
    if not (extended_enabled() and kt and c):
        line = (
            "criterion 11: SKIP needs GRIDHFK_EXTENDED=1 plus GRIDHFK_KT_GRID and "
            "GRIDHFK_C_GRID grid files (the published grids are not in machine-readable form)"
        )
        ACCEPTANCE_LINES.append(line)
        pytest.skip(line)
    with Timer() as t:
        got_kt, got_c = hfk_hat(load_grid(kt)), hfk_hat(load_grid(c))
    want_kt, want_c = parse_poly(KT_POLY), parse_poly(C_POLY)
    ok = (
        got_kt in (want_kt, want_kt.mirror())
        and got_c in (want_c, want_c.mirror())
        and max(got_kt.alexander_support()) == 2
        and max(got_c.alexander_support()) == 3
        and t.seconds < 3600
    )
    record(11, ok, f"KT: {got_kt}; C: {got_c}", t.seconds)


def test_c12_performance():
    g = torus_grid(3, 7)
    with Timer() as t:
        cx = build_grid_complex(g, 0)
        classes = {a: reduce(p) for a, p in cx.pieces.items()}
    generators = sum(len(p) for p in cx.pieces.values())
    graded = sum(len(d) for p in cx.pieces.values() for d in p.diff) / generators
    # full filtered boundary on a sample, for comparison
    rng = random.Random(12)
    sample = rng.sample(sorted(cx.alexander), 2000)
    table = RectangleTable(g)
    full = sum(len(boundary(g, s, Mode.FULL, table)) for s in sample) / len(sample)
    survivors = sum(len(c) for c in classes.values())
    ok = t.seconds < 600 and 3.5 <= graded <= 14
    record(
        12,
        ok,
        f"T(3,7) n=10, {generators} generators with A >= 0, {survivors} survivors; "
        f"mean graded boundary {graded:.2f} (full filtered {full:.2f}), target 7 within x2",
        t.seconds,
    )


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
