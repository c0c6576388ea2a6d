import pytest
from hypothesis import given, settings, strategies as st

from gridhfk.filtered import GradedComplex, build_grid_complex
from gridhfk.grid import torus_grid, unknot_grid
from gridhfk.homology import (
    ReductionGraph,
    StripError,
    associated_graded_poly,
    dims_by_maslov,
    euler_characteristic,
    gaussian_homology,
    gf2_rank,
    hfk_hat,
    is_symmetric,
    laurent_at_one,
    reduce,
    strip_s_factor,
)
from gridhfk.poly import BigradedPoly, ONE, S_FACTOR, parse_poly, s_power
from conftest import FIGURE_EIGHT_D8, TREFOIL_DT
from oracles import alternating_hfk, gf2_rank_dense, random_grids, torus_delta


def _chain(diff, maslov):
    """A hand-made graded piece with prescribed Maslov gradings."""
    piece = GradedComplex(0, list(range(len(diff))), diff, unknot_grid())
    piece._maslov.update(enumerate(maslov))
    return piece


def test_zero_differential_survives():
    piece = _chain([[], [], []], [0, 1, 1])
    classes = reduce(piece)
    assert sorted(c.chain for c in classes) == [[0], [1], [2]]


def test_acyclic_pair():
    graph = ReductionGraph([[1], []]).run()
    assert graph.survivors() == [] and graph.steps == 1


def test_label_update_is_symmetric_difference():
    # 0 -> {2, 3}, 1 -> {2}: cancelling 1 -> 2 leaves 0 pointing at 3 with label {0, 1}
    graph = ReductionGraph([[2, 3], [2], [], []])
    graph.cancel(1, 2)
    assert graph.out[0] == {3} and graph.labels[0] == {0, 1}
    with pytest.raises(ValueError):
        graph.cancel(1, 3)


def test_step_count_and_edgeless():
    for g in random_grids(20, 15, sizes=(4, 5)):
        cx = build_grid_complex(g, None)
        for piece in cx.pieces.values():
            graph = ReductionGraph(piece.diff).run()
            assert graph.edge_count() == 0
            assert graph.steps == (len(piece) - len(graph)) // 2


def test_survivor_labels_are_cycles_and_independent():
    g = torus_grid(3, 4)
    cx = build_grid_complex(g, 0)
    for piece in cx.pieces.values():
        classes = reduce(piece, check=True)
        width = len(piece)
        vectors = []
        for cls in classes:
            bd = set()
            for k in cls.chain:
                bd.symmetric_difference_update(piece.diff[k])
            assert not bd
            vectors.append([1 if k in set(cls.chain) else 0 for k in range(width)])
        assert gf2_rank_dense(vectors, width) == len(classes)


def test_gf2_rank_agrees_with_dense():
    import random

    rng = random.Random(0)
    for _ in range(50):
        rows, width = rng.randrange(0, 8), rng.randrange(1, 10)
        dense = [[rng.randrange(2) for _ in range(width)] for _ in range(rows)]
        masks = [sum(b << i for i, b in enumerate(r)) for r in dense]
        assert gf2_rank(masks) == gf2_rank_dense(dense, width)
    assert gf2_rank([]) == 0


def test_reduce_matches_gaussian_on_fixtures():
    for g in (TREFOIL_DT, FIGURE_EIGHT_D8, torus_grid(3, 4), torus_grid(2, 5)):
        cx = build_grid_complex(g, 0)
        for piece in cx.pieces.values():
            assert dims_by_maslov(reduce(piece)) == gaussian_homology(piece)


# ---------------------------------------------------------------- S factor


def test_strip_unknot():
    assert strip_s_factor(BigradedPoly({(0, 0): 1, (-1, -1): 1}), 2) == ONE


_terms = st.dictionaries(
    st.tuples(st.integers(-4, 4), st.integers(-6, 6)), st.integers(1, 5), max_size=6
)


@settings(max_examples=60, deadline=None)
@given(_terms, st.integers(0, 5))
def test_strip_round_trip(terms, k):
    p = BigradedPoly(terms)
    assert strip_s_factor(p * s_power(k), k + 1) == p


@settings(max_examples=40, deadline=None)
@given(_terms, st.integers(1, 4), st.integers(-4, 2))
def test_truncated_strip_is_exact_above_cutoff(terms, k, lo):
    p = BigradedPoly(terms)
    got = strip_s_factor((p * s_power(k)).restrict(lo), k + 1, lo)
    assert got == p.restrict(lo)


def test_strip_reports_remainder():
    with pytest.raises(StripError) as info:
        strip_s_factor(BigradedPoly({(0, 0): 1}), 2)
    assert info.value.residual


def test_strip_rejects_negative():
    p = S_FACTOR - BigradedPoly({(0, 0): 2})
    with pytest.raises(StripError):
        strip_s_factor(p, 2)


# ---------------------------------------------------------------- assembled


def test_unknot_associated_graded():
    assert associated_graded_poly(unknot_grid(2)) == BigradedPoly({(0, 0): 1, (-1, -1): 1})


def test_published_trefoil_nonnegative_pieces():
    assert associated_graded_poly(TREFOIL_DT, 0) == BigradedPoly({(1, 2): 1, (0, 1): 5})


@pytest.mark.parametrize(
    "g, delta, signature",
    [
        (torus_grid(2, 3), torus_delta(2, 3), 2),
        (torus_grid(2, 5), torus_delta(2, 5), 4),
        (FIGURE_EIGHT_D8, {-1: -1, 0: 3, 1: -1}, 0),
    ],
    ids=["trefoil", "cinquefoil", "figure_eight"],
)
def test_alternating_knots_match_oracle(g, delta, signature):
    assert hfk_hat(g, "full") == BigradedPoly(alternating_hfk(delta, signature))


def test_torus_3_4_matches_table():
    assert hfk_hat(torus_grid(3, 4)) == parse_poly("t^{-3}+qt^{-2}+q^2+q^5t^2+q^6t^3")


@pytest.mark.parametrize("p, q", [(2, 3), (2, 5), (3, 4)])
def test_euler_characteristic_is_alexander(p, q):
    h = hfk_hat(torus_grid(p, q), "full")
    assert euler_characteristic(h) == torus_delta(p, q)


def test_euler_characteristic_properties():
    for text in (
        "(q^{-2}+q^{-1})t^{-2}+4(q^{-1}+1)t^{-1}+7+6q+4(q+q^2)t+(q^2+q^3)t^2",
        "q^{-1}t^{-1}+3+qt",
    ):
        chi = euler_characteristic(parse_poly(text))
        assert is_symmetric(chi) and abs(laurent_at_one(chi)) == 1
    assert euler_characteristic(ONE) == {0: 1}


def test_trivial_alexander_knots():
    kt = parse_poly("(q^{-2}+q^{-1})t^{-2}+4(q^{-1}+1)t^{-1}+7+6q+4(q+q^2)t+(q^2+q^3)t^2")
    assert euler_characteristic(kt) == {0: 1}
    assert max(kt.alexander_support()) == 2


def test_stabilization_multiplies_by_s_factor():
    from gridhfk.moves import Move, apply_move

    g = torus_grid(2, 3)
    h = apply_move(g, Move("stabilize", 2, dot="O", variant="NE"))
    assert associated_graded_poly(h) == associated_graded_poly(g) * S_FACTOR
