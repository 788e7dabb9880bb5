from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from barrelwin.errors import HypothesisError
from barrelwin.lattice import vec
from barrelwin.quiver import (
    DecoratedQuiver,
    LexParameter,
    QuiverPoint,
    QuiverVertex,
    act_on_point,
    compose_collections,
    lex_git_parameter,
    materialization_bound,
    matrix_rank,
    quiver_point_semistable,
    reverse_lex_key,
    vertex_collection,
    vertex_multiplicity,
    vertex_rep,
)


def flag_quiver():
    return DecoratedQuiver([QuiverVertex(2, 4), QuiverVertex(2, 2)], [(0, 1)])


def rand_matrix(rng, rows, cols, low_rank=False):
    if low_rank and rows > 1 and cols:
        v = [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(cols)]
        coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(rows)]
        return [[c * x for x in v] for c in coeffs]
    return [[Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(cols)] for _ in range(rows)]


def test_multiplicities():
    assert vertex_multiplicity(DecoratedQuiver([QuiverVertex(2, 6)]), 0) == 6
    q = DecoratedQuiver([QuiverVertex(2, 4), QuiverVertex(3, 1)], [(0, 1)])
    assert vertex_multiplicity(q, 1) == 3
    empty = DecoratedQuiver([QuiverVertex(2, 0)])
    assert vertex_multiplicity(empty, 0) == 0
    with pytest.raises(HypothesisError):
        vertex_rep(empty, 0)


def test_arrows_must_follow_the_order():
    with pytest.raises(HypothesisError):
        DecoratedQuiver([QuiverVertex(2, 1), QuiverVertex(2, 1)], [(1, 0)])


def test_single_vertex_composition_is_identity():
    q = DecoratedQuiver([QuiverVertex(2, 6)])
    pc = compose_collections(q)
    assert [lab[0] for lab in pc.labels()] == vertex_collection(q, 0)


def test_flag_quiver_product():
    q = flag_quiver()
    pc = compose_collections(q)
    assert len(pc) == 36
    keys = [reverse_lex_key(e) for e in pc.entries]
    assert keys == sorted(keys) and len(set(pc.entries)) == 36


def test_trusted_collections_are_used_verbatim():
    q = DecoratedQuiver([QuiverVertex(3, 3, collection_source="trusted", collection=[vec(0, 0)]), QuiverVertex(2, 4)])
    pc = compose_collections(q)
    assert len(pc) == 6


@given(st.lists(st.lists(st.integers(0, 4), min_size=1, max_size=3), min_size=1, max_size=3))
def test_reverse_lex_refines_vertex_orders(sizes):
    cols = [list(range(len(s))) for s in sizes]
    q = DecoratedQuiver([QuiverVertex(2, 2, collection_source="trusted", collection=c) for c in cols])
    pc = compose_collections(q, cols)
    assert len(pc) == len(set(pc.entries))
    assert all(reverse_lex_key(a) < reverse_lex_key(b) for a, b in zip(pc.entries, pc.entries[1:]))


def test_lex_parameter_examples():
    p = LexParameter((vec(1, -1), vec(0, 0)))
    assert p.pairings([vec(-1, 1), vec(2, 0)]) == [-2, 0]
    assert p.sign([vec(-1, 1), vec(5, 5)]) == -1
    assert p.sign([vec(1, 1), vec(0, 0)]) == 0
    single = LexParameter((vec(2, 2),))
    assert single.sign([vec(1, 0)]) == 1


cochars = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).map(lambda t: vec(*t))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4), st.data())
def test_lex_sign_matches_materialized_coefficients(ells, data):
    param = LexParameter(tuple(vec(*e) for e in ells))
    lams = [data.draw(cochars) for _ in ells]
    M = materialization_bound(param.pairings(lams))
    assert param.concrete_sign(lams, M) == param.sign(lams)


def test_lex_git_parameter_of_a_quiver():
    q = DecoratedQuiver([QuiverVertex(2, 4, det_power=2), QuiverVertex(2, 2)], [(0, 1)])
    assert lex_git_parameter(q).ells == (vec(2, 2), vec(1, 1))


def test_matrix_rank_matches_sympy():
    rng = random.Random(7)
    for _ in range(50):
        M = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 6), low_rank=rng.random() < 0.4)
        assert matrix_rank(M) == sympy.Matrix(M).rank()


def test_grassmannian_point_checks():
    q = DecoratedQuiver([QuiverVertex(2, 6)])
    full = [[1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]
    low = [[1, 2, 0, 0, 0, 0], [2, 4, 0, 0, 0, 0]]
    assert quiver_point_semistable(q, QuiverPoint([full], [])).semistable
    assert not quiver_point_semistable(q, QuiverPoint([low], [])).semistable


def test_flag_quiver_surjective_composite():
    q = flag_quiver()
    F1 = [[1, 0, 0, 0], [0, 1, 0, 0]]
    F2 = [[0, 0], [0, 0]]
    A = [[1, 0], [0, 1]]
    verdict = quiver_point_semistable(q, QuiverPoint([F1, F2], [A]))
    assert verdict.semistable and [v.rank for v in verdict.vertices] == [2, 2]


def test_point_check_shapes_and_polarization():
    q = flag_quiver()
    with pytest.raises(ValueError):
        quiver_point_semistable(q, QuiverPoint([[[1]], [[0, 0], [0, 0]]], [[[1, 0], [0, 1]]]))
    negative = DecoratedQuiver([QuiverVertex(2, 2, det_power=-1)])
    with pytest.raises(HypothesisError):
        quiver_point_semistable(negative, QuiverPoint([[[1, 0], [0, 1]]], []))


def _invertible(rng, n):
    while True:
        g = rand_matrix(rng, n, n)
        if matrix_rank(g) == n:
            inv = sympy.Matrix(g).inv()
            return g, [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)] for i in range(n)]


def test_semistability_is_invariant_under_base_change():
    rng = random.Random(11)
    q = flag_quiver()
    for _ in range(30):
        point = QuiverPoint(
            [rand_matrix(rng, 2, 4, rng.random() < 0.5), rand_matrix(rng, 2, 2, rng.random() < 0.5)],
            [rand_matrix(rng, 2, 2, rng.random() < 0.5)],
        )
        g0, g0i = _invertible(rng, 2)
        g1, g1i = _invertible(rng, 2)
        moved = act_on_point(q, point, [g0, g1], [g0i, g1i])
        assert quiver_point_semistable(q, point).semistable == quiver_point_semistable(q, moved).semistable
