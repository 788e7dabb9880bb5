from __future__ import annotations

from collections import Counter
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, strategies as st

from barrelwin.errors import BudgetError, InvalidLabelError
from barrelwin.group import (
    GL2,
    TORUS2,
    RepSpec,
    anticanonical,
    check_main_setup,
    gl2_summand_weights,
    graded_hom_dims,
    irrep_weights,
    lowest_weight,
    tensor_decompose,
)
from barrelwin.lattice import Vec2, vec

labels = st.tuples(st.integers(-4, 4), st.integers(0, 4)).map(lambda t: vec(t[0] + t[1], t[0]))


def peel_invariants(weights: Counter) -> int:
    """Multiplicity of the trivial GL2 irreducible, by peeling off highest weights."""
    mult = Counter(weights)
    trivial = 0
    while +mult:
        top = max((w for w, c in mult.items() if c > 0), key=lambda w: (w.a - w.b, w.a))
        k = mult[top]
        if top == vec(0, 0):
            trivial += k
        for w in irrep_weights(GL2, top):
            mult[w] -= k
        assert all(c >= 0 for c in mult.values())
    return trivial


def brute_hom_dim(rep, source, target, d):
    char = Counter()
    tw = [t - s for t in irrep_weights(rep.group, target) for s in irrep_weights(rep.group, source)]
    for mono in combinations_with_replacement(range(len(rep.weights)), d):
        base = Vec2(0, 0)
        for i in mono:
            base = base - rep.weights[i]
        for t in tw:
            char[base + t] += 1
    if rep.group.is_torus:
        return char[vec(0, 0)]
    return peel_invariants(char)


def test_summand_weights():
    assert gl2_summand_weights(3, 0) == [vec(3, 0), vec(2, 1), vec(1, 2), vec(0, 3)]
    assert gl2_summand_weights(1, 2) == [vec(3, 2), vec(2, 3)]


def test_anticanonical_and_main_setup(gr26, sym3):
    assert anticanonical(gr26) == vec(6, 6)
    assert anticanonical(sym3) == vec(6, 6)
    assert check_main_setup(gr26) == vec(-1, -1)
    assert check_main_setup(RepSpec.gl2([(3, -2)])) is None
    assert check_main_setup(RepSpec.torus([vec(1, -1), vec(2, -1)])) is not None


def test_invalid_labels():
    with pytest.raises(InvalidLabelError):
        irrep_weights(GL2, vec(0, 1))
    with pytest.raises(InvalidLabelError):
        irrep_weights(GL2, vec("1/2", 0))


@given(labels)
def test_irrep_weights_are_weyl_symmetric(chi):
    ws = Counter(irrep_weights(GL2, chi))
    assert ws == Counter(Vec2(w.b, w.a) for w in ws.elements())
    assert len(list(ws.elements())) == chi.a - chi.b + 1
    assert lowest_weight(GL2, chi) == vec(chi.b, chi.a)


@given(labels, labels)
def test_tensor_decomposition_matches_characters(u, w):
    lhs = Counter(a + b for a in irrep_weights(GL2, u) for b in irrep_weights(GL2, w))
    rhs = Counter()
    for s in tensor_decompose(GL2, u, w):
        rhs.update(irrep_weights(GL2, s))
    assert lhs == rhs


@pytest.mark.parametrize(
    "source,target",
    [((0, 0), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, 0)), ((1, -1), (0, 0)), ((2, 0), (1, 1))],
)
def test_graded_hom_dims_against_brute_force(source, target):
    rep = RepSpec.grassmannian(3)
    dims = graded_hom_dims(rep, vec(*source), vec(*target), 4)
    assert dims == [brute_hom_dim(rep, vec(*source), vec(*target), d) for d in range(5)]


def test_graded_hom_dims_for_a_torus():
    rep = RepSpec.torus([vec(1, 0), vec(0, 1), vec(1, 1)])
    dims = graded_hom_dims(rep, vec(0, 0), vec(-2, -1), 4)
    assert dims == [brute_hom_dim(rep, vec(0, 0), vec(-2, -1), d) for d in range(5)]


def test_degree_budget_is_enforced(gr26):
    with pytest.raises(BudgetError):
        graded_hom_dims(gr26, vec(0, 0), vec(0, 0), 40, degree_cap=32)
