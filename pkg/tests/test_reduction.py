from __future__ import annotations

from fractions import Fraction

import pytest

from barrelwin.errors import HypothesisError, ProofMismatchError
from barrelwin.group import RepSpec
from barrelwin.lattice import vec
from barrelwin.reduction import (
    C,
    DVEE,
    FanoReducer,
    NefFanoReducer,
    ReductionCertificate,
    check_lattice_equality,
    complex_pieces,
    mu_plus,
    reduce_fano,
    reduce_nef_fano,
)
from barrelwin.group import GL2
from barrelwin.stability import PerturbedPolarization
from barrelwin.windows import find_generic_theta, make_window


def test_mu_plus():
    assert mu_plus(GL2, vec(3, 1)) == vec(3, 1)
    assert mu_plus(GL2, vec(-5, -1)) == vec(-2, -4)
    assert mu_plus(GL2, vec(-2, -1)) is None


def test_complex_pieces_for_sym3(sym3):
    pieces = complex_pieces(sym3, C, vec(-1, 1), vec(0, 0)).pieces
    assert [(p.mu, p.mu_plus) for p in pieces] == [
        (vec(-5, -1), vec(-2, -4)),
        (vec(-3, 0), vec(-1, -2)),
        (vec(-2, -1), None),
    ]


@pytest.fixture()
def sym3_replay(sym3):
    return FanoReducer(make_window(sym3), strict=False, check_theta=False)


def test_step1_replays(sym3_replay):
    rule, _, children, _ = sym3_replay.expand(vec(9, 5))
    assert rule == "Step1Plus"
    rule, _, children, _ = sym3_replay.expand(vec(-7, -7))
    assert rule == "Step1Minus" and vec(-1, -1) in children


def test_step2_replays(sym3_replay):
    assert sym3_replay.expand(vec(5, -1))[::2] == ("Step2a", [vec(0, -2), vec(2, -1), vec(3, -2)])
    assert sym3_replay.expand(vec(0, -6))[::2] == ("Step2b", [vec(0, -3), vec(1, -4), vec(1, -1)])


def test_step3_replay(sym3_replay):
    assert sym3_replay.expand(vec(3, 2))[::2] == ("Step3a", [vec(0, -1), vec(1, 1)])


def _assert_measures(cert):
    half = Fraction(1, 2)
    for node in cert.nodes.values():
        if node.rule in ("Step1Plus", "Step1Minus"):
            assert all(m[0] < node.measure[0] for m in node.child_measures)
        elif node.rule in ("Step2a", "Step2b"):
            r = node.measure[0]
            assert r > half and all(m[0] < r for m in node.child_measures)
        elif node.rule in ("Step3a", "Step3b"):
            a = node.measure[1]
            assert all(m[1] < a and m[0] <= half for m in node.child_measures)


@pytest.mark.parametrize("summands", [[(1, 0)] * 6, [(3, 0)], [(1, 0), (3, 0)], [(1, 0)] * 10])
def test_fano_certificates(summands):
    rep = RepSpec.gl2(summands)
    region = make_window(rep, theta=find_generic_theta(rep))
    cert = reduce_fano(region, seed_box=3)
    assert cert.ok and not cert.mismatches
    assert all(region.in_barrel(c) for c in cert.leaves)
    _assert_measures(cert)


@pytest.mark.parametrize(
    "weights", [[(1, 0), (1, 0), (0, 1), (0, 1)], [(1, 0), (1, 0), (1, 1), (0, 1)], [(1, 0), (2, 0), (1, 1), (0, 1)]]
)
def test_torus_fano_certificates(weights):
    rep = RepSpec.torus([vec(*w) for w in weights])
    region = make_window(rep, theta=find_generic_theta(rep))
    cert = reduce_fano(region)
    assert cert.ok
    _assert_measures(cert)


def test_nef_fano_certificate(sym4_nef_window):
    cert = reduce_nef_fano(sym4_nef_window)
    assert cert.ok and len(cert.nodes) == 180
    assert cert.parameters["eta0"] == "20" and cert.parameters["eta_lambda_prime"] == "6"
    assert cert.parameters["Q"] == "2"
    assert check_lattice_equality(sym4_nef_window)


def test_nef_step_replays(sym4_torus):
    ell = PerturbedPolarization(vec(10, 10), vec(1, -1))
    engine = NefFanoReducer(make_window(sym4_torus, ell), strict=False, check_theta=False)
    rule, _, children, _ = engine.expand(vec(1, -5))
    assert rule == "NefCase1"
    assert children == [vec(1, -1), vec(2, -2), vec(2, 2), vec(3, -3), vec(3, 1), vec(4, 0), vec(4, 4)]
    rule, _, children, _ = engine.expand(vec(-6, 0))
    assert rule == "NefInterior2" and children == [vec(-3, 1), vec(-2, 0), vec(1, 1)]


def test_certificate_round_trip(sym3_window):
    cert = reduce_fano(sym3_window)
    again = ReductionCertificate.from_dict(cert.to_dict())
    assert again.to_dict() == cert.to_dict()


def test_refusals(gr26, sym4_torus):
    with pytest.raises(HypothesisError) as err:
        FanoReducer(make_window(gr26))
    assert err.value.anchor == "lambda0-generic"
    with pytest.raises(HypothesisError):
        FanoReducer(make_window(sym4_torus, theta=vec("-1/4", "-1/4")))
    with pytest.raises(HypothesisError):
        NefFanoReducer(make_window(gr26, theta=vec("-3/4", "-3/4")))


def test_strict_mode_raises_on_mismatch(sym3_window):
    engine = FanoReducer(sym3_window, strict=True)
    with pytest.raises(ProofMismatchError):
        engine.mismatch("forced")
