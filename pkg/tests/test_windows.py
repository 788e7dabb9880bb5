from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from barrelwin.errors import HypothesisError
from barrelwin.group import RepSpec
from barrelwin.lattice import Vec2, pair, vec
from barrelwin.windows import (
    BARREL,
    CYLINDER,
    check_generic,
    classify_points,
    destab_data,
    enumerate_window_irreps,
    find_generic_theta,
    make_window,
)

pts = st.builds(Vec2, st.integers(-12, 12), st.integers(-12, 12))


def test_grassmannian_destabilizing_table(gr26):
    assert destab_data(gr26, vec(-1, -1)).zeta == vec(-6, -6)
    assert destab_data(gr26, vec(-1, 1)).zeta == vec(-5, -1)
    assert destab_data(gr26, vec(1, -1)).zeta == vec(-1, -5)
    assert destab_data(gr26, vec(0, 0)).zeta == vec(-6, -6)
    assert [destab_data(gr26, v).eta for v in (vec(-1, -1), vec(-1, 1), vec(1, -1))] == [12, 4, 4]


def test_unshifted_barrel_has_25_points(gr26):
    region = make_window(gr26)
    barrel = region.lattice_points(region.in_barrel)
    cylinder = region.lattice_points(region.in_cylinder)
    assert len(barrel) == 25 and len(cylinder) > len(barrel)
    assert region.in_barrel(vec(3, 3))
    assert not region.with_theta(vec(-1, -1) * Fraction(1, 48)).in_barrel(vec(3, 3))


def test_unshifted_window_is_not_generic(gr26):
    report = check_generic(make_window(gr26))
    assert not report.is_generic and report.witness is not None


def test_auto_theta_values(gr26, sym3):
    assert find_generic_theta(gr26) == vec("-3/4", "-3/4")
    assert find_generic_theta(sym3) == vec("-3/4", "-3/4")
    assert find_generic_theta(RepSpec.grassmannian(10)) == vec("-5/3", "-5/3")


@given(pts)
def test_regions_are_nested(chi):
    region = make_window(RepSpec.grassmannian(6), theta=vec("-3/4", "-3/4"))
    if region.in_barrel(chi):
        assert region.in_cylinder(chi)
    if region.in_cylinder(chi):
        assert region.in_strip(chi)
    for t in (Fraction(1, 2), Fraction(1, 64)):
        if region.in_perturbed(chi, t):
            assert region.in_cylinder(chi)


@given(pts)
def test_gl2_windows_are_weyl_symmetric(chi):
    region = make_window(RepSpec.grassmannian(6), theta=vec("-3/4", "-3/4"))
    mirrored = Vec2(chi.b, chi.a)
    assert region.in_barrel(chi) == region.in_barrel(mirrored)
    assert region.in_cylinder(chi) == region.in_cylinder(mirrored)


def test_genericity_is_exact_not_sampled(gr26):
    region = make_window(gr26)
    half = Fraction(1, 2)
    for theta in (vec("-3/4", "-3/4"), vec("-1/7", "-1/7"), vec(0, 0), vec("-1/2", "-1/2")):
        shifted = region.with_theta(theta)
        report = check_generic(shifted)
        zetas = (shifted.dplus.zeta, shifted.dminus.zeta, shifted.dzero.zeta)
        hit = any(
            pair(shifted.lambda0, x - theta - z * half) == 0 for x in shifted.box_points(4) for z in zetas
        )
        if report.is_generic:
            assert not hit
        else:
            assert report.witness.is_integral
            assert pair(shifted.lambda0, report.witness - theta - report.zeta * half) == 0


def test_enumeration_refuses_nongeneric_theta(gr26):
    with pytest.raises(HypothesisError) as err:
        enumerate_window_irreps(make_window(gr26))
    assert err.value.anchor == "lambda0-generic"


def test_labels_are_sorted_by_central_weight(gr26_window):
    labels = enumerate_window_irreps(gr26_window)
    weights = [pair(gr26_window.lambda0, c) for c in labels]
    assert weights == sorted(weights, reverse=True)
    assert all(c.a >= c.b for c in labels)


def test_classification_rows(gr26_window):
    rows = classify_points(gr26_window)
    assert set(rows[0]) == {"a", "b", "in_strip", "in_cylinder", "in_barrel", "dominant"}
    barrel = sum(r["in_barrel"] for r in rows)
    assert barrel == len(gr26_window.lattice_points(gr26_window.in_barrel))


def test_window_kinds(gr26):
    region = make_window(gr26, kind=CYLINDER)
    assert region.contains(vec(3, 3)) == region.in_cylinder(vec(3, 3))
    with pytest.raises(ValueError):
        make_window(gr26, kind="Sphere")
    assert make_window(gr26).kind == BARREL
