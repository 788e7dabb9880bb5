from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from barrelwin.config import load_config, parse_config, parse_vec, split_list
from barrelwin.errors import ConfigError
from barrelwin.lattice import vec
from barrelwin.stability import PerturbedPolarization

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_parse_helpers():
    assert parse_vec("(1/2, -3)") == vec("1/2", -3)
    assert split_list("[2*(1,0), (0,1)]") == ["(1,0)", "(1,0)", "(0,1)"]
    with pytest.raises(ValueError):
        parse_vec("(0.5, 1)")


def test_parse_full_config():
    cfg = parse_config(
        "group = torus\nweights = [(4,0),(3,1),(2,2),(1,3),(0,4)]\n"
        "ell = anticanonical+eps(1,-1)\ntheta = (-1/3,-1/3)\nseed_box = 2\n"
    )
    rep = cfg.rep()
    assert len(rep.weights) == 5 and cfg.seed_box == 2
    assert cfg.theta == vec("-1/3", "-1/3")
    ell = cfg.polarization(rep)
    assert isinstance(ell, PerturbedPolarization) and ell.direction == vec(1, -1)


def test_gl2_summands_config():
    cfg = parse_config("group = gl2\ngl2_summands = [6*(1,0)]\n")
    assert cfg.rep().dim == 12 and cfg.theta is None


@pytest.mark.parametrize(
    "text,line,field",
    [
        ("group = gl2\nweights = [(1,0)]\ngl2_summands = [(1,0)]\n", None, None),
        ("group = gl2\ngl2_summands = [(1,0)\n", 2, "gl2_summands"),
        ("group = torus\nweights = [(1,0)]\ncolour = red\n", 3, "colour"),
        ("group = torus\nweights = [(1,0)]\ntheta = (0.5,0)\n", 3, "theta"),
        ("group = torus\nweights = [(1/2,0)]\n", 2, "weights"),
        ("group = sl3\nweights = [(1,0)]\n", 1, "group"),
        ("group = torus\nweights = [(1,0)]\nseed_box = 1/2\n", 3, "seed_box"),
        ("group = torus\nweights = [(1,0)]\njunk\n", 3, None),
    ],
)
def test_config_errors_carry_location(text, line, field):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.line == line and err.value.field == field


def test_bundled_configs_parse():
    for path in sorted(CONFIGS.glob("*.cfg")):
        cfg = load_config(path)
        assert cfg.name == path.stem


def test_quiver_config():
    cfg = load_config(CONFIGS / "flag_quiver.cfg")
    assert cfg.quiver.ranks == [2, 2] and cfg.quiver.arrows == [(0, 1)]
    assert cfg.quiver.det_powers == [Fraction(1), Fraction(1)]
