from __future__ import annotations

import pytest
from hypothesis import settings

from barrelwin.group import RepSpec, anticanonical
from barrelwin.lattice import vec
from barrelwin.stability import PerturbedPolarization
from barrelwin.windows import find_boundary_generic_theta, find_generic_theta, make_window

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def _generic(rep):
    return make_window(rep, theta=find_generic_theta(rep))


@pytest.fixture(scope="session")
def gr26():
    return RepSpec.grassmannian(6)


@pytest.fixture(scope="session")
def gr26_window(gr26):
    return _generic(gr26)


@pytest.fixture(scope="session")
def gr210_window():
    return _generic(RepSpec.grassmannian(10))


@pytest.fixture(scope="session")
def sym3():
    return RepSpec.gl2([(3, 0)])


@pytest.fixture(scope="session")
def sym3_window(sym3):
    return _generic(sym3)


@pytest.fixture(scope="session")
def sym4_torus():
    return RepSpec.torus([vec(4 - k, k) for k in range(5)])


@pytest.fixture(scope="session")
def sym4_nef_window(sym4_torus):
    ell = PerturbedPolarization(anticanonical(sym4_torus), vec(1, -1))
    return make_window(sym4_torus, ell, theta=find_boundary_generic_theta(sym4_torus, ell))


@pytest.fixture(scope="session")
def p1xp1():
    return RepSpec.torus([vec(1, 0), vec(1, 0), vec(0, 1), vec(0, 1)])


@pytest.fixture(scope="session")
def weighted_hirzebruch():
    return RepSpec.torus([vec(1, 0), vec(2, 0), vec(1, 1), vec(0, 1)])
