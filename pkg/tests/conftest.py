from __future__ import annotations

import random

import pytest

from qtlift.dergroup import DerivationSpec
from qtlift.interlace import IEContext
from qtlift.qtorus import TorusContext


def q2_torus():
    return TorusContext(2, 1, {(1, 2): "2"})


def zeta4_torus():
    return TorusContext(2, 4, {(1, 2): "z"})


def degree_basis(T):
    return [DerivationSpec.degree(T, [int(i == k) for i in range(T.n)]) for k in range(T.n)]


def bgk_context(ell=2):
    T = TorusContext(3, 1)
    D = degree_basis(T)
    for xi in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)):
        D.append(DerivationSpec.centroidal(T, xi, [0, 0, 1]))
    return IEContext(T, ell, D, tau="bgk")


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture(scope="session")
def q2():
    return q2_torus()


@pytest.fixture(scope="session")
def z4():
    return zeta4_torus()


@pytest.fixture(params=["q2", "zeta4"], scope="session")
def torus(request):
    return q2_torus() if request.param == "q2" else zeta4_torus()


@pytest.fixture(scope="session")
def ie_q2(q2):
    return IEContext(q2, 2, degree_basis(q2))


@pytest.fixture(scope="session")
def ie_bgk():
    return bgk_context()
