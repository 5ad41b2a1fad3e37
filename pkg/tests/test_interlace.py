from __future__ import annotations

import random

import pytest

from qtlift.dergroup import DerivationSpec
from qtlift.errors import InvariantViolation, NotClosed, WrongTauMode
from qtlift.interlace import (IEContext, IEElement, cocycle_check, core_of, eala_axiom_check,
                              eala_build, free_bgk_check, ie_bracket, lie_algebra_check,
                              random_homogeneous, random_ie, sigma, tau_bgk, tau_bgk_value)
from qtlift.matlie import MatrixOverTorus, beta_eps, mat_bracket, random_sl
from qtlift.qtorus import TorusContext

from conftest import bgk_context, degree_basis

U = MatrixOverTorus.unit


def test_sigma_examples(ie_q2):
    T = ie_q2.torus
    assert not sigma(ie_q2, U(T, 2, 1, 2), U(T, 2, 2, 1))
    got = sigma(ie_q2, U(T, 2, 1, 2, T.x(1)), U(T, 2, 2, 1, T.monomial((-1, 0))))
    assert got(0) == 1 and got(1) == 0
    rng = random.Random(3)
    for _ in range(30):
        l = random_homogeneous(ie_q2, rng).l
        assert not sigma(ie_q2, l, l)


def test_sigma_matches_reference(ie_q2, rng):
    for _ in range(100):
        a, b = random_sl(ie_q2.torus, 2, rng), random_sl(ie_q2.torus, 2, rng)
        assert ie_q2.sigma(a, b) == ie_q2.sigma_reference(a, b)


def test_tau_bgk_examples():
    assert tau_bgk_value((1, -1), (1, 1), (-1, 1), (1, 1), (0, 0), (1, 0)) == 0
    assert tau_bgk_value((1, 0), (0, 1), (0, 1), (1, 0), (0, 0), (1, 1)) == 0
    assert tau_bgk_value((1, 0, 0), (0, 0, 1), (0, 1, 0), (0, 0, 1), (0, 0, 0), (1, 1, 1)) == 0
    ctx = bgk_context()
    for a in ctx.d0:
        for b in range(ctx.dim_D):
            assert not tau_bgk(ctx, a, b)


def test_tau_wrong_mode(ie_q2):
    with pytest.raises(WrongTauMode):
        tau_bgk(ie_q2, 0, 1)


def test_free_bgk_identities():
    rep = free_bgk_check(3, samples=100, rng=random.Random(0))
    assert rep.passed, rep.failed()


def test_bracket_examples(ie_q2):
    T = ie_q2.torus
    a = ie_q2.from_l(U(T, 2, 1, 2, T.x(1)))
    b = ie_q2.from_l(U(T, 2, 2, 1, T.x(2)))
    got = ie_bracket(a, b)
    assert got.l == mat_bracket(a.l, b.l) and not got.c and not got.d
    d = ie_q2.from_d({0: 1})
    x = U(T, 2, 1, 2, T.monomial((2, 1)))
    assert ie_bracket(d, ie_q2.from_l(x)) == ie_q2.from_l(x.scale(2))
    rng = random.Random(5)
    for _ in range(20):
        e = random_ie(ie_q2, rng)
        assert not ie_bracket(e, e)


def test_core_bracket_c_part_is_sigma(ie_q2, rng):
    for _ in range(50):
        a, b = random_sl(ie_q2.torus, 2, rng), random_sl(ie_q2.torus, 2, rng)
        assert ie_q2.bracket(ie_q2.from_l(a), ie_q2.from_l(b)).c == ie_q2.sigma(a, b)


@pytest.mark.parametrize("s", ["3", "-1/2"])
def test_scaling_isomorphism(q2, s, rng):
    ctx1 = IEContext(q2, 2, degree_basis(q2))
    ctxs = IEContext(q2, 2, degree_basis(q2), s=q2.field(s))
    S = q2.field(s)

    def phi(e):
        return IEElement(ctxs, e.l, e.c.scale(S), e.d)

    for _ in range(50):
        a, b = random_ie(ctx1, rng), random_ie(ctx1, rng)
        assert phi(ctx1.bracket(a, b)) == ctxs.bracket(phi(a), phi(b))


def test_form_properties(ie_q2, rng):
    for _ in range(50):
        a, b, c = (random_ie(ie_q2, rng) for _ in range(3))
        f = ie_q2.form
        assert f(a, b) == f(b, a)
        assert f(ie_q2.bracket(a, b), c) == f(a, ie_q2.bracket(b, c))
        assert f(ie_q2.from_l(a.l), ie_q2.from_l(b.l)) == beta_eps(a.l, b.l)


def test_build_dimensions(ie_q2):
    E = eala_build(ie_q2)
    assert E.h_dim == 5
    T1 = TorusContext(1)
    E1 = eala_build(IEContext(T1, 2, degree_basis(T1)))
    assert E1.h_dim == 3


def test_build_rejects_bad_data(q2, z4):
    with pytest.raises(InvariantViolation):
        IEContext(z4, 2, degree_basis(z4) + [DerivationSpec.centroidal(z4, (4, 0), [1, 0])])
    with pytest.raises(InvariantViolation):
        IEContext(q2, 2, degree_basis(q2), tau="bgk")
    with pytest.raises(InvariantViolation):
        IEContext(q2, 2, degree_basis(q2)[:1])
    T = TorusContext(2)
    with pytest.raises(NotClosed):
        IEContext(T, 2, degree_basis(T) + [DerivationSpec.centroidal(T, (1, 0), [0, 1]),
                                           DerivationSpec.centroidal(T, (0, 1), [1, 0])])


def test_core(ie_q2):
    T = ie_q2.torus
    member = core_of(ie_q2)["member"]
    l = ie_q2.from_l(U(T, 2, 1, 2))
    assert member(l)
    assert not member(ie_q2.from_d({0: 1}))
    c = ie_q2.from_c({1: 1})
    assert member(c) and not ie_q2.to_centreless_core(c)


def test_c0_central(ie_q2, rng):
    for a in ie_q2.d0:
        c = ie_q2.from_c({a: 1})
        for _ in range(20):
            assert not ie_q2.bracket(c, random_ie(ie_q2, rng))


def test_lie_algebra(ie_q2, ie_bgk):
    for ctx in (ie_q2, ie_bgk):
        rep = lie_algebra_check(ctx, samples=60, rng=random.Random(0))
        assert rep.passed, rep.failed()


def test_cocycles(ie_q2, ie_bgk):
    for ctx in (ie_q2, ie_bgk):
        for kind in ("sigma", "tau"):
            rep = cocycle_check(ctx, kind, samples=60, rng=random.Random(0))
            assert rep.passed, rep.failed()


def test_eala_axioms(ie_q2, ie_bgk):
    for ctx in (ie_q2, ie_bgk):
        rep = eala_axiom_check(ctx, bound=2, samples=60, rng=random.Random(0))
        assert rep.passed, rep.failed()


def test_degenerate_form_fails_ea0(q2):
    ctx = IEContext(q2, 2, degree_basis(q2), form="degenerate")
    rep = eala_axiom_check(ctx, bound=1, samples=20, rng=random.Random(0))
    assert "EA0 nondegenerate" in rep.failed()
    assert rep.checks["EA0 nondegenerate"].witness


def test_zeta4_eala(z4):
    D = degree_basis(z4) + [DerivationSpec.centroidal(z4, (4, 0), [0, 1]),
                            DerivationSpec.centroidal(z4, (-4, 0), [0, 1])]
    ctx = IEContext(z4, 2, D)
    assert eala_build(ctx).h_dim == 5
    rep = lie_algebra_check(ctx, samples=40, rng=random.Random(0))
    assert rep.passed, rep.failed()
