from __future__ import annotations

import pytest

from qtlift.errors import NotAUnit, NotCentral, SizeMismatch
from qtlift.matlie import (MatrixOverTorus, beta_eps, centroid_action, forms_check, h_st,
                           lie_torus_axioms_check, mat_bracket, random_gl, random_sl, root_grade,
                           sl2_triple, sl_membership, split_gl)
from qtlift.qtorus import TorusContext, random_element, split_center_commutator

from conftest import zeta4_torus

U = MatrixOverTorus.unit


def test_products(q2):
    assert U(q2, 2, 1, 2) * U(q2, 2, 2, 1) == U(q2, 2, 1, 1)
    h = U(q2, 2, 1, 1) - U(q2, 2, 2, 2)
    a = q2.monomial((1, -1), 3)
    assert mat_bracket(h, U(q2, 2, 1, 2, a)) == U(q2, 2, 1, 2, a).scale(2)
    x1, x2 = q2.monomial((1, 0)), q2.monomial((0, 1))
    got = mat_bracket(U(q2, 2, 1, 2, x1), U(q2, 2, 2, 1, x2))
    assert got == U(q2, 2, 1, 1, q2.monomial((1, 1))) - U(q2, 2, 2, 2, q2.monomial((1, 1), "1/2"))
    with pytest.raises(SizeMismatch):
        U(q2, 2, 1, 2) * U(q2, 3, 1, 2)


def test_sl_membership(q2):
    assert sl_membership(U(q2, 2, 1, 1) - U(q2, 2, 2, 2))
    assert not sl_membership(U(q2, 2, 1, 1))
    assert sl_membership(U(q2, 2, 1, 1, q2.x(1)))


def test_beta_examples(q2):
    assert beta_eps(U(q2, 2, 1, 2), U(q2, 2, 2, 1)) == 1
    assert beta_eps(U(q2, 2, 1, 2, q2.monomial((1, 1))), U(q2, 2, 2, 1, q2.monomial((-1, -1)))) == 2
    assert beta_eps(U(q2, 2, 1, 2), U(q2, 2, 1, 2)) == 0


def test_beta_is_constant_term_of_trace(torus, rng):
    for _ in range(50):
        x, y = random_gl(torus, 3, rng), random_gl(torus, 3, rng)
        assert beta_eps(x, y) == (x * y).trace().coeff((0, 0))


def test_root_grade(q2):
    x1 = q2.x(1)
    assert set(root_grade(U(q2, 2, 1, 2, x1))) == {(1, 2, (1, 0))}
    assert set(root_grade(U(q2, 2, 1, 1) - U(q2, 2, 2, 2))) == {(1, 1, (0, 0)), (2, 2, (0, 0))}
    assert len(root_grade(U(q2, 2, 1, 2, x1) + U(q2, 2, 2, 1, q2.x(2)))) == 2


def test_sl2_triple(q2):
    e, h, f = sl2_triple(q2.one, 1, 2)
    assert (e, h, f) == (U(q2, 2, 1, 2), U(q2, 2, 1, 1) - U(q2, 2, 2, 2), U(q2, 2, 2, 1))
    e, h, f = sl2_triple(q2.x(1), 1, 2)
    assert mat_bracket(e, f) == h
    with pytest.raises(NotAUnit):
        sl2_triple(q2.one + q2.x(1), 1, 2)


def test_centroid_action():
    z4 = zeta4_torus()
    x = U(z4, 2, 1, 2, z4.x(2))
    z = z4.monomial((4, 0))
    assert centroid_action(z4.one, x) == x
    assert centroid_action(z4.scalar(3), U(z4, 2, 1, 2)) == U(z4, 2, 1, 2).scale(3)
    f = z4.bicharacter((4, 0), (0, 1))
    assert centroid_action(z, x) == U(z4, 2, 1, 2, z4.monomial((4, 1), f))
    with pytest.raises(NotCentral):
        centroid_action(z4.x(1), x)


def test_centroid_commutes_with_brackets(z4, rng):
    z = z4.monomial((4, -4), 2)
    for _ in range(30):
        x, y = random_sl(z4, 2, rng), random_sl(z4, 2, rng)
        assert centroid_action(z, mat_bracket(x, y)) == mat_bracket(centroid_action(z, x), y)


def test_centre_of_trace_commutes(torus, rng):
    for _ in range(50):
        x, y = random_gl(torus, 2, rng), random_gl(torus, 2, rng)
        assert split_center_commutator((x * y).trace())[0] == split_center_commutator((y * x).trace())[0]


def test_centralizer_identity(z4, rng):
    for _ in range(20):
        z = z4.monomial((4 * rng.randint(-1, 1), 4 * rng.randint(-1, 1)), rng.randint(1, 5))
        zE = MatrixOverTorus.identity(z4, 3, z)
        assert all(not mat_bracket(zE, random_gl(z4, 3, rng)) for _ in range(5))
    d = MatrixOverTorus.diag(z4, [z4.x(1), z4.one, z4.one])
    assert mat_bracket(d, U(z4, 3, 1, 2)) != MatrixOverTorus.zero(z4, 3)


def test_split_gl(torus, rng):
    for _ in range(50):
        x = random_gl(torus, 3, rng)
        z, s = split_gl(x)
        assert MatrixOverTorus.identity(torus, 3, z) + s == x
        assert sl_membership(s)


def test_h_st(q2):
    assert h_st(q2, 3, [1, -2, 1]) == MatrixOverTorus.diag(q2, [1, -2, 1])
    with pytest.raises(ValueError):
        h_st(q2, 2, [1, 1])


@pytest.mark.parametrize("ell", [2, 3])
def test_lie_torus_axioms(torus, ell):
    rep = lie_torus_axioms_check(torus, ell, bound=2, samples=100)
    assert rep.passed, rep.failed()


def test_lie_torus_untwisted_sl3():
    rep = lie_torus_axioms_check(TorusContext(1), 3, bound=1, samples=50)
    assert rep.passed


def test_gl_diagnostic_fails_centre(q2):
    rep = lie_torus_axioms_check(q2, 2, bound=1, samples=20, algebra="gl")
    assert "centreless" in rep.failed()


def test_forms(torus):
    rep = forms_check(torus, 2, samples=100)
    assert rep.passed, rep.failed()
