from __future__ import annotations

import cmath
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtlift.errors import DivisionByZero, ZeroInput
from qtlift.scalars import cyclotomic_polynomial, field, root_of_unity_order, scalar_arith


def approx(a):
    """Numerical value of a scalar (oracle only)."""
    z = cmath.exp(2j * cmath.pi / a.field.m)
    return sum(float(c) * z ** k for k, c in enumerate(a.c))


def scalars(m):
    F = field(m)
    fr = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.lists(fr, min_size=F.deg, max_size=F.deg).map(F)


def test_rational_add():
    F = field(1)
    assert scalar_arith(F("1/2"), F("1/3"), "add") == F("5/6")


def test_zeta_squared():
    F = field(4)
    assert F.zeta * F.zeta == F(-1)


def test_inverse_one_plus_zeta():
    F = field(4)
    a = F.one + F.zeta
    assert a.inverse() == (F.one - F.zeta) / 2
    assert a * a.inverse() == F.one


def test_division_by_zero():
    F = field(3)
    with pytest.raises(DivisionByZero):
        F.one / F.zero
    with pytest.raises(DivisionByZero):
        scalar_arith(F.one, F.zero, "div")


@pytest.mark.parametrize("m,expected", [(1, (-1, 1)), (2, (1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)),
                                        (12, (1, 0, -1, 0, 1))])
def test_cyclotomic_polynomial(m, expected):
    assert cyclotomic_polynomial(m) == expected


def test_cyclotomic_roots_numerically():
    for m in range(1, 13):
        phi = cyclotomic_polynomial(m)
        z = cmath.exp(2j * cmath.pi / m)
        assert abs(sum(c * z ** k for k, c in enumerate(phi))) < 1e-9


def test_root_of_unity_order_examples():
    assert root_of_unity_order(field(1).one) == 1
    assert root_of_unity_order(field(1)(2)) is None
    assert root_of_unity_order(field(1)(-1)) == 2
    assert root_of_unity_order(field(4).zeta) == 4
    assert root_of_unity_order(-field(3).zeta) == 6
    with pytest.raises(ZeroInput):
        root_of_unity_order(field(4).zero)


@pytest.mark.parametrize("m", [3, 4, 5, 6, 8, 12])
def test_root_of_unity_order_minimal(m):
    F = field(m)
    for k in range(2 * m):
        a = F.zeta_pow(k) * (-1 if k % 3 == 0 else 1)
        r = root_of_unity_order(a)
        assert r is not None
        assert a ** r == 1
        assert all(a ** s != 1 for s in range(1, r))


@pytest.mark.parametrize("m", [1, 3, 4, 5, 12])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_axioms(m, data):
    F = field(m)
    a, b, c = (data.draw(scalars(m)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == F.zero
    if a:
        assert a * a.inverse() == F.one
        assert (b / a) * a == b
    assert a.normalized() == a


@pytest.mark.parametrize("m", [3, 4, 5, 8])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_matches_complex_evaluation(m, data):
    a, b = data.draw(scalars(m)), data.draw(scalars(m))
    assert abs(approx(a * b) - approx(a) * approx(b)) < 1e-6
    assert abs(approx(a + b) - approx(a) - approx(b)) < 1e-6


@pytest.mark.parametrize("m", [1, 4, 6])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_text_round_trip(m, data):
    a = data.draw(scalars(m))
    assert field(m).parse(str(a)) == a


def test_canonical_rationals():
    F = field(1)
    a = F(Fraction(6, -4))
    assert str(a) == "-3/2"


def test_pure_python_backend_agrees():
    code = ("from qtlift._rational import BACKEND; from qtlift.scalars import field; F=field(4);"
            "a=(F.one+F.zeta)**5/3; print(BACKEND, a)")
    env = dict(os.environ, QTLIFT_PURE_PYTHON="1")
    pure = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert pure.stdout.split()[0] == "fraction"
    F = field(4)
    assert pure.stdout.split(maxsplit=1)[1].strip() == str((F.one + F.zeta) ** 5 / 3)
