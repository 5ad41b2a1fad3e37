from __future__ import annotations

import random

import pytest

from qtlift.dergroup import DerivationSpec
from qtlift.errors import IndexClash, NotAUnit, SizeMismatch
from qtlift.glwords import (DiagUnit, Elementary, GLWord, _diag_matrix, commutator_word,
                            elementary_commutator_identity, hd_membership, int_apply,
                            normalize_word, parse_word, random_elementary_word, random_word,
                            stabilize, whitehead_pair, word_inverse, word_to_matrix)
from qtlift.matlie import MatrixOverTorus, random_sl, sl_membership
from qtlift.dergroup import der_apply_matrix

from conftest import degree_basis

U = MatrixOverTorus.unit


def test_word_to_matrix_examples(q2):
    a = q2.monomial((1, -1), 3)
    assert word_to_matrix(GLWord(q2, 2, [Elementary(1, 2, a)])) == MatrixOverTorus.identity(q2, 2) + U(q2, 2, 1, 2, a)
    w = parse_word(q2, 2, 'E(1,2,"1") E(2,1,"-1") E(1,2,"1")')
    assert word_to_matrix(w) == U(q2, 2, 1, 2) - U(q2, 2, 2, 1)
    assert word_to_matrix(GLWord(q2, 2, [DiagUnit(1, q2.x(1))])) == MatrixOverTorus.diag(q2, [q2.x(1), 1])


def test_generator_errors(q2):
    with pytest.raises(IndexClash):
        Elementary(1, 1, q2.one)
    with pytest.raises(NotAUnit):
        DiagUnit(1, q2.one + q2.x(1))
    with pytest.raises(SizeMismatch):
        GLWord(q2, 2, [Elementary(1, 3, q2.one)])
    with pytest.raises(SizeMismatch):
        int_apply(GLWord(q2, 2), MatrixOverTorus.zero(q2, 3))


def test_inverse(torus, rng):
    assert word_inverse(GLWord(torus, 2)).gens == ()
    a = torus.x(1)
    assert word_inverse(GLWord(torus, 2, [Elementary(1, 2, a)])).gens == (Elementary(1, 2, -a),)
    for _ in range(10):
        w = random_word(torus, 3, rng, 5)
        assert word_to_matrix(w * word_inverse(w)) == MatrixOverTorus.identity(torus, 3)


def test_int_examples(q2, rng):
    a = q2.monomial((1, 1), 2)
    w = GLWord(q2, 2, [Elementary(1, 2, a)])
    h = U(q2, 2, 1, 1) - U(q2, 2, 2, 2)
    assert int_apply(w, h) == h - U(q2, 2, 1, 2, a).scale(2)
    assert int_apply(GLWord(q2, 2), h) == h
    for _ in range(10):
        w = random_word(q2, 2, rng, 4)
        assert int_apply(w, MatrixOverTorus.identity(q2, 2, 5)) == MatrixOverTorus.identity(q2, 2, 5)
        assert sl_membership(int_apply(w, random_sl(q2, 2, rng)))


def test_int_is_action(torus, rng):
    for _ in range(10):
        w1, w2 = random_word(torus, 2, rng, 3), random_word(torus, 2, rng, 3)
        x = random_sl(torus, 2, rng)
        assert int_apply(w1 * w2, x) == int_apply(w1, int_apply(w2, x))


def test_commutator_identity(q2):
    w = elementary_commutator_identity(1, 2, 3, q2.monomial((2, 1), 3))
    assert word_to_matrix(w) == MatrixOverTorus.identity(q2, 3) + U(q2, 3, 1, 3, q2.monomial((2, 1), 3))
    w = elementary_commutator_identity(2, 3, 1, q2.x(1))
    assert word_to_matrix(w) == MatrixOverTorus.identity(q2, 3) + U(q2, 3, 2, 1, q2.x(1))
    assert word_to_matrix(elementary_commutator_identity(1, 2, 3, q2.zero)) == MatrixOverTorus.identity(q2, 3)
    with pytest.raises(IndexClash):
        elementary_commutator_identity(1, 2, 1, q2.one)


def test_whitehead(q2):
    assert word_to_matrix(whitehead_pair(q2.one, 1, 2)) == MatrixOverTorus.identity(q2, 2)
    u = q2.x(1)
    w = whitehead_pair(u, 1, 2)
    assert w.is_elementary()
    assert word_to_matrix(w) == MatrixOverTorus.diag(q2, [u, q2.monomial((-1, 0))])
    assert word_to_matrix(whitehead_pair(q2.scalar(2), 1, 2)) == MatrixOverTorus.diag(q2, [2, q2.field("1/2")])
    with pytest.raises(NotAUnit):
        whitehead_pair(q2.one + u, 1, 2)


def test_normalize_examples(q2):
    w = parse_word(q2, 2, 'D(1,"x1") E(1,2,"x2")')
    u, e = normalize_word(w)
    assert u == q2.x(1)
    assert e.is_elementary()
    assert _diag_matrix(q2, 2, [u]) * word_to_matrix(e) == word_to_matrix(w)
    w = parse_word(q2, 2, 'E(1,2,"x1") E(2,1,"x2^-1")')
    u, e = normalize_word(w)
    assert u == q2.one and e.gens == w.gens
    w = parse_word(q2, 2, 'D(1,"2") D(2,"3")')
    u, e = normalize_word(w)
    assert u == q2.scalar(6)
    assert _diag_matrix(q2, 2, [u]) * word_to_matrix(e) == word_to_matrix(w)


def test_stabilize_examples(q2):
    w = parse_word(q2, 2, 'E(1,2,"x1")')
    u, e = stabilize(w, 1)
    assert u == q2.one and e.size == 3 and word_to_matrix(e) == word_to_matrix(w.embed(3))
    w = parse_word(q2, 2, 'D(1,"x1")')
    u, e = stabilize(w, 1)
    assert u == q2.monomial((-1, 0))
    assert word_to_matrix(w.embed(3)) * _diag_matrix(q2, 3, [u]) == word_to_matrix(e)
    h = parse_word(q2, 2, 'D(1,"x1") E(1,2,"x2")')
    u, e = stabilize(h)
    g = h * GLWord(q2, 2, [DiagUnit(1, u)])
    assert e.is_elementary() and word_to_matrix(g) == word_to_matrix(e)
    assert word_to_matrix(g) == MatrixOverTorus.identity(q2, 2) + U(q2, 2, 1, 2, q2.x(1) * q2.x(2))


@pytest.mark.parametrize("m", [0, 1, 2])
def test_stabilize_random(torus, m):
    rng = random.Random(m)
    for _ in range(10):
        w = random_word(torus, 2, rng, 5)
        u, e = stabilize(w, m)
        big = 2 + m
        assert e.is_elementary()
        assert word_to_matrix(w.embed(big)) * _diag_matrix(torus, big, [u]) == word_to_matrix(e)


def test_hd_membership(q2, rng):
    D = degree_basis(q2)
    assert hd_membership(GLWord(q2, 2, [Elementary(1, 2, q2.x(1))]), D)
    assert not hd_membership(GLWord(q2, 2, [DiagUnit(1, q2.x(1))]), [DerivationSpec.degree(q2, [1, 0])])
    assert hd_membership(GLWord(q2, 2), D)


def test_hd_equivalent_forms(torus, rng):
    D = degree_basis(torus)
    for _ in range(15):
        w = random_word(torus, 2, rng, 4)
        g, gi = word_to_matrix(w), word_to_matrix(word_inverse(w))
        for d in D:
            dg = der_apply_matrix(d, g)
            assert sl_membership(dg * gi) == sl_membership(gi * dg)


def test_hd_subgroup(q2, rng):
    D = degree_basis(q2)
    for _ in range(10):
        g1, g2 = random_word(q2, 2, rng, 3), random_word(q2, 2, rng, 3)
        assert hd_membership(commutator_word(g1, g2), D)
        if hd_membership(g1, D):
            assert hd_membership(word_inverse(g1), D)
            if hd_membership(g2, D):
                assert hd_membership(g1 * g2, D)


def test_elementary_commutators_normalize_to_unit_one(q2, rng):
    for _ in range(10):
        g1 = random_elementary_word(q2, 3, rng, 3)
        g2 = random_elementary_word(q2, 3, rng, 3)
        u, e = normalize_word(commutator_word(g1, g2))
        assert u == q2.one and e.is_elementary()


def test_parse_word_errors(q2):
    with pytest.raises(ValueError):
        parse_word(q2, 2, 'E(1,"x1")')
    with pytest.raises(ValueError):
        parse_word(q2, 2, 'Q(1,2,"x1")')
    assert str(parse_word(q2, 2, 'E(1,2,"x1") D(2,"2")')) == 'E(1,2,"x1") D(2,"2")'
