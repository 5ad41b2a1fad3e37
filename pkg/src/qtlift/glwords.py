"""GL_l(Q) elements as words in elementary transvections and diagonal units.

GL elements are never inverted as raw matrices: a word's inverse is the
reversed word of generator inverses.  :func:`normalize_word` rewrites a word
as diag(u, 1, ..., 1) times an elementary-only word (a constructive Whitehead
reduction), and every such rewrite is checked by exact matrix multiplication.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from .dergroup import DerivationSpec, der_apply_matrix
from .errors import IndexClash, InvariantViolation, NotAUnit, SizeMismatch
from .matlie import MatrixOverTorus, sl_membership
from .qtorus import (TorusContext, TorusElement, format_element, is_unit, parse_element,
                     unit_inverse)


@dataclass(frozen=True, eq=False)
class Elementary:
    """E + a E_ij (1-based, i != j)."""
    i: int
    j: int
    a: TorusElement

    def __post_init__(self):
        if self.i == self.j:
            raise IndexClash(f"elementary generator needs i != j, got ({self.i}, {self.j})")

    def inverse(self) -> Elementary:
        return Elementary(self.i, self.j, -self.a)

    def matrix(self, size: int) -> MatrixOverTorus:
        ctx = self.a.ctx
        return MatrixOverTorus.identity(ctx, size) + MatrixOverTorus.unit(ctx, size, self.i, self.j, self.a)

    def __eq__(self, other):
        return (isinstance(other, Elementary) and (self.i, self.j) == (other.i, other.j)
                and self.a == other.a)

    def __str__(self):
        return f'E({self.i},{self.j},"{format_element(self.a)}")'


@dataclass(frozen=True, eq=False)
class DiagUnit:
    """diag(1, ..., u, ..., 1) with u at position i."""
    i: int
    u: TorusElement

    def __post_init__(self):
        if is_unit(self.u) is None:
            raise NotAUnit(f"{self.u!r} is not a unit")

    def inverse(self) -> DiagUnit:
        return DiagUnit(self.i, unit_inverse(self.u))

    def matrix(self, size: int) -> MatrixOverTorus:
        ctx = self.u.ctx
        ent = [ctx.one] * size
        ent[self.i - 1] = self.u
        return MatrixOverTorus.diag(ctx, ent)

    def __eq__(self, other):
        return isinstance(other, DiagUnit) and self.i == other.i and self.u == other.u

    def __str__(self):
        return f'D({self.i},"{format_element(self.u)}")'


GLGenerator = Union[Elementary, DiagUnit]


@dataclass(frozen=True, eq=False)
class GLWord:
    ctx: TorusContext
    size: int
    gens: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        for g in self.gens:
            idx = (g.i, g.j) if isinstance(g, Elementary) else (g.i,)
            if not all(1 <= k <= self.size for k in idx):
                raise SizeMismatch(f"generator {g} does not fit size {self.size}")

    def __mul__(self, other: GLWord) -> GLWord:
        if other.size != self.size:
            raise SizeMismatch(f"words of size {self.size} and {other.size}")
        return GLWord(self.ctx, self.size, self.gens + other.gens)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def is_elementary(self) -> bool:
        return all(isinstance(g, Elementary) for g in self.gens)

    def embed(self, size: int) -> GLWord:
        if size < self.size:
            raise SizeMismatch("cannot embed into a smaller size")
        return GLWord(self.ctx, size, self.gens)

    def __str__(self):
        return " ".join(str(g) for g in self.gens) or "()"

    def to_json(self) -> dict:
        return {"size": self.size, "word": str(self)}


_WTOKEN = re.compile(r'\s*([ED])\(\s*(\d+)\s*,\s*(?:(\d+)\s*,\s*)?"([^"]*)"\s*\)\s*')


def parse_word(ctx: TorusContext, size: int, text: str) -> GLWord:
    """Parse ``E(i,j,"elem") D(i,"unit") ...`` (left-to-right product)."""
    gens = []
    pos = 0
    text = text.strip()
    if text in ("", "()"):
        return GLWord(ctx, size, ())
    while pos < len(text):
        m = _WTOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        kind, a, b, body = m.groups()
        elem = parse_element(ctx, body)
        if kind == "E":
            if b is None:
                raise ValueError(f"E token needs two indices: {m.group(0)!r}")
            gens.append(Elementary(int(a), int(b), elem))
        else:
            if b is not None:
                raise ValueError(f"D token takes one index: {m.group(0)!r}")
            gens.append(DiagUnit(int(a), elem))
        pos = m.end()
    return GLWord(ctx, size, gens)


def word_to_matrix(w: GLWord) -> MatrixOverTorus:
    out = MatrixOverTorus.identity(w.ctx, w.size)
    for g in w.gens:
        out = out * g.matrix(w.size)
    return out


def word_inverse(w: GLWord) -> GLWord:
    return GLWord(w.ctx, w.size, tuple(g.inverse() for g in reversed(w.gens)))


def int_apply(w: GLWord, x: MatrixOverTorus) -> MatrixOverTorus:
    """Int(g)(x) = g x g^-1."""
    if x.size != w.size:
        raise SizeMismatch(f"word of size {w.size} acting on a {x.size}x{x.size} matrix")
    return word_to_matrix(w) * x * word_to_matrix(word_inverse(w))


def commutator_word(w1: GLWord, w2: GLWord) -> GLWord:
    """[[g1, g2]] = g1 g2 g1^-1 g2^-1."""
    return w1 * w2 * word_inverse(w1) * word_inverse(w2)


def elementary_commutator_identity(i: int, j: int, l: int, a, size: int | None = None,
                                   ctx: TorusContext | None = None) -> GLWord:
    """The word [[E + a E_ij, E + E_jl]], whose matrix is E + a E_il."""
    if len({i, j, l}) != 3:
        raise IndexClash(f"indices ({i}, {j}, {l}) must be pairwise distinct")
    if ctx is None:
        ctx = a.ctx
    a = ctx.coerce(a)
    size = size or max(i, j, l)
    g1 = GLWord(ctx, size, (Elementary(i, j, a),))
    g2 = GLWord(ctx, size, (Elementary(j, l, ctx.one),))
    w = commutator_word(g1, g2)
    expect = Elementary(i, l, a).matrix(size)
    if word_to_matrix(w) != expect:
        raise InvariantViolation("elementary commutator relation failed")
    return w


def _w(v: TorusElement, i: int, j: int) -> tuple:
    return (Elementary(i, j, v), Elementary(j, i, -unit_inverse(v)), Elementary(i, j, v))


def whitehead_pair(u: TorusElement, i: int, j: int, size: int | None = None) -> GLWord:
    """Elementary word with matrix diag(.., u at i, .., u^-1 at j, ..): w(u) w(-1)."""
    if i == j:
        raise IndexClash("whitehead_pair needs i != j")
    if is_unit(u) is None:
        raise NotAUnit(f"{u!r} is not a unit")
    ctx = u.ctx
    size = size or max(i, j)
    return GLWord(ctx, size, _w(u, i, j) + _w(-ctx.one, i, j))


def _conj_elementary(g: Elementary, left: Sequence[TorusElement], right: Sequence[TorusElement]) -> Elementary:
    return Elementary(g.i, g.j, left[g.i - 1] * g.a * right[g.j - 1])


def _diag_matrix(ctx, size, ent) -> MatrixOverTorus:
    return MatrixOverTorus.diag(ctx, list(ent) + [ctx.one] * (size - len(ent)))


def normalize_word(w: GLWord) -> tuple[TorusElement, GLWord]:
    """Return (u, e) with matrix(w) = diag(u, 1, ..., 1) * matrix(e), e elementary-only."""
    ctx, size = w.ctx, w.size
    delta = [ctx.one] * size
    elem: list[Elementary] = []
    for g in w.gens:
        if isinstance(g, Elementary):
            elem.append(g)
            continue
        # delta e D = (delta D) (D^-1 e D)
        dinv = [ctx.one] * size
        dmat = [ctx.one] * size
        dinv[g.i - 1] = unit_inverse(g.u)
        dmat[g.i - 1] = g.u
        elem = [_conj_elementary(e, dinv, dmat) for e in elem]
        delta[g.i - 1] = delta[g.i - 1] * g.u
    # diag(.., a, b) = diag(.., ab, 1) diag(b^-1, b), right to left
    prefix: list = []
    for k in range(size - 1, 0, -1):
        b = delta[k]
        if b != ctx.one:
            prefix = list(whitehead_pair(unit_inverse(b), k, k + 1, size).gens) + prefix
            delta[k - 1] = delta[k - 1] * b
            delta[k] = ctx.one
    u = delta[0]
    e = GLWord(ctx, size, tuple(prefix) + tuple(elem))
    if _diag_matrix(ctx, size, [u]) * word_to_matrix(e) != word_to_matrix(w):
        raise InvariantViolation("normalize_word certificate failed")
    return u, e


def stabilize(w: GLWord, m: int = 0) -> tuple[TorusElement, GLWord]:
    """Return (u, e) with diag(matrix(w), E_m) diag(u, E) = matrix(e), e elementary in EL_{l+m}."""
    if m < 0:
        raise ValueError("m must be >= 0")
    ctx, size = w.ctx, w.size
    uw, ew = normalize_word(w)
    u = unit_inverse(uw)
    # diag(uw) e diag(uw^-1) is elementary: conjugate generator by generator
    left = [uw] + [ctx.one] * (size - 1)
    right = [u] + [ctx.one] * (size - 1)
    e = GLWord(ctx, size + m, tuple(_conj_elementary(g, left, right) for g in ew.gens))
    big = size + m
    lhs = word_to_matrix(w.embed(big)) * _diag_matrix(ctx, big, [u])
    if lhs != word_to_matrix(e):
        raise InvariantViolation("stabilize certificate failed")
    return u, e


def hd_membership(w: GLWord, D: Sequence[DerivationSpec]) -> bool:
    """g in H_D iff (d g) g^-1 lies in sl_l(Q) for every d in D."""
    g = word_to_matrix(w)
    ginv = word_to_matrix(word_inverse(w))
    return all(sl_membership(der_apply_matrix(d, g) * ginv) for d in D)


def random_elementary_word(ctx: TorusContext, size: int, rng, length: int = 4,
                           bound: int = 1, terms: int = 2) -> GLWord:
    from .qtorus import random_element
    gens = []
    for _ in range(length):
        i, j = rng.sample(range(1, size + 1), 2)
        gens.append(Elementary(i, j, random_element(ctx, rng, max_terms=terms, bound=bound, coeff_range=2)))
    return GLWord(ctx, size, gens)


def random_word(ctx: TorusContext, size: int, rng, length: int = 5, bound: int = 1,
                terms: int = 2) -> GLWord:
    """Random word mixing elementary generators and diagonal monomial units."""
    from .qtorus import random_element, random_unit
    gens = []
    for _ in range(length):
        if rng.random() < 0.35:
            gens.append(DiagUnit(rng.randint(1, size), random_unit(ctx, rng, bound)))
        else:
            i, j = rng.sample(range(1, size + 1), 2)
            gens.append(Elementary(i, j, random_element(ctx, rng, max_terms=terms, bound=bound, coeff_range=2)))
    return GLWord(ctx, size, gens)
