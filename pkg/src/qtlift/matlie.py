"""Matrices over a quantum torus: gl_l(Q), sl_l(Q) and their Lie-torus structure."""
from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from .errors import ContextMismatch, NotAUnit, NotCentral, SizeMismatch
from .lattice import subgroup_from_generators
from .qtorus import (TorusContext, TorusElement, is_unit, random_element, random_scalar,
                     split_center_commutator, unit_inverse)
from .report import Report
from .scalars import Scalar


class MatrixOverTorus:
    """Sparse l x l matrix with TorusElement entries.  Keys are 0-based."""

    __slots__ = ("ctx", "size", "entries")

    def __init__(self, ctx: TorusContext, size: int, entries: Mapping | None = None):
        self.ctx = ctx
        self.size = size
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, ctx, size):
        return cls(ctx, size, {})

    @classmethod
    def identity(cls, ctx, size, z=None):
        z = ctx.one if z is None else ctx.coerce(z)
        return cls(ctx, size, {(i, i): z for i in range(size)})

    @classmethod
    def unit(cls, ctx, size, i, j, a=1):
        """a * E_ij with 1-based indices."""
        return cls(ctx, size, {(i - 1, j - 1): ctx.coerce(a)})

    @classmethod
    def diag(cls, ctx, entries):
        entries = [ctx.coerce(a) for a in entries]
        return cls(ctx, len(entries), {(i, i): a for i, a in enumerate(entries)})

    def _co(self, other) -> MatrixOverTorus:
        if not isinstance(other, MatrixOverTorus):
            raise TypeError(f"expected a matrix, got {type(other).__name__}")
        if other.size != self.size:
            raise SizeMismatch(f"{self.size}x{self.size} against {other.size}x{other.size}")
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch("matrices over different quantum tori")
        return other

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        o = self._co(other)
        out = dict(self.entries)
        for k, v in o.entries.items():
            out[k] = out[k] + v if k in out else v
        return MatrixOverTorus(self.ctx, self.size, out)

    def __neg__(self):
        return MatrixOverTorus(self.ctx, self.size, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-self._co(other))

    def scale(self, s) -> MatrixOverTorus:
        s = self.ctx.field(s)
        return MatrixOverTorus(self.ctx, self.size, {k: v.scale(s) for k, v in self.entries.items()})

    def __mul__(self, other):
        if isinstance(other, MatrixOverTorus):
            return mat_mul(self, other)
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, MatrixOverTorus):
            return NotImplemented
        return self.size == other.size and self.entries == other.entries

    __hash__ = None

    def __bool__(self):
        return bool(self.entries)

    def entry(self, i: int, j: int) -> TorusElement:
        """Entry (i, j), 1-based."""
        return self.entries.get((i - 1, j - 1), self.ctx.zero)

    def trace(self) -> TorusElement:
        t = self.ctx.zero
        for (i, j), v in self.entries.items():
            if i == j:
                t = t + v
        return t

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self.entries)

    def embed(self, new_size: int) -> MatrixOverTorus:
        """Block embedding x -> [[x, 0], [0, 0]]."""
        if new_size < self.size:
            raise SizeMismatch("cannot embed into a smaller matrix algebra")
        return MatrixOverTorus(self.ctx, new_size, self.entries)

    def block(self, rows: range, cols: range) -> MatrixOverTorus:
        out = {(i - rows.start, j - cols.start): v for (i, j), v in self.entries.items()
               if i in rows and j in cols}
        return MatrixOverTorus(self.ctx, max(len(rows), len(cols)), out)

    def map_entries(self, fn) -> MatrixOverTorus:
        return MatrixOverTorus(self.ctx, self.size, {k: fn(v) for k, v in self.entries.items()})

    def to_json(self) -> list:
        return [[i + 1, j + 1, v.to_json()] for (i, j), v in sorted(self.entries.items())]

    def __repr__(self):
        if not self.entries:
            return "0"
        return " + ".join(f"({v!r})E{i + 1}{j + 1}" for (i, j), v in sorted(self.entries.items()))


def matrix_from_json(ctx, size, data) -> MatrixOverTorus:
    from .qtorus import element_from_json
    return MatrixOverTorus(ctx, size, {(i - 1, j - 1): element_from_json(ctx, v) for i, j, v in data})


def mat_mul(x: MatrixOverTorus, y: MatrixOverTorus) -> MatrixOverTorus:
    x._co(y)
    rows: dict[int, list] = {}
    for (k, j), v in y.entries.items():
        rows.setdefault(k, []).append((j, v))
    out: dict = {}
    for (i, k), a in x.entries.items():
        for j, b in rows.get(k, ()):
            p = a * b
            if p:
                key = (i, j)
                out[key] = out[key] + p if key in out else p
    return MatrixOverTorus(x.ctx, x.size, out)


def mat_bracket(x: MatrixOverTorus, y: MatrixOverTorus) -> MatrixOverTorus:
    return mat_mul(x, y) - mat_mul(y, x)


def sl_membership(x: MatrixOverTorus) -> bool:
    """Tr(x) lies in [Q, Q]."""
    z, _ = split_center_commutator(x.trace())
    return not z


def split_gl(x: MatrixOverTorus) -> tuple[TorusElement, MatrixOverTorus]:
    """x = z*E + s with z central and s in sl_l(Q)."""
    zt, _ = split_center_commutator(x.trace())
    z = zt.scale(x.ctx.field(1) / x.size)
    return z, x - MatrixOverTorus.identity(x.ctx, x.size, z)


def beta_eps(x: MatrixOverTorus, y: MatrixOverTorus):
    """eps(Tr(xy)): the constant term of the trace of the product."""
    x._co(y)
    ctx = x.ctx
    F = ctx.field
    total = F.zero
    f = ctx._f
    for (i, j), a in x.entries.items():
        b = y.entries.get((j, i))
        if b is None:
            continue
        for lam, c in a.terms.items():
            neg = tuple(-v for v in lam)
            d = b.terms.get(neg)
            if d is not None:
                total = total + c * d * f(lam, neg)
    return total


def root_grade(x: MatrixOverTorus) -> dict:
    """Components keyed by (i, j, lam), 1-based i, j; (i, i, lam) are zero-root parts."""
    out = {}
    for (i, j), v in x.entries.items():
        for lam, c in v.terms.items():
            out[(i + 1, j + 1, lam)] = c
    return out


def homogeneous_degree(x: MatrixOverTorus):
    """(root, lam) if x is homogeneous, root as (i, j) or 0; otherwise None."""
    labels = root_grade(x)
    if not labels:
        return None
    roots = {(i, j) if i != j else 0 for i, j, _ in labels}
    degs = {lam for _, _, lam in labels}
    if len(roots) != 1 or len(degs) != 1:
        return None
    return roots.pop(), degs.pop()


def sl2_triple(a: TorusElement, i: int, j: int, size: int = 2):
    """(e, h, f) = (a E_ij, E_ii - E_jj, a^-1 E_ji); requires a unit."""
    if i == j:
        raise ValueError("sl2 triple needs i != j")
    ctx = a.ctx
    if is_unit(a) is None:
        raise NotAUnit(f"{a!r} is not invertible; a E_{i}{j} is not part of an sl2-triple")
    e = MatrixOverTorus.unit(ctx, size, i, j, a)
    f = MatrixOverTorus.unit(ctx, size, j, i, unit_inverse(a))
    h = MatrixOverTorus.unit(ctx, size, i, i) - MatrixOverTorus.unit(ctx, size, j, j)
    assert mat_bracket(e, f) == h
    assert mat_bracket(h, e) == e.scale(2)
    assert mat_bracket(h, f) == f.scale(-2)
    return e, h, f


def centroid_action(z: TorusElement, x: MatrixOverTorus) -> MatrixOverTorus:
    ctx = x.ctx
    z = ctx.coerce(z)
    for lam in z.degrees():
        if not ctx.is_central_degree(lam):
            raise NotCentral(f"degree {lam} is not in the central grading group")
    return x.map_entries(lambda v: z * v)


def h_st(ctx: TorusContext, size: int, s) -> MatrixOverTorus:
    """sum_i s_i E_ii with scalars s_i summing to zero."""
    s = [ctx.field(v) for v in s]
    if len(s) != size:
        raise SizeMismatch("need one scalar per diagonal entry")
    if sum(s, ctx.field.zero) != 0:
        raise ValueError("standard Cartan elements have scalar trace zero")
    return MatrixOverTorus.diag(ctx, s)


def h_st_basis(ctx: TorusContext, size: int) -> list[MatrixOverTorus]:
    return [MatrixOverTorus.unit(ctx, size, i, i) - MatrixOverTorus.unit(ctx, size, i + 1, i + 1)
            for i in range(1, size)]


def coroot_pairing(beta, alpha) -> int:
    """<beta, alpha^vee> for A-type roots given as (i, j) pairs, 0 for the zero root."""
    if beta == 0 or alpha == 0:
        return 0
    (k, l), (i, j) = beta, alpha
    return (k == i) - (k == j) - (l == i) + (l == j)


def degree_box(n: int, bound: int) -> Iterator[tuple]:
    return itertools.product(range(-bound, bound + 1), repeat=n)


def homogeneous_basis(ctx: TorusContext, size: int, lam, algebra: str = "sl") -> list[MatrixOverTorus]:
    """A basis of the degree-lam part of sl_l(Q) (or gl_l(Q))."""
    x = ctx.monomial(lam)
    out = [MatrixOverTorus(ctx, size, {(i, j): x}) for i in range(size) for j in range(size) if i != j]
    out += [MatrixOverTorus(ctx, size, {(i, i): x, (i + 1, i + 1): -x}) for i in range(size - 1)]
    if algebra == "gl" or not ctx.is_central_degree(lam):
        out.append(MatrixOverTorus(ctx, size, {(0, 0): x}))
    return out


def truncated_basis(ctx, size, bound, algebra="sl") -> list[MatrixOverTorus]:
    out = []
    for lam in degree_box(ctx.n, bound):
        out += homogeneous_basis(ctx, size, lam, algebra)
    return out


def random_sl(ctx: TorusContext, size: int, rng, entries: int = 3, bound: int = 2,
              max_terms: int = 2) -> MatrixOverTorus:
    """Random element of sl_l(Q): the last diagonal entry absorbs the central trace."""
    out = {}
    for _ in range(rng.randint(1, entries)):
        i, j = rng.randrange(size), rng.randrange(size)
        v = random_element(ctx, rng, max_terms, bound)
        out[(i, j)] = out[(i, j)] + v if (i, j) in out else v
    x = MatrixOverTorus(ctx, size, out)
    z, _ = split_center_commutator(x.trace())
    if z:
        x = x - MatrixOverTorus(ctx, size, {(size - 1, size - 1): z})
    return x


def random_gl(ctx: TorusContext, size: int, rng, entries: int = 3, bound: int = 2,
              max_terms: int = 2) -> MatrixOverTorus:
    out = {}
    for _ in range(rng.randint(1, entries)):
        i, j = rng.randrange(size), rng.randrange(size)
        out[(i, j)] = random_element(ctx, rng, max_terms, bound)
    return MatrixOverTorus(ctx, size, out)


def random_homogeneous_sl(ctx: TorusContext, size: int, rng, bound: int = 2) -> MatrixOverTorus:
    """Random element of one graded piece sl_l(Q)_alpha^lam."""
    F = ctx.field
    lam = tuple(rng.randint(-bound, bound) for _ in range(ctx.n))
    x = ctx.monomial(lam)
    if rng.random() < 0.6:
        i, j = rng.sample(range(size), 2)
        return MatrixOverTorus(ctx, size, {(i, j): x.scale(random_scalar(F, rng, nonzero=True))})
    cs = [random_scalar(F, rng) for _ in range(size)]
    if ctx.is_central_degree(lam):
        cs[-1] = -sum(cs[:-1], F.zero)
    return MatrixOverTorus(ctx, size, {(i, i): x.scale(c) for i, c in enumerate(cs)})


def _w(x) -> str:
    return repr(x)


def lie_torus_axioms_check(ctx: TorusContext, size: int, bound: int = 2, samples: int = 200,
                           rng=None, algebra: str = "sl") -> Report:
    """Bounded-degree check of LT1-LT4 (and centrelessness) for sl_l(Q).

    ``algebra="gl"`` runs the same checks on gl_l(Q) as a diagnostic; the
    centre check then fails because Z(Q) E_l is central in gl_l(Q).
    """
    import random as _random

    rng = rng or _random.Random(0)
    rep = Report(f"lie-torus {algebra}_{size}(Q), |lam_i| <= {bound}")
    rep.data.update({"ell": size, "bound": bound, "algebra": algebra, "torus": ctx.info()})
    box = list(degree_box(ctx.n, bound))
    basis = truncated_basis(ctx, size, bound, algebra)
    member = sl_membership if algebra == "sl" else (lambda x: True)
    rep.check("LT0 basis in algebra")
    for b in basis:
        rep.record("LT0 basis in algebra", member(b), _w(b))

    # LT1: [L_a^lam, L_b^mu] in L_{a+b}^{lam+mu}, support in Delta
    for _ in range(samples):
        x = random_homogeneous_sl(ctx, size, rng, bound)
        y = random_homogeneous_sl(ctx, size, rng, bound)
        gx, gy = homogeneous_degree(x), homogeneous_degree(y)
        z = mat_bracket(x, y)
        ok = member(z)
        if ok and z:
            lam = tuple(u + v for u, v in zip(gx[1], gy[1]))
            want = _root_sum(gx[0], gy[0])
            labels = root_grade(z)
            ok = want is not None and all(l == lam for _, _, l in labels) and all(
                ((i, j) if i != j else 0) == want for i, j, _ in labels)
        rep.record("LT1 grading", ok, {"x": _w(x), "y": _w(y), "bracket": _w(z)})

    # LT2(a): one-dimensional root spaces spanned by units, sl2-triples act by coroots
    roots = [(i, j) for i in range(1, size + 1) for j in range(1, size + 1) if i != j]
    for (i, j) in roots:
        h_ref = MatrixOverTorus.unit(ctx, size, i, i) - MatrixOverTorus.unit(ctx, size, j, j)
        for lam in box:
            e, h, f = sl2_triple(ctx.monomial(lam), i, j, size)
            ok = (mat_bracket(e, f) == h_ref and homogeneous_degree(f) == ((j, i), tuple(-v for v in lam)))
            rep.record("LT2a sl2-triples", ok, {"root": (i, j), "lam": lam})
        for xb in basis:
            gb = homogeneous_degree(xb)
            beta = gb[0]
            ok = mat_bracket(h_ref, xb) == xb.scale(coroot_pairing(beta, (i, j)))
            rep.record("LT2a coroot action", ok, {"root": (i, j), "x": _w(xb)})
    # LT2(b): L_alpha^0 != 0
    for (i, j) in roots:
        e0 = MatrixOverTorus.unit(ctx, size, i, j)
        rep.record("LT2b L_alpha^0 nonzero", bool(e0) and member(e0), (i, j))

    # LT3: zero-root parts are sums of brackets of root vectors
    for lam in box:
        x = ctx.monomial(lam)
        for target in homogeneous_basis(ctx, size, lam, algebra):
            if not target.is_diagonal():
                continue
            built = _generate_diagonal(ctx, size, target)
            rep.record("LT3 generation", built is not None and built == target, _w(target))

    # LT4: support generates Lambda
    supp = [lam for lam in box if any(homogeneous_basis(ctx, size, lam, algebra))]
    S = subgroup_from_generators(supp, ctx.n)
    rep.record("LT4 support generates Lambda", S.index == 1, {"index": S.index})

    # centre: z E_l is the only candidate (centraliser identity); it must not lie in L
    ok = True
    wit = None
    for lam in box:
        if not ctx.is_central_degree(lam):
            continue
        zE = MatrixOverTorus.identity(ctx, size, ctx.monomial(lam))
        if member(zE) and all(not mat_bracket(zE, b) for b in basis):
            ok, wit = False, _w(zE)
            break
    rep.record("centreless", ok, wit)
    return rep


def _root_sum(a, b):
    if a == 0:
        return b
    if b == 0:
        return a
    (i, j), (k, l) = a, b
    if j == k and i == l:
        return 0
    if j == k:
        return (i, l)
    if i == l:
        return (k, j)
    return None


def _generate_diagonal(ctx, size, target: MatrixOverTorus):
    """Rebuild a diagonal homogeneous element from brackets of off-diagonal ones."""
    ((lam,),) = {tuple(v.degrees()) for v in target.entries.values()}
    F = ctx.field
    x = ctx.monomial(lam)
    out = MatrixOverTorus.zero(ctx, size)
    # coefficients c_i of x^lam E_ii; peel off differences with [x^lam E_i,i+1, E_i+1,i]
    cs = [target.entry(i, i).coeff(lam) for i in range(1, size + 1)]
    total = sum(cs, F.zero)
    if total:
        if ctx.is_central_degree(lam):
            return None
        a, b = ctx.commutator_witness(lam)
        br = mat_bracket(MatrixOverTorus.unit(ctx, size, 1, 2, a), MatrixOverTorus.unit(ctx, size, 2, 1, b))
        # br = p x^lam E_11 + r x^lam E_22; adding r [x^lam E_12, E_21] clears E_22
        p = br.entry(1, 1).coeff(lam)
        r = br.entry(2, 2).coeff(lam)
        corr = mat_bracket(MatrixOverTorus.unit(ctx, size, 1, 2, x), MatrixOverTorus.unit(ctx, size, 2, 1))
        piece = br + corr.scale(r)
        s = p + r
        out = out + piece.scale(total / s)
        cs[0] = cs[0] - total
    # remaining coefficients sum to zero: telescoping brackets [x E_i,i+1, E_i+1,i]
    carry = F.zero
    for i in range(size - 1):
        carry = carry + cs[i]
        if carry:
            br = mat_bracket(MatrixOverTorus.unit(ctx, size, i + 1, i + 2, x),
                             MatrixOverTorus.unit(ctx, size, i + 2, i + 1))
            out = out + br.scale(carry)
    return out


def forms_check(ctx: TorusContext, size: int, samples: int = 200, rng=None, bound: int = 2) -> Report:
    """beta_eps symmetric, invariant and graded-orthogonal; gl = Z(Q)E + sl reassembles."""
    import random as _random

    rng = rng or _random.Random(0)
    rep = Report(f"invariant form on sl_{size}(Q)")
    rep.data["torus"] = ctx.info()
    for _ in range(samples):
        x, y, z = (random_sl(ctx, size, rng, bound=bound) for _ in range(3))
        w = [_w(x), _w(y), _w(z)]
        rep.record("symmetric", beta_eps(x, y) == beta_eps(y, x), w[:2])
        rep.record("invariant", beta_eps(mat_bracket(x, y), z) == beta_eps(x, mat_bracket(y, z)), w)
        a = random_homogeneous_sl(ctx, size, rng, bound)
        b = random_homogeneous_sl(ctx, size, rng, bound)
        ga, gb = homogeneous_degree(a), homogeneous_degree(b)
        if ga and gb and any(u + v for u, v in zip(ga[1], gb[1])):
            rep.record("graded orthogonal", not beta_eps(a, b), [_w(a), _w(b)])
        g = random_gl(ctx, size, rng, bound=bound)
        zc, s = split_gl(g)
        ok = (MatrixOverTorus.identity(ctx, size, zc) + s == g and sl_membership(s)
              and all(ctx.is_central_degree(lam) for lam in zc.degrees()))
        rep.record("gl = Z(Q)E + sl decomposition", ok, _w(g))
    return rep
