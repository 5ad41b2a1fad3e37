"""Special automorphisms of interlaced extensions and lifts of Int(g).

A special automorphism has the shape

    f(l + c + d) = (f_L(l) + eta(d)) + (psi(l) + c + phi(d)) + d.

Elementary automorphisms exp(ad x), x = a E_ij, lift in closed form; lifts of
words are stored as composites of such atoms (applied right to left), and
words that are only stably elementary are lifted inside sl_{l+m}(Q) and
restricted back.
"""
from __future__ import annotations

import random as _random
from fractions import Fraction
from typing import Sequence

from .errors import ContextMismatch, EtaEscapesL, NotNilpotentShape, NotStablyElementaryCertificate
from .glwords import (DiagUnit, Elementary, GLWord, hd_membership, int_apply, normalize_word,
                      stabilize, word_inverse, word_to_matrix)
from .interlace import (EALA, Functional, IEContext, IEElement, eala_build, random_d,
                        random_homogeneous, random_ie)
from .matlie import MatrixOverTorus, h_st_basis, mat_bracket, random_sl
from .report import Report


class SpecialAut:
    """Base class: subclasses provide f_L, eta, psi and phi."""

    ctx: IEContext
    label = "special automorphism"

    def f_L(self, l: MatrixOverTorus) -> MatrixOverTorus:
        raise NotImplementedError

    def eta(self, d: dict) -> MatrixOverTorus:
        raise NotImplementedError

    def psi(self, l: MatrixOverTorus) -> Functional:
        raise NotImplementedError

    def phi(self, d: dict) -> Functional:
        raise NotImplementedError

    def apply(self, e: IEElement) -> IEElement:
        if e.ctx is not self.ctx:
            raise ContextMismatch("element and automorphism belong to different extensions")
        l = self.f_L(e.l) + self.eta(e.d) if e.d else self.f_L(e.l)
        c = self.psi(e.l) + e.c
        if e.d:
            c = c + self.phi(e.d)
        return IEElement(self.ctx, l, c, e.d)

    def __call__(self, e: IEElement) -> IEElement:
        return self.apply(e)


class ElementaryLift(SpecialAut):
    """The lift of exp(ad x) = Int(E + x) for x = a E_ij (so (ad x)^3 = 0 on L)."""

    def __init__(self, ctx: IEContext, x: MatrixOverTorus, sabotage: str | None = None):
        if x.size != ctx.ell:
            raise ContextMismatch(f"x must be {ctx.ell}x{ctx.ell}")
        if len(x.entries) > 1 or any(i == j for i, j in x.entries):
            raise NotNilpotentShape("x must be a single off-diagonal entry a E_ij")
        self.ctx = ctx
        self.x = x
        self.sabotage = sabotage
        F = ctx.F
        self._c = [F(Fraction(1, k)) for k in (1, 1, 2, 6, 24)]  # 1/n!
        self._g = MatrixOverTorus.identity(ctx.torus, ctx.ell) + x
        self._ginv = MatrixOverTorus.identity(ctx.torus, ctx.ell) - x
        self._eta_cache: dict = {}
        self._phi_cache: dict = {}
        self.label = f"exp ad ({x!r})"

    @property
    def atoms(self):
        return (self,)

    def _series(self, y: MatrixOverTorus) -> list:
        """[y, [x, y], [x, [x, y]]]; the next term vanishes."""
        out = [y]
        for _ in range(2):
            out.append(mat_bracket(self.x, out[-1]))
        return out

    def lc(self, l: MatrixOverTorus) -> tuple:
        """(f_L(l), psi(l)) from one series: exp(ad x) l = sum (ad x)^n l / n!."""
        if not l or not self.x:
            return l, Functional()
        ser = self._series(l)
        fl = l + ser[1] + ser[2].scale(self._c[2])
        s = self.ctx.sigma
        out = Functional()
        for n, y in enumerate(ser, start=1):
            if y:
                out = out + s(self.x, y).scale(self._c[n])
        return fl, out

    def f_L(self, l):
        return self._g * l * self._ginv

    def psi(self, l):
        return self.lc(l)[1]

    def _eta_basis(self, a: int) -> MatrixOverTorus:
        if a not in self._eta_cache:
            dx = self.ctx.act({a: self.ctx.F.one}, self.x)
            out = MatrixOverTorus.zero(self.ctx.torus, self.ctx.ell)
            for n, y in enumerate(self._series(dx), start=1):
                out = out - y.scale(self._c[n])
            self._eta_cache[a] = out
        return self._eta_cache[a]

    def _phi_basis(self, a: int) -> Functional:
        if a not in self._phi_cache:
            dx = self.ctx.act({a: self.ctx.F.one}, self.x)
            out = Functional()
            for n, y in enumerate(self._series(dx), start=2):
                if y:
                    out = out - self.ctx.sigma(self.x, y).scale(self._c[n])
            self._phi_cache[a] = out
        return self._phi_cache[a]

    def eta(self, d):
        out = MatrixOverTorus.zero(self.ctx.torus, self.ctx.ell)
        if self.sabotage == "eta_zero":
            return out
        for a, v in d.items():
            out = out + self._eta_basis(a).scale(v)
        return out

    def phi(self, d):
        out = Functional()
        for a, v in d.items():
            out = out + self._phi_basis(a).scale(v)
        return out


class CompositeAut(SpecialAut):
    """f = atoms[0] o atoms[1] o ... (the last atom acts first).

    The L-part is pushed through the atoms; eta and phi are linear in d and
    tabulated on the D-basis on first use.
    """

    def __init__(self, ctx: IEContext, atoms: Sequence[SpecialAut] = (), label: str | None = None):
        self.ctx = ctx
        self.atoms = tuple(a for f in atoms for a in getattr(f, "atoms", (f,)))
        for a in self.atoms:
            if a.ctx is not ctx:
                raise ContextMismatch("atoms of a composite must share one extension")
        self.label = label or f"composite of {len(self.atoms)} elementary lifts"
        self._dtab: dict = {}

    def _chain(self, e: IEElement) -> IEElement:
        for a in reversed(self.atoms):
            e = a.apply(e)
        return e

    def _d_image(self, a: int) -> IEElement:
        if a not in self._dtab:
            self._dtab[a] = self._chain(IEElement(self.ctx, d={a: self.ctx.F.one}))
        return self._dtab[a]

    def lc(self, l: MatrixOverTorus) -> tuple:
        """(f_L(l), psi(l)); psi_{f o g}(l) = psi_f(g_L l) + psi_g(l)."""
        c = Functional()
        for a in reversed(self.atoms):
            l, p = a.lc(l)
            c = c + p
        return l, c

    def f_L(self, l):
        return self.lc(l)[0]

    def psi(self, l):
        return self.lc(l)[1]

    def eta(self, d):
        out = MatrixOverTorus.zero(self.ctx.torus, self.ctx.ell)
        for a, v in d.items():
            out = out + self._d_image(a).l.scale(v)
        return out

    def phi(self, d):
        out = Functional()
        for a, v in d.items():
            out = out + self._d_image(a).c.scale(v)
        return out

    def apply(self, e):
        if e.ctx is not self.ctx:
            raise ContextMismatch("element and automorphism belong to different extensions")
        fl, ps = self.lc(e.l)
        return IEElement(self.ctx, fl + self.eta(e.d), ps + e.c + self.phi(e.d), e.d)


def identity_aut(ctx: IEContext) -> CompositeAut:
    return CompositeAut(ctx, (), "identity")


def compose(f: SpecialAut, g: SpecialAut) -> CompositeAut:
    """f o g."""
    return CompositeAut(f.ctx, tuple(getattr(f, "atoms", (f,))) + tuple(getattr(g, "atoms", (g,))))


class RestrictedAut(SpecialAut):
    """f'|_E for a special automorphism f' of E' with f'(E) = E.

    f_L = Int(g) is evaluated directly from the word; eta and phi are the
    tabulated values of eta' and phi' on the D-basis (eta' projected into L);
    psi = psi'|_L.
    """

    def __init__(self, ctx: IEContext, parent: SpecialAut, word: GLWord):
        self.ctx = ctx
        self.parent = parent
        self.word = word
        self._g = word_to_matrix(word)
        self._ginv = word_to_matrix(word_inverse(word))
        self._eta = {}
        self._phi = {}
        big = parent.ctx
        for a in range(ctx.dim_D):
            img = parent.apply(IEElement(big, d={a: big.F.one}))
            self._eta[a] = project(img.l, ctx.ell)
            self._phi[a] = img.c
        self.label = f"restriction of a lift of Int({word})"

    def f_L(self, l):
        return self._g * l * self._ginv

    def eta(self, d):
        out = MatrixOverTorus.zero(self.ctx.torus, self.ctx.ell)
        for a, v in d.items():
            out = out + self._eta[a].scale(v)
        return out

    def psi(self, l):
        return self.parent.psi(l.embed(self.parent.ctx.ell))

    def phi(self, d):
        out = Functional()
        for a, v in d.items():
            out = out + self._phi[a].scale(v)
        return out


def project(x: MatrixOverTorus, ell: int) -> MatrixOverTorus:
    """The top-left ell x ell block; EtaEscapesL if anything lies outside it."""
    outside = {k: v for k, v in x.entries.items() if k[0] >= ell or k[1] >= ell}
    if outside:
        raise EtaEscapesL(f"entries outside the embedded sl_{ell}: {sorted(outside)}")
    return MatrixOverTorus(x.ctx, ell, x.entries)


# -- operations ----------------------------------------------------------------

def lift_elementary(ctx: IEContext, x: MatrixOverTorus, sabotage: str | None = None) -> ElementaryLift:
    return ElementaryLift(ctx, x, sabotage)


def special_apply(f: SpecialAut, e: IEElement) -> IEElement:
    return f.apply(e)


def embed_element(e: IEElement, big: IEContext) -> IEElement:
    return IEElement(big, e.l.embed(big.ell), e.c, e.d)


def enlarge_context(ctx: IEContext, m: int) -> IEContext:
    """The same (D, C, tau, s) over sl_{l+m}(Q); E embeds via l -> diag(l, 0)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return ctx.enlarged(ctx.ell + m)


def enlargement_check(ctx: IEContext, big: IEContext, samples: int = 50, rng=None) -> Report:
    rng = rng or _random.Random(0)
    rep = Report(f"E over sl_{ctx.ell} is a subalgebra of E' over sl_{big.ell}")
    for _ in range(samples):
        a, b = random_ie(ctx, rng), random_ie(ctx, rng)
        rep.record("embedding preserves brackets",
                   embed_element(ctx.bracket(a, b), big) == big.bracket(embed_element(a, big), embed_element(b, big)),
                   [repr(a), repr(b)])
        rep.record("sigma' restricts to sigma",
                   big.sigma(a.l.embed(big.ell), b.l.embed(big.ell)) == ctx.sigma(a.l, b.l), [repr(a), repr(b)])
    H = [embed_element(h, big) for h in ctx.h_basis()]
    for i, h1 in enumerate(H):
        for h2 in H[i + 1:]:
            rep.record("embedded H abelian", not big.bracket(h1, h2), [repr(h1), repr(h2)])
    return rep


def special_verify(f: SpecialAut, samples: int = 200, rng=None, bound: int = 2) -> Report:
    """Special-automorphism conditions (a)-(f) plus bracket preservation on random samples."""
    ctx = f.ctx
    rng = rng or _random.Random(0)
    rep = Report(f"special automorphism checks: {f.label}")
    act, sig, co = ctx.act, ctx.sigma, ctx.coadjoint
    dbr = ctx.D.bracket_coords

    def lc(l):
        if hasattr(f, "lc"):
            return f.lc(l)
        return f.f_L(l), f.psi(l)

    for _ in range(samples):
        l1 = random_homogeneous(ctx, rng, bound).l
        l2 = random_homogeneous(ctx, rng, bound).l
        (fl1, psi1), (fl2, _) = lc(l1), lc(l2)
        f12, psi12 = lc(mat_bracket(l1, l2))
        w = [repr(l1), repr(l2)]
        rep.record("(a) f_L automorphism", f12 == mat_bracket(fl1, fl2), w)
        rep.record("(b) sigma(f l1, f l2) = psi([l1,l2]) + sigma(l1,l2)",
                   sig(fl1, fl2) == psi12 + sig(l1, l2), w)
        if ctx.dim_D:
            d1, d2 = random_d(ctx, rng), random_d(ctx, rng)
            e1, e2 = f.eta(d1), f.eta(d2)
            wd = [repr(l1), {str(k): str(v) for k, v in d1.items()}]
            fdl, psidl = lc(act(d1, l1))
            rep.record("(c) f_L(d.l) = [eta(d), f_L l] + d.f_L(l)",
                       fdl == mat_bracket(e1, fl1) + act(d1, fl1), wd)
            rep.record("(d) psi(d.l) = sigma(eta(d), f_L l) + d.psi(l)",
                       psidl == sig(e1, fl1) + co(d1, psi1), wd)
            d12 = dbr(d1, d2)
            wdd = [{str(k): str(v) for k, v in d.items()} for d in (d1, d2)]
            rep.record("(e) eta([d1,d2]) = [eta d1, eta d2] + d1.eta d2 - d2.eta d1",
                       f.eta(d12) == mat_bracket(e1, e2) + act(d1, e2) - act(d2, e1), wdd)
            rep.record("(f) phi([d1,d2]) = sigma(eta d1, eta d2) + d1.phi d2 - d2.phi d1",
                       f.phi(d12) == sig(e1, e2) + co(d1, f.phi(d2)) - co(d2, f.phi(d1)), wdd)
        a, b = random_homogeneous(ctx, rng, bound), random_homogeneous(ctx, rng, bound)
        rep.record("preserves ie_bracket", f.apply(ctx.bracket(a, b)) == ctx.bracket(f.apply(a), f.apply(b)),
                   [repr(a), repr(b)])
    return rep


def _word_atoms(ctx: IEContext, e: GLWord) -> list[ElementaryLift]:
    out = []
    for g in e.gens:
        if not isinstance(g, Elementary):
            raise NotStablyElementaryCertificate(f"certificate contains a non-elementary generator {g}")
        out.append(ElementaryLift(ctx, MatrixOverTorus.unit(ctx.torus, ctx.ell, g.i, g.j, g.a)))
    return out


def lift_int_word(ctx: IEContext, w: GLWord, m: int = 0, certificate: GLWord | None = None,
                  samples: int = 20, rng=None) -> tuple[SpecialAut, Report]:
    """Lift Int(g), g = matrix(w), to a special automorphism of E.

    ``certificate`` is an elementary word with matrix diag(g, E_m); without
    one, w is normalized and must have trivial unit part.
    """
    rng = rng or _random.Random(0)
    if w.size != ctx.ell:
        raise ContextMismatch(f"word of size {w.size} for sl_{ctx.ell}")
    rep = Report(f"lift of Int({w})")
    big_size = ctx.ell + m
    if certificate is None:
        u, e = normalize_word(w)
        if u != ctx.torus.one:
            raise NotStablyElementaryCertificate(f"normalize_word leaves the unit {u!r}; absorb it first")
        certificate = e.embed(big_size)
    if certificate.size != big_size or not certificate.is_elementary():
        raise NotStablyElementaryCertificate("certificate must be an elementary word of size l + m")
    ok = word_to_matrix(w.embed(big_size)) == word_to_matrix(certificate)
    rep.record("certificate: diag(g, E_m) = matrix(e)", ok, str(certificate))
    if not ok:
        raise NotStablyElementaryCertificate("certificate matrix differs from diag(g, E_m)")
    rep.data["certificate_length"] = len(certificate)
    if m == 0:
        f = CompositeAut(ctx, _word_atoms(ctx, certificate), f"lift of Int({w})")
        big, fbig = ctx, f
    else:
        big = enlarge_context(ctx, m)
        fbig = CompositeAut(big, _word_atoms(big, certificate), f"lift of Int({certificate}) in E'")
        for a in range(ctx.dim_D):
            img = fbig.apply(IEElement(big, d={a: big.F.one}))
            inside = all(i < ctx.ell and j < ctx.ell for i, j in img.l.entries)
            rep.record("eta'(D) in L", inside, {"basis": a, "eta": repr(img.l)})
            if not inside:
                raise EtaEscapesL(f"eta'(d_{a}) = {img.l!r} leaves the embedded sl_{ctx.ell}")
        f = RestrictedAut(ctx, fbig, w)
    rep.record("hd_membership(g, D)", hd_membership(w, ctx.basis), str(w))
    for _ in range(samples):
        x = random_ie(ctx, rng)
        rep.record("f_L = Int(g)", f.apply(ctx.from_l(x.l)).l == int_apply(w, x.l), repr(x.l))
        if m:
            rep.record("restriction consistency",
                       embed_element(f.apply(x), big) == fbig.apply(embed_element(x, big)), repr(x))
    return f, rep


def conjugacy_pipeline(ctx: IEContext | EALA, h: GLWord, m: int = 0, samples: int = 50,
                       rng=None) -> Report:
    """Replace h by g = h diag(u, 1, ..) with g stably elementary and lift Int(g) to E."""
    eala = ctx if isinstance(ctx, EALA) else eala_build(ctx)
    ctx = eala.ctx
    rng = rng or _random.Random(0)
    rep = Report("conjugacy pipeline")
    u, cert = stabilize(h, m)
    rep.record("stabilize certificate", True)
    g = h * GLWord(ctx.torus, h.size, (DiagUnit(1, u),))
    T = ctx.torus
    for hb in h_st_basis(T, ctx.ell):
        ok = int_apply(g, hb) == int_apply(h, hb)
        rep.record("Int(g) = Int(h) on h_st", ok, repr(hb))
    f, lrep = lift_int_word(ctx, g, m, certificate=cert, samples=min(samples, 20), rng=rng)
    rep.merge(lrep, "lift: ")
    rep.merge(special_verify(f, samples, rng), "verify: ")
    images = []
    for hb in eala.h_basis:
        img = f.apply(hb)
        images.append({"h": repr(hb), "f(h)": img.to_json()})
        if hb.l:
            rep.record("f(h).l = Int(h)(h.l)", img.l == int_apply(h, hb.l), repr(hb))
    from .qtorus import format_element
    rep.data.update({
        "u": format_element(u),
        "m": m,
        "certificate_length": len(cert),
        "certificate": str(cert),
        "g": str(g),
        "f_on_H_basis": images,
    })
    return rep
