"""Derivations of a quantum torus and their entrywise action on matrices.

A :class:`DerivationSpec` is a finite sum

    d = d_theta0 + ad(q) + sum_k z_k d_theta_k

of a degree derivation, an inner derivation and centroidal pieces z d_theta
with z a central monomial.  Degree functionals theta are rational vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from ._rational import as_rational
from .errors import ContextMismatch, NonRationalEvaluation, NotCentral, NotClosed
from .matlie import MatrixOverTorus
from .qtorus import TorusContext, TorusElement, is_unit, torus_bracket
from .scalars import Scalar


def _theta(ctx: TorusContext, theta) -> tuple:
    if theta is None:
        return (ctx.field.zero,) * ctx.n
    if len(theta) != ctx.n:
        raise ValueError(f"theta has length {len(theta)}, expected {ctx.n}")
    out = []
    for t in theta:
        if isinstance(t, Scalar):
            if not t.is_rational():
                raise NonRationalEvaluation(f"theta entry {t} is not rational")
            out.append(t)
        else:
            out.append(ctx.field(as_rational(t) if not isinstance(t, str) else t))
    return tuple(out)


def theta_eval(theta: Sequence[Scalar], lam: Sequence[int]) -> Scalar:
    total = theta[0].field.zero if theta else None
    for t, l in zip(theta, lam):
        if l and t:
            total = total + t * l
    return total


@dataclass(frozen=True)
class DerivationSpec:
    ctx: TorusContext
    degree_part: tuple = ()
    inner_part: TorusElement | None = None
    centroidal_parts: tuple = dc_field(default=())  # ((z, theta), ...)

    def __post_init__(self):
        ctx = self.ctx
        object.__setattr__(self, "degree_part", _theta(ctx, self.degree_part or None))
        inner = ctx.zero if self.inner_part is None else ctx.coerce(self.inner_part)
        object.__setattr__(self, "inner_part", inner)
        parts = []
        for z, th in self.centroidal_parts:
            z = ctx.coerce(z)
            if not z:
                continue
            u = is_unit(z)
            if u is None:
                raise ValueError("centroidal coefficient must be a single central monomial")
            if not ctx.is_central_degree(u[0]):
                raise NotCentral(f"centroidal coefficient of degree {u[0]} is not central")
            parts.append((z, _theta(ctx, th)))
        object.__setattr__(self, "centroidal_parts", tuple(parts))

    # -- constructors -------------------------------------------------------
    @classmethod
    def degree(cls, ctx, theta):
        return cls(ctx, degree_part=tuple(theta))

    @classmethod
    def inner(cls, ctx, q):
        return cls(ctx, inner_part=q)

    @classmethod
    def centroidal(cls, ctx, xi, theta, coeff=1):
        return cls(ctx, centroidal_parts=((ctx.monomial(xi, coeff), tuple(theta)),))

    def parts(self) -> list:
        """All centroidal pieces, the degree part included as z = 1."""
        out = []
        if any(self.degree_part):
            out.append((self.ctx.one, self.degree_part))
        out += list(self.centroidal_parts)
        return out

    def __add__(self, other: DerivationSpec) -> DerivationSpec:
        if other.ctx != self.ctx:
            raise ContextMismatch("derivations of different quantum tori")
        return DerivationSpec(
            self.ctx,
            tuple(a + b for a, b in zip(self.degree_part, other.degree_part)),
            self.inner_part + other.inner_part,
            self.centroidal_parts + other.centroidal_parts,
        )

    def scale(self, s) -> DerivationSpec:
        s = self.ctx.field(s)
        return DerivationSpec(
            self.ctx,
            tuple(t * s for t in self.degree_part) if s.is_rational() else (),
            self.inner_part.scale(s),
            tuple((z.scale(s), th) for z, th in self.centroidal_parts)
            + (((self.ctx.scalar(s), self.degree_part),) if not s.is_rational() else ()),
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def canonical(self) -> dict:
        """Coordinates of d: ('c', xi, k) for x^xi d_{e_k}; ('i', lam) for ad x^lam."""
        out: dict = {}
        F = self.ctx.field

        def put(key, v):
            v = out.get(key, F.zero) + v
            if v:
                out[key] = v
            else:
                out.pop(key, None)

        for z, th in self.parts():
            ((xi, c),) = z.terms.items()
            for k, t in enumerate(th):
                if t:
                    put(("c", xi, k), c * t)
        for lam, c in self.inner_part.terms.items():
            if not self.ctx.is_central_degree(lam):
                put(("i", lam), c)
        return out

    def is_zero(self) -> bool:
        return not self.canonical()

    def __eq__(self, other):
        if not isinstance(other, DerivationSpec):
            return NotImplemented
        return self.ctx == other.ctx and self.canonical() == other.canonical()

    __hash__ = None

    def homogeneous_degree(self):
        """The Lambda-degree if d is homogeneous (zero counts as degree 0)."""
        degs = {k[1] for k in self.canonical()}
        if not degs:
            return self.ctx.zero_vec
        return degs.pop() if len(degs) == 1 else None

    def to_json(self) -> dict:
        out = {}
        if any(self.degree_part):
            out["theta"] = [str(t) for t in self.degree_part]
        if self.inner_part:
            out["inner"] = self.inner_part.to_json()
        if self.centroidal_parts:
            out["centroidal"] = [
                {"xi": list(next(iter(z.terms))), "z_coeff": str(next(iter(z.terms.values()))),
                 "theta": [str(t) for t in th]} for z, th in self.centroidal_parts]
        return out

    def __repr__(self):
        return f"DerivationSpec({self.to_json()})"


def from_config_entry(ctx: TorusContext, entry: dict) -> DerivationSpec:
    """``{xi: [...], z_coeff: scalar, theta: [rationals]}`` -> x^xi-centroidal derivation."""
    xi = tuple(int(v) for v in entry.get("xi", [0] * ctx.n))
    coeff = ctx.field.parse(str(entry.get("z_coeff", "1")))
    theta = [Fraction(str(t)) for t in entry["theta"]]
    if not any(xi) and coeff == 1:
        return DerivationSpec.degree(ctx, theta)
    return DerivationSpec.centroidal(ctx, xi, theta, coeff)


def to_config_entry(d: DerivationSpec) -> dict:
    parts = d.parts()
    if d.inner_part or len(parts) != 1:
        raise ValueError("only single centroidal pieces have a config form")
    z, th = parts[0]
    ((xi, c),) = z.terms.items()
    return {"xi": list(xi), "z_coeff": str(c), "theta": [str(t) for t in th]}


def der_apply(d: DerivationSpec, a: TorusElement) -> TorusElement:
    ctx = d.ctx
    if a.ctx != ctx:
        raise ContextMismatch("derivation and element from different quantum tori")
    out = torus_bracket(d.inner_part, a) if d.inner_part else ctx.zero
    for z, th in d.parts():
        scaled = {}
        for lam, c in a.terms.items():
            v = theta_eval(th, lam)
            if v:
                scaled[lam] = c * v
        if scaled:
            out = out + z * TorusElement(ctx, scaled)
    return out


def der_apply_matrix(d: DerivationSpec, x: MatrixOverTorus) -> MatrixOverTorus:
    return x.map_entries(lambda v: der_apply(d, v))


def der_bracket(d1: DerivationSpec, d2: DerivationSpec) -> DerivationSpec:
    """[d1, d2] re-expressed as a DerivationSpec."""
    ctx = d1.ctx
    if d2.ctx != ctx:
        raise ContextMismatch("derivations of different quantum tori")
    inner = torus_bracket(d1.inner_part, d2.inner_part)
    cparts = []
    for z1, th1 in d1.parts():
        # [z1 d_th1, ad q2] = ad(z1 d_th1 (q2))
        inner = inner + der_apply(DerivationSpec(ctx, centroidal_parts=((z1, th1),)), d2.inner_part)
    for z2, th2 in d2.parts():
        inner = inner - der_apply(DerivationSpec(ctx, centroidal_parts=((z2, th2),)), d1.inner_part)
    for z1, th1 in d1.parts():
        xi1 = next(iter(z1.terms))
        for z2, th2 in d2.parts():
            xi2 = next(iter(z2.terms))
            zz = z1 * z2
            a = theta_eval(th1, xi2)
            b = theta_eval(th2, xi1)
            if a:
                cparts.append((zz, tuple(t * a for t in th2)))
            if b:
                cparts.append((zz, tuple(-t * b for t in th1)))
    return DerivationSpec(ctx, inner_part=inner, centroidal_parts=tuple(cparts))


def epsilon_form(a: TorusElement, b: TorusElement) -> Scalar:
    """eps(ab), the trace form of the quantum torus."""
    ctx = a.ctx
    total = ctx.field.zero
    for lam, c in a.terms.items():
        neg = tuple(-v for v in lam)
        d = b.terms.get(neg)
        if d is not None:
            total = total + c * d * ctx._f(lam, neg)
    return total


def skew_obstructions(d: DerivationSpec) -> list:
    """Degrees xi whose centroidal component x^xi d_v has v(xi) != 0."""
    per_xi: dict = {}
    for (kind, *rest), c in d.canonical().items():
        if kind == "c":
            xi, k = rest
            per_xi.setdefault(xi, {})[k] = c
    bad = []
    for xi, comp in per_xi.items():
        v = sum((c * xi[k] for k, c in comp.items()), d.ctx.field.zero)
        if v:
            bad.append(xi)
    return bad


def skew_samples(d: DerivationSpec, count: int = 3) -> list[TorusElement]:
    """Elements a = x^lam + x^(-xi-lam) that detect a non-skew xi-component."""
    ctx = d.ctx
    out = []
    degs = {k[1] for k in d.canonical()}
    for xi in sorted(degs):
        for s in range(count):
            lam = tuple((s if i == 0 else 0) for i in range(ctx.n))
            mu = tuple(-u - v for u, v in zip(xi, lam))
            out.append(ctx.monomial(lam) + ctx.monomial(mu) if lam != mu else ctx.monomial(lam))
    return out


def skew_check(d: DerivationSpec, samples: Iterable[TorusElement] = ()) -> bool:
    """eps((d a) a) = 0 on every sample, and exactly on homogeneous components."""
    for a in list(samples) + skew_samples(d):
        if epsilon_form(der_apply(d, a), a):
            return False
    return not skew_obstructions(d)


class DerivationAlgebra:
    """A finite-dimensional graded subalgebra D of Der(Q), given by a homogeneous basis.

    Structure constants are computed at construction; a bracket leaving the
    span of the basis raises :class:`NotClosed`.
    """

    def __init__(self, ctx: TorusContext, basis: Sequence[DerivationSpec]):
        self.ctx = ctx
        self.basis = list(basis)
        self.degrees = []
        for k, d in enumerate(self.basis):
            deg = d.homogeneous_degree()
            if deg is None:
                raise ValueError(f"basis element {k} is not homogeneous")
            self.degrees.append(deg)
        self._rows = []  # reduced echelon rows: (pivot_key, row dict, combination dict)
        for k, d in enumerate(self.basis):
            vec, comb = self._reduce(d.canonical(), {k: ctx.field.one})
            if not vec:
                raise ValueError(f"basis element {k} is linearly dependent on earlier ones")
            key = min(vec, key=_keyorder)
            inv = vec[key].inverse()
            vec = {kk: v * inv for kk, v in vec.items()}
            comb = {kk: v * inv for kk, v in comb.items()}
            self._rows.append((key, vec, comb))
        self.structure = {}
        for a in range(len(self.basis)):
            for b in range(a + 1, len(self.basis)):
                br = der_bracket(self.basis[a], self.basis[b])
                coords = self.coordinates(br)
                if coords is None:
                    raise NotClosed(f"[d{a}, d{b}] = {br!r} leaves the declared span")
                self.structure[(a, b)] = coords
                self.structure[(b, a)] = {k: -v for k, v in coords.items()}

    def __len__(self):
        return len(self.basis)

    def _reduce(self, vec: dict, comb: dict):
        vec, comb = dict(vec), dict(comb)
        for key, row, rcomb in self._rows:
            c = vec.get(key)
            if c:
                for kk, v in row.items():
                    nv = vec.get(kk, self.ctx.field.zero) - c * v
                    if nv:
                        vec[kk] = nv
                    else:
                        vec.pop(kk, None)
                for kk, v in rcomb.items():
                    nv = comb.get(kk, self.ctx.field.zero) - c * v
                    if nv:
                        comb[kk] = nv
                    else:
                        comb.pop(kk, None)
        return vec, comb

    def coordinates(self, d: DerivationSpec) -> dict | None:
        """Coordinates of d on the basis, or None when d is outside the span."""
        vec, comb = self._reduce(d.canonical(), {})
        if vec:
            return None
        # comb holds -coords
        return {k: -v for k, v in comb.items() if v}

    def element(self, coords: dict) -> DerivationSpec:
        out = DerivationSpec(self.ctx)
        for k, c in coords.items():
            out = out + self.basis[k].scale(c)
        return out

    def bracket_coords(self, c1: dict, c2: dict) -> dict:
        out: dict = {}
        F = self.ctx.field
        for a, x in c1.items():
            for b, y in c2.items():
                if a == b:
                    continue
                for k, v in self.structure[(a, b)].items():
                    out[k] = out.get(k, F.zero) + x * y * v
        return {k: v for k, v in out.items() if v}

    def degree_zero(self) -> list[int]:
        return [k for k, deg in enumerate(self.degrees) if not any(deg)]


def _keyorder(key):
    return (key[0], key[1:])
