"""Exact arithmetic in the cyclotomic field Q(zeta_m).

A :class:`Scalar` is a polynomial in ``zeta = zeta_m`` of degree below
``deg(Phi_m)``, with exact rational coefficients.  ``m = 1`` and ``m = 2``
both give the rationals.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

from ._rational import ONE, ZERO, Q, as_rational, to_fraction
from .errors import DimensionMismatch, DivisionByZero, ZeroInput


def _polydivmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den monic, integer coefficients, low degree first
    num = list(num)
    dd = len(den) - 1
    quot = [0] * max(len(num) - dd, 1)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for i, d in enumerate(den):
                num[k - dd + i] -= c * d
    rem = num[:dd] if dd else [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, constant term first."""
    if m < 1:
        raise ValueError("cyclotomic order must be >= 1")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _polydivmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class FieldSpec:
    """The field Q(zeta_m).  Obtain instances through :func:`field`."""

    def __init__(self, m: int):
        if int(m) != m or m < 1:
            raise ValueError(f"cyclotomic order must be a positive integer, got {m!r}")
        self.m = int(m)
        self.phi = cyclotomic_polynomial(self.m)
        self.deg = len(self.phi) - 1
        # rows[k] = coordinates of X^k mod Phi_m, for 0 <= k < 2*deg - 1
        rows = []
        cur = [ONE] + [ZERO] * (self.deg - 1)
        for _ in range(max(2 * self.deg - 1, 1)):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [ZERO] + cur[:-1]
            if top:
                for i in range(self.deg):
                    cur[i] -= top * self.phi[i]
        self._rows = rows
        self.root_order = lcm(2, self.m)
        self.zero = Scalar(self, (ZERO,) * self.deg)
        self.one = Scalar(self, (ONE,) + (ZERO,) * (self.deg - 1))
        self._zeta_pows = [self.one]
        z = self.zeta if self.deg > 1 else self._minus_one_if_m2()
        for _ in range(1, self.m):
            self._zeta_pows.append(self._zeta_pows[-1] * z)

    def _minus_one_if_m2(self) -> Scalar:
        return -self.one if self.m == 2 else self.one

    @property
    def zeta(self) -> Scalar:
        if self.deg == 1:
            return self._minus_one_if_m2()
        return Scalar(self, (ZERO, ONE) + (ZERO,) * (self.deg - 2))

    def zeta_pow(self, a: int) -> Scalar:
        return self._zeta_pows[a % self.m]

    def __call__(self, x) -> Scalar:
        """Coerce ``x`` (int, rational, string or Scalar) into this field."""
        if isinstance(x, Scalar):
            if x.field is not self:
                raise ValueError(f"scalar lives in Q(zeta_{x.field.m}), not Q(zeta_{self.m})")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (list, tuple)):
            if len(x) != self.deg:
                raise DimensionMismatch(f"expected {self.deg} coefficients, got {len(x)}")
            return Scalar(self, tuple(as_rational(c) for c in x))
        return Scalar(self, (as_rational(x),) + (ZERO,) * (self.deg - 1))

    def parse(self, text: str) -> Scalar:
        """Parse ``"p/q"`` or ``"(c0, c1, ...)/d"``."""
        text = text.strip()
        if text.startswith("("):
            body, _, den = text.partition(")")
            den = den.strip()
            d = as_rational(den[1:]) if den.startswith("/") else ONE
            if den and not den.startswith("/"):
                raise ValueError(f"cannot parse scalar {text!r}")
            coeffs = [as_rational(c) / d for c in body[1:].split(",") if c.strip()]
            return self(coeffs)
        return self(as_rational(text))

    def __repr__(self):
        return f"FieldSpec(m={self.m})"

    def __reduce__(self):
        return (field, (self.m,))


@lru_cache(maxsize=None)
def field(m: int = 1) -> FieldSpec:
    return FieldSpec(m)


class Scalar:
    __slots__ = ("field", "c")

    def __init__(self, field: FieldSpec, coeffs: tuple):
        self.field = field
        self.c = coeffs

    # -- coercion helpers -------------------------------------------------
    def _other(self, other) -> Scalar | None:
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise ValueError("scalars from different cyclotomic fields")
            return other
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self.field(other)
        return None

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        o = other if other.__class__ is Scalar and other.field is self.field else self._other(other)
        if o is None:
            return NotImplemented
        if self.field.deg == 1:
            return Scalar(self.field, (self.c[0] + o.c[0],))
        return Scalar(self.field, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.field, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Scalar(self.field, tuple(-a for a in self.c))

    def __mul__(self, other):
        o = other if other.__class__ is Scalar and other.field is self.field else self._other(other)
        if o is None:
            return NotImplemented
        F = self.field
        if F.deg == 1:
            return Scalar(F, (self.c[0] * o.c[0],))
        prod = [ZERO] * (2 * F.deg - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        out = [ZERO] * F.deg
        for k, v in enumerate(prod):
            if v:
                for i, r in enumerate(F._rows[k]):
                    if r:
                        out[i] += v * r
        return Scalar(F, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        F = self.field
        if not self:
            raise DivisionByZero("inverse of zero scalar")
        if F.deg == 1:
            return Scalar(F, (ONE / self.c[0],))
        # solve M y = e_0 where column j of M is self * zeta^j
        d = F.deg
        cols = []
        basis = Scalar(F, (ONE,) + (ZERO,) * (d - 1))
        zeta = F.zeta
        for _ in range(d):
            cols.append((self * basis).c)
            basis = basis * zeta
        aug = [[cols[j][i] for j in range(d)] + [ONE if i == 0 else ZERO] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if aug[r][col])
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = ONE / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(d):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return Scalar(F, tuple(aug[i][d] for i in range(d)))

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o:
            raise DivisionByZero("division by zero scalar")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparisons ------------------------------------------------------
    def __bool__(self):
        if len(self.c) == 1:
            return bool(self.c[0])
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field is other.field and self.c == other.c
        try:
            o = self._other(other)
        except (TypeError, ValueError):
            return NotImplemented
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if not any(self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def normalized(self) -> Scalar:
        """Re-canonicalize the coefficients (identity on canonical input)."""
        return Scalar(self.field, tuple(as_rational(c) for c in self.c))

    # -- text -------------------------------------------------------------
    def to_str(self) -> str:
        if self.field.deg == 1 or self.is_rational():
            return str(to_fraction(self.c[0]))
        fr = [to_fraction(c) for c in self.c]
        den = 1
        for f in fr:
            den = lcm(den, f.denominator)
        body = ", ".join(str(int(f * den)) for f in fr)
        return f"({body})/{den}" if den != 1 else f"({body})"

    __str__ = to_str

    def __repr__(self):
        return f"Scalar({self.to_str()!r}, m={self.field.m})"


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def root_of_unity_order(a: Scalar) -> int | None:
    """Least r >= 1 with a**r == 1, or ``None`` when a has infinite order."""
    if not a:
        raise ZeroInput("root_of_unity_order of zero")
    bound = a.field.root_order
    for r in range(1, bound + 1):
        if bound % r == 0 and a ** r == 1:
            return r
    return None
