"""Rational number backend.

The exact rationals underneath every scalar come from ``gmpy2.mpq`` when that
extension is importable, and from :class:`fractions.Fraction` otherwise.
Setting ``QTLIFT_PURE_PYTHON=1`` in the environment forces the pure-Python
fallback (used by the benchmark and by the backend-parity tests).
"""
from __future__ import annotations

import os
from fractions import Fraction

BACKEND = "fraction"
Q = Fraction

if not os.environ.get("QTLIFT_PURE_PYTHON"):
    try:
        from gmpy2 import mpq as _mpq
    except ImportError:  # pragma: no cover - depends on the environment
        pass
    else:
        Q = _mpq
        BACKEND = "gmpy2"

ZERO = Q(0)
ONE = Q(1)


def as_rational(x) -> object:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to the active backend."""
    if isinstance(x, str):
        return Q(Fraction(x.strip()))
    if isinstance(x, Fraction) and Q is not Fraction:
        return Q(x.numerator, x.denominator)
    return Q(x)


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))
