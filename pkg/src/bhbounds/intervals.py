"""Outward-rounded arbitrary-precision intervals.

Endpoints are raw mpmath ``libmp`` floats and every operation passes its
precision and rounding direction explicitly, so nothing here touches the
global ``mpmath.mp`` context and instances are safe to share between threads.
"""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction

import mpmath
from mpmath import libmp
from mpmath.libmp import libmpi, round_ceiling, round_floor

DEFAULT_PRECISION = 128


def _mpf_from_fraction(q: Fraction, prec: int, rnd) -> tuple:
    return libmp.mpf_div(libmp.from_int(q.numerator), libmp.from_int(q.denominator), prec, rnd)


def _mpf_to_fraction(x: tuple) -> Fraction:
    sign, man, exp, _ = x
    if not man:
        if x != libmp.fzero:
            raise ValueError("cannot convert a non-finite endpoint to a fraction")
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -v if sign else v


def _outward(iv: tuple, prec: int) -> tuple:
    # one extra ulp each side, on top of the directed rounding of libmp
    a, b = iv
    return (libmp.mpf_perturb(a, 1, prec, round_floor),
            libmp.mpf_perturb(b, 0, prec, round_ceiling))


class BoundInterval:
    """Closed interval ``[lo, hi]`` that encloses a real constant."""

    __slots__ = ("_iv", "precision_bits")

    def __init__(self, iv: tuple, precision_bits: int):
        a, b = iv
        if libmp.mpf_gt(a, b):
            raise ValueError("interval lower endpoint exceeds upper endpoint")
        self._iv = (a, b)
        self.precision_bits = int(precision_bits)

    # -- construction -------------------------------------------------------
    @classmethod
    def exact(cls, q, precision_bits: int = DEFAULT_PRECISION) -> "BoundInterval":
        q = Fraction(q)
        return cls((_mpf_from_fraction(q, precision_bits, round_floor),
                    _mpf_from_fraction(q, precision_bits, round_ceiling)), precision_bits)

    @classmethod
    def from_bounds(cls, lo, hi, precision_bits: int = DEFAULT_PRECISION) -> "BoundInterval":
        lo, hi = Fraction(lo), Fraction(hi)
        return cls((_mpf_from_fraction(lo, precision_bits, round_floor),
                    _mpf_from_fraction(hi, precision_bits, round_ceiling)), precision_bits)

    @classmethod
    def from_raw(cls, lo: tuple, hi: tuple, precision_bits: int) -> "BoundInterval":
        return cls((tuple(lo), tuple(hi)), precision_bits)

    @classmethod
    def pi(cls, precision_bits: int = DEFAULT_PRECISION) -> "BoundInterval":
        return cls(libmpi.mpi_pi(precision_bits), precision_bits)

    @classmethod
    def ln2(cls, precision_bits: int = DEFAULT_PRECISION) -> "BoundInterval":
        return cls((libmp.mpf_ln2(precision_bits, round_floor),
                    libmp.mpf_ln2(precision_bits, round_ceiling)), precision_bits)

    # -- endpoints ------------------------------------------------------------
    @property
    def raw(self) -> tuple:
        return self._iv

    @property
    def lo(self) -> mpmath.mpf:
        return mpmath.mpf(self._iv[0])

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mpf(self._iv[1])

    @property
    def lo_fraction(self) -> Fraction:
        return _mpf_to_fraction(self._iv[0])

    @property
    def hi_fraction(self) -> Fraction:
        return _mpf_to_fraction(self._iv[1])

    @property
    def width(self) -> Fraction:
        return self.hi_fraction - self.lo_fraction

    @property
    def mid(self) -> Fraction:
        return (self.lo_fraction + self.hi_fraction) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"BoundInterval([{self.decimal_lo(20)}, {self.decimal_hi(20)}], prec={self.precision_bits})"

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "BoundInterval":
        if isinstance(other, BoundInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return BoundInterval.exact(other, self.precision_bits)
        if isinstance(other, mpmath.mpf):
            return BoundInterval.from_raw(other._mpf_, other._mpf_, self.precision_bits)
        return NotImplemented

    def _prec(self, other: "BoundInterval") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self._prec(other)
        return BoundInterval(libmpi.mpi_add(self._iv, other._iv, p), p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self._prec(other)
        return BoundInterval(libmpi.mpi_sub(self._iv, other._iv, p), p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return BoundInterval(libmpi.mpi_neg(self._iv), self.precision_bits)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self._prec(other)
        return BoundInterval(libmpi.mpi_mul(self._iv, other._iv, p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.contains(0):
            raise ZeroDivisionError("divisor interval contains zero")
        p = self._prec(other)
        return BoundInterval(libmpi.mpi_div(self._iv, other._iv, p), p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def exp(self) -> "BoundInterval":
        p = self.precision_bits
        if self._iv == (libmp.fzero, libmp.fzero):
            return BoundInterval.exact(1, p)
        return BoundInterval(_outward(libmpi.mpi_exp(self._iv, p), p), p)

    def log(self) -> "BoundInterval":
        if not self.certainly_gt(0):
            raise ValueError("logarithm of an interval that is not strictly positive")
        p = self.precision_bits
        return BoundInterval(_outward(libmpi.mpi_log(self._iv, p), p), p)

    def sqrt(self) -> "BoundInterval":
        if self.certainly_lt(0):
            raise ValueError("square root of a negative interval")
        p = self.precision_bits
        return BoundInterval(libmpi.mpi_sqrt(self._iv, p), p)

    def __pow__(self, exponent):
        """Integer powers directly; rational powers as ``exp(e * ln x)``."""
        if isinstance(exponent, int):
            if exponent < 0:
                return 1 / (self ** (-exponent))
            return BoundInterval(libmpi.mpi_pow_int(self._iv, exponent, self.precision_bits),
                                 self.precision_bits)
        if isinstance(exponent, Fraction) and exponent.denominator == 1:
            return self ** int(exponent)
        return (self.log() * exponent).exp()

    def hull(self, other: "BoundInterval") -> "BoundInterval":
        p = self._prec(other)
        a = self._iv[0] if libmp.mpf_le(self._iv[0], other._iv[0]) else other._iv[0]
        b = self._iv[1] if libmp.mpf_ge(self._iv[1], other._iv[1]) else other._iv[1]
        return BoundInterval((a, b), p)

    def widen(self, radius) -> "BoundInterval":
        """Enclosure of ``self + [-radius, radius]``."""
        r = Fraction(radius)
        return self + BoundInterval.from_bounds(-r, r, self.precision_bits)

    # -- predicates -----------------------------------------------------------
    def contains(self, x) -> bool:
        if isinstance(x, BoundInterval):
            return libmp.mpf_le(self._iv[0], x._iv[0]) and libmp.mpf_ge(self._iv[1], x._iv[1])
        x = _mpf_to_fraction(x._mpf_) if isinstance(x, mpmath.mpf) else Fraction(x)
        return self.lo_fraction <= x <= self.hi_fraction

    def _coerce_strict(self, other) -> "BoundInterval":
        out = self._coerce(other)
        if out is NotImplemented:
            raise TypeError(f"cannot compare an interval with {type(other).__name__}")
        return out

    def certainly_lt(self, other) -> bool:
        other = self._coerce_strict(other)
        return libmp.mpf_lt(self._iv[1], other._iv[0])

    def certainly_gt(self, other) -> bool:
        other = self._coerce_strict(other)
        return libmp.mpf_gt(self._iv[0], other._iv[1])

    def overlaps(self, other: "BoundInterval") -> bool:
        return not (self.certainly_lt(other) or self.certainly_gt(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoundInterval):
            return NotImplemented
        return self._iv == other._iv

    def __hash__(self) -> int:
        return hash(self._iv)

    # -- printing -------------------------------------------------------------
    def decimal_hi(self, digits: int = 30) -> str:
        """Upper endpoint rounded up to ``digits`` significant digits."""
        return _decimal(self.hi_fraction, digits, ROUND_CEILING)

    def decimal_lo(self, digits: int = 30) -> str:
        """Lower endpoint rounded down to ``digits`` significant digits."""
        return _decimal(self.lo_fraction, digits, ROUND_FLOOR)


def _decimal(q: Fraction, digits: int, rounding) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = rounding
        d = Decimal(q.numerator) / Decimal(q.denominator)
    if d == d.to_integral_value():
        return str(int(d))
    text = format(d, "f")
    return text.rstrip("0").rstrip(".") if "." in text else text
