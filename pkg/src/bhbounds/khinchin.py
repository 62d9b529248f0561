"""Certified gamma values and optimal Khinchin constants.

``A_p`` (Rademacher, real scalars) is Haagerup's closed form::

    A_p = 2^(1/2 - 1/p)                          for 1 <= p <= p0
    A_p = sqrt(2) * (Gamma((p+1)/2)/sqrt(pi))^(1/p)   for p0 <= p < 2

where ``p0 ~ 1.8474`` solves ``Gamma((p+1)/2) = sqrt(pi)/2``. ``Ã_p``
(Steinhaus, complex scalars) is ``Gamma(p/2 + 1)^(1/p)``.

Both families are computed in the log domain because the bound engines only
ever need ``ln A_p``. Swapping in a different table of constants only needs
:func:`log_khinchin` to change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import ExponentOutOfRange, NonPositiveArgument
from .exponents import ScalarField
from .intervals import DEFAULT_PRECISION, BoundInterval

GUARD_BITS = 24
MIN_THRESHOLD_PRECISION = 32


def _relabel(iv: BoundInterval, precision_bits: int) -> BoundInterval:
    return BoundInterval(iv.raw, precision_bits)


def _bernoulli(n: int) -> Fraction:
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


def log_gamma(x, precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    """Enclosure of ``ln Gamma(x)`` for rational ``x > 0``.

    Shifts ``x`` up to ``z = x + N`` and sums the Stirling series there; for
    real ``z > 0`` the truncation error is smaller in magnitude than the first
    omitted term, which is added as a symmetric error interval.
    """
    x = Fraction(x)
    if x <= 0:
        raise NonPositiveArgument(f"gamma needs a positive argument, got {x}")
    work = precision_bits + GUARD_BITS
    zmin = max(12, math.ceil(0.15 * work) + 4)
    shift = max(0, math.ceil(zmin - x))
    z = x + shift
    tol = Fraction(1, 2 ** (work + 4))

    series = Fraction(0)
    k = 1
    while True:
        term = _bernoulli(2 * k) / (2 * k * (2 * k - 1) * z ** (2 * k - 1))
        nxt = abs(_bernoulli(2 * k + 2)) / ((2 * k + 2) * (2 * k + 1) * z ** (2 * k + 1))
        series += term
        if nxt < tol:
            remainder = nxt
            break
        k += 1
        if k > 4 * work:
            raise ArithmeticError("Stirling series failed to converge")

    zi = BoundInterval.exact(z, work)
    two_pi = BoundInterval.pi(work) * 2
    lg = (zi - Fraction(1, 2)) * zi.log() - zi + two_pi.log() * Fraction(1, 2) + series
    lg = lg.widen(remainder)
    if shift:
        prod = Fraction(1)
        for i in range(shift):
            prod *= x + i
        lg = lg - BoundInterval.exact(prod, work).log()
    return _relabel(lg, precision_bits)


def gamma(x, precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    """Enclosure of ``Gamma(x)`` for rational ``x > 0``."""
    lg = log_gamma(x, precision_bits)
    return _relabel(_relabel(lg, precision_bits + GUARD_BITS).exp(), precision_bits)


def _log_gamma_three_halves(work: int) -> BoundInterval:
    # Gamma(3/2) = sqrt(pi)/2
    return BoundInterval.pi(work).log() * Fraction(1, 2) - BoundInterval.ln2(work)


def _threshold_gap(p: Fraction, work: int) -> BoundInterval:
    """``ln Gamma((p+1)/2) - ln(sqrt(pi)/2)``: positive below p0, negative above."""
    return log_gamma((p + 1) / 2, work) - _log_gamma_three_halves(work)


def haagerup_threshold(precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    """Enclosure of the root ``p0`` of ``Gamma((p+1)/2) = sqrt(pi)/2`` in (1, 2).

    The root is located by a secant iteration on interval midpoints and then
    certified by checking the sign of the gap at both endpoints.
    """
    if precision_bits < MIN_THRESHOLD_PRECISION:
        raise ValueError(f"precision_bits must be >= {MIN_THRESHOLD_PRECISION}")
    work = precision_bits + GUARD_BITS
    scale = 2 ** (precision_bits + 16)

    def snap(p: Fraction) -> Fraction:
        return Fraction(round(p * scale), scale)

    p_prev, p_cur = Fraction(184, 100), Fraction(185, 100)
    g_prev = _threshold_gap(p_prev, work).mid
    g_cur = _threshold_gap(p_cur, work).mid
    for _ in range(100):
        if g_cur == g_prev:
            break
        step = g_cur * (p_cur - p_prev) / (g_cur - g_prev)
        p_prev, g_prev = p_cur, g_cur
        p_cur = snap(p_cur - step)
        g_cur = _threshold_gap(p_cur, work).mid
        if abs(step) < Fraction(1, 2 ** (precision_bits + 8)):
            break

    delta = Fraction(1, 2 ** (precision_bits - 4))
    limit = Fraction(1, 2 ** (precision_bits - 7))
    while delta <= limit:
        lo, hi = p_cur - delta, p_cur + delta
        if _threshold_gap(lo, work).certainly_gt(0) and _threshold_gap(hi, work).certainly_lt(0):
            return BoundInterval.from_bounds(lo, hi, precision_bits)
        delta *= 2
    raise ArithmeticError("could not certify the Haagerup threshold bracket")


@dataclass(frozen=True)
class KhinchinConstant:
    p: Fraction
    field: ScalarField
    value: BoundInterval
    log_value: BoundInterval


def _check_p(p) -> Fraction:
    p = Fraction(p)
    if not 1 <= p < 2:
        raise ExponentOutOfRange(f"Khinchin exponent must lie in [1, 2), got {p}")
    return p


def log_rademacher_power_branch(p: Fraction, precision_bits: int) -> BoundInterval:
    return BoundInterval.ln2(precision_bits) * (Fraction(1, 2) - 1 / p)


def log_rademacher_gamma_branch(p: Fraction, precision_bits: int) -> BoundInterval:
    work = precision_bits + GUARD_BITS
    lg = log_gamma((p + 1) / 2, work)
    half_log_pi = BoundInterval.pi(work).log() * Fraction(1, 2)
    val = BoundInterval.ln2(work) * Fraction(1, 2) + (lg - half_log_pi) / p
    return _relabel(val, precision_bits)


def log_rademacher(p, precision_bits: int = DEFAULT_PRECISION,
                   threshold: BoundInterval | None = None) -> BoundInterval:
    p = _check_p(p)
    if threshold is None:
        threshold = haagerup_threshold(max(precision_bits, MIN_THRESHOLD_PRECISION))
    if p <= threshold.lo_fraction:
        return log_rademacher_power_branch(p, precision_bits)
    if p >= threshold.hi_fraction:
        return log_rademacher_gamma_branch(p, precision_bits)
    return log_rademacher_power_branch(p, precision_bits).hull(
        log_rademacher_gamma_branch(p, precision_bits))


def log_steinhaus(p, precision_bits: int = DEFAULT_PRECISION) -> BoundInterval:
    p = _check_p(p)
    work = precision_bits + GUARD_BITS
    return _relabel(log_gamma(p / 2 + 1, work) / p, precision_bits)


def log_khinchin(p, field: ScalarField, precision_bits: int = DEFAULT_PRECISION,
                 threshold: BoundInterval | None = None) -> BoundInterval:
    if ScalarField.parse(field) is ScalarField.REAL:
        return log_rademacher(p, precision_bits, threshold)
    return log_steinhaus(p, precision_bits)


def rademacher_constant(p, precision_bits: int = DEFAULT_PRECISION,
                        threshold: BoundInterval | None = None) -> KhinchinConstant:
    p = _check_p(p)
    lv = log_rademacher(p, precision_bits, threshold)
    return KhinchinConstant(p, ScalarField.REAL, lv.exp(), lv)


def steinhaus_constant(p, precision_bits: int = DEFAULT_PRECISION) -> KhinchinConstant:
    p = _check_p(p)
    lv = log_steinhaus(p, precision_bits)
    return KhinchinConstant(p, ScalarField.COMPLEX, lv.exp(), lv)


def khinchin_constant(p, field, precision_bits: int = DEFAULT_PRECISION,
                      threshold: BoundInterval | None = None) -> KhinchinConstant:
    if ScalarField.parse(field) is ScalarField.REAL:
        return rademacher_constant(p, precision_bits, threshold)
    return steinhaus_constant(p, precision_bits)
