from fractions import Fraction as F

import mpmath
import pytest

from bhbounds.errors import ExponentOutOfRange, NonPositiveArgument
from bhbounds.intervals import BoundInterval
from bhbounds.khinchin import (
    gamma,
    haagerup_threshold,
    log_rademacher_gamma_branch,
    log_rademacher_power_branch,
    rademacher_constant,
    steinhaus_constant,
)
from oracles import bisect_threshold, quad_gamma

ORACLE_POINTS = [F(1, 2), F(1), F(3, 2), F(5, 3), F(2), F(7, 4)]


def mp(q):
    q = F(q)
    with mpmath.workdps(50):
        return mpmath.mpf(q.numerator) / q.denominator


class TestBoundInterval:
    def test_exact_rational_encloses(self):
        iv = BoundInterval.exact(F(1, 3), 64)
        assert iv.lo_fraction < F(1, 3) < iv.hi_fraction

    def test_exact_dyadic_is_point(self):
        iv = BoundInterval.exact(F(3, 4), 64)
        assert iv.lo_fraction == iv.hi_fraction == F(3, 4)

    def test_arithmetic_encloses(self):
        a, b = BoundInterval.exact(F(1, 3)), BoundInterval.exact(F(2, 7))
        for iv, exact in [(a + b, F(1, 3) + F(2, 7)), (a - b, F(1, 3) - F(2, 7)),
                          (a * b, F(2, 21)), (a / b, F(7, 6))]:
            assert iv.contains(exact)

    def test_transcendentals(self):
        two = BoundInterval.exact(2)
        with mpmath.workdps(60):
            assert two.sqrt().contains(mpmath.sqrt(2))
            assert two.log().contains(mpmath.log(2))
            assert two.exp().contains(mpmath.exp(2))
            assert (two ** F(1, 3)).contains(mpmath.cbrt(2))
            assert BoundInterval.pi().contains(+mpmath.pi)

    def test_exp_of_zero_is_exactly_one(self):
        one = BoundInterval.exact(0).exp()
        assert one.lo_fraction == one.hi_fraction == 1

    def test_division_by_zero_interval(self):
        with pytest.raises(ZeroDivisionError):
            BoundInterval.exact(1) / BoundInterval.from_bounds(-1, 1)

    def test_decimal_printing_is_directed(self):
        iv = BoundInterval.exact(F(2, 3), 128)
        assert F(iv.decimal_hi(10)) >= iv.hi_fraction
        assert F(iv.decimal_lo(10)) <= iv.lo_fraction
        assert BoundInterval.exact(1).decimal_hi() == "1"


class TestGamma:
    @pytest.mark.parametrize("x", ORACLE_POINTS + [F(1, 3), F(11, 2), F(40, 3)])
    def test_agrees_with_quadrature(self, x):
        g = gamma(x, 128)
        ref = quad_gamma(x)
        with mpmath.workdps(50):
            assert abs(mpmath.mpf(g.mid.numerator) / g.mid.denominator - ref) < mpmath.mpf("1e-25")

    @pytest.mark.parametrize("x", ORACLE_POINTS)
    def test_encloses_reference(self, x):
        with mpmath.workdps(60):
            assert gamma(x, 128).contains(mpmath.gamma(mp(x)))

    @pytest.mark.parametrize("x", [F(1), F(3, 2), F(5, 3), F(1, 7), F(9, 4)])
    @pytest.mark.parametrize("prec", [64, 128, 200])
    def test_width_contract(self, x, prec):
        g = gamma(x, prec)
        assert g.width <= F(2) ** (8 - prec) * g.lo_fraction

    def test_identities(self):
        assert gamma(1).contains(1)
        with mpmath.workdps(60):
            assert gamma(F(3, 2)).contains(mpmath.sqrt(mpmath.pi) / 2)

    @pytest.mark.parametrize("x", [0, F(-1, 2)])
    def test_nonpositive(self, x):
        with pytest.raises(NonPositiveArgument):
            gamma(x)

    def test_nested_under_refinement(self):
        for x in ORACLE_POINTS:
            assert gamma(x, 128).contains(gamma(x, 192))


class TestThreshold:
    def test_value(self):
        th = haagerup_threshold(128)
        # 60 halvings of a 0.45-wide bracket resolve the root to ~4e-19
        ref = bisect_threshold(60)
        with mpmath.workdps(50):
            assert abs(th.lo - ref) < mpmath.mpf("1e-18")
        assert round(float(th.mid), 4) == 1.8474

    def test_brackets_sign_change(self):
        th = haagerup_threshold(64)
        with mpmath.workdps(50):
            f = lambda p: mpmath.gamma((p + 1) / 2) - mpmath.sqrt(mpmath.pi) / 2
            assert f(th.lo) > 0 > f(th.hi)

    def test_width_scales_with_precision(self):
        w64, w128 = haagerup_threshold(64).width, haagerup_threshold(128).width
        assert w64 <= F(2) ** (8 - 64)
        assert w128 <= F(2) ** (8 - 128)
        assert w64 / w128 <= F(2) ** 64

    def test_precision_floor(self):
        with pytest.raises(ValueError):
            haagerup_threshold(16)


class TestRademacher:
    def test_p_one(self):
        a = rademacher_constant(1)
        with mpmath.workdps(60):
            assert a.value.contains(1 / mpmath.sqrt(2))
            assert (1 / a.value).contains(mpmath.sqrt(2))

    def test_littlewood_exponent(self):
        with mpmath.workdps(60):
            assert rademacher_constant(F(4, 3)).value.contains(mpmath.mpf(2) ** (-0.25))

    def test_gamma_branch_near_two(self):
        p = 2 - F(1, 1000)
        a = rademacher_constant(p)
        power = log_rademacher_power_branch(p, 128).exp()
        with mpmath.workdps(60):
            pm = mp(p)
            ref = mpmath.sqrt(2) * (mpmath.gamma((pm + 1) / 2) / mpmath.sqrt(mpmath.pi)) ** (1 / pm)
            assert a.value.contains(ref)
        # past the threshold the gamma branch is the smaller of the two closed forms
        assert a.value.certainly_lt(power)

    def test_branches_agree_at_threshold(self):
        th = haagerup_threshold(128)
        for p in (th.lo_fraction, th.hi_fraction):
            g = log_rademacher_gamma_branch(p, 128)
            pw = log_rademacher_power_branch(p, 128)
            assert abs(g.mid - pw.mid) <= g.width + pw.width + th.width

    def test_hull_inside_threshold(self):
        th = haagerup_threshold(64)
        a = rademacher_constant(th.mid, 64, threshold=th)
        g = log_rademacher_gamma_branch(th.mid, 64)
        pw = log_rademacher_power_branch(th.mid, 64)
        assert a.log_value.contains(g) and a.log_value.contains(pw)

    @pytest.mark.parametrize("p", [F(1, 2), F(2), F(3)])
    def test_range(self, p):
        with pytest.raises(ExponentOutOfRange):
            rademacher_constant(p)


class TestSteinhaus:
    def test_p_one(self):
        a = steinhaus_constant(1)
        with mpmath.workdps(60):
            assert a.value.contains(mpmath.sqrt(mpmath.pi) / 2)
            assert (1 / a.value).contains(2 / mpmath.sqrt(mpmath.pi))

    def test_four_thirds(self):
        ref = quad_gamma(F(5, 3))
        with mpmath.workdps(45):
            ref = ref ** (mpmath.mpf(3) / 4)
        v = steinhaus_constant(F(4, 3)).value
        assert abs(float(v.mid) - float(ref)) < 1e-15
        assert round(float(v.mid), 5) == 0.92613

    def test_monotone_below_one_near_two(self):
        eps = [F(1, 2 ** j) for j in range(1, 11)]
        vals = [steinhaus_constant(2 - e).value for e in eps]
        assert all(v.hi_fraction < 1 for v in vals)
        assert all(a.certainly_lt(b) for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("p", [F(1, 2), F(2)])
    def test_range(self, p):
        with pytest.raises(ExponentOutOfRange):
            steinhaus_constant(p)


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 12, 13, 20, 50])
def test_constants_below_one_and_nested(k):
    p = F(2 * k, k + 1)
    for c in (rademacher_constant, steinhaus_constant):
        coarse, fine = c(p, 128).value, c(p, 192).value
        assert coarse.hi_fraction < 1
        assert (1 / coarse).hi_fraction > 1
        assert coarse.contains(fine)
