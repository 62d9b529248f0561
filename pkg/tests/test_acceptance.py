"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (shown even without ``-s``)
and then asserts. Timings start from empty constant tables so cached work
from other tests does not flatter them.
"""

import time
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from bhbounds import recurrence
from bhbounds.errors import NotBohnenblustHille
from bhbounds.exponents import classical_tuple, make_tuple, prop21_tuple, solve_weights
from bhbounds.interpolation import default_family, optimize_decomposition
from bhbounds.khinchin import gamma, haagerup_threshold, khinchin_constant
from bhbounds.recurrence import best_constant, growth_baseline, recorded_split, split_bound
from bhbounds.verifier import campaign
from oracles import quad_gamma

pytestmark = pytest.mark.acceptance

ULP = F(1, 2 ** 120)


@pytest.fixture
def report(capsys):
    recurrence._tables.clear()
    start = time.perf_counter()

    def emit(label, ok, limit, detail=""):
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label} ({elapsed:.2f}s / {limit}s) {detail}".rstrip())
        return ok

    return emit


def test_c01_littlewood_constants(report):
    real, cplx = best_constant(2, "real").value, best_constant(2, "complex").value
    with mpmath.workdps(60):
        ok = real.contains(mpmath.sqrt(2)) and cplx.contains(2 / mpmath.sqrt(mpmath.pi))
    ok = ok and real.width < F(1, 10 ** 25) and cplx.width < F(1, 10 ** 25)
    assert report("C1 Littlewood constants", ok, 1, f"real={real.decimal_hi(20)} complex={cplx.decimal_hi(20)}")


def test_c02_doubling_law(report):
    ok = True
    for n in range(1, 51):
        s = split_bound(n, n, "complex")
        ok &= best_constant(2 * n, "complex").value.hi_fraction <= s.hi_fraction + ULP
        cn = best_constant(n, "complex").value
        a = khinchin_constant(F(2 * n, n + 1), "complex").value
        ok &= s.overlaps(cn / a ** n)
    assert report("C2 doubling law n=1..50", ok, 5)


def test_c03_odd_law(report):
    ok = True
    for n in range(1, 51):
        m = 2 * n + 1
        cn, cn1 = best_constant(n, "complex").value, best_constant(n + 1, "complex").value
        an = khinchin_constant(F(2 * n, n + 1), "complex").value
        an1 = khinchin_constant(F(2 * n + 2, n + 2), "complex").value
        ref = (cn / an ** (n + 1)) ** F(n, m) * (cn1 / an1 ** n) ** F(n + 1, m)
        ok &= split_bound(n, n + 1, "complex").overlaps(ref)
    assert report("C3 odd law n=1..50", ok, 5)


def test_c04_subexponential_dominance(report):
    ok, worst = True, None
    for field in ("real", "complex"):
        for m in range(1, 201):
            v, base = best_constant(m, field).value, growth_baseline(m, field)
            # m = 1, 2 are equalities, so only "not certainly above" can be asked of intervals
            good = not v.certainly_gt(base) if m < 3 else v.certainly_lt(base)
            if not good and worst is None:
                worst = (field, m)
            ok &= good
    assert report("C4 dominance m<=200 both fields", ok, 30, "" if worst is None else f"first failure {worst}")


def test_c05_split_26(report):
    s1214, s1313 = split_bound(12, 14, "real"), split_bound(13, 13, "real")
    cert = best_constant(26, "real")
    ok = s1214.hi_fraction < s1313.lo_fraction
    ok &= recorded_split(cert) == (12, 14) or cert.value == s1214
    assert report("C5 C_26 from 12+14", ok, 2,
                  f"12+14={s1214.decimal_hi(12)} 13+13={s1313.decimal_lo(12)} recorded={recorded_split(cert)}")


def test_c06_triple_example(report):
    printed = make_tuple([F(12, 7), F(8, 5), F(40, 31)])
    with pytest.raises(NotBohnenblustHille):
        optimize_decomposition(printed, default_family(3, "real"))
    # rational search in the order q1 > q2 > q3: keep q1, q2 and solve q3 for defect 0
    q1, q2 = F(12, 7), F(8, 5)
    q3 = 1 / (2 - 1 / q1 - 1 / q2)
    target = make_tuple([q1, q2, q3])
    assert target.defect == 0 and q1 > q2 > q3 == F(24, 19)
    cert = optimize_decomposition(target, default_family(3, "real"))
    cert.check()
    ok = cert.value.hi_fraction < 2
    assert report("C6 triple example < 2", ok, 2,
                  f"target={target} value={cert.value.decimal_hi(12)} (printed tuple defect {printed.defect})")


def test_c07_mixed_shape_bound(report):
    q, r, s, t, u = F(9, 5), F(15, 8), F(2), F(5, 3), F(3, 2)
    target = make_tuple([q, q, q, r, r, s, t, u])
    assert target.defect == 0
    assert len({q, r, s, t, u}) == 5 and s > t > u
    assert F(3, 2) <= q <= 2 and F(4, 3) <= r <= 2 and F(3, 2) <= s <= 2
    assert F(4, 3) <= t < 2 and 1 <= u < 2
    cert = optimize_decomposition(target, default_family(8, "real"))
    cert.check()
    bound = growth_baseline(8, "real")
    ok = cert.value.certainly_lt(bound)
    assert report("C7 shape (q,q,q,r,r,s,t,u) < (sqrt 2)^7", ok, 30,
                  f"value={cert.value.decimal_hi(12)} limit={bound.decimal_lo(8)}")


def test_c08_weight_solver(report):
    ok = True
    for n in range(1, 21):
        m = 2 * n + 1
        left = prop21_tuple(m, n, range(1, n + 1))
        right = prop21_tuple(m, n + 1, range(n + 1, m + 1))
        ok &= tuple(solve_weights(classical_tuple(m), [left, right])) == (F(n, m), F(n + 1, m))
    assert report("C8 odd-pair weights n=1..20", ok, 1)


def test_c09_soundness_audit(report):
    c2 = best_constant(2, "real").value.hi_fraction
    res = campaign(2, 2, make_tuple([F(4, 3), F(4, 3)]), 1000, seed=0, field="real")
    ok = np.sqrt(2) - 1e-9 <= res.max_ratio <= float(c2) + 1e-9
    details = [f"(2,2) max={res.max_ratio:.12f}"]
    for n, d in [(2, 3), (3, 2)]:
        q = classical_tuple(n)
        cert = optimize_decomposition(q, default_family(n, "real"))
        r = campaign(n, d, q, 1000, seed=0, field="real")
        ok &= r.max_ratio <= float(cert.value.hi_fraction) + 1e-9
        details.append(f"({n},{d}) max={r.max_ratio:.6f} <= {cert.value.decimal_hi(8)}")
    assert report("C9 soundness audit", ok, 60, "; ".join(details))


def test_c10_oracle_agreement(report):
    worst = mpmath.mpf(0)
    with mpmath.workdps(50):
        for x in (F(1, 2), F(1), F(3, 2), F(5, 3), F(2), F(7, 4)):
            g = gamma(x, 128)
            worst = max(worst, abs(mpmath.mpf(g.mid.numerator) / g.mid.denominator - quad_gamma(x)))
        th = haagerup_threshold(128)
        ok = worst < mpmath.mpf("1e-25")
        ok &= th.lo > mpmath.mpf("1.84735") and th.hi < mpmath.mpf("1.84745")
    assert report("C10 oracle agreement", ok, 5, f"max |gamma - quad| = {mpmath.nstr(worst, 3)} p0={th.decimal_lo(12)}")
