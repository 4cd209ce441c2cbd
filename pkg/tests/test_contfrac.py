import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from moyal_nonlocal.contfrac import (
    approximation_check, determinant, expand, parse_theta, golden, sqrt2m1, to_csv,
)


def fib(n):
    a, b = 1, 1
    out = []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


def test_golden_convergents():
    assert golden(5).convergents == [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]


def test_golden_q_is_fibonacci_to_90():
    cf = golden(90)
    assert [cf.pq(n)[1] for n in range(1, 91)] == fib(91)[1:]


def test_golden_alternates_around_tau():
    tau = (math.sqrt(5) - 1) / 2
    signs = [math.copysign(1, tau - p / q) for p, q in golden(12).convergents]
    assert all(a == -b for a, b in zip(signs, signs[1:]))


def test_invariants_hold():
    for cf in (golden(40), sqrt2m1(40), expand(math.pi - 3, 10)):
        for n in range(1, len(cf) + 1):
            p, q = cf.pq(n)
            assert math.gcd(p, q) == 1
            if n >= 2:
                assert q > cf.pq(n - 1)[1] or n == 2 and cf.a(1) == 1
            # with p_0 = 0, p_1 = 1, q_0 = 1 the sign is (-1)**(n-1)
            assert determinant(cf, n) == (-1) ** (n - 1)


def test_pq_zero_and_bounds():
    cf = golden(3)
    assert cf.pq(0) == (0, 1)
    with pytest.raises(IndexError):
        cf.pq(4)
    with pytest.raises(IndexError):
        cf.a(0)


def test_expand_examples():
    half = expand(0.5, 10)
    assert half.quotients == (2,) and half.convergents == [(1, 2)] and half.terminated
    g = expand((math.sqrt(5) - 1) / 2, 100)
    assert set(g.quotients) == {1} and len(g.quotients) == 36
    s = expand(math.sqrt(2) - 1, 100)
    assert set(s.quotients) == {2} and s.convergents[:3] == [(1, 2), (2, 5), (5, 12)]
    assert len(s.quotients) == 19


def test_expand_respects_double_precision():
    g = expand((math.sqrt(5) - 1) / 2, 100)
    assert g.pq(len(g))[1] ** 2 <= 1 / 2.220446049250313e-16


def test_expand_exact_rationals():
    assert expand(0.3, 10).quotients == (3, 3)
    assert expand(1 / 3, 10).quotients == (3,)
    assert expand(0.4375, 10).quotients == (2, 3, 2)


def test_expand_pi_prefix():
    assert expand(math.pi - 3, 10).quotients[:5] == (7, 15, 1, 292, 1)


def test_expand_limits():
    assert len(expand(math.sqrt(2) - 1, 3)) == 3
    with pytest.raises(ValueError):
        expand(1.0, 5)
    with pytest.raises(ValueError):
        expand(0.2, 0)


def test_parse_theta():
    assert parse_theta("golden", 4) == golden(4)
    assert parse_theta("sqrt2m1", 4) == sqrt2m1(4)
    assert parse_theta("0.25", 4).quotients == (4,)


def test_approximation_examples():
    g = approximation_check(golden(4))
    assert g.ok
    assert abs(g.errors[3]) == pytest.approx(0.018034, abs=1e-6)
    assert g.bounds[3] != g.bounds[3]  # last level has no successor
    assert approximation_check(golden(5)).bounds[3] == pytest.approx(0.025)
    s = approximation_check(sqrt2m1(4))
    assert abs(s.errors[2]) == pytest.approx(0.00245, abs=1e-5) and s.bounds[2] == pytest.approx(1 / 348)
    r = approximation_check(expand(0.3, 10))
    assert r.ok and r.exact_at_end and r.errors[-1] == 0.0


def test_approximation_deep_levels():
    for cf in (golden(60), sqrt2m1(60)):
        rep = approximation_check(cf)
        assert rep.ok and rep.failures == [] and rep.alternating


def test_approximation_detects_wrong_theta():
    wrong = type(golden(1))(0.7, "custom", golden(6).quotients, exact=Fraction(7, 10))
    assert not approximation_check(wrong).ok


def test_approximation_needs_two_levels():
    with pytest.raises(ValueError):
        approximation_check(golden(1))


def test_csv():
    lines = to_csv(golden(10)).splitlines()
    assert lines[0] == "n,a_n,p_n,q_n,theta_minus_convergent"
    assert lines[-1].startswith("10,1,55,89,")
    assert len(lines) == 11


@given(st.fractions(min_value=Fraction(1, 10 ** 5), max_value=Fraction(99999, 10 ** 5),
                    max_denominator=10 ** 5))
def test_expand_recovers_small_rationals(x):
    if not 0 < x < 1:
        return
    cf = expand(float(x), 60)
    p, q = cf.pq(len(cf))
    assert cf.terminated and Fraction(p, q) == x


@given(st.floats(1e-6, 1 - 1e-6))
def test_expand_floats_certified(theta):
    cf = expand(theta, 60)
    assert len(cf) >= 1
    rep = approximation_check(cf) if len(cf) >= 2 or cf.terminated else None
    assert rep is None or rep.ok
