"""Continued fractions of numbers in (0, 1) and their convergents.

Indexing: ``p_0 = 0, p_1 = 1, q_0 = 1, q_1 = a_1`` and for ``n >= 2``
``p_n = a_n p_{n-1} + p_{n-2}``, ``q_n = a_n q_{n-1} + q_{n-2}``. With this
start the determinant ``p_n q_{n-1} - p_{n-1} q_n`` equals ``(-1)**(n-1)``.
"""
from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

TAGS = ("golden", "sqrt2m1", "custom")
SNAP_DENOMINATOR = 2 ** 20


@dataclass(frozen=True)
class ContinuedFraction:
    theta: float
    tag: str
    quotients: tuple[int, ...]
    # exact value for custom inputs (floats are dyadic rationals)
    exact: Fraction | None = field(default=None, compare=False)
    terminated: bool = False

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")
        if any(a < 1 for a in self.quotients):
            raise ValueError("partial quotients must be positive integers")

    def __len__(self) -> int:
        return len(self.quotients)

    def a(self, n: int) -> int:
        """Partial quotient ``a_n`` (1-based)."""
        if not 1 <= n <= len(self.quotients):
            raise IndexError(f"a_{n} not available (have {len(self.quotients)} terms)")
        return self.quotients[n - 1]

    def pq(self, n: int) -> tuple[int, int]:
        """Convergent ``(p_n, q_n)``; ``n = 0`` gives ``(0, 1)``."""
        ps, qs = self._table()
        if not 0 <= n < len(ps):
            raise IndexError(f"convergent {n} not available (have 0..{len(ps) - 1})")
        return ps[n], qs[n]

    def _table(self) -> tuple[list[int], list[int]]:
        cached = self.__dict__.get("_pq_cache")
        if cached is None:
            ps, qs = [0], [1]
            if self.quotients:
                ps.append(1)
                qs.append(self.quotients[0])
            for a in self.quotients[1:]:
                ps.append(a * ps[-1] + ps[-2])
                qs.append(a * qs[-1] + qs[-2])
            cached = (ps, qs)
            object.__setattr__(self, "_pq_cache", cached)
        return cached

    @property
    def convergents(self) -> list[tuple[int, int]]:
        """``[(p_1, q_1), ..., (p_n, q_n)]``."""
        ps, qs = self._table()
        return list(zip(ps[1:], qs[1:]))

    def theta_decimal(self, digits: int) -> Decimal:
        """``theta`` to at least ``digits`` significant digits."""
        with localcontext() as ctx:
            ctx.prec = digits + 10
            if self.tag == "golden":
                return (Decimal(5).sqrt() - 1) / 2
            if self.tag == "sqrt2m1":
                return Decimal(2).sqrt() - 1
            exact = self.exact if self.exact is not None else Fraction(self.theta)
            return Decimal(exact.numerator) / Decimal(exact.denominator)


def _periodic(tag: str, a: int, theta: float, n_terms: int) -> ContinuedFraction:
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    return ContinuedFraction(theta, tag, (a,) * n_terms)


def golden(n_terms: int) -> ContinuedFraction:
    """``(sqrt(5) - 1) / 2 = [1, 1, 1, ...]``; convergents are Fibonacci ratios."""
    return _periodic("golden", 1, (math.sqrt(5) - 1) / 2, n_terms)


def sqrt2m1(n_terms: int) -> ContinuedFraction:
    """``sqrt(2) - 1 = [2, 2, 2, ...]``."""
    return _periodic("sqrt2m1", 2, math.sqrt(2) - 1, n_terms)


def expand(theta: float, max_terms: int) -> ContinuedFraction:
    """Gauss-map expansion of a float in (0, 1).

    A float within two ulps of a fraction with denominator at most
    ``2**20`` is taken to be that fraction and expanded exactly to its end.
    Otherwise the float's exact binary value is expanded, and a quotient is
    kept only while every number within ``eps`` of ``theta`` shares it (the
    uncertainty interval sits inside the cylinder of the quotients so far)
    and ``q_n**2 <= 1 / eps``.
    """
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if max_terms < 1:
        raise ValueError("max_terms must be positive")
    limit = 1 / sys.float_info.epsilon
    x = Fraction(theta)
    snapped = x.limit_denominator(SNAP_DENOMINATOR)
    exact_input = abs(snapped - x) <= 2 * Fraction(math.ulp(theta))
    if exact_input:
        x = snapped
    eps = Fraction(sys.float_info.epsilon)
    lo, hi = x - eps, x + eps
    target = x
    quotients: list[int] = []
    p_prev, p, q_prev, q = 1, 0, 0, 1  # (p_{-1}, p_0, q_{-1}, q_0)
    terminated = False
    while len(quotients) < max_terms:
        inv = 1 / x
        a = math.floor(inv)
        p_next, q_next = a * p + p_prev, a * q + q_prev
        if q_next * q_next > limit and not exact_input:
            break
        rest = inv - a
        if rest != 0 and not exact_input:
            ends = sorted([Fraction(p_next, q_next), Fraction(p_next + p, q_next + q)])
            if not (ends[0] < lo and hi < ends[1]):
                break
        quotients.append(a)
        p_prev, p, q_prev, q = p, p_next, q, q_next
        x = rest
        if x == 0:
            terminated = True
            break
    return ContinuedFraction(theta, "custom", tuple(quotients), exact=target,
                             terminated=terminated)


def parse_theta(text: str, n_terms: int) -> ContinuedFraction:
    """``golden``, ``sqrt2m1`` or a decimal literal."""
    if text == "golden":
        return golden(n_terms)
    if text == "sqrt2m1":
        return sqrt2m1(n_terms)
    return expand(float(text), n_terms)


def determinant(cf: ContinuedFraction, n: int) -> int:
    """``p_n q_{n-1} - p_{n-1} q_n`` in exact integer arithmetic."""
    p1, q1 = cf.pq(n)
    p0, q0 = cf.pq(n - 1)
    return p1 * q0 - p0 * q1


@dataclass
class ApproximationReport:
    ok: bool
    checked: int
    failures: list[int]
    # signed errors theta - p_n/q_n, as floats for display
    errors: list[float]
    bounds: list[float]
    alternating: bool
    exact_at_end: bool


def approximation_check(cf: ContinuedFraction) -> ApproximationReport:
    """Check ``|theta - p_n/q_n| < 1/(q_n q_{n+1})`` and sign alternation.

    Comparisons run in high-precision decimal so they stay meaningful when
    ``1/q_n**2`` is far below double precision.
    """
    if len(cf) < 2 and not cf.terminated:
        raise ValueError("approximation_check needs at least two convergents")
    _, q_last = cf.pq(len(cf))
    digits = 2 * len(str(q_last)) + 30
    exact = cf.exact if cf.tag == "custom" else None
    theta = exact if exact is not None else cf.theta_decimal(digits)
    num = Fraction if exact is not None else Decimal
    failures: list[int] = []
    errors: list[float] = []
    bounds: list[float] = []
    signs: list[int] = []
    with localcontext() as ctx:
        ctx.prec = digits + 10
        for n in range(1, len(cf) + 1):
            p, q = cf.pq(n)
            err = theta - num(p) / num(q)
            errors.append(float(err))
            if err != 0:
                signs.append(1 if err > 0 else -1)
            if n == len(cf):
                bounds.append(float("nan"))
                continue
            _, q_next = cf.pq(n + 1)
            bound = num(1) / (num(q) * num(q_next))
            bounds.append(float(bound))
            # a terminating expansion meets the bound with equality one step before the end
            tight = cf.terminated and n == len(cf) - 1 and abs(err) == bound
            if not (abs(err) < bound or tight):
                failures.append(n)
        exact_at_end = False
        if cf.terminated and exact is not None:
            p, q = cf.pq(len(cf))
            exact_at_end = Fraction(p, q) == exact
            if not exact_at_end:
                failures.append(len(cf))
    alternating = all(s1 == -s0 for s0, s1 in zip(signs, signs[1:]))
    return ApproximationReport(
        ok=not failures and alternating,
        checked=len(cf),
        failures=failures,
        errors=errors,
        bounds=bounds,
        alternating=alternating,
        exact_at_end=exact_at_end,
    )


def to_csv(cf: ContinuedFraction) -> str:
    report = approximation_check(cf) if len(cf) >= 2 or cf.terminated else None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "a_n", "p_n", "q_n", "theta_minus_convergent"])
    for n in range(1, len(cf) + 1):
        p, q = cf.pq(n)
        err = report.errors[n - 1] if report else cf.theta - p / q
        w.writerow([n, cf.a(n), p, q, repr(err)])
    return buf.getvalue()
