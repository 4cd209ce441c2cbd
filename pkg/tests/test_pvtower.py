import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from moyal_nonlocal.contfrac import golden, sqrt2m1
from moyal_nonlocal.linalg import is_unitary, operator_norm
from moyal_nonlocal.pvtower import (
    CSV_COLUMNS, OptimizerError, bounds, build_level, distance_report, distance_row, naive_w,
    objective, optimize_w, polar_mm, rho, rows_to_csv, run_optimizer, shift_sparse,
    stacked_generators,
)

GOLD = golden(20)


def random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_golden_level_4():
    lv = build_level(GOLD, 4)
    assert (lv.p, lv.q) == (3, 5)
    assert lv.zeta == pytest.approx(cmath.exp(6j * math.pi / 5), abs=1e-15)
    assert lv.commutation_residual() <= 1e-14


def test_golden_level_7():
    lv = build_level(GOLD, 7)
    assert lv.q == 21
    assert lv.commutation_residual() <= 1e-13


def test_scalar_level():
    lv = build_level(GOLD, 1)
    assert lv.q == 1
    assert np.array_equal(lv.U, [[1]]) and np.array_equal(lv.V, [[1]])
    assert lv.commutation_residual() == 0.0


@pytest.mark.parametrize("n", [4, 9, 12])
def test_level_invariants(n):
    lv = build_level(GOLD, n)
    assert is_unitary(lv.U, 1e-13) and is_unitary(lv.V, 1e-13)
    assert operator_norm(np.linalg.matrix_power(lv.U, lv.q) - np.eye(lv.q)) <= 1e-11
    e = np.eye(lv.q)
    assert np.array_equal(lv.U @ e[:, 0], e[:, 1])


def test_level_errors():
    with pytest.raises(ValueError):
        build_level(golden(5), 9)
    with pytest.raises(ValueError, match="cap"):
        build_level(golden(25), 19)
    with pytest.raises(ValueError):
        build_level(GOLD, -1)


def test_naive_w():
    w = naive_w(GOLD, 4)
    assert w.shape == (5, 5)
    assert np.array_equal(np.sort(np.abs(w), axis=0), np.sort(np.eye(5), axis=0))
    assert operator_norm(w.conj().T @ w - np.eye(5)) == 0.0


def test_rho_unital_and_layout(rng):
    cf = sqrt2m1(8)
    w = naive_w(cf, 4)
    q1, q2 = cf.pq(3)[1], cf.pq(2)[1]
    out = rho(cf, 4, np.eye(q1), np.eye(q2), w)
    assert out.distance(type(out)(4, (np.eye(cf.pq(4)[1]), np.eye(q1)))) == 0.0
    x, y = random_matrix(rng, q1), random_matrix(rng, q2)
    blocks = rho(cf, 4, x, y, w).blocks
    assert np.array_equal(blocks[0][:q1, :q1], x) and np.array_equal(blocks[0][q1:2 * q1, q1:2 * q1], x)
    assert np.array_equal(blocks[1], x)


def test_rho_homomorphism_and_norm(rng):
    n = 6
    q1, q2 = GOLD.pq(n - 1)[1], GOLD.pq(n - 2)[1]
    w = optimize_w(GOLD, n, iters=20)
    for _ in range(10):
        x1, y1, x2, y2 = (random_matrix(rng, s) for s in (q1, q2, q1, q2))
        lhs = rho(GOLD, n, x1 @ x2, y1 @ y2, w)
        rhs = rho(GOLD, n, x1, y1, w) @ rho(GOLD, n, x2, y2, w)
        scale = max(lhs.norm(), 1.0)
        assert lhs.distance(rhs) <= 1e-12 * scale
        adj = rho(GOLD, n, x1.conj().T, y1.conj().T, w)
        assert adj.distance(rho(GOLD, n, x1, y1, w).adjoint()) <= 1e-12 * scale
        norm = max(operator_norm(x1), operator_norm(y1))
        assert abs(rho(GOLD, n, x1, y1, w).norm() - norm) <= 1e-12 * norm


def test_rho_errors():
    w = naive_w(GOLD, 5)
    with pytest.raises(ValueError):
        rho(GOLD, 5, np.eye(3), np.eye(3), w)
    with pytest.raises(ValueError, match="unitary"):
        rho(GOLD, 5, np.eye(5), np.eye(3), 1.01 * w)
    with pytest.raises(ValueError):
        rho(GOLD, 5, np.eye(5), np.eye(3), np.eye(7))


def test_self_match_objective_zero(rng):
    u = shift_sparse(13)
    w, history = polar_mm([(u, u)], np.eye(13), np.arange(13), 50, rng, perturbation=0.0)
    assert history[-1] == 0.0
    assert objective(w, [(u, u)]) == 0.0


def test_optimizer_monotone_and_better_than_naive():
    for n in range(5, 11):
        run = run_optimizer(GOLD, n, iters=200, seed=n)
        assert all(b <= a + 1e-10 * a for a, b in zip(run.history, run.history[1:]))
        assert run.objective <= run.naive_objective
        assert is_unitary(run.w, 1e-10)


def test_optimizer_deterministic():
    a = optimize_w(GOLD, 7, iters=30, seed=3)
    b = optimize_w(GOLD, 7, iters=30, seed=3)
    assert np.array_equal(a, b)


def test_optimizer_raises_on_increase(rng, monkeypatch):
    import moyal_nonlocal.pvtower as pv
    calls = iter(range(1, 100))
    monkeypatch.setattr(pv, "objective", lambda w, pairs: float(next(calls)))
    au, av = stacked_generators(GOLD, 5)
    with pytest.raises(OptimizerError):
        pv.polar_mm([(au, shift_sparse(8))], np.eye(8), np.arange(8), 5, rng)


def test_bounds_arithmetic():
    bu, bv = bounds(GOLD, 6)
    assert bu == pytest.approx(60 * math.pi)
    assert bv == pytest.approx(42 * math.pi / 8 + 7 * math.pi / 5)


def test_report_n6_vacuous():
    for strategy in ("naive", "optimized"):
        row = distance_row(GOLD, 6, strategy)
        assert row.boundU == pytest.approx(188.4955592, abs=1e-6)
        assert row.vacuousU and row.passU and row.status == "vacuous"
        assert row.w_form


def test_naive_distances():
    # the identity layout leaves the shift's wrap entries misplaced
    rows = distance_report(GOLD, 10, "naive")
    assert [r.n for r in rows] == list(range(4, 11))
    assert all(abs(r.dU - 2) <= 1e-12 for r in rows)
    assert [round(r.dV, 6) for r in rows[:3]] == [1.175571, 0.765367, 0.478631]
    assert [r.w_form for r in rows] == [False, False, True, True, True, True, True]


def test_report_law_and_dominance():
    naive = distance_report(GOLD, 11, "naive")
    opt = distance_report(GOLD, 11, "optimized")
    for a, b in zip(naive, opt):
        for r in (a, b):
            assert 0 <= r.dU <= 2 + 1e-9 and 0 <= r.dV <= 2 + 1e-9
            if r.vacuousU:
                assert r.passU
            if r.vacuousV:
                assert r.passV
        assert b.dU <= a.dU


def test_report_requires_range():
    with pytest.raises(ValueError):
        distance_report(GOLD, 3)
    with pytest.raises(ValueError):
        distance_row(GOLD, 5, "greedy")


def test_csv_export():
    text = rows_to_csv(distance_report(sqrt2m1(8), 5, "naive"))
    lines = text.splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 3


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 30), st.integers(2, 40))
def test_commutation_any_fraction(p, q):
    from moyal_nonlocal.contfrac import expand
    if p >= q or math.gcd(p, q) != 1:
        return
    cf = expand(p / q, 40)
    for n in range(1, len(cf) + 1):
        assert build_level(cf, n).commutation_residual() <= 1e-12
