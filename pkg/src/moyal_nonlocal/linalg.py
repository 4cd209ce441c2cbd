"""Dense complex matrix helpers shared by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Functions here
never mutate their inputs.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

CONSTRUCTION_TOL = 1e-12
PROPERTY_TOL = 1e-9
NORM_RTOL = 1e-12
NORM_ATOL = 1e-15
NORM_SEED = 20070131


class NormNotConverged(RuntimeError):
    """The norm iteration hit its cap; ``estimate`` holds the last value."""

    def __init__(self, estimate: float, iterations: int):
        super().__init__(
            f"operator norm did not converge after {iterations} iterations "
            f"(last estimate {estimate!r})"
        )
        self.estimate = estimate
        self.iterations = iterations


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def _check_finite(m: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise FloatingPointError("matrix has non-finite entries")
    return m


def _require_square(a: np.ndarray, name: str = "matrix") -> None:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def commutator(a, b) -> np.ndarray:
    """Return ``ab - ba``."""
    a, b = _check_finite(as_matrix(a)), _check_finite(as_matrix(b))
    if a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(
            f"commutator needs square matrices of equal size, got {a.shape} and {b.shape}"
        )
    return _check_finite(a @ b - b @ a)


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal matrix ``diag(a, b, ...)`` of square blocks."""
    mats = [as_matrix(b) for b in blocks]
    for m in mats:
        _require_square(m, "direct_sum block")
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for m in mats:
        k = m.shape[0]
        out[i:i + k, i:i + k] = m
        i += k
    return out


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def operator_norm(a, rtol: float = NORM_RTOL, max_iter: int | None = None,
                  seed: int = NORM_SEED, atol: float = NORM_ATOL) -> float:
    """Largest singular value of ``a``.

    Runs Lanczos with full reorthogonalisation on ``a* a``, i.e. power
    iteration from a seeded start vector with a Rayleigh-Ritz step over all
    iterates so far. Plain power iteration stalls when the top singular
    values nearly coincide, which the tower residuals routinely do. Stops
    when the Ritz residual of the top eigenvalue of ``a* a`` drops below
    ``rtol`` times that eigenvalue (or ``atol**2``), or when the Krylov space
    is exhausted.

    ``a`` may be a dense array or anything supporting ``@``, ``.shape`` and
    ``.conj().T`` (scipy sparse matrices work).
    """
    if isinstance(a, np.ndarray) or not hasattr(a, "conj"):
        a = as_matrix(a)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return 0.0
    if max_iter is None:
        max_iter = 10 * max(rows, cols) + 200
    ah = a.conj().T
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(cols) + 1j * rng.standard_normal(cols)
    basis = [x / np.linalg.norm(x)]
    alphas: list[float] = []
    betas: list[float] = []
    lam = 0.0
    for it in range(1, max_iter + 1):
        v = basis[-1]
        w = ah @ (a @ v)
        alpha = float(np.vdot(v, w).real)
        w = w - alpha * v - (betas[-1] * basis[-2] if betas else 0)
        q = np.array(basis)
        for _ in range(2):
            w = w - q.T @ (q.conj() @ w)
        beta = float(np.linalg.norm(w))
        alphas.append(alpha)
        t = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        evals, evecs = np.linalg.eigh(t)
        lam = max(float(evals[-1]), 0.0)
        resid = beta * abs(evecs[-1, -1])
        exhausted = len(basis) >= cols or beta <= 1e-14 * max(lam, np.sqrt(np.sum(np.square(alphas))), 1e-300)
        if exhausted or resid <= max(rtol * lam, atol * atol):
            return float(np.sqrt(lam))
        betas.append(beta)
        basis.append(w / beta)
    raise NormNotConverged(float(np.sqrt(lam)), max_iter)


def is_unitary(a, tol: float = CONSTRUCTION_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return operator_norm(a.conj().T @ a - identity(a.shape[0])) <= tol


def jacobi_eigvalsh(h, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Slow and simple on purpose: this is the reference solver the tests use
    to cross-check :func:`operator_norm`. Returns eigenvalues in ascending
    order.
    """
    a = as_matrix(h).copy()
    _require_square(a, "jacobi_eigvalsh input")
    if np.max(np.abs(a - a.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(a))):
        raise ValueError("jacobi_eigvalsh needs a Hermitian matrix")
    n = a.shape[0]
    scale = max(np.max(np.abs(a)), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                # J = diag(1, conj(phase)) @ real rotation; J* A J zeroes a[p, q]
                phase = apq / abs(apq)
                theta = 0.5 * np.arctan2(2 * abs(apq), aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                a[:, [p, q]] = a[:, [p, q]] @ j
                a[[p, q], :] = j.conj().T @ a[[p, q], :]
    return np.sort(np.diag(a).real)


def to_json_array(a) -> list:
    """Row-major list of ``[re, im]`` pairs."""
    a = as_matrix(a)
    return [[float(z.real), float(z.imag)] for z in a.ravel()]


def from_json_array(rows: int, cols: int, entries: Sequence[Sequence[float]]) -> np.ndarray:
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return _check_finite(flat.reshape(rows, cols))
