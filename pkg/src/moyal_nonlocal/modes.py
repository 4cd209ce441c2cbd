"""Fourier-mode algebra on the phase-space torus.

An element is a finite sum ``sum_m c_m e_m`` with ``e_m = exp(i(m1 x + m2 p))``.
Both the Poisson bracket and the sine (Moyal) bracket act diagonally on
pairs of modes, so everything reduces to scalar coefficient rules plus
bilinearity.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

import numpy as np

PRUNE = 1e-15


class Mode(NamedTuple):
    m1: int
    m2: int

    def __add__(self, other):  # type: ignore[override]
        return Mode(self.m1 + other[0], self.m2 + other[1])


def cross(m, n) -> int:
    """Integer area form ``m1*n2 - m2*n1``."""
    return int(m[0]) * int(n[1]) - int(m[1]) * int(n[0])


class ModeElement:
    """Finitely supported map from modes to complex coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        self._terms: dict[Mode, complex] = {}
        for mode, c in (terms or {}).items():
            self._add(Mode(int(mode[0]), int(mode[1])), complex(c))

    def _add(self, mode: Mode, c: complex) -> None:
        total = self._terms.get(mode, 0j) + c
        if abs(total) < PRUNE:
            self._terms.pop(mode, None)
        else:
            self._terms[mode] = total

    @classmethod
    def basis(cls, m, coeff: complex = 1.0) -> "ModeElement":
        return cls({Mode(*m): coeff})

    @property
    def terms(self) -> dict[Mode, complex]:
        return dict(self._terms)

    def coeff(self, m) -> complex:
        return self._terms.get(Mode(*m), 0j)

    def support(self) -> set[Mode]:
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __add__(self, other: "ModeElement") -> "ModeElement":
        out = ModeElement(self._terms)
        for mode, c in other._terms.items():
            out._add(mode, c)
        return out

    def __neg__(self) -> "ModeElement":
        return ModeElement({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "ModeElement") -> "ModeElement":
        return self + (-other)

    def scale(self, s: complex) -> "ModeElement":
        return ModeElement({m: s * c for m, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ModeElement) and self._terms == other._terms

    def __repr__(self) -> str:
        body = ", ".join(f"{tuple(m)}: {c:.6g}" for m, c in sorted(self._terms.items()))
        return f"ModeElement({{{body}}})"

    def evaluate(self, x, p):
        """Value of the trigonometric polynomial at ``(x, p)`` (arrays broadcast)."""
        x, p = np.asarray(x, float), np.asarray(p, float)
        out = np.zeros(np.broadcast(x, p).shape, dtype=complex)
        for (m1, m2), c in self._terms.items():
            out = out + c * np.exp(1j * (m1 * x + m2 * p))
        return out


@dataclass(frozen=True)
class DeformationParam:
    """Deformation strength ``k`` with ``hbar = 2k``; ``N`` set for the cyclotomic case."""

    k: float
    N: int | None = None

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.N is not None and abs(self.k - 2 * math.pi / self.N) > 1e-15:
            raise ValueError(f"k={self.k} is not 2*pi/{self.N}")

    @classmethod
    def cyclotomic(cls, N: int) -> "DeformationParam":
        if N < 1:
            raise ValueError("N must be positive")
        return cls(2 * math.pi / N, N)

    @property
    def hbar(self) -> float:
        return 2 * self.k


def _bilinear(f: ModeElement, g: ModeElement, rule) -> ModeElement:
    out = ModeElement()
    for m, a in f.terms.items():
        for n, b in g.terms.items():
            c = rule(m, n)
            if c:
                out._add(m + n, a * b * c)
    return out


def poisson_coefficient(m, n) -> float:
    return -float(cross(m, n))


def sine_coefficient(m, n, d: DeformationParam) -> float:
    """Coefficient of ``e_{m+n}`` in the sine bracket of ``e_m`` and ``e_n``."""
    return -math.sin(d.k * cross(m, n)) / d.k


def poisson_bracket(f: ModeElement, g: ModeElement) -> ModeElement:
    return _bilinear(f, g, poisson_coefficient)


def sine_bracket(f: ModeElement, g: ModeElement, d: DeformationParam) -> ModeElement:
    return _bilinear(f, g, lambda m, n: sine_coefficient(m, n, d))


def convention_table(m, n, d: DeformationParam) -> dict[str, complex]:
    """The bracket coefficient for one mode pair under each written convention.

    ``moyal``: sine bracket on plane waves (``2i sin`` times the ``i/2k``
    normalisation of ``K``); ``K_bch``: ``[K_m, K_n] = (1/k) sin(k c) K_{m+n}``;
    ``J_matrix``: ``-2i sin(k c)``; ``K_matrix``: ``-(2i/k) sin(k c)``. The
    ``*_ratio`` entries divide each by ``moyal`` where that is nonzero.
    """
    c = cross(m, n)
    s = math.sin(d.k * c)
    table: dict[str, complex] = {
        "moyal": -s / d.k,
        "K_bch": s / d.k,
        "J_matrix": -2j * s,
        "K_matrix": -2j * s / d.k,
    }
    base = table["moyal"]
    for key in ("K_bch", "J_matrix", "K_matrix"):
        table[f"{key}_ratio"] = table[key] / base if abs(base) > PRUNE else complex("nan")
    return table


def aliasing_min_grid(m, n) -> int:
    return 4 * max(abs(int(v)) for v in (*m, *n)) + 3


@lru_cache(maxsize=16)
def _moyal_kernel(N: int, grid: int):
    """sin of the three-point phase on the Weyl lattice around each outer sample.

    Returns ``(z, offsets, kernel)`` with ``kernel[s, a, b]`` the sine factor
    for outer point ``z[s]``, and inner points ``z[s] + h*offsets[a]``,
    ``z[s] + h*offsets[b]``, ``h = 2*pi/N``.
    """
    k = 2 * math.pi / N
    h = 2 * math.pi / N
    t = 2 * math.pi * np.arange(grid) / grid
    zx, zp = np.meshgrid(t, t, indexing="ij")
    z = np.stack([zx.ravel(), zp.ravel()], axis=1)
    j = np.arange(N)
    ox, op = np.meshgrid(j, j, indexing="ij")
    offsets = np.stack([ox.ravel(), op.ravel()], axis=1)
    x, p = z[:, 0][:, None, None], z[:, 1][:, None, None]
    x1 = x + h * offsets[:, 0][None, :, None]
    p1 = p + h * offsets[:, 1][None, :, None]
    x2 = x + h * offsets[:, 0][None, None, :]
    p2 = p + h * offsets[:, 1][None, None, :]
    phase = (p * (x1 - x2) + x * (p2 - p1) + p1 * x2 - p2 * x1) / k
    return z, offsets, np.sin(phase)


def _raw_quadrature(m, n, N: int, grid: int) -> complex:
    z, offsets, kernel = _moyal_kernel(N, grid)
    h = 2 * math.pi / N
    m_arr, n_arr = np.asarray(m, float), np.asarray(n, float)
    # integrand factors f(z'), g(z'') at z' = z + h*a
    za = z[:, None, :] + h * offsets[None, :, :]
    f = np.exp(1j * za @ m_arr)
    g = np.exp(1j * za @ n_arr)
    values = np.einsum("sa,sab,sb->s", f, kernel, g) * h ** 4
    out_mode = m_arr + n_arr
    return complex(np.mean(values * np.exp(-1j * z @ out_mode)))


def sine_bracket_quadrature(m, n, d: DeformationParam, grid: int) -> complex:
    """Coefficient of ``e_{m+n}`` in the integral form of the sine bracket.

    The four-fold integral is evaluated by the uniform product rule on the
    ``N x N`` Weyl lattice (spacing ``2*pi/N``), the one periodic grid on
    which the three-point phase is itself periodic, so the rule is exact.
    The output mode is read off by a discrete Fourier fit over ``grid**2``
    sample points. The integral's overall prefactor is fixed by matching the
    ``(1,0),(0,1)`` pair to :func:`sine_coefficient`.
    """
    if d.N is None:
        raise ValueError("quadrature needs a cyclotomic parameter k = 2*pi/N")
    if d.N < 3:
        raise ValueError("quadrature needs N >= 3 (sin(k) vanishes for N = 2)")
    need = aliasing_min_grid(m, n)
    if grid < need:
        raise ValueError(
            f"grid {grid} too small: aliasing bound requires grid >= 4*max|component| + 3 = {need}"
        )
    ref_grid = max(grid, aliasing_min_grid((1, 0), (0, 1)))
    scale = sine_coefficient((1, 0), (0, 1), d) / _raw_quadrature((1, 0), (0, 1), d.N, ref_grid)
    return scale * _raw_quadrature(m, n, d.N, grid)


@dataclass(frozen=True)
class LimitRow:
    k: float
    sine: float
    poisson: float
    abs_err: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.abs_err <= self.bound * (1 + 1e-12) + 1e-15


def classical_limit_report(m, n, ks: Iterable[float]) -> list[LimitRow]:
    c = cross(m, n)
    rows = []
    for k in ks:
        if not k > 0:
            raise ValueError(f"k must be positive, got {k}")
        d = DeformationParam(k)
        s = sine_coefficient(m, n, d)
        pb = poisson_coefficient(m, n)
        rows.append(LimitRow(k, s, pb, abs(s - pb), k * k * abs(c) ** 3 / 6))
    return rows


def limit_rows_to_csv(rows: Iterable[LimitRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "sine", "poisson", "abs_err"])
    for r in rows:
        w.writerow([repr(r.k), repr(r.sine), repr(r.poisson), repr(r.abs_err)])
    return buf.getvalue()
