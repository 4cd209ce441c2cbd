"""Generalised clock and shift matrices and the Weyl basis built from them.

Three families are supported:

``cyclotomic-odd``
    odd ``N``, ``omega = exp(4 pi i / N)``, ``g^N = h^N = I``.
``cyclotomic-even``
    even ``N``, ``omega = exp(2 pi i / N)``, ``g`` carries an extra factor
    ``sqrt(omega)`` and ``h`` a ``-1`` in its wrap-around entry, so that
    ``g^N = h^N = -I`` and both are unimodular.
``rotation``
    ``N = q`` and ``omega = exp(2 pi i p / q)`` for a reduced fraction ``p/q``.

In all cases ``h g = omega g h`` with ``h e_j = e_{j-1}`` (cyclically).
Matrix powers are formed from exact integer exponents, never by repeated
floating-point multiplication.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .linalg import commutator, identity, operator_norm
from .modes import cross

FAMILIES = ("cyclotomic-odd", "cyclotomic-even", "rotation")
CONVENTIONS = ("J", "K", "rotation")


def _unit(numerator: int, denominator: int) -> complex:
    """``exp(2 pi i numerator / denominator)`` with the exponent reduced first."""
    r = numerator % denominator
    return complex(np.exp(2j * np.pi * r / denominator))


@dataclass(frozen=True)
class ClockShiftBasis:
    dim: int
    family: str
    # omega = exp(2 pi i * omega_num / phase_den), half_phase likewise with half_num
    omega_num: int
    half_num: int
    phase_den: int
    g: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)
    fraction: tuple[int, int] | None = None

    @property
    def phase(self) -> complex:
        return _unit(self.omega_num, self.phase_den)

    @property
    def half_phase(self) -> complex:
        return _unit(self.half_num, self.phase_den)

    @property
    def half_angle(self) -> float:
        """Argument of ``half_phase`` in ``[0, 2 pi)``."""
        return 2 * math.pi * (self.half_num % self.phase_den) / self.phase_den

    @property
    def k(self) -> float:
        return 2 * math.pi / self.dim

    # --- exact powers -------------------------------------------------------

    def g_power(self, m: int) -> np.ndarray:
        n = self.dim
        j = np.arange(n)
        if self.family == "cyclotomic-even":
            # (sqrt(omega) omega^j)^m = exp(pi i m (2j+1) / N)
            nums = (m * (2 * j + 1)) % (2 * n)
            diag = np.exp(1j * np.pi * nums / n)
        else:
            nums = (self.omega_num * m * j) % self.phase_den
            diag = np.exp(2j * np.pi * nums / self.phase_den)
        return np.diag(diag.astype(np.complex128))

    def h_power(self, m: int) -> np.ndarray:
        n = self.dim
        wrap = -1 if self.family == "cyclotomic-even" else 1
        out = np.zeros((n, n), dtype=np.complex128)
        for j in range(n):
            t = j - m
            laps = t // n  # signed number of passes through the wrap entry
            out[t % n, j] = wrap ** abs(laps)
        return out


def build_basis(dim: int, family: str = "cyclotomic-odd",
                rotation_fraction: tuple[int, int] | None = None) -> ClockShiftBasis:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    if family == "cyclotomic-odd":
        if dim % 2 == 0:
            raise ValueError(f"cyclotomic-odd needs odd dim, got {dim}")
        omega_num, half_num, den, frac = 2, 1, dim, None
    elif family == "cyclotomic-even":
        if dim % 2:
            raise ValueError(f"cyclotomic-even needs even dim, got {dim}")
        omega_num, half_num, den, frac = 2, 1, 2 * dim, None
    else:
        if rotation_fraction is None:
            raise ValueError("rotation family needs rotation_fraction=(p, q)")
        p, q = (int(v) for v in rotation_fraction)
        if math.gcd(p, q) != 1:
            raise ValueError(f"rotation fraction {p}/{q} is not reduced")
        if q != dim:
            raise ValueError(f"rotation family needs dim == q, got dim={dim}, q={q}")
        omega_num, half_num, den, frac = 2 * p, p, 2 * q, (p, q)
    proto = ClockShiftBasis(dim, family, omega_num, half_num, den,
                            np.empty((0, 0)), np.empty((0, 0)), frac)
    return ClockShiftBasis(dim, family, omega_num, half_num, den,
                           proto.g_power(1), proto.h_power(1), frac)


def weyl_matrix(basis: ClockShiftBasis, m) -> np.ndarray:
    """``J_m = half_phase^(m1 m2) g^m1 h^m2``."""
    m1, m2 = int(m[0]), int(m[1])
    scalar = _unit(basis.half_num * m1 * m2, basis.phase_den)
    return scalar * (basis.g_power(m1) @ basis.h_power(m2))


def product_phase(basis: ClockShiftBasis, m, n) -> complex:
    """Scalar ``c`` with ``J_m J_n = c J_{m+n}``.

    With ``h g = omega g h`` this is ``half_phase^(-cross(m, n))``.
    """
    return _unit(-basis.half_num * cross(m, n), basis.phase_den)


def verify_product(basis: ClockShiftBasis, m, n) -> float:
    jm, jn = weyl_matrix(basis, m), weyl_matrix(basis, n)
    jmn = weyl_matrix(basis, (m[0] + n[0], m[1] + n[1]))
    return operator_norm(jm @ jn - product_phase(basis, m, n) * jmn)


def structure_constant(basis: ClockShiftBasis, m, n, convention: str = "J") -> complex:
    """Coefficient of the commutator ``[X_m, X_n] = coeff * X_{m+n}``.

    ``J``: ``X = J``, coefficient ``-2i sin(theta * cross)`` with ``theta`` the
    half-phase angle (``2 pi / N`` for odd ``N``). ``K``: ``X = J / k``,
    ``k = 2 pi / N``, coefficient ``-(2i/k) sin(k cross)``; odd family only.
    ``rotation``: ``-2i sin(pi p / q * cross)``; rotation family only.
    """
    c = cross(m, n)
    if convention == "J":
        if basis.family == "rotation":
            raise ValueError("use the 'rotation' convention for the rotation family")
        return -2j * math.sin(basis.half_angle * c)
    if convention == "K":
        if basis.family != "cyclotomic-odd":
            raise ValueError("the K convention is defined for the cyclotomic-odd family")
        k = basis.k
        return -2j * math.sin(k * c) / k
    if convention == "rotation":
        if basis.family != "rotation":
            raise ValueError("the rotation convention needs the rotation family")
        p, q = basis.fraction
        return -2j * math.sin(math.pi * p / q * c)
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def default_convention(basis: ClockShiftBasis) -> str:
    return "rotation" if basis.family == "rotation" else "J"


def bracket_residual(basis: ClockShiftBasis, m, n, convention: str | None = None) -> float:
    """``||[X_m, X_n] - coeff X_{m+n}||_op`` for the chosen convention."""
    convention = convention or default_convention(basis)
    coeff = structure_constant(basis, m, n, convention)
    scale = 1 / basis.k if convention == "K" else 1.0
    xm = scale * weyl_matrix(basis, m)
    xn = scale * weyl_matrix(basis, n)
    xmn = scale * weyl_matrix(basis, (m[0] + n[0], m[1] + n[1]))
    return operator_norm(commutator(xm, xn) - coeff * xmn)


def fundamental_cell(dim: int, include_origin: bool = False) -> list[tuple[int, int]]:
    cell = [(a, b) for a in range(dim) for b in range(dim)]
    return cell if include_origin else cell[1:]


@dataclass
class SpanReport:
    dim: int
    generators: int
    max_abs_trace: float
    gram_min_eig: float
    gram_max_dev: float
    excluded: tuple[int, int] = (0, 0)

    @property
    def ok(self) -> bool:
        return self.gram_min_eig >= self.dim * (1 - 1e-9)


def basis_span_check(basis: ClockShiftBasis) -> SpanReport:
    """Trace-orthogonality of the ``N^2 - 1`` non-identity Weyl matrices.

    ``J_(0,0)`` is the identity and is excluded from the generator set.
    """
    if basis.family == "rotation":
        raise ValueError("span check is defined for the cyclotomic families")
    n = basis.dim
    mats = np.array([weyl_matrix(basis, m) for m in fundamental_cell(n)])
    traces = np.einsum("kii->k", mats)
    flat = mats.reshape(len(mats), -1)
    gram = flat.conj() @ flat.T  # Tr(J_a^* J_b)
    eig = np.linalg.eigvalsh(gram)
    return SpanReport(
        dim=n,
        generators=len(mats),
        max_abs_trace=float(np.max(np.abs(traces))),
        gram_min_eig=float(eig[0]),
        gram_max_dev=float(np.max(np.abs(gram - n * np.eye(len(mats))))),
    )


def random_pairs(rng: np.random.Generator, count: int, dim: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Index pairs drawn from the window ``[-dim, 2 dim)`` to exercise periodicity."""
    raw = rng.integers(-dim, 2 * dim, size=(count, 4))
    return [((int(a), int(b)), (int(c), int(d))) for a, b, c, d in raw]


def verification_report(basis: ClockShiftBasis, rng: np.random.Generator,
                        samples: int = 100) -> dict:
    """Product and bracket residuals over seeded random index pairs."""
    pairs = random_pairs(rng, samples, basis.dim)
    prod = max(verify_product(basis, m, n) for m, n in pairs)
    brak = max(bracket_residual(basis, m, n) for m, n in pairs)
    return {
        "N": basis.dim,
        "family": basis.family,
        "max_product_residual": prod,
        "max_bracket_residual": brak,
        "samples": samples,
    }


def generator_checks(basis: ClockShiftBasis, tol: float = 1e-12) -> dict[str, float]:
    """Residuals of the defining relations of ``g`` and ``h``."""
    n = basis.dim
    eye = identity(n)
    sign = -1 if basis.family == "cyclotomic-even" else 1
    out = {
        "g_unitary": operator_norm(basis.g.conj().T @ basis.g - eye),
        "h_unitary": operator_norm(basis.h.conj().T @ basis.h - eye),
        "hg_omega_gh": operator_norm(basis.h @ basis.g - basis.phase * basis.g @ basis.h),
    }
    if basis.family != "rotation":
        out["g_pow_N"] = operator_norm(np.linalg.matrix_power(basis.g, n) - sign * eye)
        out["h_pow_N"] = operator_norm(np.linalg.matrix_power(basis.h, n) - sign * eye)
    return out


def large_n_bound_holds(dims: Iterable[int], crosses: Iterable[int]) -> bool:
    """``|structure constant| <= 4 pi |cross| / N`` for the odd cyclotomic family."""
    crosses = list(crosses)
    for n in dims:
        b = build_basis(n, "cyclotomic-odd")
        for c in crosses:
            if abs(structure_constant(b, (1, 0), (0, c))) > 4 * math.pi * abs(c) / n + 1e-15:
                return False
    return True
