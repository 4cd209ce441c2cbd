"""Run reports: one builder per CLI subcommand.

Each builder takes plain parameters plus a ``numpy`` generator and returns a
:class:`RunReport` whose ``results`` hold the tabular payload. The CLI only
parses arguments and renders these.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import bratteli, clockshift, contfrac, modes, poset, pvtower

STATUSES = ("pass", "fail", "vacuous", "info")


@dataclass
class Check:
    name: str
    status: str
    measured: float | None = None
    bound: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @classmethod
    def at_most(cls, name: str, measured: float, bound: float) -> "Check":
        return cls(name, "pass" if measured <= bound else "fail", float(measured), float(bound))

    @classmethod
    def truth(cls, name: str, ok: bool) -> "Check":
        return cls(name, "pass" if ok else "fail")

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status,
                "measured": _num(self.measured), "bound": _num(self.bound)}


def _num(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return x


@dataclass
class RunReport:
    command: str
    parameters: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    results: Any = None
    # CSV view: column names and one dict per row
    columns: list[str] | None = None
    table: list[dict] | None = None
    dot: str | None = None
    wall_time_ms: int = 0

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "checks": [c.to_json() for c in self.checks],
            "results": self.results,
            "wall_time_ms": self.wall_time_ms,
        }


def timed(builder, *args, **kwargs) -> RunReport:
    t0 = time.perf_counter()
    rep = builder(*args, **kwargs)
    rep.wall_time_ms = int(round((time.perf_counter() - t0) * 1000))
    return rep


# --- su ----------------------------------------------------------------------

def su_report(n: int, family: str, rng: np.random.Generator, tol: float = 1e-11,
              theta: str = "golden", samples: int = 100) -> RunReport:
    params = {"n": n, "family": family, "samples": samples, "tol": tol}
    if family == "rotation":
        cf = contfrac.parse_theta(theta, max(n, 1))
        p, q = cf.pq(n)
        basis = clockshift.build_basis(q, "rotation", (p, q))
        params.update(theta=theta, p=p, q=q)
    else:
        basis = clockshift.build_basis(n, family)
    rep = RunReport("su", params)
    for name, val in clockshift.generator_checks(basis).items():
        rep.checks.append(Check.at_most(name, val, 1e-12))
    ver = clockshift.verification_report(basis, rng, samples)
    rep.checks.append(Check.at_most("product_residual", ver["max_product_residual"], tol))
    rep.checks.append(Check.at_most("bracket_residual", ver["max_bracket_residual"], tol))
    if family != "rotation":
        span = clockshift.basis_span_check(basis)
        rep.checks.append(Check.at_most("trace_zero", span.max_abs_trace, 1e-12))
        rep.checks.append(Check("gram_min_eig", "pass" if span.ok else "fail",
                                span.gram_min_eig, float(basis.dim)))
    rows = [{"m": list(m), "n": list(k), "cross": clockshift.cross(m, k),
             "product_residual": clockshift.verify_product(basis, m, k),
             "bracket_residual": clockshift.bracket_residual(basis, m, k)}
            for m, k in clockshift.random_pairs(rng, min(samples, 20), basis.dim)]
    rep.results = rep.table = rows
    rep.columns = ["m", "n", "cross", "product_residual", "bracket_residual"]
    return rep


# --- moyal -------------------------------------------------------------------

def moyal_report(n: int, levels: int, tol: float = 1e-6, max_component: int = 2) -> RunReport:
    d = modes.DeformationParam.cyclotomic(n)
    rep = RunReport("moyal", {"n": n, "k": d.k, "levels": levels, "tol": tol,
                              "max_component": max_component})
    r = range(-max_component, max_component + 1)
    grid = modes.aliasing_min_grid((max_component, 0), (0, 0))
    worst = 0.0
    for m in ((a, b) for a in r for b in r):
        for k in ((a, b) for a in r for b in r):
            quad = modes.sine_bracket_quadrature(m, k, d, grid)
            worst = max(worst, abs(quad - modes.sine_coefficient(m, k, d)))
    rep.checks.append(Check.at_most("quadrature_vs_closed_form", worst, tol))
    ks = [0.4 / 2 ** i for i in range(levels)]
    rows = []
    for c in (1, 2, 3):
        lim = modes.classical_limit_report((1, 0), (0, c), ks)
        for i, row in enumerate(lim):
            rep.checks.append(Check(f"limit_c{c}_k{i}", "pass" if row.ok else "fail",
                                    row.abs_err, row.bound))
            ratio = lim[i - 1].abs_err / row.abs_err if i else None
            if ratio is not None:
                ok = 3.5 <= ratio <= 4.5
                rep.checks.append(Check(f"limit_ratio_c{c}_k{i}", "pass" if ok else "fail", ratio, 4.5))
            rows.append({"cross": c, "k": row.k, "sine": row.sine, "poisson": row.poisson,
                         "abs_err": row.abs_err, "bound": row.bound, "ratio": ratio})
    rep.results = rep.table = rows
    rep.columns = ["cross", "k", "sine", "poisson", "abs_err", "bound", "ratio"]
    return rep


# --- cf ----------------------------------------------------------------------

def cf_report(theta: str, levels: int) -> RunReport:
    cf = contfrac.parse_theta(theta, levels)
    rep = RunReport("cf", {"theta": theta, "levels": levels, "terms": len(cf),
                           "terminated": cf.terminated})
    if len(cf) < levels and not cf.terminated:
        rep.checks.append(Check("resolution", "info", float(len(cf)), float(levels)))
    worst = 0
    for n in range(1, len(cf) + 1):
        if contfrac.determinant(cf, n) != (-1) ** (n - 1):
            worst += 1
    rep.checks.append(Check("determinant_identity", "pass" if worst == 0 else "fail",
                            float(worst), 0.0))
    if len(cf) >= 2 or cf.terminated:
        approx = contfrac.approximation_check(cf)
        rep.checks.append(Check("approximation_bound", "pass" if not approx.failures else "fail",
                                float(len(approx.failures)), 0.0))
        rep.checks.append(Check.truth("alternating_signs", approx.alternating))
        errors = approx.errors
    else:
        errors = [cf.theta - p / q for p, q in cf.convergents]
    rep.results = rep.table = [
        {"n": n, "a_n": cf.a(n), "p_n": cf.pq(n)[0], "q_n": cf.pq(n)[1],
         "theta_minus_convergent": errors[n - 1]}
        for n in range(1, len(cf) + 1)
    ]
    rep.columns = ["n", "a_n", "p_n", "q_n", "theta_minus_convergent"]
    return rep


# --- bratteli ----------------------------------------------------------------

BRATTELI_FAMILIES = ("penrose", "pv", "poset")


def bratteli_report(family: str, levels: int, rng: np.random.Generator, theta: str = "golden",
                    tol: float = 1e-12, samples: int = 50) -> RunReport:
    if family == "penrose":
        d = bratteli.penrose_diagram(levels)
    elif family == "pv":
        d = bratteli.pv_diagram(contfrac.parse_theta(theta, levels), levels)
    elif family == "poset":
        d = bratteli.poset_algebra_diagram(levels)
    else:
        raise ValueError(f"unknown diagram family {family!r}; expected one of {BRATTELI_FAMILIES}")
    params = {"family": family, "levels": levels, "tol": tol, "samples": samples}
    if family == "pv":
        params["theta"] = theta
    rep = RunReport("bratteli", params)
    defects = sum(abs(v) for row in d.dimension_defects() for v in row)
    rep.checks.append(Check.at_most("dimension_identity", float(defects), 0.0))
    if family in ("penrose", "pv") and (family == "penrose" or theta == "golden"):
        rep.checks.append(Check.truth("equals_penrose", d == bratteli.penrose_diagram(levels)))
    # block sizes grow like Fibonacci numbers; sample only where matrices stay small
    for level in range(d.first_level, d.last_level):
        if max(d.dims(level + 1)) > 400:
            rep.checks.append(Check(f"homomorphism_level{level}", "info"))
            continue
        res = bratteli.check_homomorphism(d, level, samples, rng)
        rep.checks.append(Check.at_most(f"homomorphism_level{level}", res, tol))
    rep.results = d.to_json()
    rep.columns = ["level", "dims", "labels", "multiplicity_to_next"]
    rep.table = [{"level": d.first_level + i, "dims": " ".join(map(str, dims)),
                  "labels": " ".join(d.labels[i]),
                  "multiplicity_to_next": ";".join(" ".join(map(str, r)) for r in d.multiplicities[i])
                  if i < len(d.multiplicities) else ""}
                 for i, dims in enumerate(d.levels)]
    rep.dot = bratteli.to_dot(d)
    return rep


# --- pv ----------------------------------------------------------------------

def _bound_status(d: float, bound: float) -> str:
    if d > 2 + 1e-9:
        return "fail"
    if bound >= 2:
        return "vacuous"
    return "pass" if d <= bound else "info"


def pv_report(theta: str, n_max: int, strategy: str, seed: int, tol: float = 1e-12,
              n_min: int = 4, iters: int = 200) -> RunReport:
    cf = contfrac.parse_theta(theta, n_max + 1)
    if len(cf) < n_max:
        raise ValueError(f"theta={theta} resolves only {len(cf)} convergents")
    rep = RunReport("pv", {"theta": theta, "n": n_max, "n_min": n_min, "strategy": strategy,
                           "seed": seed, "tol": tol, "iters": iters})
    for n in range(n_min, n_max + 1):
        rep.checks.append(Check.at_most(f"commutation_n{n}",
                                        pvtower.build_level(cf, n).commutation_residual(), tol))
    rows = pvtower.distance_report(cf, n_max, strategy, n_min=n_min, iters=iters, seed=seed)
    naive = {r.n: r for r in pvtower.distance_report(cf, n_max, "naive", n_min=n_min)} \
        if strategy == "optimized" else {}
    for r in rows:
        rep.checks.append(Check(f"dU_n{r.n}", _bound_status(r.dU, r.boundU), r.dU, r.boundU))
        rep.checks.append(Check(f"dV_n{r.n}", _bound_status(r.dV, r.boundV), r.dV, r.boundV))
        if r.n in naive:
            rep.checks.append(Check.at_most(f"dU_not_above_naive_n{r.n}", r.dU,
                                            naive[r.n].dU + 1e-12))
    rep.results = rep.table = [r.as_dict() for r in rows]
    rep.columns = list(pvtower.CSV_COLUMNS)
    return rep


# --- poset -------------------------------------------------------------------

def poset_report(example: str, points: int | None = None) -> RunReport:
    if example not in poset.EXAMPLES:
        raise ValueError(f"unknown example {example!r}; expected one of {sorted(poset.EXAMPLES)}")
    build = poset.EXAMPLES[example]
    cover = build(points) if points is not None and example != "two-point" else build()
    p, mapping = poset.quotient_from_cover(cover)
    rep = RunReport("poset", {"example": example, "points": len(cover.points)})
    rep.checks.append(Check.truth("t0", poset.is_t0(p)))
    haus = poset.is_hausdorff(p)
    rep.checks.append(Check.truth("hausdorff_iff_discrete", haus == poset.is_discrete(p)))
    again, _ = poset.quotient_from_cover(poset.induced_cover(p))
    rep.checks.append(Check.truth("quotient_idempotent", poset.isomorphic(p, again)))
    if example == "two-point":
        rep.checks.append(Check.truth("matches_ideal_poset",
                                      poset.isomorphic(p, poset.two_point_ideal_poset())))
    rep.results = {**p.to_json(), "hausdorff": haus,
                   "classes": {str(k): v for k, v in mapping.items()}}
    rep.columns = ["lower", "upper"]
    rep.table = [{"lower": a, "upper": b} for a, b in p.cover_relations()]
    rep.dot = poset.hasse_dot(p, example)
    return rep
