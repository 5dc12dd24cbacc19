"""Numerical oracles.

Nothing here trusts the closed forms in `radiation`: the metric is
differentiated by central finite differences, Christoffel symbols are
assembled from those derivatives, and conservation, geodesic transport and
the eikonal equation are checked as raw tensor arithmetic.  Residuals are
reported next to a local scale (see `scan`) so tolerances mean the same
thing everywhere in the box.
"""

from __future__ import annotations

import os
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, EvalError, QuadratureNonConvergence, SingularMatrix
from .models import CssModel, MetricAtPoint, build_metric, validate_constraints
from .numerics import Mat4Sym, rk4_step
from .radiation import energy_density, stress_energy, wave_covector

__all__ = [
    "CheckResult",
    "GeodesicTrajectory",
    "ResidualReport",
    "christoffel",
    "divergence_residual",
    "eikonal_residual",
    "geodesic_residual",
    "integrate_null_geodesic",
    "scan",
]

Point = Sequence[float]
RadiationFn = Callable[[CssModel, tuple[float, ...]], Mat4Sym]
CovectorFn = Callable[[CssModel, tuple[float, ...]], Sequence[float]]

DEFAULT_TOLERANCES: Mapping[str, float] = {
    "null": 1e-10,
    "divergence": 1e-5,
    "geodesic": 1e-5,
    "constraint": 1e-8,
}

_SKIP_ERRORS = (DomainError, EvalError, QuadratureNonConvergence, SingularMatrix)


@dataclass(frozen=True)
class CheckResult:
    name: str
    points_evaluated: int
    max_abs: float  # raw residual at the worst point
    mean_abs: float  # mean of locally normalized residuals
    normalization: float  # local scale at the worst point
    tol: float
    passed: bool
    detail: str | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "points_evaluated": self.points_evaluated,
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "normalization": self.normalization,
            "tol": self.tol,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ResidualReport:
    model: str
    type: str
    case: int
    seed: int
    fd_step: float
    points: int
    skipped: int
    checks: tuple[CheckResult, ...]
    rows: tuple[tuple[float, ...], ...] | None = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "type": self.type,
            "case": self.case,
            "seed": self.seed,
            "fd_step": self.fd_step,
            "points": self.points,
            "skipped": self.skipped,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class GeodesicTrajectory:
    samples: tuple[tuple[float, tuple[float, ...], tuple[float, ...], float], ...]
    hamiltonian_drift: float
    p_deviation: float
    truncated: bool


def _steps(x: tuple[float, ...], h: float) -> tuple[float, float, float, float]:
    return tuple(h * (1.0 + abs(v)) for v in x)  # type: ignore[return-value]


def _shift(x: tuple[float, ...], axis: int, d: float) -> tuple[float, ...]:
    y = list(x)
    y[axis] += d
    return tuple(y)


def _default_radiation(model: CssModel, x: tuple[float, ...], metric=None) -> Mat4Sym:
    return stress_energy(model, x, metric)


def _default_covector(model: CssModel, x: tuple[float, ...]):
    return wave_covector(model, x)


def christoffel(model: CssModel, x: Point, h: float = 1e-3) -> np.ndarray:
    """Gamma^i_{jk} from central differences of the covariant metric."""
    xt = tuple(float(v) for v in x)
    center = build_metric(model, xt)
    ginv = center.ginv.as_array()
    dg = _metric_derivatives(model, xt, h)
    return _gamma_from(ginv, dg)


def _metric_derivatives(model: CssModel, x: tuple[float, ...], h: float) -> np.ndarray:
    dg = np.empty((4, 4, 4))
    hs = _steps(x, h)
    for a in range(4):
        gp = build_metric(model, _shift(x, a, hs[a])).g.as_array()
        gm = build_metric(model, _shift(x, a, -hs[a])).g.as_array()
        dg[a] = (gp - gm) / (2.0 * hs[a])
    return dg


def _gamma_from(ginv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    # dg[a, b, c] = d_a g_bc; Gamma^i_jk = g^il (d_j g_lk + d_k g_lj - d_l g_jk)/2
    t1 = np.transpose(dg, (1, 0, 2))
    t2 = np.transpose(dg, (1, 2, 0))
    return 0.5 * np.einsum("il,ljk->ijk", ginv, t1 + t2 - dg)


class _Stencil:
    """Metric, stress tensor and covector differentiated at one point."""

    def __init__(
        self,
        model: CssModel,
        x: tuple[float, ...],
        h: float,
        radiation: RadiationFn | None,
        covector: CovectorFn | None,
        want_div: bool = True,
        want_geo: bool = True,
    ) -> None:
        rad = radiation
        cov = covector if covector is not None else _default_covector
        self.center = build_metric(model, x)
        self.ginv = self.center.ginv.as_array()
        if want_div:
            self.T = (
                _default_radiation(model, x, self.center) if rad is None else rad(model, x)
            ).as_array()
        self.L = np.array(cov(model, x), dtype=float)
        hs = _steps(x, h)
        dg = np.empty((4, 4, 4))
        dT = np.empty((4, 4, 4)) if want_div else None
        dL = np.empty((4, 4)) if want_geo else None
        for a in range(4):
            acc_g = []
            acc_t = []
            acc_l = []
            for s in (1.0, -1.0):
                xs = _shift(x, a, s * hs[a])
                m = build_metric(model, xs)
                acc_g.append(m.g.as_array())
                if want_div:
                    t = _default_radiation(model, xs, m) if rad is None else rad(model, xs)
                    acc_t.append(t.as_array())
                if want_geo:
                    acc_l.append(np.array(cov(model, xs), dtype=float))
            dg[a] = (acc_g[0] - acc_g[1]) / (2.0 * hs[a])
            if want_div:
                dT[a] = (acc_t[0] - acc_t[1]) / (2.0 * hs[a])
            if want_geo:
                dL[a] = (acc_l[0] - acc_l[1]) / (2.0 * hs[a])
        self.dT = dT
        self.dL = dL
        self.gamma = _gamma_from(self.ginv, dg)

    def null_parts(self) -> tuple[float, float]:
        raw = abs(float(self.L @ self.ginv @ self.L))
        scale = float(np.max(np.abs(self.L)) ** 2 * np.max(np.abs(self.ginv)))
        return raw, scale

    def divergence_parts(self) -> tuple[float, float]:
        assert self.dT is not None
        term1 = np.einsum("ab,abj->j", self.ginv, self.dT)
        term2 = np.einsum("ab,cab,cj->j", self.ginv, self.gamma, self.T)
        term3 = np.einsum("ab,caj,bc->j", self.ginv, self.gamma, self.T)
        raw = float(np.max(np.abs(term1 - term2 - term3)))
        scale = max(
            float(np.max(np.abs(self.T)) * np.max(np.abs(self.gamma))),
            float(np.max(np.abs(self.dT))),
        )
        return raw, scale

    def geodesic_parts(self) -> tuple[float, float]:
        assert self.dL is not None
        l_up = self.ginv @ self.L
        transport = np.einsum("a,aj->j", l_up, self.dL) - np.einsum(
            "a,caj,c->j", l_up, self.gamma, self.L
        )
        raw = float(np.max(np.abs(transport)))
        scale = float(np.max(np.abs(self.L)) ** 2 * np.max(np.abs(self.gamma)))
        return raw, scale


def _ratio(raw: float, scale: float) -> float:
    if scale == 0.0:
        return 0.0 if raw == 0.0 else float("inf")
    return raw / scale


def divergence_residual(
    model: CssModel,
    x: Point,
    h: float = 1e-3,
    radiation: RadiationFn | None = None,
) -> float:
    """Locally normalized |nabla^i T_ij| at one point."""
    st = _Stencil(model, tuple(float(v) for v in x), h, radiation, None, want_geo=False)
    return _ratio(*st.divergence_parts())


def geodesic_residual(
    model: CssModel,
    x: Point,
    h: float = 1e-3,
    covector: CovectorFn | None = None,
) -> float:
    """Locally normalized |L^a nabla_a L_j| at one point."""
    st = _Stencil(model, tuple(float(v) for v in x), h, None, covector, want_div=False)
    return _ratio(*st.geodesic_parts())


def eikonal_residual(
    model: CssModel,
    x: Point,
    covector: CovectorFn | None = None,
) -> float:
    """Locally normalized |g^ij L_i L_j| at one point."""
    xt = tuple(float(v) for v in x)
    metric = build_metric(model, xt)
    cov = covector if covector is not None else _default_covector
    lv = np.array(cov(model, xt), dtype=float)
    ginv = metric.ginv.as_array()
    raw = abs(float(lv @ ginv @ lv))
    scale = float(np.max(np.abs(lv)) ** 2 * metric.ginv.norm_max())
    return _ratio(raw, scale)


def integrate_null_geodesic(
    model: CssModel,
    x0: Point,
    steps: int = 1000,
    dl: float = 1e-3,
    p0: Sequence[float] | None = None,
) -> GeodesicTrajectory:
    """Hamiltonian flow of H = g^ij p_i p_j / 2 from the wave covector."""
    xt = tuple(float(v) for v in x0)
    p_init = tuple(float(v) for v in (p0 if p0 is not None else wave_covector(model, xt)))
    box = model.box

    def inside(xs: np.ndarray) -> bool:
        return all(lo <= v <= hi for v, (lo, hi) in zip(xs, box))

    def hamiltonian(xs: np.ndarray, ps: np.ndarray) -> float:
        ginv = build_metric(model, tuple(xs)).ginv.as_array()
        return 0.5 * float(ps @ ginv @ ps)

    def deriv(state: np.ndarray) -> np.ndarray:
        xs = state[:4]
        ps = state[4:]
        ginv = build_metric(model, tuple(xs)).ginv.as_array()
        xdot = ginv @ ps
        pdot = np.empty(4)
        for i in range(4):
            hi = 1e-4 * (1.0 + abs(float(xs[i])))
            xp = xs.copy()
            xp[i] += hi
            xm = xs.copy()
            xm[i] -= hi
            gp = build_metric(model, tuple(xp)).ginv.as_array()
            gm = build_metric(model, tuple(xm)).ginv.as_array()
            pdot[i] = -0.5 * float(ps @ ((gp - gm) / (2.0 * hi)) @ ps)
        return np.concatenate([xdot, pdot])

    state = np.array(xt + p_init, dtype=float)
    h0 = hamiltonian(state[:4], state[4:])
    samples = [(0.0, xt, p_init, h0)]
    drift = 0.0
    dev = 0.0
    truncated = False
    for n in range(1, steps + 1):
        state = rk4_step(state, deriv, dl)
        if not inside(state[:4]):
            truncated = True
            break
        xs = tuple(float(v) for v in state[:4])
        ps = tuple(float(v) for v in state[4:])
        hv = hamiltonian(state[:4], state[4:])
        samples.append((n * dl, xs, ps, hv))
        drift = max(drift, abs(hv - h0))
        try:
            ref = wave_covector(model, xs)
            dev = max(dev, max(abs(a - b) for a, b in zip(ps, ref)))
        except _SKIP_ERRORS:
            pass
    return GeodesicTrajectory(
        samples=tuple(samples),
        hamiltonian_drift=drift,
        p_deviation=dev,
        truncated=truncated,
    )


def _thread_count() -> int:
    n = min(32, os.cpu_count() or 1)
    env = os.environ.get("CSSKIT_THREADS")
    if env:
        try:
            n = max(1, min(n, int(env)))
        except ValueError:
            pass
    return n


@dataclass
class _Accumulator:
    count: int = 0
    ratio_sum: float = 0.0
    best_ratio: float = -1.0
    best_raw: float = 0.0
    best_scale: float = 1.0

    def add(self, raw: float, scale: float) -> float:
        r = _ratio(raw, scale)
        self.count += 1
        self.ratio_sum += r
        if r > self.best_ratio:
            self.best_ratio = r
            self.best_raw = raw
            self.best_scale = scale if scale != 0.0 else 1.0
        return r

    def result(self, name: str, tol: float) -> CheckResult:
        if self.count == 0:
            return CheckResult(name, 0, 0.0, 0.0, 1.0, tol, False, "no points evaluated")
        return CheckResult(
            name=name,
            points_evaluated=self.count,
            max_abs=self.best_raw,
            mean_abs=self.ratio_sum / self.count,
            normalization=self.best_scale,
            tol=tol,
            passed=self.best_ratio <= tol,
        )


def scan(
    model: CssModel,
    n_points: int = 1000,
    seed: int = 0,
    fd_step: float = 1e-3,
    tolerances: Mapping[str, float] | None = None,
    radiation: RadiationFn | None = None,
    covector: CovectorFn | None = None,
    collect_rows: bool = False,
    constraint_grid_n: int = 6,
) -> ResidualReport:
    """Residual sweep over random interior points; deterministic per seed."""
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)

    violations = validate_constraints(model, grid_n=constraint_grid_n, tol=tol["constraint"])
    constraint_check = CheckResult(
        name="constraints",
        points_evaluated=constraint_grid_n**4,
        max_abs=violations[0].magnitude if violations else 0.0,
        mean_abs=violations[0].magnitude if violations else 0.0,
        normalization=1.0,
        tol=tol["constraint"],
        passed=not violations,
        detail=(
            f"{violations[0].name} at {violations[0].x}" if violations else None
        ),
    )

    rng = random.Random(seed)
    pts = []
    for _ in range(n_points):
        x = []
        for (lo, hi) in model.box:
            margin = 3.0 * fd_step * (1.0 + max(abs(lo), abs(hi)))
            x.append(rng.uniform(lo + margin, hi - margin))
        pts.append(tuple(x))

    def work(x: tuple[float, ...]):
        try:
            st = _Stencil(model, x, fd_step, radiation, covector)
            null_p = st.null_parts()
            div_p = st.divergence_parts()
            geo_p = st.geodesic_parts()
            eps = energy_density(model, x, st.center)
            return ("ok", x, st.L, eps, null_p, div_p, geo_p)
        except _SKIP_ERRORS as exc:
            return ("skip", x, str(exc))

    workers = _thread_count()
    if workers > 1 and n_points > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(work, pts))
    else:
        outcomes = [work(x) for x in pts]

    null_acc = _Accumulator()
    div_acc = _Accumulator()
    geo_acc = _Accumulator()
    rows: list[tuple[float, ...]] = []
    skipped = 0
    for out in outcomes:
        if out[0] == "skip":
            skipped += 1
            continue
        _, x, lv, eps, null_p, div_p, geo_p = out
        nr = null_acc.add(*null_p)
        dr = div_acc.add(*div_p)
        gr = geo_acc.add(*geo_p)
        if collect_rows:
            rows.append(tuple(x) + tuple(float(v) for v in lv) + (eps, nr, dr, gr))

    return ResidualReport(
        model=model.info.label,
        type=model.type.value,
        case=model.case_id,
        seed=seed,
        fd_step=fd_step,
        points=n_points,
        skipped=skipped,
        checks=(
            constraint_check,
            null_acc.result("null", tol["null"]),
            div_acc.result("divergence", tol["divergence"]),
            geo_acc.result("geodesic", tol["geodesic"]),
        ),
        rows=tuple(rows) if collect_rows else None,
    )
