"""Space-time models in privileged coordinates.

A model is a family label plus case number, the family's metric functions
(each of a single coordinate), a positive conformal factor Delta of all
four coordinates, the case constants, and an energy profile over the
case's field invariants.  The contravariant metric is the family matrix M
divided by Delta; the covariant metric comes from numerical inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cases import CaseInfo, CssType, case_info
from .errors import ConfigError, SingularMatrix
from .expressions import ScalarFn1D, ScalarFn4D
from .numerics import DEFAULT_QUADRATURE, Mat4Sym, QuadratureSpec, invert_sym4

__all__ = [
    "CssType",
    "CssModel",
    "MetricAtPoint",
    "StackelPotentials",
    "Violation",
    "build_metric",
    "stackel_potentials",
    "v_potentials_3",
    "v_potentials_4",
    "validate_constraints",
]

Point = tuple[float, float, float, float]


@dataclass(frozen=True, eq=False)
class CssModel:
    type: CssType
    case_id: int
    metric_fns: Mapping[str, ScalarFn1D]
    delta: ScalarFn4D
    consts: Mapping[str, float]
    profile: ScalarFn4D
    x_ref: Point = (0.0, 0.0, 0.0, 0.0)
    box: tuple[tuple[float, float], ...] = ((-1.0, 1.0),) * 4
    sign_flips: tuple[int, int, int, int] = (1, 1, 1, 1)
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE

    def __post_init__(self) -> None:
        info = self.info
        object.__setattr__(self, "metric_fns", MappingProxyType(dict(self.metric_fns)))
        object.__setattr__(self, "consts", MappingProxyType(dict(self.consts)))
        need = set(info.function_names())
        have = set(self.metric_fns)
        if need != have:
            missing = sorted(need - have)
            extra = sorted(have - need)
            parts = []
            if missing:
                parts.append(f"missing functions {missing}")
            if extra:
                parts.append(f"unexpected functions {extra}")
            raise ConfigError(f"{info.label}: " + "; ".join(parts))
        need_c = set(info.constants)
        have_c = set(self.consts)
        if need_c != have_c:
            missing = sorted(need_c - have_c)
            extra = sorted(have_c - need_c)
            parts = []
            if missing:
                parts.append(f"missing constants {missing}")
            if extra:
                parts.append(f"unexpected constants {extra}")
            raise ConfigError(f"{info.label}: " + "; ".join(parts))
        if len(self.box) != 4 or any(lo >= hi for lo, hi in self.box):
            raise ConfigError("box must be four nonempty intervals")
        if any(not (lo <= r <= hi) for r, (lo, hi) in zip(self.x_ref, self.box)):
            raise ConfigError("x_ref must lie inside the box")
        if any(s not in (-1, 1) for s in self.sign_flips):
            raise ConfigError("sign_flips entries must be +1 or -1")
        flipped = {i for i, s in enumerate(self.sign_flips) if s == -1}
        illegal = flipped - set(info.radical_slots)
        if illegal:
            raise ConfigError(
                f"{info.label}: sign flips only allowed on radical components "
                f"{sorted(info.radical_slots)}, got flips on {sorted(illegal)}"
            )

    @property
    def info(self) -> CaseInfo:
        return case_info(self.type, self.case_id)

    def fn(self, name: str) -> ScalarFn1D:
        return self.metric_fns[name]

    def const(self, name: str) -> float:
        return self.consts[name]


@dataclass(frozen=True)
class MetricAtPoint:
    ginv: Mat4Sym  # contravariant metric, conformal factor included
    g: Mat4Sym  # covariant metric (numerical inverse)
    det: float  # determinant of ginv


@dataclass(frozen=True)
class StackelPotentials:
    V: tuple[float, ...]
    Omega: float | None


@dataclass(frozen=True)
class Violation:
    name: str
    x: Point
    magnitude: float


def v_potentials_3(t1: float, t2: float, t3: float) -> tuple[float, float, float]:
    """V-potentials of the one-Killing-triple families; cyclic differences."""
    return (t2 - t3, t3 - t1, t1 - t2)


def v_potentials_4(a: Sequence[float], b: Sequence[float]) -> tuple[float, float, float, float]:
    """Signed-cofactor potentials of the fully separated family.

    Satisfy sum(V) = sum(a_i V_i) = sum(b_i V_i) = 0 identically.
    """
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    v0 = a1 * (b2 - b3) + a2 * (b3 - b1) + a3 * (b1 - b2)
    v1 = a0 * (b3 - b2) + a2 * (b0 - b3) + a3 * (b2 - b0)
    v2 = a0 * (b1 - b3) + a1 * (b3 - b0) + a3 * (b0 - b1)
    v3 = a0 * (b2 - b1) + a1 * (b0 - b2) + a2 * (b1 - b0)
    return (v0, v1, v2, v3)


def _m_matrix(model: CssModel, x: Sequence[float]) -> np.ndarray:
    """Family matrix M with g^ij = M_ij / Delta."""
    f = model.metric_fns
    t = model.type
    if t is CssType.T30:
        a, b, c = f["a0"](x[0]), f["b0"](x[0]), f["c0"](x[0])
        d, e, ff = f["d0"](x[0]), f["e0"](x[0]), f["f0"](x[0])
        return np.array(
            [[1.0, 0.0, 0.0, 0.0], [0.0, a, b, c], [0.0, b, d, e], [0.0, c, e, ff]]
        )
    if t is CssType.T31:
        a, b = f["a0"](x[0]), f["b0"](x[0])
        c, d, ff = f["c0"](x[0]), f["d0"](x[0]), f["f0"](x[0])
        return np.array(
            [[0.0, 1.0, a, b], [1.0, 0.0, 0.0, 0.0], [a, 0.0, c, ff], [b, 0.0, ff, d]]
        )
    if t is CssType.T20:
        s = f["s"](x[0])
        aa = f["a0"](x[0]) + f["a1"](x[1])
        bb = f["b0"](x[0]) + f["b1"](x[1])
        cc = f["c0"](x[0]) + f["c1"](x[1])
        return np.array(
            [[1.0, 0.0, 0.0, 0.0], [0.0, s, 0.0, 0.0], [0.0, 0.0, aa, bb], [0.0, 0.0, bb, cc]]
        )
    if t is CssType.T21:
        f1 = f["f1"](x[1])
        aa = f["a0"](x[0]) + f["a1"](x[1])
        bb = f["b0"](x[0]) + f["b1"](x[1])
        cc = f["c0"](x[0]) + f["c1"](x[1])
        return np.array(
            [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, f1, 1.0], [0.0, f1, aa, bb], [0.0, 1.0, bb, cc]]
        )
    if t in (CssType.T10, CssType.T11):
        ts = (f["t1"](x[1]), f["t2"](x[2]), f["t3"](x[3]))
        ws = (f["w1"](x[1]), f["w2"](x[2]), f["w3"](x[3]))
        v1, v2, v3 = v_potentials_3(*ts)
        omega = ws[0] * v1 + ws[1] * v2 + ws[2] * v3
        if t is CssType.T10:
            return np.diag([omega, v1, v2, v3])
        return np.array(
            [[omega, v1, 0.0, 0.0], [v1, 0.0, 0.0, 0.0], [0.0, 0.0, v2, 0.0], [0.0, 0.0, 0.0, v3]]
        )
    # T00
    av = tuple(f[f"a{i}"](x[i]) for i in range(4))
    bv = tuple(f[f"b{i}"](x[i]) for i in range(4))
    return np.diag(v_potentials_4(av, bv))


def build_metric(model: CssModel, x: Sequence[float]) -> MetricAtPoint:
    """Contravariant and covariant metric at a point (SingularMatrix if degenerate)."""
    delta = model.delta(*x)
    ginv = Mat4Sym.from_array(_m_matrix(model, x) / delta)
    g, det = invert_sym4(ginv)
    return MetricAtPoint(ginv=ginv, g=g, det=det)


def stackel_potentials(model: CssModel, x: Sequence[float]) -> StackelPotentials:
    """V-potentials (and Omega where the family has one)."""
    f = model.metric_fns
    t = model.type
    if t in (CssType.T10, CssType.T11):
        ts = (f["t1"](x[1]), f["t2"](x[2]), f["t3"](x[3]))
        ws = (f["w1"](x[1]), f["w2"](x[2]), f["w3"](x[3]))
        v = v_potentials_3(*ts)
        omega = sum(w * vv for w, vv in zip(ws, v))
        return StackelPotentials(V=v, Omega=omega)
    if t is CssType.T00:
        av = tuple(f[f"a{i}"](x[i]) for i in range(4))
        bv = tuple(f[f"b{i}"](x[i]) for i in range(4))
        return StackelPotentials(V=v_potentials_4(av, bv), Omega=None)
    raise ValueError(f"type {t.value} has no V-potential structure")


def _axis_points(model: CssModel, axis: int, n: int) -> np.ndarray:
    lo, hi = model.box[axis]
    return np.linspace(lo, hi, n)


def _grid_points(model: CssModel, n: int) -> Iterable[Point]:
    axes = [_axis_points(model, k, n) for k in range(4)]
    for i0 in axes[0]:
        for i1 in axes[1]:
            for i2 in axes[2]:
                for i3 in axes[3]:
                    yield (float(i0), float(i1), float(i2), float(i3))


def _signature(m: np.ndarray) -> tuple[int, int]:
    eig = np.linalg.eigvalsh(0.5 * (m + m.T))
    return int(np.sum(eig > 0)), int(np.sum(eig < 0))


def validate_constraints(
    model: CssModel, grid_n: int = 6, tol: float = 1e-8
) -> list[Violation]:
    """Check case identities, radicands, divisors, Delta, and signature.

    Sampled on a grid over the box; violations are returned as data (worst
    offending point per check), never raised.
    """
    from . import radiation  # deferred: radiation imports this module

    worst: dict[str, Violation] = {}

    def record(name: str, x: Point, magnitude: float) -> None:
        cur = worst.get(name)
        if cur is None or magnitude > cur.magnitude:
            worst[name] = Violation(name, x, magnitude)

    sol = radiation.solution(model)
    for check in sol.checks:
        for xi in _axis_points(model, check.axis, max(grid_n * grid_n, 16)):
            v = check.fn(float(xi))
            x = tuple(
                float(xi) if k == check.axis else model.x_ref[k] for k in range(4)
            )
            if check.kind == "identity" and abs(v) > tol:
                record(f"identity violated: {check.name}", x, abs(v))
            elif check.kind == "radicand" and v < 0.0:
                record(f"negative radicand: {check.name}", x, -v)
            elif check.kind == "divisor" and abs(v) <= tol:
                record(f"vanishing divisor: {check.name}", x, tol - abs(v))

    if model.type is CssType.T20:
        s_fn = model.metric_fns["s"]
        for xi in _axis_points(model, 0, grid_n * grid_n):
            s = s_fn(float(xi))
            if s not in (-1.0, 1.0):
                x = (float(xi),) + tuple(model.x_ref[1:])
                record("s must be the constant +1 or -1", x, abs(abs(s) - 1.0))

    lorentz = {(1, 3), (3, 1)}
    allowed = lorentz | ({(2, 2)} if model.info.split_ok else set())
    for x in _grid_points(model, grid_n):
        delta = model.delta(*x)
        if delta <= 0.0:
            record("conformal factor must be positive", x, -delta + 1e-300)
        m = _m_matrix(model, x)
        try:
            invert_sym4(Mat4Sym.from_array(m))
        except SingularMatrix:
            record("metric degenerate", x, 1.0)
            continue
        sig = _signature(m)
        if sig not in allowed:
            record(f"signature {sig} not in allowed {sorted(allowed)}", x, 1.0)
        if model.type in (CssType.T10, CssType.T11):
            omega = stackel_potentials(model, x).Omega
            assert omega is not None
            if abs(omega) <= tol:
                record("Omega vanishes (metric treated as degenerate)", x, tol - abs(omega))

    return sorted(worst.values(), key=lambda v: v.name)
