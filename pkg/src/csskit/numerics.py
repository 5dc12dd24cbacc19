"""Quadrature, finite differences, symmetric 4x4 linear algebra, RK4.

All routines are deliberately small and self-contained: they are the
independent substrate the verification oracles stand on, so they avoid
depending on anything they are later used to check.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureNonConvergence, SingularMatrix

__all__ = [
    "QuadratureSpec",
    "cumulative_integral",
    "CumulativeIntegral",
    "central_diff",
    "Mat4Sym",
    "invert_sym4",
    "rk4_step",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Adaptive-Simpson parameters."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40


DEFAULT_QUADRATURE = QuadratureSpec()


def _adapt(
    f: Callable[[float], float],
    a: float,
    fa: float,
    m: float,
    fm: float,
    b: float,
    fb: float,
    whole: float,
    tol: float,
    depth: int,
) -> float:
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureNonConvergence(
            f"interval [{a!r}, {b!r}] still above tolerance at max depth"
        )
    half = 0.5 * tol
    return _adapt(f, a, fa, lm, flm, m, fm, left, half, depth - 1) + _adapt(
        f, m, fm, rm, frm, b, fb, right, half, depth - 1
    )


def cumulative_integral(
    f: Callable[[float], float],
    x_ref: float,
    x: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integral of f from x_ref to x; exactly 0.0 when the endpoints coincide."""
    if x == x_ref:
        return 0.0
    a, b, sign = (x_ref, x, 1.0) if x > x_ref else (x, x_ref, -1.0)
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(spec.abs_tol, spec.rel_tol * abs(whole))
    return sign * _adapt(f, a, fa, m, fm, b, fb, whole, tol, spec.max_depth)


class CumulativeIntegral:
    """Memoizing cumulative integral anchored at x_ref.

    Values are assembled from segment integrals laid out on a fixed grid
    stepping away from x_ref, so the result for a given x never depends on
    what was queried before it (threaded scans stay deterministic).
    """

    def __init__(
        self,
        f: Callable[[float], float],
        x_ref: float,
        spec: QuadratureSpec = DEFAULT_QUADRATURE,
        anchor_step: float = 0.25,
    ) -> None:
        self._f = f
        self._x_ref = x_ref
        self._spec = spec
        self._step = anchor_step
        self._lock = threading.Lock()
        self._sums = {1: [0.0], -1: [0.0]}  # partial sums outward from x_ref
        self._memo: dict[float, float] = {}

    def _anchor_sum(self, side: int, k: int) -> float:
        sums = self._sums[side]
        while len(sums) <= k:
            n = len(sums)
            a = self._x_ref + side * (n - 1) * self._step
            b = self._x_ref + side * n * self._step
            sums.append(sums[-1] + cumulative_integral(self._f, a, b, self._spec))
        return sums[k]

    def __call__(self, x: float) -> float:
        with self._lock:
            hit = self._memo.get(x)
            if hit is not None:
                return hit
            side = 1 if x >= self._x_ref else -1
            k = int(abs(x - self._x_ref) // self._step)
            base = self._anchor_sum(side, k)
            anchor = self._x_ref + side * k * self._step
            val = base + cumulative_integral(self._f, anchor, x, self._spec)
            self._memo[x] = val
            return val


def central_diff(g: Callable[[float], float], x: float, h: float) -> float:
    """Symmetric difference (g(x+h) - g(x-h)) / (2h)."""
    return (g(x + h) - g(x - h)) / (2.0 * h)


_SYM_INDEX = ((0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))


@dataclass(frozen=True)
class Mat4Sym:
    """Symmetric 4x4 matrix stored as its 10 independent components.

    Component order: (00, 01, 02, 03, 11, 12, 13, 22, 23, 33).
    """

    elems: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.elems) != 10:
            raise ValueError("Mat4Sym needs exactly 10 components")

    @classmethod
    def from_array(cls, m: np.ndarray) -> "Mat4Sym":
        m = 0.5 * (m + m.T)  # discard numerical asymmetry
        return cls(tuple(float(m[i, j]) for i, j in _SYM_INDEX))

    def as_array(self) -> np.ndarray:
        out = np.empty((4, 4))
        for (i, j), v in zip(_SYM_INDEX, self.elems):
            out[i, j] = v
            out[j, i] = v
        return out

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        if i > j:
            i, j = j, i
        return self.elems[_SYM_INDEX.index((i, j))]

    def norm_max(self) -> float:
        return max(abs(v) for v in self.elems)


def invert_sym4(m: Mat4Sym) -> tuple[Mat4Sym, float]:
    """Inverse and determinant; SingularMatrix when |det| <= 1e-14 * ||m||^4."""
    arr = m.as_array()
    det = float(np.linalg.det(arr))
    scale = m.norm_max()
    if scale == 0.0 or abs(det) <= 1e-14 * scale**4:
        raise SingularMatrix(f"determinant {det!r} below singularity guard")
    inv = np.linalg.inv(arr)
    return Mat4Sym.from_array(inv), det


def rk4_step(
    state: np.ndarray,
    deriv: Callable[[np.ndarray], np.ndarray],
    dt: float,
) -> np.ndarray:
    """One classical Runge-Kutta step for an autonomous system."""
    k1 = deriv(state)
    k2 = deriv(state + 0.5 * dt * k1)
    k3 = deriv(state + 0.5 * dt * k2)
    k4 = deriv(state + dt * k3)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
