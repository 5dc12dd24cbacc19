"""Closed-form pure-radiation solutions on the separable space-times.

Each case supplies a wave covector L with separated components
L_i = L_i(x^i), three field invariants constant along the flow M*L, and a
divisor D such that

    eps = F(invariants) * sqrt(|det M|) / (Delta * D)

solves the conservation equations for any profile F.  The covector is a
gradient by construction (each component depends only on its own
coordinate), so null implies geodesic; the oracles in `verify` re-check
all of that numerically without using any of the algebra below.
"""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .cases import CssType
from .errors import DomainError
from .models import CssModel, MetricAtPoint, build_metric, v_potentials_3, v_potentials_4
from .numerics import CumulativeIntegral, Mat4Sym

__all__ = [
    "RadiationAtPoint",
    "Solution",
    "SolutionCheck",
    "solution",
    "wave_covector",
    "invariants",
    "energy_density",
    "stress_energy",
    "radiation_at",
]

Point = Sequence[float]
Fn1 = Callable[[float], float]
FnP = Callable[[Point], float]


@dataclass(frozen=True)
class RadiationAtPoint:
    L: tuple[float, float, float, float]
    invariants: tuple[float, float, float]
    eps: float
    T: Mat4Sym
    P: float | None  # log-density diagnostic; None where eps vanishes


@dataclass(frozen=True)
class SolutionCheck:
    """A sampled validity condition: identity == 0, radicand >= 0, divisor != 0."""

    name: str
    axis: int
    kind: str  # "identity" | "radicand" | "divisor"
    fn: Fn1


@dataclass(frozen=True)
class Solution:
    comps: tuple[FnP, FnP, FnP, FnP]
    d_fn: FnP
    invs: tuple[FnP, FnP, FnP]
    checks: tuple[SolutionCheck, ...]


class _Ctx:
    """Per-model helpers shared by the case builders."""

    def __init__(self, model: CssModel) -> None:
        self.model = model
        self.flips = model.sign_flips

    def fn(self, name: str) -> Fn1:
        return self.model.metric_fns[name].__call__

    def const(self, name: str) -> float:
        return self.model.consts[name]

    def integral(self, axis: int, integrand: Fn1) -> Fn1:
        cum = CumulativeIntegral(integrand, self.model.x_ref[axis], self.model.quadrature)
        return cum.__call__

    def radical(self, label: str, radicand: Fn1, slot: int) -> Fn1:
        flip = float(self.flips[slot])

        def lam(u: float) -> float:
            v = radicand(u)
            if v < 0.0:
                raise DomainError(f"negative radicand {label} at coordinate {u!r}")
            return flip * math.sqrt(v)

        return lam

    @staticmethod
    def ratio(label: str, num: Fn1, den: Fn1) -> Fn1:
        def f(u: float) -> float:
            d = den(u)
            if d == 0.0:
                raise DomainError(f"divisor {label} vanishes at coordinate {u!r}")
            return num(u) / d

        return f


def _const_comp(v: float) -> FnP:
    return lambda x: v


def _axis_comp(axis: int, lam: Fn1) -> FnP:
    return lambda x: lam(x[axis])


def _zero(_u: float) -> float:
    return 0.0


# --- (3.0): one timelike Killing direction plus a 3x3 function block --------


def _t30_parts(ctx: _Ctx):
    a0, b0, c0 = ctx.fn("a0"), ctx.fn("b0"), ctx.fn("c0")
    d0, e0, f0 = ctx.fn("d0"), ctx.fn("e0"), ctx.fn("f0")
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")

    def q(u: float) -> float:
        return (
            al * al * a0(u)
            + 2.0 * al * be * b0(u)
            + be * be * d0(u)
            + 2.0 * al * ga * c0(u)
            + 2.0 * be * ga * e0(u)
            + ga * ga * f0(u)
        )

    big_a = lambda u: al * a0(u) + be * b0(u) + ga * c0(u)
    big_b = lambda u: al * b0(u) + be * d0(u) + ga * e0(u)
    big_c = lambda u: al * c0(u) + be * e0(u) + ga * f0(u)
    return q, big_a, big_b, big_c, (al, be, ga)


def _build_30_1(ctx: _Ctx) -> Solution:
    q, big_a, big_b, big_c, (al, be, ga) = _t30_parts(ctx)
    neg_q = lambda u: -q(u)
    lam0 = ctx.radical("-Q", neg_q, 0)
    ints = [ctx.integral(0, ctx.ratio("L0", f, lam0)) for f in (big_a, big_b, big_c)]
    return Solution(
        comps=(_axis_comp(0, lam0), _const_comp(al), _const_comp(be), _const_comp(ga)),
        d_fn=_axis_comp(0, lam0),
        invs=(
            lambda x: x[1] - ints[0](x[0]),
            lambda x: x[2] - ints[1](x[0]),
            lambda x: x[3] - ints[2](x[0]),
        ),
        checks=(
            SolutionCheck("-Q", 0, "radicand", neg_q),
            SolutionCheck("L0^2 = -Q", 0, "divisor", neg_q),
        ),
    )


def _build_30_2(ctx: _Ctx) -> Solution:
    q, big_a, big_b, big_c, (al, be, ga) = _t30_parts(ctx)
    ra = ctx.ratio("A", lambda u: 1.0, big_a)
    rb = ctx.ratio("B", lambda u: 1.0, big_b)
    rc = ctx.ratio("C", lambda u: 1.0, big_c)
    return Solution(
        comps=(_const_comp(0.0), _const_comp(al), _const_comp(be), _const_comp(ga)),
        d_fn=_const_comp(1.0),
        invs=(
            lambda x: x[0],
            lambda x: x[1] * ra(x[0]) - x[2] * rb(x[0]),
            lambda x: x[1] * ra(x[0]) - x[3] * rc(x[0]),
        ),
        checks=(
            SolutionCheck("Q", 0, "identity", q),
            SolutionCheck("A", 0, "divisor", big_a),
            SolutionCheck("B", 0, "divisor", big_b),
            SolutionCheck("C", 0, "divisor", big_c),
        ),
    )


def _build_30_3(ctx: _Ctx) -> Solution:
    q, big_a, big_b, big_c, (al, be, ga) = _t30_parts(ctx)
    return Solution(
        comps=(_const_comp(0.0), _const_comp(al), _const_comp(be), _const_comp(ga)),
        d_fn=_const_comp(1.0),
        invs=(
            lambda x: x[0],
            lambda x: x[1],
            lambda x: x[2] * big_c(x[0]) - x[3] * big_b(x[0]),
        ),
        checks=(
            SolutionCheck("Q", 0, "identity", q),
            SolutionCheck("A", 0, "identity", big_a),
        ),
    )


# --- (3.1): a null Killing direction; L0 rides along x0 ---------------------


def _t31_parts(ctx: _Ctx):
    a0, b0 = ctx.fn("a0"), ctx.fn("b0")
    c0, d0, f0 = ctx.fn("c0"), ctx.fn("d0"), ctx.fn("f0")
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    s0 = lambda u: al + be * a0(u) + ga * b0(u)
    big_r = lambda u: be * be * c0(u) + 2.0 * be * ga * f0(u) + ga * ga * d0(u)
    return a0, b0, c0, d0, f0, s0, big_r, (al, be, ga)


def _build_31_1(ctx: _Ctx) -> Solution:
    a0, b0, c0, d0, f0, s0, big_r, (al, be, ga) = _t31_parts(ctx)
    lam0 = ctx.ratio("2*s0", lambda u: -big_r(u), lambda u: 2.0 * s0(u))
    big_u = lambda u: a0(u) * lam0(u) + be * c0(u) + ga * f0(u)
    big_w = lambda u: b0(u) * lam0(u) + be * f0(u) + ga * d0(u)
    i_x = ctx.integral(0, ctx.ratio("s0", lam0, s0))
    i_y = ctx.integral(0, ctx.ratio("s0", big_u, s0))
    i_z = ctx.integral(0, ctx.ratio("s0", big_w, s0))
    return Solution(
        comps=(_axis_comp(0, lam0), _const_comp(al), _const_comp(be), _const_comp(ga)),
        d_fn=_axis_comp(0, s0),
        invs=(
            lambda x: x[1] - i_x(x[0]),
            lambda x: x[2] - i_y(x[0]),
            lambda x: x[3] - i_z(x[0]),
        ),
        checks=(SolutionCheck("s0", 0, "divisor", s0),),
    )


def _build_31_2(ctx: _Ctx) -> Solution:
    a0, b0, c0, d0, f0, s0, big_r, (al, be, ga) = _t31_parts(ctx)
    lam0 = ctx.fn("L0")
    big_u = lambda u: a0(u) * lam0(u) + be * c0(u) + ga * f0(u)
    big_w = lambda u: b0(u) * lam0(u) + be * f0(u) + ga * d0(u)
    r1 = ctx.ratio("L0", lambda u: 1.0, lam0)
    ru = ctx.ratio("U", lambda u: 1.0, big_u)
    rw = ctx.ratio("W", lambda u: 1.0, big_w)
    return Solution(
        comps=(_axis_comp(0, lam0), _const_comp(al), _const_comp(be), _const_comp(ga)),
        d_fn=_const_comp(1.0),
        invs=(
            lambda x: x[0],
            lambda x: x[1] * r1(x[0]) - x[2] * ru(x[0]),
            lambda x: x[1] * r1(x[0]) - x[3] * rw(x[0]),
        ),
        checks=(
            SolutionCheck("s0", 0, "identity", s0),
            SolutionCheck("R", 0, "identity", big_r),
            SolutionCheck("L0", 0, "divisor", lam0),
            SolutionCheck("U", 0, "divisor", big_u),
            SolutionCheck("W", 0, "divisor", big_w),
        ),
    )


def _build_31_3(ctx: _Ctx) -> Solution:
    a0, b0, c0, d0, f0, s0, big_r, (al, be, ga) = _t31_parts(ctx)
    u0 = lambda u: be * c0(u) + ga * f0(u)
    w0 = lambda u: be * f0(u) + ga * d0(u)
    return Solution(
        comps=(_const_comp(0.0), _const_comp(al), _const_comp(be), _const_comp(ga)),
        d_fn=_const_comp(1.0),
        invs=(
            lambda x: x[0],
            lambda x: x[1],
            lambda x: x[2] * w0(x[0]) - x[3] * u0(x[0]),
        ),
        checks=(
            SolutionCheck("s0", 0, "identity", s0),
            SolutionCheck("R", 0, "identity", big_r),
        ),
    )


# --- (2.0): two orthogonal Killing directions --------------------------------


def _t20_parts(ctx: _Ctx):
    a0, b0, c0 = ctx.fn("a0"), ctx.fn("b0"), ctx.fn("c0")
    a1, b1, c1 = ctx.fn("a1"), ctx.fn("b1"), ctx.fn("c1")
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    eps_sign = ctx.fn("s")(ctx.model.x_ref[0])
    q0 = lambda u: ga - al * al * a0(u) - 2.0 * al * be * b0(u) - be * be * c0(u)
    q1 = lambda u: eps_sign * (-ga - al * al * a1(u) - 2.0 * al * be * b1(u) - be * be * c1(u))
    return (a0, b0, c0, a1, b1, c1), (al, be, ga, eps_sign), q0, q1


def _build_20_1(ctx: _Ctx) -> Solution:
    (a0, b0, c0, a1, b1, c1), (al, be, ga, es), q0, q1 = _t20_parts(ctx)
    lam0 = ctx.radical("L0^2", q0, 0)
    lam1 = ctx.radical("L1^2", q1, 1)
    i_x0 = ctx.integral(0, ctx.ratio("L0", lambda u: 1.0, lam0))
    i_x1 = ctx.integral(1, ctx.ratio("L1", lambda u: 1.0, lam1))
    i_y0 = ctx.integral(0, ctx.ratio("L0", lambda u: al * a0(u) + be * b0(u), lam0))
    i_y1 = ctx.integral(1, ctx.ratio("L1", lambda u: al * a1(u) + be * b1(u), lam1))
    i_z0 = ctx.integral(0, ctx.ratio("L0", lambda u: al * b0(u) + be * c0(u), lam0))
    i_z1 = ctx.integral(1, ctx.ratio("L1", lambda u: al * b1(u) + be * c1(u), lam1))
    return Solution(
        comps=(_axis_comp(0, lam0), _axis_comp(1, lam1), _const_comp(al), _const_comp(be)),
        d_fn=lambda x: lam0(x[0]) * lam1(x[1]),
        invs=(
            lambda x: i_x0(x[0]) - es * i_x1(x[1]),
            lambda x: x[2] - i_y0(x[0]) - es * i_y1(x[1]),
            lambda x: x[3] - i_z0(x[0]) - es * i_z1(x[1]),
        ),
        checks=(
            SolutionCheck("L0^2", 0, "radicand", q0),
            SolutionCheck("L1^2", 1, "radicand", q1),
            SolutionCheck("L0^2", 0, "divisor", q0),
            SolutionCheck("L1^2", 1, "divisor", q1),
        ),
    )


def _build_20_2(ctx: _Ctx) -> Solution:
    (a0, b0, c0, a1, b1, c1), (al, be, ga, es), q0, q1 = _t20_parts(ctx)
    lam1 = ctx.radical("L1^2", q1, 1)
    w1 = ctx.integral(1, ctx.ratio("L1", lambda u: 1.0, lam1))
    i_y1 = ctx.integral(1, ctx.ratio("L1", lambda u: al * a1(u) + be * b1(u), lam1))
    i_z1 = ctx.integral(1, ctx.ratio("L1", lambda u: al * b1(u) + be * c1(u), lam1))
    ya = lambda u: al * a0(u) + be * b0(u)
    za = lambda u: al * b0(u) + be * c0(u)
    return Solution(
        comps=(_const_comp(0.0), _axis_comp(1, lam1), _const_comp(al), _const_comp(be)),
        d_fn=lambda x: lam1(x[1]),
        invs=(
            lambda x: x[0],
            lambda x: x[2] - es * ya(x[0]) * w1(x[1]) - es * i_y1(x[1]),
            lambda x: x[3] - es * za(x[0]) * w1(x[1]) - es * i_z1(x[1]),
        ),
        checks=(
            SolutionCheck("L0^2", 0, "identity", q0),
            SolutionCheck("L1^2", 1, "radicand", q1),
            SolutionCheck("L1^2", 1, "divisor", q1),
        ),
    )


def _build_20_3(ctx: _Ctx) -> Solution:
    (a0, b0, c0, a1, b1, c1), (al, be, ga, es), q0, q1 = _t20_parts(ctx)

    def zb(x: Point) -> float:
        bb = b0(x[0]) + b1(x[1])
        cc = c0(x[0]) + c1(x[1])
        return al * bb + be * cc

    def za(x: Point) -> float:
        aa = a0(x[0]) + a1(x[1])
        bb = b0(x[0]) + b1(x[1])
        return al * aa + be * bb

    return Solution(
        comps=(_const_comp(0.0), _const_comp(0.0), _const_comp(al), _const_comp(be)),
        d_fn=_const_comp(1.0),
        invs=(
            lambda x: x[0],
            lambda x: x[1],
            lambda x: x[2] * zb(x) - x[3] * za(x),
        ),
        checks=(
            SolutionCheck("L0^2", 0, "identity", q0),
            SolutionCheck("L1^2 (unsigned)", 1, "identity",
                          lambda u: -ga - al * al * a1(u) - 2.0 * al * be * b1(u) - be * be * c1(u)),
        ),
    )


# --- (2.1): two Killing directions, one of them null -------------------------


def _t21_parts(ctx: _Ctx):
    a0, b0, c0 = ctx.fn("a0"), ctx.fn("b0"), ctx.fn("c0")
    a1, b1, c1, f1 = ctx.fn("a1"), ctx.fn("b1"), ctx.fn("c1"), ctx.fn("f1")
    return a0, b0, c0, a1, b1, c1, f1


def _build_21_1(ctx: _Ctx) -> Solution:
    a0, b0, c0, a1, b1, c1, f1 = _t21_parts(ctx)
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    s1 = lambda u: al * f1(u) + be
    q0 = lambda u: ga - al * al * a0(u) - 2.0 * al * be * b0(u) - be * be * c0(u)
    lam0 = ctx.radical("L0^2", q0, 0)
    lam1 = ctx.ratio(
        "2*s1",
        lambda u: -(ga + al * al * a1(u) + 2.0 * al * be * b1(u) + be * be * c1(u)),
        lambda u: 2.0 * s1(u),
    )
    i_x0 = ctx.integral(0, ctx.ratio("L0", lambda u: 1.0, lam0))
    i_x1 = ctx.integral(1, ctx.ratio("s1", lambda u: 1.0, s1))
    i_y0 = ctx.integral(0, ctx.ratio("L0", lambda u: al * a0(u) + be * b0(u), lam0))
    i_y1 = ctx.integral(
        1, ctx.ratio("s1", lambda u: al * a1(u) + be * b1(u) + f1(u) * lam1(u), s1)
    )
    i_z0 = ctx.integral(0, ctx.ratio("L0", lambda u: al * b0(u) + be * c0(u), lam0))
    i_z1 = ctx.integral(
        1, ctx.ratio("s1", lambda u: al * b1(u) + be * c1(u) + lam1(u), s1)
    )
    return Solution(
        comps=(_axis_comp(0, lam0), _axis_comp(1, lam1), _const_comp(al), _const_comp(be)),
        d_fn=lambda x: lam0(x[0]) * s1(x[1]),
        invs=(
            lambda x: i_x0(x[0]) - i_x1(x[1]),
            lambda x: x[2] - i_y0(x[0]) - i_y1(x[1]),
            lambda x: x[3] - i_z0(x[0]) - i_z1(x[1]),
        ),
        checks=(
            SolutionCheck("L0^2", 0, "radicand", q0),
            SolutionCheck("L0^2", 0, "divisor", q0),
            SolutionCheck("s1", 1, "divisor", s1),
        ),
    )


def _build_21_2(ctx: _Ctx) -> Solution:
    a0, b0, c0, a1, b1, c1, f1 = _t21_parts(ctx)
    al, sg = ctx.const("alpha"), ctx.const("sigma")
    neg_a0 = lambda u: -a0(u)
    root = ctx.radical("-a0", neg_a0, 0)
    lam0 = lambda u: al * root(u)
    i_y = ctx.integral(0, lam0)
    i_z = ctx.integral(0, ctx.ratio("L0", lambda u: sg + al * b0(u), lam0))
    return Solution(
        comps=(
            _axis_comp(0, lam0),
            _axis_comp(1, lambda u: sg - al * b1(u)),
            _const_comp(al),
            _const_comp(0.0),
        ),
        d_fn=lambda x: lam0(x[0]),
        invs=(
            lambda x: x[1],
            lambda x: al * x[2] + i_y(x[0]),
            lambda x: x[3] - i_z(x[0]),
        ),
        checks=(
            SolutionCheck("a1", 1, "identity", a1),
            SolutionCheck("f1", 1, "identity", f1),
            SolutionCheck("-a0", 0, "radicand", neg_a0),
            SolutionCheck("-a0", 0, "divisor", neg_a0),
            SolutionCheck("alpha", 0, "divisor", lambda u: al),
        ),
    )


def _build_21_3(ctx: _Ctx) -> Solution:
    a0, b0, c0, a1, b1, c1, f1 = _t21_parts(ctx)
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    p, q, r = ctx.const("p"), ctx.const("q"), ctx.const("r")
    s1 = lambda u: al * f1(u) + be
    lam1 = ctx.ratio(
        "2*s1",
        lambda u: -(ga + al * al * a1(u) + 2.0 * al * be * b1(u) + be * be * c1(u)),
        lambda u: 2.0 * s1(u),
    )
    i_y = ctx.integral(1, lam1)
    i_z = ctx.integral(
        1,
        ctx.ratio(
            "s1",
            lambda u: (
                r
                + p * (al * a1(u) + be * b1(u) + f1(u) * lam1(u))
                + q * (al * b1(u) + be * c1(u) + lam1(u))
            ),
            s1,
        ),
    )
    return Solution(
        comps=(_const_comp(0.0), _axis_comp(1, lam1), _const_comp(al), _const_comp(be)),
        d_fn=lambda x: s1(x[1]),
        invs=(
            lambda x: x[0],
            lambda x: al * x[2] + be * x[3] + i_y(x[1]),
            lambda x: p * x[2] + q * x[3] - i_z(x[1]),
        ),
        checks=(
            SolutionCheck(
                "alpha^2 a0 + 2 alpha beta b0 + beta^2 c0 - gamma", 0, "identity",
                lambda u: al * al * a0(u) + 2.0 * al * be * b0(u) + be * be * c0(u) - ga,
            ),
            SolutionCheck(
                "p(alpha a0 + beta b0) + q(alpha b0 + beta c0) - r", 0, "identity",
                lambda u: p * (al * a0(u) + be * b0(u)) + q * (al * b0(u) + be * c0(u)) - r,
            ),
            SolutionCheck("s1", 1, "divisor", s1),
        ),
    )


def _build_21_4(ctx: _Ctx) -> Solution:
    a0, b0, c0, a1, b1, c1, f1 = _t21_parts(ctx)
    lam1 = ctx.fn("L1")
    return Solution(
        comps=(_const_comp(0.0), _axis_comp(1, lam1), _const_comp(0.0), _const_comp(0.0)),
        d_fn=_const_comp(1.0),
        invs=(
            lambda x: x[0],
            lambda x: x[1],
            lambda x: x[2] - x[3] * f1(x[1]),
        ),
        checks=(),
    )


# --- (1.0): one Killing direction, diagonal V-potential block ----------------


def _t1x_parts(ctx: _Ctx):
    ts = (ctx.fn("t1"), ctx.fn("t2"), ctx.fn("t3"))
    ws = (ctx.fn("w1"), ctx.fn("w2"), ctx.fn("w3"))
    return ts, ws


def _t1x_radicand(ctx: _Ctx, mu: int) -> Fn1:
    t_mu = ctx.fn(f"t{mu}")
    w_mu = ctx.fn(f"w{mu}")
    al = ctx.const("alpha") if "alpha" in ctx.model.consts else 0.0
    be = ctx.const("beta") if "beta" in ctx.model.consts else 0.0
    ga = ctx.const("gamma") if "gamma" in ctx.model.consts else 0.0
    return lambda u: -al * al * w_mu(u) + be * t_mu(u) + ga


def _build_10_1(ctx: _Ctx) -> Solution:
    ts, ws = _t1x_parts(ctx)
    al = ctx.const("alpha")
    rads = [_t1x_radicand(ctx, mu) for mu in (1, 2, 3)]
    lams = [ctx.radical(f"L{mu}^2", rads[mu - 1], mu) for mu in (1, 2, 3)]
    i_x = [ctx.integral(mu, ctx.ratio(f"L{mu}", ws[mu - 1], lams[mu - 1])) for mu in (1, 2, 3)]
    i_y = [ctx.integral(mu, ctx.ratio(f"L{mu}", ts[mu - 1], lams[mu - 1])) for mu in (1, 2, 3)]
    i_z = [ctx.integral(mu, ctx.ratio(f"L{mu}", lambda u: 1.0, lams[mu - 1])) for mu in (1, 2, 3)]
    return Solution(
        comps=(
            _const_comp(al),
            _axis_comp(1, lams[0]),
            _axis_comp(2, lams[1]),
            _axis_comp(3, lams[2]),
        ),
        d_fn=lambda x: lams[0](x[1]) * lams[1](x[2]) * lams[2](x[3]),
        invs=(
            lambda x: x[0] - al * (i_x[0](x[1]) + i_x[1](x[2]) + i_x[2](x[3])),
            lambda x: i_y[0](x[1]) + i_y[1](x[2]) + i_y[2](x[3]),
            lambda x: i_z[0](x[1]) + i_z[1](x[2]) + i_z[2](x[3]),
        ),
        checks=tuple(
            SolutionCheck(f"L{mu}^2", mu, kind, rads[mu - 1])
            for mu in (1, 2, 3)
            for kind in ("radicand", "divisor")
        ),
    )


def _build_10_2(ctx: _Ctx) -> Solution:
    ts, ws = _t1x_parts(ctx)
    al = ctx.const("alpha")
    rads = {mu: _t1x_radicand(ctx, mu) for mu in (1, 2, 3)}
    lam2 = ctx.radical("L2^2", rads[2], 2)
    lam3 = ctx.radical("L3^2", rads[3], 3)
    i_y2 = ctx.integral(2, lam2)
    i_y3 = ctx.integral(3, lam3)
    i_t2 = ctx.integral(2, ctx.ratio("L2", ts[1], lam2))
    i_t3 = ctx.integral(3, ctx.ratio("L3", ts[2], lam3))
    i_12 = ctx.integral(2, ctx.ratio("L2", lambda u: 1.0, lam2))
    i_13 = ctx.integral(3, ctx.ratio("L3", lambda u: 1.0, lam3))
    t1 = ts[0]
    return Solution(
        comps=(_const_comp(al), _const_comp(0.0), _axis_comp(2, lam2), _axis_comp(3, lam3)),
        d_fn=lambda x: lam2(x[2]) * lam3(x[3]),
        invs=(
            lambda x: x[1],
            lambda x: al * x[0] + i_y2(x[2]) + i_y3(x[3]),
            lambda x: i_t2(x[2]) + i_t3(x[3]) - t1(x[1]) * (i_12(x[2]) + i_13(x[3])),
        ),
        checks=(
            SolutionCheck("L1^2", 1, "identity", rads[1]),
            SolutionCheck("L2^2", 2, "radicand", rads[2]),
            SolutionCheck("L3^2", 3, "radicand", rads[3]),
            SolutionCheck("L2^2", 2, "divisor", rads[2]),
            SolutionCheck("L3^2", 3, "divisor", rads[3]),
        ),
    )


def _build_10_3(ctx: _Ctx) -> Solution:
    ts, ws = _t1x_parts(ctx)
    al = ctx.const("alpha")
    rads = {mu: _t1x_radicand(ctx, mu) for mu in (1, 2, 3)}
    lam1 = ctx.radical("L1^2", rads[1], 1)
    i_y = ctx.integral(1, lam1)
    return Solution(
        comps=(_const_comp(al), _axis_comp(1, lam1), _const_comp(0.0), _const_comp(0.0)),
        d_fn=lambda x: lam1(x[1]),
        invs=(
            lambda x: x[2],
            lambda x: x[3],
            lambda x: al * x[0] + i_y(x[1]),
        ),
        checks=(
            SolutionCheck("L2^2", 2, "identity", rads[2]),
            SolutionCheck("L3^2", 3, "identity", rads[3]),
            SolutionCheck("L1^2", 1, "radicand", rads[1]),
            SolutionCheck("L1^2", 1, "divisor", rads[1]),
        ),
    )


# --- (1.1): one Killing direction, null; off-diagonal x0-x1 block ------------


def _build_11_1(ctx: _Ctx) -> Solution:
    ts, ws = _t1x_parts(ctx)
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    rad2 = _t1x_radicand(ctx, 2)
    rad3 = _t1x_radicand(ctx, 3)
    lam1 = lambda u: (be * ts[0](u) - al * al * ws[0](u) + ga) / (2.0 * al)
    lam2 = ctx.radical("L2^2", rad2, 2)
    lam3 = ctx.radical("L3^2", rad3, 3)
    i_x1 = ctx.integral(1, lambda u: lam1(u) + al * ws[0](u))
    i_x2 = ctx.integral(2, ctx.ratio("L2", ws[1], lam2))
    i_x3 = ctx.integral(3, ctx.ratio("L3", ws[2], lam3))
    i_y1 = ctx.integral(1, ts[0])
    i_y2 = ctx.integral(2, ctx.ratio("L2", ts[1], lam2))
    i_y3 = ctx.integral(3, ctx.ratio("L3", ts[2], lam3))
    i_z2 = ctx.integral(2, ctx.ratio("L2", lambda u: 1.0, lam2))
    i_z3 = ctx.integral(3, ctx.ratio("L3", lambda u: 1.0, lam3))
    return Solution(
        comps=(_const_comp(al), _axis_comp(1, lam1), _axis_comp(2, lam2), _axis_comp(3, lam3)),
        d_fn=lambda x: lam2(x[2]) * lam3(x[3]),
        invs=(
            lambda x: x[0] - i_x1(x[1]) / al - al * (i_x2(x[2]) + i_x3(x[3])),
            lambda x: i_y1(x[1]) / al + i_y2(x[2]) + i_y3(x[3]),
            lambda x: x[1] / al + i_z2(x[2]) + i_z3(x[3]),
        ),
        checks=(
            SolutionCheck("L2^2", 2, "radicand", rad2),
            SolutionCheck("L3^2", 3, "radicand", rad3),
            SolutionCheck("L2^2", 2, "divisor", rad2),
            SolutionCheck("L3^2", 3, "divisor", rad3),
            SolutionCheck("alpha", 0, "divisor", lambda u: al),
        ),
    )


def _build_11_2(ctx: _Ctx) -> Solution:
    ts, ws = _t1x_parts(ctx)
    be = ctx.const("beta")
    lam1 = ctx.fn("L1")
    rad2 = lambda u: be * ts[1](u)
    rad3 = lambda u: be * ts[2](u)
    lam2 = ctx.radical("beta*t2", rad2, 2)
    lam3 = ctx.radical("beta*t3", rad3, 3)
    i_y2 = ctx.integral(2, ctx.ratio("L2", ts[1], lam2))
    i_y3 = ctx.integral(3, ctx.ratio("L3", ts[2], lam3))
    i_z2 = ctx.integral(2, ctx.ratio("L2", lambda u: 1.0, lam2))
    i_z3 = ctx.integral(3, ctx.ratio("L3", lambda u: 1.0, lam3))
    r1 = ctx.ratio("L1", lambda u: 1.0, lam1)
    return Solution(
        comps=(_const_comp(0.0), _axis_comp(1, lam1), _axis_comp(2, lam2), _axis_comp(3, lam3)),
        d_fn=lambda x: lam2(x[2]) * lam3(x[3]),
        invs=(
            lambda x: x[1],
            lambda x: i_y2(x[2]) + i_y3(x[3]),
            lambda x: x[0] * r1(x[1]) + i_z2(x[2]) + i_z3(x[3]),
        ),
        checks=(
            SolutionCheck("t1", 1, "identity", ts[0]),
            SolutionCheck("beta*t2", 2, "radicand", rad2),
            SolutionCheck("beta*t3", 3, "radicand", rad3),
            SolutionCheck("beta*t2", 2, "divisor", rad2),
            SolutionCheck("beta*t3", 3, "divisor", rad3),
            SolutionCheck("L1", 1, "divisor", lam1),
        ),
    )


def _build_11_3(ctx: _Ctx) -> Solution:
    ts, ws = _t1x_parts(ctx)
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    p, q = ctx.const("p"), ctx.const("q")
    rad2 = _t1x_radicand(ctx, 2)
    rad3 = _t1x_radicand(ctx, 3)
    lam1 = lambda u: (be * ts[0](u) - al * al * ws[0](u) + ga) / (2.0 * al)
    lam2 = ctx.radical("L2^2", rad2, 2)
    i_y1 = ctx.integral(1, lam1)
    i_y2 = ctx.integral(2, lam2)
    i_z1 = ctx.integral(
        1, lambda u: q * (ga / al - al * ws[0](u) - lam1(u)) + p * ts[0](u)
    )
    i_z2 = ctx.integral(
        2, ctx.ratio("L2", lambda u: q * (ga / al - al * ws[1](u)) + p * ts[1](u), lam2)
    )
    return Solution(
        comps=(_const_comp(al), _axis_comp(1, lam1), _axis_comp(2, lam2), _const_comp(0.0)),
        d_fn=lambda x: lam2(x[2]),
        invs=(
            lambda x: x[3],
            lambda x: al * x[0] + i_y1(x[1]) + i_y2(x[2]),
            lambda x: q * x[0] + i_z1(x[1]) / al + i_z2(x[2]),
        ),
        checks=(
            SolutionCheck("L3^2", 3, "identity", rad3),
            SolutionCheck("p*alpha - q*beta", 0, "identity", lambda u: p * al - q * be),
            SolutionCheck("L2^2", 2, "radicand", rad2),
            SolutionCheck("L2^2", 2, "divisor", rad2),
            SolutionCheck("alpha", 0, "divisor", lambda u: al),
        ),
    )


# --- (0.0): fully separated, diagonal cofactor potentials --------------------


def _t00_rad(ctx: _Ctx, i: int) -> Fn1:
    a_i = ctx.fn(f"a{i}")
    b_i = ctx.fn(f"b{i}")
    al, be, ga = ctx.const("alpha"), ctx.const("beta"), ctx.const("gamma")
    return lambda u: al * a_i(u) + be * b_i(u) + ga


def _build_00_1(ctx: _Ctx) -> Solution:
    rads = [_t00_rad(ctx, i) for i in range(4)]
    lams = [ctx.radical(f"L{i}^2", rads[i], i) for i in range(4)]
    a_fns = [ctx.fn(f"a{i}") for i in range(4)]
    b_fns = [ctx.fn(f"b{i}") for i in range(4)]
    i_x = [ctx.integral(i, ctx.ratio(f"L{i}", lambda u: 1.0, lams[i])) for i in range(4)]
    i_y = [ctx.integral(i, ctx.ratio(f"L{i}", a_fns[i], lams[i])) for i in range(4)]
    i_z = [ctx.integral(i, ctx.ratio(f"L{i}", b_fns[i], lams[i])) for i in range(4)]
    return Solution(
        comps=tuple(_axis_comp(i, lams[i]) for i in range(4)),  # type: ignore[arg-type]
        d_fn=lambda x: lams[0](x[0]) * lams[1](x[1]) * lams[2](x[2]) * lams[3](x[3]),
        invs=(
            lambda x: sum(i_x[i](x[i]) for i in range(4)),
            lambda x: sum(i_y[i](x[i]) for i in range(4)),
            lambda x: sum(i_z[i](x[i]) for i in range(4)),
        ),
        checks=tuple(
            SolutionCheck(f"L{i}^2", i, kind, rads[i])
            for i in range(4)
            for kind in ("radicand", "divisor")
        ),
    )


def _build_00_2(ctx: _Ctx) -> Solution:
    rads = [_t00_rad(ctx, i) for i in range(4)]
    lams = {i: ctx.radical(f"L{i}^2", rads[i], i) for i in (1, 2, 3)}
    a_fns = [ctx.fn(f"a{i}") for i in range(4)]
    i_xa = {i: ctx.integral(i, ctx.ratio(f"L{i}", a_fns[i], lams[i])) for i in (1, 2, 3)}
    i_x1 = {i: ctx.integral(i, ctx.ratio(f"L{i}", lambda u: 1.0, lams[i])) for i in (1, 2, 3)}
    i_y = {i: ctx.integral(i, lams[i]) for i in (1, 2, 3)}
    a0 = a_fns[0]
    return Solution(
        comps=(
            _const_comp(0.0),
            _axis_comp(1, lams[1]),
            _axis_comp(2, lams[2]),
            _axis_comp(3, lams[3]),
        ),
        d_fn=lambda x: lams[1](x[1]) * lams[2](x[2]) * lams[3](x[3]),
        invs=(
            lambda x: x[0],
            lambda x: sum(i_xa[i](x[i]) for i in (1, 2, 3))
            - a0(x[0]) * sum(i_x1[i](x[i]) for i in (1, 2, 3)),
            lambda x: sum(i_y[i](x[i]) for i in (1, 2, 3)),
        ),
        checks=(SolutionCheck("L0^2", 0, "identity", rads[0]),)
        + tuple(
            SolutionCheck(f"L{i}^2", i, kind, rads[i])
            for i in (1, 2, 3)
            for kind in ("radicand", "divisor")
        ),
    )


def _build_00_3(ctx: _Ctx) -> Solution:
    rads = [_t00_rad(ctx, i) for i in range(4)]
    lam2 = ctx.radical("L2^2", rads[2], 2)
    lam3 = ctx.radical("L3^2", rads[3], 3)
    i_y2 = ctx.integral(2, lam2)
    i_y3 = ctx.integral(3, lam3)
    return Solution(
        comps=(_const_comp(0.0), _const_comp(0.0), _axis_comp(2, lam2), _axis_comp(3, lam3)),
        d_fn=lambda x: lam2(x[2]) * lam3(x[3]),
        invs=(
            lambda x: x[0],
            lambda x: x[1],
            lambda x: i_y2(x[2]) + i_y3(x[3]),
        ),
        checks=(
            SolutionCheck("L0^2", 0, "identity", rads[0]),
            SolutionCheck("L1^2", 1, "identity", rads[1]),
            SolutionCheck("L2^2", 2, "radicand", rads[2]),
            SolutionCheck("L3^2", 3, "radicand", rads[3]),
            SolutionCheck("L2^2", 2, "divisor", rads[2]),
            SolutionCheck("L3^2", 3, "divisor", rads[3]),
        ),
    )


_BUILDERS: dict[tuple[CssType, int], Callable[[_Ctx], Solution]] = {
    (CssType.T30, 1): _build_30_1,
    (CssType.T30, 2): _build_30_2,
    (CssType.T30, 3): _build_30_3,
    (CssType.T31, 1): _build_31_1,
    (CssType.T31, 2): _build_31_2,
    (CssType.T31, 3): _build_31_3,
    (CssType.T20, 1): _build_20_1,
    (CssType.T20, 2): _build_20_2,
    (CssType.T20, 3): _build_20_3,
    (CssType.T21, 1): _build_21_1,
    (CssType.T21, 2): _build_21_2,
    (CssType.T21, 3): _build_21_3,
    (CssType.T21, 4): _build_21_4,
    (CssType.T10, 1): _build_10_1,
    (CssType.T10, 2): _build_10_2,
    (CssType.T10, 3): _build_10_3,
    (CssType.T11, 1): _build_11_1,
    (CssType.T11, 2): _build_11_2,
    (CssType.T11, 3): _build_11_3,
    (CssType.T00, 1): _build_00_1,
    (CssType.T00, 2): _build_00_2,
    (CssType.T00, 3): _build_00_3,
}

_SOLUTIONS: "weakref.WeakKeyDictionary[CssModel, Solution]" = weakref.WeakKeyDictionary()
_SOLUTIONS_LOCK = threading.Lock()


def solution(model: CssModel) -> Solution:
    """The case solution for a model, built once and cached."""
    with _SOLUTIONS_LOCK:
        sol = _SOLUTIONS.get(model)
        if sol is None:
            sol = _BUILDERS[(model.type, model.case_id)](_Ctx(model))
            _SOLUTIONS[model] = sol
        return sol


def wave_covector(model: CssModel, x: Point) -> tuple[float, float, float, float]:
    sol = solution(model)
    return tuple(c(x) for c in sol.comps)  # type: ignore[return-value]


def invariants(model: CssModel, x: Point) -> tuple[float, float, float]:
    sol = solution(model)
    return tuple(f(x) for f in sol.invs)  # type: ignore[return-value]


def energy_density(
    model: CssModel, x: Point, metric: MetricAtPoint | None = None
) -> float:
    sol = solution(model)
    if metric is None:
        metric = build_metric(model, x)
    if metric.det > 0.0 and not model.info.split_ok:
        raise DomainError(
            f"det g^ij = {metric.det!r} > 0 at {tuple(x)!r}: not a Lorentzian point"
        )
    d = sol.d_fn(x)
    if d == 0.0:
        raise DomainError(f"energy divisor D vanishes at {tuple(x)!r}")
    delta = model.delta(*x)
    f_val = model.profile(*(f(x) for f in sol.invs))
    # sqrt(-det g^ij) = sqrt(|det M|)/Delta^2 and one Delta cancels:
    return f_val * math.sqrt(abs(metric.det)) * delta / d


def stress_energy(
    model: CssModel, x: Point, metric: MetricAtPoint | None = None
) -> Mat4Sym:
    eps = energy_density(model, x, metric)
    lv = wave_covector(model, x)
    return Mat4Sym(
        tuple(eps * lv[i] * lv[j] for i in range(4) for j in range(i, 4))
    )


def radiation_at(
    model: CssModel, x: Point, metric: MetricAtPoint | None = None
) -> RadiationAtPoint:
    if metric is None:
        metric = build_metric(model, x)
    lv = wave_covector(model, x)
    inv = invariants(model, x)
    eps = energy_density(model, x, metric)
    t = Mat4Sym(tuple(eps * lv[i] * lv[j] for i in range(4) for j in range(i, 4)))
    if eps == 0.0:
        p = None
    else:
        delta = model.delta(*x)
        p = math.log(eps * eps / (delta * delta * abs(metric.det)))
    return RadiationAtPoint(L=lv, invariants=inv, eps=eps, T=t, P=p)
