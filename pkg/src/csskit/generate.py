"""Random model generation with per-case feasibility recipes.

Every case has structural side conditions (positive radicands, nonvanishing
divisors, a usable metric signature) that a blind draw almost never hits, so
each recipe seeds the functions near a geometry known to work, solves the
exact constraints symbolically where the case demands identities, and then
rejects any draw the full constraint validator still dislikes.
"""

from __future__ import annotations

import random
from typing import Callable, Mapping

import numpy as np

from .cases import CssType, case_info
from .errors import GenerationFailure
from .expressions import Expr, Lit, ScalarFn1D, ScalarFn4D, parse_expr
from .models import CssModel, validate_constraints

__all__ = ["make_random_model"]

_ATTEMPT_BUDGET = 200
_GRID_N = 41


class _Retry(Exception):
    """Internal: this draw missed a numeric margin, try another."""


def _r(v: float) -> float:
    return round(v, 6)


def _poly(rng: random.Random, var: str, bias: float, amp: float, sin_p: float = 0.25) -> Expr:
    """bias + small jitter polynomial (occasionally with a sine term)."""
    c0 = _r(bias + rng.uniform(-amp, amp))
    c1 = _r(rng.uniform(-amp, amp))
    c2 = _r(rng.uniform(-amp, amp))
    src = f"{c0} + {c1}*{var} + {c2}*{var}^2"
    if rng.random() < sin_p:
        src += f" + {_r(rng.uniform(-amp, amp))}*sin({var})"
    return parse_expr(src, (var,))


def _sym(rng: random.Random, lo: float, hi: float) -> float:
    """Magnitude in [lo, hi], random sign."""
    return _r(rng.choice((-1.0, 1.0)) * rng.uniform(lo, hi))


def _grid(lo: float = -1.0, hi: float = 1.0, n: int = _GRID_N) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _vals(expr: Expr, var: str, n: int = _GRID_N) -> np.ndarray:
    fn = ScalarFn1D(expr, var)
    return np.array([fn(float(t)) for t in _grid(n=n)])


FnMap = dict[str, Expr]
Consts = dict[str, float]
Recipe = Callable[[random.Random], tuple[FnMap, Consts]]


# --- (3.0) -------------------------------------------------------------------


def _quad_form_30(fns: FnMap, al: float, be: float, ga: float) -> Expr:
    return (
        al * al * fns["a0"]
        + 2.0 * al * be * fns["b0"]
        + be * be * fns["d0"]
        + 2.0 * al * ga * fns["c0"]
        + 2.0 * be * ga * fns["e0"]
    )


def _g30_1(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "a0": _poly(rng, "x0", -1.0, 0.1),
        "b0": _poly(rng, "x0", 0.0, 0.06),
        "c0": _poly(rng, "x0", 0.0, 0.06),
        "d0": _poly(rng, "x0", -1.0, 0.1),
        "e0": _poly(rng, "x0", 0.0, 0.06),
        "f0": _poly(rng, "x0", -1.0, 0.1),
    }
    consts = {
        "alpha": _sym(rng, 0.4, 1.0),
        "beta": _sym(rng, 0.4, 1.0),
        "gamma": _sym(rng, 0.4, 1.0),
    }
    return fns, consts


def _g30_2(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "a0": _poly(rng, "x0", 1.0, 0.08),
        "b0": _poly(rng, "x0", 0.0, 0.05),
        "c0": _poly(rng, "x0", 0.0, 0.05),
        "d0": _poly(rng, "x0", 1.0, 0.08),
        "e0": _poly(rng, "x0", 0.0, 0.05),
    }
    al = _sym(rng, 0.4, 0.9)
    be = _sym(rng, 0.4, 0.9)
    ga = _sym(rng, 0.7, 1.2)
    fns["f0"] = -_quad_form_30(fns, al, be, ga) / (ga * ga)
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g30_3(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "a0": _poly(rng, "x0", 1.0, 0.08),
        "b0": _poly(rng, "x0", 0.0, 0.05),
        "d0": _poly(rng, "x0", 1.0, 0.08),
        "e0": _poly(rng, "x0", 0.0, 0.05),
    }
    al = _sym(rng, 0.3, 0.7)
    be = _sym(rng, 0.3, 0.7)
    ga = _sym(rng, 0.9, 1.3)
    fns["c0"] = -(al * fns["a0"] + be * fns["b0"]) / ga
    fns["f0"] = -_quad_form_30(fns, al, be, ga) / (ga * ga)
    return fns, {"alpha": al, "beta": be, "gamma": ga}


# --- (3.1) -------------------------------------------------------------------


def _g31_1(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "a0": _poly(rng, "x0", 0.0, 0.06),
        "b0": _poly(rng, "x0", 0.0, 0.06),
        "c0": _poly(rng, "x0", -1.0, 0.1),
        "d0": _poly(rng, "x0", -1.0, 0.1),
        "f0": _poly(rng, "x0", 0.0, 0.06),
    }
    consts = {
        "alpha": _r(rng.uniform(0.6, 1.1)),
        "beta": _sym(rng, 0.3, 0.8),
        "gamma": _sym(rng, 0.3, 0.8),
    }
    return fns, consts


def _g31_2(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "L0": _poly(rng, "x0", 1.0, 0.15),
        "a0": _poly(rng, "x0", 0.8, 0.07),
        "b0": _poly(rng, "x0", -0.7, 0.07),
        "c0": _poly(rng, "x0", -1.0, 0.1),
        "d0": _poly(rng, "x0", -1.0, 0.1),
        "f0": _poly(rng, "x0", 0.0, 0.05),
    }
    return fns, {"alpha": 0.0, "beta": 0.0, "gamma": 0.0}


def _g31_3(rng: random.Random) -> tuple[FnMap, Consts]:
    al = _sym(rng, 0.5, 1.0)
    be = _sym(rng, 0.4, 0.8)
    ga = _sym(rng, 0.8, 1.2)
    fns: FnMap = {
        "a0": _poly(rng, "x0", 0.0, 0.06),
        "c0": _poly(rng, "x0", -1.0, 0.1),
        "f0": _poly(rng, "x0", 0.3, 0.05),
    }
    # the two case identities fix b0 and d0
    fns["b0"] = -(al + be * fns["a0"]) / ga
    fns["d0"] = -(be * be * fns["c0"] + 2.0 * be * ga * fns["f0"]) / (ga * ga)
    u0 = _vals(be * fns["c0"] + ga * fns["f0"], "x0")
    if np.min(np.abs(u0)) < 0.1:
        raise _Retry
    return fns, {"alpha": al, "beta": be, "gamma": ga}


# --- (2.0) -------------------------------------------------------------------


def _pair_quad(fns: FnMap, key: str, al: float, be: float) -> Expr:
    a, b, c = fns[f"a{key}"], fns[f"b{key}"], fns[f"c{key}"]
    return al * al * a + 2.0 * al * be * b + be * be * c


def _g20_1(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "s": Lit(-1.0),
        "a0": _poly(rng, "x0", -1.0, 0.1),
        "b0": _poly(rng, "x0", 0.0, 0.05),
        "c0": _poly(rng, "x0", -1.0, 0.1),
        "a1": _poly(rng, "x1", -0.8, 0.1),
        "b1": _poly(rng, "x1", 0.0, 0.05),
        "c1": _poly(rng, "x1", -0.8, 0.1),
    }
    al = _sym(rng, 0.4, 0.9)
    be = _sym(rng, 0.4, 0.9)
    # gamma must clear both radicands on the whole box
    need0 = float(np.max(_vals(_pair_quad(fns, "0", al, be), "x0")))
    need1 = float(-np.min(_vals(_pair_quad(fns, "1", al, be), "x1")))
    ga = _r(max(need0, need1) + rng.uniform(0.3, 0.7))
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g20_2(rng: random.Random) -> tuple[FnMap, Consts]:
    al = _sym(rng, 0.5, 0.9)
    be = _sym(rng, 0.5, 0.9)
    ga = _r(-rng.uniform(0.8, 1.3))
    fns: FnMap = {
        "s": Lit(1.0),
        "a0": _poly(rng, "x0", 0.2, 0.08),
        "b0": _poly(rng, "x0", 0.1, 0.08),
        "a1": _poly(rng, "x1", 0.3, 0.08),
        "b1": _poly(rng, "x1", 0.0, 0.05),
        "c1": _poly(rng, "x1", 0.0, 0.05),
    }
    fns["c0"] = (Lit(ga) - al * al * fns["a0"] - 2.0 * al * be * fns["b0"]) / (be * be)
    q1 = -ga - np.asarray(_vals(_pair_quad(fns, "1", al, be), "x1"))
    if float(np.min(q1)) < 0.15:
        raise _Retry
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g20_3(rng: random.Random) -> tuple[FnMap, Consts]:
    al = _sym(rng, 0.5, 0.9)
    be = _sym(rng, 0.5, 0.9)
    ga = _sym(rng, 0.7, 1.2)
    fns: FnMap = {
        "s": Lit(1.0),
        "a0": _poly(rng, "x0", 0.2, 0.08),
        "b0": _poly(rng, "x0", 0.1, 0.08),
        "a1": _poly(rng, "x1", 0.4, 0.08),
        "b1": _poly(rng, "x1", 0.0, 0.05),
    }
    fns["c0"] = (Lit(ga) - al * al * fns["a0"] - 2.0 * al * be * fns["b0"]) / (be * be)
    fns["c1"] = (Lit(-ga) - al * al * fns["a1"] - 2.0 * al * be * fns["b1"]) / (be * be)
    return fns, {"alpha": al, "beta": be, "gamma": ga}


# --- (2.1) -------------------------------------------------------------------


def _g21_1(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "a0": _poly(rng, "x0", 0.2, 0.08),
        "b0": _poly(rng, "x0", 0.0, 0.05),
        "c0": _poly(rng, "x0", 0.3, 0.08),
        "a1": _poly(rng, "x1", 1.8, 0.1),
        "b1": _poly(rng, "x1", 0.0, 0.05),
        "c1": _poly(rng, "x1", -0.8, 0.1),
        "f1": _poly(rng, "x1", 1.0, 0.1),
    }
    al = _r(rng.uniform(0.7, 1.1))
    be = _sym(rng, 0.3, 0.6)
    s1 = _vals(al * fns["f1"] + Lit(be), "x1")
    if float(np.min(np.abs(s1))) < 0.3:
        raise _Retry
    ga = _r(float(np.max(_vals(_pair_quad(fns, "0", al, be), "x0"))) + rng.uniform(0.3, 0.6))
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g21_2(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "a0": _poly(rng, "x0", -(0.9 + rng.uniform(0.0, 0.3)), 0.08),
        "b0": _poly(rng, "x0", 0.2, 0.08),
        "c0": _poly(rng, "x0", -1.0, 0.1),
        "a1": Lit(0.0),
        "b1": _poly(rng, "x1", 0.3, 0.08),
        "c1": _poly(rng, "x1", 0.4, 0.08),
        "f1": Lit(0.0),
    }
    consts = {"alpha": _r(rng.uniform(0.6, 1.0)), "sigma": _sym(rng, 0.3, 0.8)}
    return fns, consts


def _g21_3(rng: random.Random) -> tuple[FnMap, Consts]:
    al = _sym(rng, 0.6, 1.0)
    be = _sym(rng, 0.4, 0.8)
    p = _sym(rng, 0.4, 1.0)
    q = _sym(rng, 0.4, 1.0)
    if abs(q * al - p * be) < 0.15:
        raise _Retry
    ga = _sym(rng, 0.5, 1.0)
    r = _sym(rng, 0.5, 1.0)
    a0 = _poly(rng, "x0", 0.2, 0.08)
    # the two identities are linear in (b0, c0); solve them exactly
    det = be * be * (q * al - p * be)
    rhs1 = Lit(ga) - al * al * a0
    rhs2 = Lit(r) - p * al * a0
    b0 = (q * be * rhs1 - be * be * rhs2) / det
    c0 = (2.0 * al * be * rhs2 - (p * be + q * al) * rhs1) / det
    b0_mid = float(np.mean(_vals(b0, "x0")))
    c0_mid = float(np.mean(_vals(c0, "x0")))
    fns: FnMap = {
        "a0": a0,
        "b0": b0,
        "c0": c0,
        "a1": _poly(rng, "x1", 1.8, 0.1),
        "b1": _poly(rng, "x1", -b0_mid, 0.08),
        "c1": _poly(rng, "x1", -0.5 - c0_mid, 0.08),
        "f1": _poly(rng, "x1", 1.0, 0.1),
    }
    s1 = _vals(al * fns["f1"] + Lit(be), "x1")
    if float(np.min(np.abs(s1))) < 0.25:
        raise _Retry
    return fns, {"alpha": al, "beta": be, "gamma": ga, "p": p, "q": q, "r": r}


def _g21_4(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "L1": _poly(rng, "x1", 1.0, 0.15),
        "a0": _poly(rng, "x0", 0.2, 0.08),
        "b0": _poly(rng, "x0", 0.0, 0.05),
        "c0": _poly(rng, "x0", 0.3, 0.08),
        "a1": _poly(rng, "x1", 1.8, 0.1),
        "b1": _poly(rng, "x1", 0.0, 0.05),
        "c1": _poly(rng, "x1", -0.8, 0.1),
        "f1": _poly(rng, "x1", 1.0, 0.1),
    }
    return fns, {}


# --- (1.0) -------------------------------------------------------------------


def _radicand_max(fns: FnMap, mu: int, al: float, be: float) -> float:
    """max over the box of alpha^2 w_mu - beta t_mu (what gamma must beat)."""
    expr = al * al * fns[f"w{mu}"] - be * fns[f"t{mu}"]
    return float(np.max(_vals(expr, f"x{mu}")))


def _g10_1(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "t1": _poly(rng, "x1", 0.0, 0.1),
        "t2": _poly(rng, "x2", 1.0, 0.1),
        "t3": _poly(rng, "x3", -1.0, 0.1),
        "w1": _poly(rng, "x1", -(0.9 + rng.uniform(0.0, 0.3)), 0.08),
        "w2": _poly(rng, "x2", _r(rng.uniform(0.05, 0.25)), 0.05),
        "w3": _poly(rng, "x3", -(0.3 + rng.uniform(0.0, 0.3)), 0.08),
    }
    al = _sym(rng, 0.8, 1.1)
    be = _r(rng.uniform(0.1, 0.3))
    ga = _r(max(_radicand_max(fns, mu, al, be) for mu in (1, 2, 3)) + rng.uniform(0.1, 0.25))
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g10_2(rng: random.Random) -> tuple[FnMap, Consts]:
    fns: FnMap = {
        "t1": _poly(rng, "x1", -1.0, 0.1),
        "t2": _poly(rng, "x2", 0.0, 0.1),
        "t3": _poly(rng, "x3", 1.0, 0.1),
        "w2": _poly(rng, "x2", -0.5 + _sym(rng, 0.0, 0.1), 0.05),
        "w3": _poly(rng, "x3", 0.2 + _sym(rng, 0.0, 0.05), 0.05),
    }
    al = _sym(rng, 0.8, 1.1)
    be = _r(rng.uniform(0.2, 0.4))
    ga = _r(rng.uniform(0.1, 0.3))
    fns["w1"] = (be * fns["t1"] + Lit(ga)) / (al * al)
    for mu in (2, 3):
        rad = _vals(be * fns[f"t{mu}"] + Lit(ga) - al * al * fns[f"w{mu}"], f"x{mu}")
        if float(np.min(rad)) < 0.08:
            raise _Retry
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g10_3(rng: random.Random) -> tuple[FnMap, Consts]:
    fns: FnMap = {
        "t1": _poly(rng, "x1", 0.0, 0.1),
        "t2": _poly(rng, "x2", 1.0, 0.1),
        "t3": _poly(rng, "x3", -1.0, 0.1),
        "w1": _poly(rng, "x1", -(0.9 + rng.uniform(0.0, 0.3)), 0.08),
    }
    al = _sym(rng, 0.8, 1.1)
    be = _r(rng.uniform(0.1, 0.3))
    ga = _r(_radicand_max(fns, 1, al, be) + rng.uniform(0.1, 0.25))
    fns["w2"] = (be * fns["t2"] + Lit(ga)) / (al * al)
    fns["w3"] = (be * fns["t3"] + Lit(ga)) / (al * al)
    return fns, {"alpha": al, "beta": be, "gamma": ga}


# --- (1.1) -------------------------------------------------------------------


def _g11_1(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "t1": _poly(rng, "x1", 0.0, 0.15),
        "t2": _poly(rng, "x2", -1.0, 0.1),
        "t3": _poly(rng, "x3", 1.0, 0.1),
        "w1": _poly(rng, "x1", _r(rng.uniform(0.2, 0.6)), 0.08),
        "w2": _poly(rng, "x2", -(0.4 + rng.uniform(0.0, 0.3)), 0.08),
        "w3": _poly(rng, "x3", -(0.4 + rng.uniform(0.0, 0.3)), 0.08),
    }
    al = _sym(rng, 0.8, 1.1)
    be = _r(rng.uniform(0.2, 0.4))
    ga = _r(max(_radicand_max(fns, mu, al, be) for mu in (2, 3)) + rng.uniform(0.2, 0.4))
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g11_2(rng: random.Random) -> tuple[FnMap, Consts]:
    fns = {
        "t1": Lit(0.0),
        "t2": _poly(rng, "x2", 1.0, 0.1),
        "t3": _poly(rng, "x3", 2.0, 0.1),
        "w1": _poly(rng, "x1", 1.0, 0.2),
        "w2": _poly(rng, "x2", -0.4, 0.08),
        "w3": _poly(rng, "x3", 0.2, 0.08),
        "L1": _poly(rng, "x1", 1.0, 0.15),
    }
    return fns, {"beta": _r(rng.uniform(0.7, 1.2))}


def _g11_3(rng: random.Random) -> tuple[FnMap, Consts]:
    fns: FnMap = {
        "t1": _poly(rng, "x1", 0.0, 0.15),
        "t2": _poly(rng, "x2", -1.0, 0.1),
        "t3": _poly(rng, "x3", 1.0, 0.1),
        "w1": _poly(rng, "x1", _r(0.3 + _sym(rng, 0.0, 0.2)), 0.08),
        "w2": _poly(rng, "x2", -(0.4 + rng.uniform(0.0, 0.3)), 0.08),
    }
    al = _sym(rng, 0.7, 1.0)
    be = _sym(rng, 0.3, 0.6)
    ga = _r(_radicand_max(fns, 2, al, be) + rng.uniform(0.2, 0.4))
    fns["w3"] = (be * fns["t3"] + Lit(ga)) / (al * al)
    q = _sym(rng, 0.5, 1.0)
    p = q * be / al
    # Omega must stay away from zero on the grid
    t_rows = [_vals(fns[f"t{mu}"], f"x{mu}") for mu in (1, 2, 3)]
    w_rows = [_vals(fns[f"w{mu}"], f"x{mu}") for mu in (1, 2, 3)]
    t1g, t2g, t3g = np.meshgrid(*t_rows, indexing="ij")
    w1g, w2g, w3g = np.meshgrid(*w_rows, indexing="ij")
    omega = w1g * (t2g - t3g) + w2g * (t3g - t1g) + w3g * (t1g - t2g)
    if float(np.min(np.abs(omega))) < 0.05:
        raise _Retry
    return fns, {"alpha": al, "beta": be, "gamma": ga, "p": p, "q": q}


# --- (0.0) -------------------------------------------------------------------


def _g00_points(rng: random.Random, pts: list[tuple[float, float]], amp: float = 0.07) -> FnMap:
    fns: FnMap = {}
    for i, (ax, bx) in enumerate(pts):
        fns[f"a{i}"] = _poly(rng, f"x{i}", ax, amp)
        fns[f"b{i}"] = _poly(rng, f"x{i}", bx, amp)
    return fns


def _g00_1(rng: random.Random) -> tuple[FnMap, Consts]:
    p1 = (-1.2, 0.9)
    p2 = (1.1, 1.0)
    p3 = (0.1, -1.1)
    cx = (p1[0] + p2[0] + p3[0]) / 3.0 + rng.uniform(-0.1, 0.1)
    cy = (p1[1] + p2[1] + p3[1]) / 3.0 + rng.uniform(-0.1, 0.1)
    fns = _g00_points(rng, [(cx, cy), p1, p2, p3])
    consts = {
        "alpha": _sym(rng, 0.1, 0.25),
        "beta": _sym(rng, 0.1, 0.25),
        "gamma": _r(rng.uniform(0.8, 1.2)),
    }
    return fns, consts


def _g00_2(rng: random.Random) -> tuple[FnMap, Consts]:
    al = _r(rng.uniform(0.1, 0.2))
    be = _r(rng.uniform(0.8, 1.2))
    ga = _r(rng.uniform(0.05, 0.15))
    fns = _g00_points(rng, [(0.0, 0.0), (-1.2, 1.5), (0.0, 0.9), (1.2, 1.4)])
    fns["a0"] = _poly(rng, "x0", _sym(rng, 0.0, 0.3), 0.07)
    fns["b0"] = -(Lit(ga) + al * fns["a0"]) / be
    return fns, {"alpha": al, "beta": be, "gamma": ga}


def _g00_3(rng: random.Random) -> tuple[FnMap, Consts]:
    al = _r(0.1 + _sym(rng, 0.0, 0.05))
    be = _r(rng.uniform(0.85, 1.15))
    ga = _r(rng.uniform(0.0, 0.1))
    fns = _g00_points(rng, [(0.0, 0.0), (0.0, 0.0), (0.0, 1.5), (0.0, 0.5)])
    fns["a0"] = _poly(rng, "x0", -1.0, 0.07)
    fns["a1"] = _poly(rng, "x1", 1.0, 0.07)
    fns["b0"] = -(Lit(ga) + al * fns["a0"]) / be
    fns["b1"] = -(Lit(ga) + al * fns["a1"]) / be
    return fns, {"alpha": al, "beta": be, "gamma": ga}


_RECIPES: dict[tuple[CssType, int], Recipe] = {
    (CssType.T30, 1): _g30_1,
    (CssType.T30, 2): _g30_2,
    (CssType.T30, 3): _g30_3,
    (CssType.T31, 1): _g31_1,
    (CssType.T31, 2): _g31_2,
    (CssType.T31, 3): _g31_3,
    (CssType.T20, 1): _g20_1,
    (CssType.T20, 2): _g20_2,
    (CssType.T20, 3): _g20_3,
    (CssType.T21, 1): _g21_1,
    (CssType.T21, 2): _g21_2,
    (CssType.T21, 3): _g21_3,
    (CssType.T21, 4): _g21_4,
    (CssType.T10, 1): _g10_1,
    (CssType.T10, 2): _g10_2,
    (CssType.T10, 3): _g10_3,
    (CssType.T11, 1): _g11_1,
    (CssType.T11, 2): _g11_2,
    (CssType.T11, 3): _g11_3,
    (CssType.T00, 1): _g00_1,
    (CssType.T00, 2): _g00_2,
    (CssType.T00, 3): _g00_3,
}


def _random_delta(rng: random.Random) -> ScalarFn4D:
    c = [_r(rng.uniform(-0.12, 0.12)) for _ in range(5)]
    src = f"exp({c[0]}*x0 + {c[1]}*x1 + {c[2]}*x2 + {c[3]}*x3 + {c[4]}*x1*x2)"
    return ScalarFn4D.parse(src, ("x0", "x1", "x2", "x3"))


def _random_profile(rng: random.Random) -> ScalarFn4D:
    c0 = _r(rng.uniform(0.8, 1.5))
    c1 = _r(rng.uniform(-0.1, 0.1))
    c2 = _r(rng.uniform(-0.1, 0.1))
    return ScalarFn4D.parse(f"{c0} + {c1}*u + {c2}*v*w", ("u", "v", "w"))


def make_random_model(
    type_label: CssType | str,
    case_id: int,
    seed: int = 0,
    profile: ScalarFn4D | str | None = None,
) -> CssModel:
    """A random valid model of the given case, reproducible from the seed."""
    t = type_label if isinstance(type_label, CssType) else CssType.from_label(type_label)
    info = case_info(t, case_id)
    recipe = _RECIPES[(t, case_id)]
    rng = random.Random(f"{t.value}:{case_id}:{seed}")
    if isinstance(profile, str):
        profile = ScalarFn4D.parse(profile, ("u", "v", "w"))

    slots = {s.name: s.axis for s in info.metric_fns + info.free_fns}
    last_failure = "no attempt ran"
    for _ in range(_ATTEMPT_BUDGET):
        try:
            fns, consts = recipe(rng)
        except _Retry:
            last_failure = "numeric margin rejection inside the recipe"
            continue
        model = CssModel(
            type=t,
            case_id=case_id,
            metric_fns={
                name: ScalarFn1D(expr, f"x{slots[name]}") for name, expr in fns.items()
            },
            delta=_random_delta(rng),
            consts=consts,
            profile=profile if profile is not None else _random_profile(rng),
        )
        violations = validate_constraints(model, grid_n=5)
        if not violations:
            return model
        worst = violations[0]
        last_failure = f"{worst.name} (magnitude {worst.magnitude:.3g} at {worst.x})"
    raise GenerationFailure(
        f"no valid {info.label} model within {_ATTEMPT_BUDGET} attempts "
        f"(seed {seed}); last failure: {last_failure}"
    )
