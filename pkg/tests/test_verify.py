import json
import math
import os
from unittest import mock

import numpy as np
import pytest

from conftest import make_t30c1
from csskit import (
    christoffel,
    divergence_residual,
    eikonal_residual,
    geodesic_residual,
    integrate_null_geodesic,
    make_random_model,
    scan,
    stress_energy,
    wave_covector,
)
from csskit.numerics import Mat4Sym

X = (0.2, -0.1, 0.3, 0.25)


def test_christoffel_vanishes_on_flat_metric():
    m = make_t30c1()
    gamma = christoffel(m, X)
    assert np.all(gamma == 0.0)


def _conformal_gamma(x0: float) -> np.ndarray:
    # g_ij = Delta * eta_ij with Delta = exp(x0): the exact symbols are
    # (d_j ln Delta delta^i_k + d_k ln Delta delta^i_j - eta_jk eta^il d_l) / 2
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    d = np.array([1.0, 0.0, 0.0, 0.0])
    gamma = np.zeros((4, 4, 4))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                gamma[i, j, k] = 0.5 * (
                    (i == j) * d[k] + (i == k) * d[j] - eta[j, k] * eta[i, i] * d[i]
                )
    return gamma


def test_christoffel_conformally_flat_matches_hand_formula():
    m = make_t30c1(delta="exp(x0)")
    gamma = christoffel(m, X, h=1e-4)
    assert np.allclose(gamma, _conformal_gamma(X[0]), atol=1e-6)
    assert gamma[0, 0, 0] == pytest.approx(0.5, abs=1e-6)
    assert gamma[0, 1, 1] == pytest.approx(0.5, abs=1e-6)
    assert gamma[1, 0, 1] == pytest.approx(0.5, abs=1e-6)


def test_christoffel_second_order_convergence():
    m = make_t30c1(delta="exp(x0)")
    exact = _conformal_gamma(X[0])
    hs = (1e-2, 3e-3, 1e-3)
    errs = [float(np.max(np.abs(christoffel(m, X, h=h) - exact))) for h in hs]
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 1.8 <= slope <= 2.2


def test_residuals_small_on_valid_model():
    m = make_random_model("2.1", 1, seed=5)
    assert eikonal_residual(m, X) < 1e-12
    assert divergence_residual(m, X) < 1e-5
    assert geodesic_residual(m, X) < 1e-5


def test_divergence_detects_corruption():
    m = make_random_model("1.0", 1, seed=5)

    def bad_radiation(model, x):
        t = stress_energy(model, x)
        return Mat4Sym(tuple((1.0 + x[0]) * v for v in t.elems))

    assert divergence_residual(m, X) < 1e-5
    assert divergence_residual(m, X, radiation=bad_radiation) > 1e-2


def test_geodesic_and_eikonal_detect_corruption():
    m = make_random_model("1.0", 1, seed=5)

    def bad_covector(model, x):
        lv = list(wave_covector(model, x))
        lv[0] += 0.1
        return tuple(lv)

    assert eikonal_residual(m, X, covector=bad_covector) > 1e-3
    assert geodesic_residual(m, X, covector=bad_covector) > 1e-4


def test_minkowski_geodesics_are_straight():
    m = make_t30c1()
    traj = integrate_null_geodesic(m, (0.0, 0.0, 0.0, 0.0), steps=400, dl=1e-3)
    assert not traj.truncated
    assert traj.hamiltonian_drift < 1e-14
    assert traj.p_deviation < 1e-12
    v = np.array([1.0, -1.0, 0.0, 0.0])  # raised (1,1,0,0) against diag(1,-1,-1,-1)
    for lam, xs, ps, hv in traj.samples[:: 50]:
        assert np.allclose(np.array(xs), lam * v, atol=1e-12)
        assert ps == (1.0, 1.0, 0.0, 0.0)
        assert abs(hv) < 1e-15


def test_geodesic_momentum_tracks_covector_on_curved_model():
    m = make_random_model("0.0", 1, seed=2)
    traj = integrate_null_geodesic(m, (0.0, 0.0, 0.0, 0.0), steps=500, dl=1e-3)
    assert traj.hamiltonian_drift < 1e-7
    assert traj.p_deviation < 1e-5


def test_geodesic_truncates_at_box_edge():
    m = make_t30c1()
    traj = integrate_null_geodesic(m, (0.99, 0.0, 0.0, 0.0), steps=400, dl=1e-3)
    assert traj.truncated
    assert len(traj.samples) < 401


def test_scan_reports_and_penalizes_skips():
    # radicand dies inside the box: those points are skipped, not hidden
    m = make_t30c1(a0="x0 - 0.5")
    rep = scan(m, n_points=80, seed=9)
    assert rep.skipped > 0
    null_check = [c for c in rep.checks if c.name == "null"][0]
    assert null_check.points_evaluated == 80 - rep.skipped
    constraints = [c for c in rep.checks if c.name == "constraints"][0]
    assert not constraints.passed
    assert "radicand" in (constraints.detail or "")


def test_scan_deterministic_and_thread_invariant():
    m = make_random_model("3.0", 1, seed=1)
    rep1 = scan(m, n_points=60, seed=3, collect_rows=True)
    rep2 = scan(m, n_points=60, seed=3, collect_rows=True)
    assert json.dumps(rep1.as_dict(), sort_keys=True) == json.dumps(rep2.as_dict(), sort_keys=True)
    assert rep1.rows == rep2.rows
    with mock.patch.dict(os.environ, {"CSSKIT_THREADS": "1"}):
        rep3 = scan(m, n_points=60, seed=3, collect_rows=True)
    assert rep1.rows == rep3.rows
    assert json.dumps(rep1.as_dict(), sort_keys=True) == json.dumps(rep3.as_dict(), sort_keys=True)


def test_scan_passes_on_valid_model():
    m = make_random_model("2.0", 2, seed=7)
    rep = scan(m, n_points=50, seed=1)
    assert rep.passed
    assert rep.skipped == 0
    for check in rep.checks:
        assert check.passed, check
