import math

import pytest

from conftest import fn1, make_t00c1_flat, make_t20_minkowski, make_t30c1
from csskit import (
    CssModel,
    CssType,
    DomainError,
    ScalarFn4D,
    all_cases,
    build_metric,
    energy_density,
    invariants,
    make_random_model,
    radiation_at,
    stress_energy,
    wave_covector,
)

X = (0.3, -0.2, 0.5, 0.7)


def test_t30_minkowski_known_values():
    m = make_t30c1(profile="u")
    assert wave_covector(m, X) == (1.0, 1.0, 0.0, 0.0)
    x_inv, y_inv, z_inv = invariants(m, X)
    assert x_inv == pytest.approx(X[0] + X[1], abs=1e-12)
    assert (y_inv, z_inv) == (X[2], X[3])
    assert energy_density(m, X) == pytest.approx(X[0] + X[1], abs=1e-12)


def test_t20_minkowski_known_values():
    m = make_t20_minkowski(profile="1 + u")
    assert wave_covector(m, X) == (1.0, 1.0, 0.0, 0.0)
    x_inv = invariants(m, X)[0]
    eps = energy_density(m, X)
    assert eps == pytest.approx(1.0 + x_inv, abs=1e-12)


def test_t00_flat_known_values():
    m = make_t00c1_flat()
    assert wave_covector(m, X) == (1.0, 1.0, 1.0, 1.0)


def test_t21c4_exact_invariant():
    fns = {
        "L1": fn1("1 + 0.1*x1", "x1"),
        "a0": fn1("0.2", "x0"),
        "b0": fn1("0", "x0"),
        "c0": fn1("0.3", "x0"),
        "a1": fn1("1.8", "x1"),
        "b1": fn1("0", "x1"),
        "c1": fn1("-0.8", "x1"),
        "f1": fn1("1 + 0.2*x1^2", "x1"),
    }
    m = CssModel(
        type=CssType.T21, case_id=4, metric_fns=fns,
        delta=ScalarFn4D.parse("1"), consts={},
        profile=ScalarFn4D.parse("u", ("u", "v", "w")),
    )
    f1 = 1.0 + 0.2 * X[1] ** 2
    assert invariants(m, X)[2] == pytest.approx(X[2] - X[3] * f1, abs=1e-14)


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_conformal_scaling_of_energy(lam):
    m1 = make_random_model("1.0", 1, seed=4)
    fns = {k: v for k, v in m1.metric_fns.items()}
    m2 = CssModel(
        type=m1.type, case_id=m1.case_id, metric_fns=fns,
        delta=ScalarFn4D(ScalarFn4D.parse(str(lam)).expr * m1.delta.expr),
        consts=dict(m1.consts), profile=m1.profile,
        x_ref=m1.x_ref, box=m1.box, sign_flips=m1.sign_flips,
    )
    e1 = energy_density(m1, X)
    e2 = energy_density(m2, X)
    assert e2 == pytest.approx(e1 / lam, rel=1e-10)
    assert wave_covector(m2, X) == wave_covector(m1, X)


def test_sign_flip_flips_radical_component():
    plain = make_t30c1()
    flipped = make_t30c1(sign_flips=(-1, 1, 1, 1))
    lv = wave_covector(plain, X)
    lw = wave_covector(flipped, X)
    assert lw[0] == -lv[0]
    assert lw[1:] == lv[1:]
    # the flipped branch is still null
    g = build_metric(flipped, X).ginv.as_array()
    import numpy as np

    arr = np.array(lw)
    assert abs(arr @ g @ arr) < 1e-12


def test_negative_radicand_is_domain_error():
    # alpha^2 a0 + ... > 0 makes -Q negative
    m = make_t30c1(a0="1", d0="1", f0="1")
    with pytest.raises(DomainError, match="radicand"):
        wave_covector(m, X)


def test_vanishing_divisor_named_in_error():
    # (3.0) case 2 divides by A = alpha*a0 + beta*b0 + gamma*c0
    fns = dict(a0="x0", b0="0", c0="0", d0="1", e0="0")
    m_fns = {n: fn1(s, "x0") for n, s in fns.items()}
    m_fns["f0"] = fn1("0 - x0", "x0")  # keeps Q identically zero
    m = CssModel(
        type=CssType.T30, case_id=2, metric_fns=m_fns,
        delta=ScalarFn4D.parse("1"),
        consts=dict(alpha=1.0, beta=0.0, gamma=1.0),
        profile=ScalarFn4D.parse("u", ("u", "v", "w")),
    )
    with pytest.raises(DomainError, match="A"):
        invariants(m, (0.0, 0.1, 0.2, 0.3))


def test_positive_determinant_rejected_outside_split_cases():
    # (3.0) with an all-plus block is not Lorentzian; energy must refuse
    m = make_t30c1(a0="1", d0="1", f0="1", b0="0.5")
    with pytest.raises(DomainError, match="det"):
        energy_density(m, X)


def test_split_cases_allow_positive_determinant():
    # (2.1) case 2 only has signature (2,2) models; energy stays defined
    m = make_random_model("2.1", 2, seed=0)
    at = build_metric(m, X)
    assert at.det > 0.0
    assert math.isfinite(energy_density(m, X, at))


def test_stress_energy_outer_product():
    m = make_t30c1()
    t = stress_energy(m, X)
    lv = wave_covector(m, X)
    eps = energy_density(m, X)
    for i in range(4):
        for j in range(4):
            assert t[(i, j)] == pytest.approx(eps * lv[i] * lv[j], rel=1e-12, abs=1e-15)


def test_log_density_diagnostic():
    m = make_t30c1()
    r = radiation_at(m, X)
    # with Delta = 1 and |det M| = 1 the diagnostic is ln(eps^2)
    assert r.P == pytest.approx(math.log(r.eps**2), abs=1e-12)
    at_zero = radiation_at(m, (0.5, -0.5, 0.0, 0.0))  # profile u = x0 + x1 = 0
    assert at_zero.eps == pytest.approx(0.0, abs=1e-15)
    assert at_zero.P is None


def test_every_case_solution_is_null_and_geodesic_free():
    # cheap all-case sanity: separated components and exact nullity
    import numpy as np

    for info in all_cases():
        m = make_random_model(info.type, info.case, seed=0)
        lv = np.array(wave_covector(m, X))
        g = build_metric(m, X).ginv.as_array()
        scale = max(1.0, float(np.max(np.abs(lv)) ** 2 * np.max(np.abs(g))))
        assert abs(lv @ g @ lv) / scale < 1e-12, info.label
