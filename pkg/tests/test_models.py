import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fn1, make_t30c1
from csskit import (
    ConfigError,
    CssModel,
    CssType,
    ScalarFn4D,
    all_cases,
    build_metric,
    case_info,
    stackel_potentials,
    v_potentials_3,
    v_potentials_4,
    validate_constraints,
)

EXPECTED_COUNTS = {"3.0": 3, "3.1": 3, "2.0": 3, "2.1": 4, "1.0": 3, "1.1": 3, "0.0": 3}


def test_registry_enumerates_all_cases():
    infos = all_cases()
    assert len(infos) == 22
    by_type = {}
    for info in infos:
        by_type.setdefault(info.type.value, []).append(info.case)
    assert {k: len(v) for k, v in by_type.items()} == EXPECTED_COUNTS
    for cases in by_type.values():
        assert cases == list(range(1, len(cases) + 1))


def test_case_info_rejects_unknown():
    with pytest.raises(KeyError):
        case_info(CssType.T30, 4)


def test_missing_function_rejected():
    m = make_t30c1()
    fns = dict(m.metric_fns)
    del fns["e0"]
    with pytest.raises(ConfigError, match="e0"):
        CssModel(
            type=m.type, case_id=1, metric_fns=fns, delta=m.delta,
            consts=dict(m.consts), profile=m.profile,
        )


def test_extra_function_rejected():
    m = make_t30c1()
    fns = dict(m.metric_fns)
    fns["zz"] = fn1("1", "x0")
    with pytest.raises(ConfigError, match="zz"):
        CssModel(
            type=m.type, case_id=1, metric_fns=fns, delta=m.delta,
            consts=dict(m.consts), profile=m.profile,
        )


def test_constant_mismatch_rejected():
    m = make_t30c1()
    with pytest.raises(ConfigError):
        CssModel(
            type=m.type, case_id=1, metric_fns=dict(m.metric_fns), delta=m.delta,
            consts=dict(alpha=1.0), profile=m.profile,
        )


def test_sign_flip_slots_enforced():
    # slot 0 is the only radical component of (3.0) case 1
    make_t30c1(sign_flips=(-1, 1, 1, 1))
    with pytest.raises(ConfigError):
        make_t30c1(sign_flips=(1, -1, 1, 1))
    with pytest.raises(ConfigError):
        make_t30c1(sign_flips=(2, 1, 1, 1))


def test_x_ref_must_lie_in_box():
    with pytest.raises(ConfigError):
        make_t30c1(x_ref=(3.0, 0.0, 0.0, 0.0))


def test_metric_assembly_minkowski():
    m = make_t30c1()
    at = build_metric(m, (0.1, 0.2, 0.3, 0.4))
    assert np.allclose(at.ginv.as_array(), np.diag([1.0, -1.0, -1.0, -1.0]))
    assert np.allclose(at.g.as_array(), np.diag([1.0, -1.0, -1.0, -1.0]))
    assert at.det == pytest.approx(-1.0)


def test_conformal_factor_scales_inverse_metric():
    m = make_t30c1(delta="2")
    at = build_metric(m, (0.0, 0.0, 0.0, 0.0))
    assert np.allclose(at.ginv.as_array(), np.diag([0.5, -0.5, -0.5, -0.5]))


def test_validate_flags_bad_signature():
    m = make_t30c1(a0="1", d0="1", f0="1")
    names = {v.name for v in validate_constraints(m)}
    assert any("signature" in n for n in names)


def test_validate_flags_nonpositive_delta():
    m = make_t30c1(delta="x0")  # vanishes inside the box
    names = {v.name for v in validate_constraints(m)}
    assert any("conformal factor" in n for n in names)


def test_validate_clean_model():
    assert validate_constraints(make_t30c1()) == []


@given(
    st.tuples(*[st.floats(-5, 5) for _ in range(3)]),
)
@settings(max_examples=300, deadline=None)
def test_v3_identities(ts):
    v = v_potentials_3(*ts)
    assert abs(sum(v)) < 1e-12
    assert abs(sum(t * vv for t, vv in zip(ts, v))) < 1e-12


@given(
    st.tuples(*[st.floats(-3, 3) for _ in range(4)]),
    st.tuples(*[st.floats(-3, 3) for _ in range(4)]),
)
@settings(max_examples=300, deadline=None)
def test_v4_identities(a, b):
    v = v_potentials_4(a, b)
    scale = max(1.0, max(abs(x) for x in v))
    assert abs(sum(v)) / scale < 1e-12
    assert abs(sum(ai * vi for ai, vi in zip(a, v))) / scale < 1e-11
    assert abs(sum(bi * vi for bi, vi in zip(b, v))) / scale < 1e-11


def test_stackel_potentials_t10():
    fns = {
        "t1": fn1("x1", "x1"),
        "w1": fn1("0", "x1"),
        "t2": fn1("1", "x2"),
        "w2": fn1("1", "x2"),
        "t3": fn1("-1", "x3"),
        "w3": fn1("0", "x3"),
    }
    m = CssModel(
        type=CssType.T10, case_id=1, metric_fns=fns,
        delta=ScalarFn4D.parse("1"),
        consts=dict(alpha=1.0, beta=0.0, gamma=2.0),
        profile=ScalarFn4D.parse("u", ("u", "v", "w")),
    )
    pots = stackel_potentials(m, (0.0, 0.5, 0.0, 0.0))
    t1, t2, t3 = 0.5, 1.0, -1.0
    assert pots.V == pytest.approx((t2 - t3, t3 - t1, t1 - t2))
    assert pots.Omega == pytest.approx(1.0 * (t3 - t1))
