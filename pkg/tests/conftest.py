from csskit import CssModel, CssType, ScalarFn1D, ScalarFn4D


def fn1(src: str, var: str) -> ScalarFn1D:
    return ScalarFn1D.parse(src, var)


def make_t30c1(delta: str = "1", profile: str = "u", **overrides) -> CssModel:
    """Minkowski seed of (3.0) case 1 unless overridden."""
    fns = dict(a0="-1", b0="0", c0="0", d0="-1", e0="0", f0="-1")
    fns.update({k: v for k, v in overrides.items() if k in fns})
    consts = dict(alpha=1.0, beta=0.0, gamma=0.0)
    consts.update({k: v for k, v in overrides.items() if k in consts})
    kwargs = {
        k: v
        for k, v in overrides.items()
        if k in ("x_ref", "box", "sign_flips", "quadrature")
    }
    return CssModel(
        type=CssType.T30,
        case_id=1,
        metric_fns={n: fn1(s, "x0") for n, s in fns.items()},
        delta=ScalarFn4D.parse(delta),
        consts=consts,
        profile=ScalarFn4D.parse(profile, ("u", "v", "w")),
        **kwargs,
    )


def make_t20_minkowski(profile: str = "u") -> CssModel:
    fns = {
        "s": fn1("-1", "x0"),
        "a0": fn1("-1", "x0"),
        "b0": fn1("0", "x0"),
        "c0": fn1("-1", "x0"),
        "a1": fn1("0", "x1"),
        "b1": fn1("0", "x1"),
        "c1": fn1("0", "x1"),
    }
    return CssModel(
        type=CssType.T20,
        case_id=1,
        metric_fns=fns,
        delta=ScalarFn4D.parse("1"),
        consts=dict(alpha=0.0, beta=0.0, gamma=1.0),
        profile=ScalarFn4D.parse(profile, ("u", "v", "w")),
    )


def make_t00c1_flat(profile: str = "u") -> CssModel:
    # constant plane points, the zeroth inside the others' triangle
    pts = [(0.0, 0.27), (-1.2, 0.9), (1.1, 1.0), (0.1, -1.1)]
    fns = {}
    for i, (a, b) in enumerate(pts):
        fns[f"a{i}"] = fn1(str(a), f"x{i}")
        fns[f"b{i}"] = fn1(str(b), f"x{i}")
    return CssModel(
        type=CssType.T00,
        case_id=1,
        metric_fns=fns,
        delta=ScalarFn4D.parse("1"),
        consts=dict(alpha=0.0, beta=0.0, gamma=1.0),
        profile=ScalarFn4D.parse(profile, ("u", "v", "w")),
    )
