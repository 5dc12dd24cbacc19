import json

import pytest

from csskit import cli

MINKOWSKI_30 = {
    "schema": 1,
    "type": "3.0",
    "case": 1,
    "functions": {"a0": "-1", "b0": "0", "c0": "0", "d0": "-1", "e0": "0", "f0": "-1"},
    "delta": "1",
    "constants": {"alpha": 1.0, "beta": 0.0, "gamma": 0.0},
    "profile": "u",
    "box": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
}


def write_config(tmp_path, cfg, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_cases_lists_all_22(capsys):
    assert cli.main(["cases"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 22
    per_type = {}
    for row in payload["cases"]:
        per_type[row["type"]] = per_type.get(row["type"], 0) + 1
    assert per_type == {
        "3.0": 3, "3.1": 3, "2.0": 3, "2.1": 4, "1.0": 3, "1.1": 3, "0.0": 3,
    }


def test_validate_accepts_flat_model(tmp_path, capsys):
    cfg = write_config(tmp_path, MINKOWSKI_30)
    assert cli.main(["validate", cfg, "--grid-n", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["valid"] is True
    assert payload["violations"] == []


def test_validate_names_broken_constraint(tmp_path, capsys):
    bad = dict(MINKOWSKI_30, functions=dict(MINKOWSKI_30["functions"], a0="x0 - 0.5"))
    cfg = write_config(tmp_path, bad)
    assert cli.main(["validate", cfg, "--grid-n", "4"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["valid"] is False
    names = [v["name"] for v in payload["violations"]]
    assert any("radicand" in n for n in names)


def test_scan_passes_and_is_byte_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, MINKOWSKI_30)
    assert cli.main(["scan", cfg, "--points", "40", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["scan", cfg, "--points", "40", "--seed", "5"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["passed"] is True
    assert payload["points"] == 40
    assert payload["skipped"] == 0


def test_scan_fails_on_broken_model(tmp_path, capsys):
    bad = dict(MINKOWSKI_30, functions=dict(MINKOWSKI_30["functions"], a0="x0 - 0.5"))
    cfg = write_config(tmp_path, bad)
    assert cli.main(["scan", cfg, "--points", "30"]) == 1
    payload = json.loads(capsys.readouterr().out)
    constraints = [c for c in payload["checks"] if c["name"] == "constraints"][0]
    assert constraints["passed"] is False
    assert "radicand" in constraints["detail"]


def test_scan_writes_csv_rows(tmp_path, capsys):
    cfg = write_config(tmp_path, MINKOWSKI_30)
    out = tmp_path / "rows.csv"
    assert cli.main(["scan", cfg, "--points", "25", "--csv", str(out)]) == 0
    payload = json.loads(capsys.readouterr().out)
    lines = out.read_text().splitlines()
    assert lines[0] == cli.SCAN_CSV_HEADER
    assert len(lines) - 1 == payload["points"] - payload["skipped"]
    values = lines[1].split(",")
    assert len(values) == 12
    float(values[0])  # coordinates round-trip through repr


def test_geodesic_reports_and_writes_csv(tmp_path, capsys):
    cfg = write_config(tmp_path, MINKOWSKI_30)
    out = tmp_path / "traj.csv"
    rc = cli.main(
        ["geodesic", cfg, "--start", "0,0,0,0", "--steps", "50", "--csv", str(out)]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["steps_taken"] == 50
    assert payload["truncated"] is False
    assert payload["hamiltonian_drift"] < 1e-12
    lines = out.read_text().splitlines()
    assert lines[0] == cli.GEODESIC_CSV_HEADER
    assert len(lines) == 52


def test_geodesic_rejects_start_outside_box(tmp_path, capsys):
    cfg = write_config(tmp_path, MINKOWSKI_30)
    assert cli.main(["geodesic", cfg, "--start", "3,0,0,0"]) == 2
    assert "outside the box" in capsys.readouterr().err


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda c: c.update(extra_key=1), "unknown config keys"),
        (lambda c: c["functions"].pop("e0"), "e0"),
        (lambda c: c.update(schema=2), "schema"),
        (lambda c: c.update(tolerances={"warp": 1.0}), "unknown tolerance keys"),
        (lambda c: c.update(type="9.9"), "9.9"),
    ],
)
def test_bad_configs_exit_2(tmp_path, capsys, mutate, fragment):
    cfg = json.loads(json.dumps(MINKOWSKI_30))
    mutate(cfg)
    path = write_config(tmp_path, cfg)
    assert cli.main(["validate", path]) == 2
    err = capsys.readouterr().err
    assert err.startswith("config error:")
    assert fragment in err


def test_unreadable_config_exits_2(tmp_path, capsys):
    assert cli.main(["validate", str(tmp_path / "nope.json")]) == 2
    assert "cannot read config" in capsys.readouterr().err
