import json
import os
import subprocess
import sys

import numpy as np
import pytest
import yaml

from novikovlab import State, make_grid
from novikovlab.cli import main
from novikovlab.diagnostics import CSV_COLUMNS
from novikovlab.io import read_csv, read_snapshot, write_snapshot


def write_config(path, **values):
    path.write_text(yaml.safe_dump({k.replace("_", "-"): v for k, v in values.items()}))
    return str(path)


def run(tmp_path, command, out="out", **values):
    cfg = write_config(tmp_path / f"{command}.yaml", **values)
    outdir = tmp_path / out
    return main([command, "--config", cfg, "--out", str(outdir)]), outdir


def messages(capsys):
    return [json.loads(line) for line in capsys.readouterr().err.splitlines() if line.strip()]


SMALL = dict(initial="gaussian-potentials", length=20.0, points=128, t_final=0.2, dt=0.02, record_every=5)


def test_malformed_config_writes_nothing(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("points: [1, 2\n")
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 1
    assert not out.exists()
    assert messages(capsys)[-1]["kind"] == "config"


def test_unknown_key_and_usage_errors(tmp_path, capsys):
    code, out = run(tmp_path, "simulate", time_step=1)
    assert code == 1 and not out.exists()
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--out", str(tmp_path / "x")])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "--config", "c", "--out", "o"])
    assert exc.value.code == 1


def test_zero_data_simulation(tmp_path):
    code, out = run(tmp_path, "simulate", amplitude=0.0, **SMALL)
    assert code == 0
    rows = read_csv(out / "diagnostics.csv")
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert len(rows) == 3
    for r in rows:
        for key in CSV_COLUMNS[1:-1]:
            assert float(r[key]) == 0.0
        assert r["flags"] == ""
    snaps = sorted(os.listdir(out / "snapshots"))
    assert snaps == ["snap_00000.csv", "snap_00001.csv", "snap_00002.csv"]
    s, t = read_snapshot(out / "snapshots" / snaps[-1])
    assert t == pytest.approx(0.2) and not s.u.any()
    echoed = yaml.safe_load((out / "config.yaml").read_text())
    assert echoed["amplitude"] == 0.0 and echoed["points"] == 128 and "seed" in echoed


def test_blowup_exit_code_keeps_partial_output(tmp_path, capsys):
    code, out = run(tmp_path, "simulate", **{**SMALL, "amplitude": 5e3, "t_final": 2.0, "record_every": 1})
    assert code == 2
    assert (out / "diagnostics.csv").exists()
    assert any(m["kind"] == "blowup" for m in messages(capsys))


def test_from_file(tmp_path):
    g = make_grid(20.0, 128)
    u = 0.3 * np.exp(-g.circle_distance(10.0) ** 2)
    snap = tmp_path / "init.csv"
    write_snapshot(snap, State(g, u, u), 0.0)
    base = {**SMALL, "initial": "from-file", "initial_file": str(snap)}
    code, out = run(tmp_path, "simulate", **base)
    assert code == 0
    first, _ = read_snapshot(out / "snapshots" / "snap_00000.csv")
    assert np.array_equal(first.u, u)
    code, out = run(tmp_path, "simulate", out="out2", **{**base, "points": 256})
    assert code == 1 and not out.exists()


def test_raw_peakon_warns_and_zero_duration_is_exact(tmp_path, capsys):
    code, out = run(tmp_path, "peakon-validate", initial="peakon", t_final=0.0, levels=1)
    assert code == 0
    msgs = messages(capsys)
    assert any(m["level"] == "warning" and "point-mass" in m["message"] for m in msgs)
    rows = read_csv(out / "peakon_error.csv")
    assert len(rows) == 1 and float(rows[0]["sup_error"]) == 0.0


def test_periodic_peakon_validation_runs(tmp_path):
    code, out = run(tmp_path, "peakon-validate", initial="periodic-peakon", points=256,
                    t_final=0.2, dt=1e-3, record_every=100, levels=1)
    assert code == 0
    echoed = yaml.safe_load((out / "config.yaml").read_text())
    assert echoed["length"] == pytest.approx(2 * np.pi)


def test_property_failure_exit_code(tmp_path):
    code, out = run(tmp_path, "peakon-validate", t_final=0.1, levels=1, tolerance=1e-9, points=512, mollifier_n=8)
    assert code == 3
    assert (out / "peakon_levels.csv").exists()


def test_weak_check_zero_trajectory_and_interior_violation(tmp_path):
    code, out = run(tmp_path, "weak-check", amplitude=0.0, levels=2)
    assert code == 0
    rows = read_csv(out / "residuals.csv")
    assert len(rows) == 18
    assert all(float(r["r_u"]) == 0.0 and float(r["r_v"]) == 0.0 for r in rows)
    code, out = run(tmp_path, "weak-check", out="bad", sweep_st=0.75)
    assert code == 1 and not out.exists()


def test_mollify_study_singleton(tmp_path):
    code, out = run(tmp_path, "mollify-study", ks=[8], points=256, t_final=0.1, dt=1e-2, record_every=5)
    assert code == 0
    rows = read_csv(out / "convergence.csv")
    assert len(rows) == 1 and rows[0]["d_k"] == "nan"


def test_depend_rejects_zero_delta(tmp_path):
    code, out = run(tmp_path, "depend", deltas=[1e-2, 0.0])
    assert code == 1 and not out.exists()


def test_depend_property_failure(tmp_path):
    code, out = run(tmp_path, "depend", ratio_min=2.1, ratio_max=2.2, perturbation_center=8.0)
    assert code == 3
    assert len(read_csv(out / "dependence.csv")) == 3


def test_module_entry_point(tmp_path):
    cfg = write_config(tmp_path / "c.yaml", amplitude=0.0, **SMALL)
    res = subprocess.run(
        [sys.executable, "-m", "novikovlab", "simulate", "--config", cfg, "--out", str(tmp_path / "o"),
         "--override", "snapshots=false"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "o" / "diagnostics.csv").exists()
    assert not (tmp_path / "o" / "snapshots").exists()
