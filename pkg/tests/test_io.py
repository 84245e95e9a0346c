import numpy as np
import pytest

from novikovlab import State, make_grid
from novikovlab.io import fmt, read_csv, read_snapshot, write_csv, write_snapshot


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(np.float64(1.0)) == "1"
    assert fmt(float("nan")) == "nan"
    assert fmt(3) == "3" and fmt("ok") == "ok"
    assert float(fmt(np.pi)) == np.pi


def test_csv_round_trip(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ("a", "b"), [(1.0 / 3.0, "x"), (2, "")])
    text = path.read_text()
    assert text.splitlines()[0] == "a,b"
    rows = read_csv(path)
    assert float(rows[0]["a"]) == 1.0 / 3.0 and rows[1]["b"] == ""


def test_snapshot_round_trip(tmp_path):
    g = make_grid(40.0, 64)
    rng = np.random.default_rng(0)
    s = State(g, rng.standard_normal(64), rng.standard_normal(64))
    path = tmp_path / "snap.csv"
    write_snapshot(path, s, 0.25)
    back, t = read_snapshot(path)
    assert t == 0.25 and back.grid == g
    assert np.array_equal(back.u, s.u) and np.array_equal(back.v, s.v)
    header = path.read_text().splitlines()[:6]
    assert header[0] == "# time = 0.25" and header[-1] == "u,v"


def test_snapshot_rejects_inconsistent_files(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# length = 1\n# points = 16\nu,v\n0,0\n")
    with pytest.raises(ValueError):
        read_snapshot(path)
    path.write_text("u,v\n0,0\n")
    with pytest.raises(ValueError):
        read_snapshot(path)
