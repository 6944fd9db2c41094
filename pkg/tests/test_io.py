"""Serialization: fixed headers, 17-digit round trips, NaN conventions."""
import json
import math

import numpy as np
import pytest

from kgflow import (
    KIND_SCALAR,
    free_superposition,
    integrate_trajectory,
    scan_transmission,
)
from kgflow.io import (
    PROFILE_HEADER,
    SCAN_HEADER,
    TRAJ_HEADER,
    dump_json,
    fmt,
    jsonable,
    load_json,
    read_profile_csv,
    read_scan_csv,
    read_traj_csv,
    traj_summary,
    write_profile_csv,
    write_scan_csv,
    write_traj_csv,
)


def test_fmt_seventeen_digits():
    assert fmt(1.0) == "1"
    assert fmt(2.76) == "2.7599999999999998"
    assert fmt(float("nan")) == "nan"
    # shortest-exact is not required, but re-parsing must be exact
    for v in (1 / 3, math.pi, 1e-300, 6.02e23):
        assert float(fmt(v)) == v


def test_scan_roundtrip_bitwise(tmp_path):
    grid = scan_transmission(1.38, np.linspace(0.0, 0.4, 5),
                             np.linspace(1.0, 12.0, 4), KIND_SCALAR)
    p1 = tmp_path / "scan.csv"
    write_scan_csv(grid, p1)
    data = read_scan_csv(p1)
    assert data["trans2"].shape == (20,)
    assert np.array_equal(data["trans2"],
                          grid.trans2.reshape(-1))
    # write -> read -> write is byte identical
    p2 = tmp_path / "scan2.csv"

    class _Echo:
        def iter_rows(self):
            return zip(data["V"], data["a"], data["trans2"])

    write_scan_csv(_Echo(), p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_text().splitlines()[0] == SCAN_HEADER


def test_scan_nan_cells_written_as_nan(tmp_path):
    class _OneNan:
        def iter_rows(self):
            return iter([(0.1, 1.0, float("nan"))])

    p = tmp_path / "scan.csv"
    write_scan_csv(_OneNan(), p)
    assert p.read_text().splitlines()[1] == "0.10000000000000001,1,nan"
    back = read_scan_csv(p)
    assert math.isnan(back["trans2"][0])


def test_profile_roundtrip_with_flagged_cells(tmp_path):
    x = np.array([0.0, 1.0])
    a2 = np.array([2.89, 1e-18])
    lam = np.array([8.307, 1.805])
    v = np.array([0.12, np.nan])  # flagged entry -> empty cell
    p = tmp_path / "prof.csv"
    write_profile_csv(p, x, a2, lam, v, v, v)
    lines = p.read_text().splitlines()
    assert lines[0] == PROFILE_HEADER
    assert lines[2].endswith(",,,")
    back = read_profile_csv(p)
    assert np.array_equal(back["x"], x)
    assert np.isnan(back["v_S"][1]) and not np.isnan(back["v_S"][0])
    assert back["lambda"][1] == 1.805


def test_traj_roundtrip_ordering(tmp_path):
    sol = free_superposition(0.95, 0.3)
    trajs = [integrate_trajectory(sol, "eigen", x0, 0.5, dt=0.1)
             for x0 in (-1.0, 0.5)]
    p = tmp_path / "traj.csv"
    write_traj_csv(p, trajs)
    lines = p.read_text().splitlines()
    assert lines[0] == TRAJ_HEADER
    ids = [int(line.split(",")[0]) for line in lines[1:]]
    assert ids == sorted(ids)
    back = read_traj_csv(p)
    assert set(back) == {0, 1}
    t0, x0 = back[0]
    assert np.array_equal(t0, trajs[0].t)
    assert np.array_equal(x0, trajs[0].x)


def test_header_validation(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_scan_csv(p)
    with pytest.raises(ValueError):
        read_profile_csv(p)
    with pytest.raises(ValueError):
        read_traj_csv(p)


def test_jsonable_conversions():
    out = jsonable({"z": 1 + 2j, "arr": np.array([1.0, 2.0]),
                    "i": np.int64(3), "f": np.float64(0.5)})
    assert out["z"] == {"re": 1.0, "im": 2.0}
    assert out["arr"] == [1.0, 2.0]
    assert out["i"] == 3 and out["f"] == 0.5


def test_dump_json_deterministic(tmp_path):
    obj = {"b": 1.0, "a": {"d": 2 + 1j, "c": [np.float64(3.5)]}}
    text = dump_json(obj)
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    p = tmp_path / "r.json"
    dump_json(obj, p)
    assert p.read_text() == text
    assert load_json(p) == json.loads(text)


def test_traj_summary_structure():
    sol = free_superposition(0.95, 0.3)
    trajs = [integrate_trajectory(sol, "eigen", -1.0, 0.5, dt=0.1)]
    summ = traj_summary(trajs, "eigen")
    assert summ["law"] == "eigen"
    assert summ["n_trajectories"] == 1
    entry = summ["trajectories"][0]
    assert entry["termination"] == "completed"
    assert entry["points"] == len(trajs[0])
    assert entry["traj_id"] == 0
