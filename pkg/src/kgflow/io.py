"""Flat-file serialization of scans, profiles, trajectories and reports.

CSV is RFC-4180 style: header row, comma separator, `.` decimal point, no
locale, LF line endings. Floats are written with %.17g so every value
round-trips bit-identically through the package's own readers, and
identical inputs produce byte-identical files. Undefined entries (nodes,
flagged eigen points) are empty cells in profile files and literal `nan`
in scan grids, where a cell is data rather than a flag.

JSON reports are dumped with sorted keys and a fixed indent; complex
amplitudes are encoded as {"re": ..., "im": ...} pairs.
"""
import json
import math

import numpy as np

SCAN_HEADER = "V,a,trans2"
PROFILE_HEADER = "x,absphi2,lambda,v_S,v_dB,v_e"
TRAJ_HEADER = "traj_id,t,x"


def fmt(x):
    """Canonical 17-significant-digit decimal form of a float."""
    return "%.17g" % float(x)


def _cell(x):
    return "" if math.isnan(x) else fmt(x)


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex values."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.generic):
        return jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    return obj


def dump_json(obj, path=None):
    """Serialize a report deterministically; return the text."""
    text = json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def write_scan_csv(grid, path):
    """ScanGrid -> CSV rows `V,a,trans2`, row-major with V outermost."""
    lines = [SCAN_HEADER]
    for V, a, t2 in grid.iter_rows():
        lines.append(f"{fmt(V)},{fmt(a)},{fmt(t2)}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_scan_csv(path):
    """CSV -> dict of column arrays V, a, trans2."""
    V, a, t2 = [], [], []
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != SCAN_HEADER:
            raise ValueError(f"unexpected scan header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            c = line.split(",")
            V.append(float(c[0]))
            a.append(float(c[1]))
            t2.append(float(c[2]))
    return {"V": np.asarray(V), "a": np.asarray(a), "trans2": np.asarray(t2)}


def write_profile_csv(path, x, absphi2, lam, v_S, v_dB, v_e):
    """Field profile -> CSV `x,absphi2,lambda,v_S,v_dB,v_e`.

    NaN entries (undefined velocities at nodes, flagged eigen points) are
    written as empty cells.
    """
    lines = [PROFILE_HEADER]
    for i in range(len(x)):
        lines.append(",".join([
            fmt(x[i]), fmt(absphi2[i]), _cell(lam[i]),
            _cell(v_S[i]), _cell(v_dB[i]), _cell(v_e[i])]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_profile_csv(path):
    """CSV -> dict of column arrays; empty cells come back as NaN."""
    cols = {k: [] for k in PROFILE_HEADER.split(",")}
    names = PROFILE_HEADER.split(",")
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != PROFILE_HEADER:
            raise ValueError(f"unexpected profile header {header!r}")
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            for name, cell in zip(names, line.split(",")):
                cols[name].append(float(cell) if cell else math.nan)
    return {k: np.asarray(v) for k, v in cols.items()}


def write_traj_csv(path, trajectories):
    """Bundle -> CSV `traj_id,t,x`, ordered by traj_id then t."""
    lines = [TRAJ_HEADER]
    for tid, traj in enumerate(trajectories):
        for t, x in zip(traj.t, traj.x):
            lines.append(f"{tid},{fmt(t)},{fmt(x)}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_traj_csv(path):
    """CSV -> dict traj_id -> (t array, x array)."""
    out = {}
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != TRAJ_HEADER:
            raise ValueError(f"unexpected trajectory header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            tid_s, t_s, x_s = line.split(",")
            out.setdefault(int(tid_s), []).append((float(t_s), float(x_s)))
    return {tid: (np.asarray([p[0] for p in pts]),
                  np.asarray([p[1] for p in pts]))
            for tid, pts in out.items()}


def traj_summary(trajectories, law):
    """Sidecar JSON content recording per-trajectory termination causes."""
    return {
        "law": law,
        "n_trajectories": len(trajectories),
        "trajectories": [
            {"traj_id": i, "x0": tr.x0, "t0": tr.t0, "dt": tr.dt,
             "points": int(len(tr)), "termination": tr.termination,
             "halvings": tr.halvings,
             "stagnation_steps": tr.stagnation_steps}
            for i, tr in enumerate(trajectories)
        ],
    }
