"""World lines through the three velocity fields.

Integration is classical fixed-grid RK4 with recursive local step halving
whenever the speed changes by more than 10% across a step; figure data
must be reproducible, so no fully adaptive control. Stationary solutions
make every law autonomous (v depends on x only) and the hot loop lives in
the kernel backend; a generic time-dependent RK4 twin with the same
halving rule is kept here for boosted-frame integration, where the
composed field does depend on t.

Laws: "schrodinger" (Im psi'/psi), "debroglie" (S_x / (omega - V)),
"eigen" (time-like stress-tensor flow). The first two blow up or vanish
at nodes and integration stops there with NodeApproachError carrying the
partial trajectory; the eigen law is total and instead can stagnate
(|v| ~ 0 near interference minima), which is reported as a
StagnationNotice warning while integration continues.
"""
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .backend import kernels
from .errors import (
    CausalityViolationError,
    DegenerateError,
    NodeApproachError,
    StagnationNotice,
)

LAWS = ("schrodinger", "debroglie", "eigen")
_LAW_CODE = {"schrodinger": kernels.LAW_SCHRODINGER,
             "debroglie": kernels.LAW_DEBROGLIE,
             "eigen": kernels.LAW_EIGEN}
_STATUS_TAG = {kernels.STATUS_OK: "completed",
               kernels.STATUS_NODE: "node",
               kernels.STATUS_BOTH_NULL: "both-null",
               kernels.STATUS_COMPLEX_PAIR: "complex-pair"}

STAGNATION_SUSTAIN = 3  # consecutive |v| < eps steps before the notice fires


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered world line under one velocity law, plus step metadata."""

    law: str
    t: np.ndarray
    x: np.ndarray
    x0: float
    t0: float
    dt: float
    method: str = "rk4"
    halvings: int = 0
    stagnation_steps: int = 0
    termination: str = "completed"

    def __len__(self):
        return self.t.size

    def chord_speeds(self):
        """|dx/dt| over consecutive points (empty for single-point lines)."""
        if self.t.size < 2:
            return np.empty(0)
        return np.abs(np.diff(self.x) / np.diff(self.t))


def worker_count():
    """Worker cap for bundle integration, from KGFLOW_THREADS if set."""
    raw = os.environ.get("KGFLOW_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"KGFLOW_THREADS={raw!r} is not an integer")
        if n < 1:
            raise ValueError(f"KGFLOW_THREADS={n} must be >= 1")
        return n
    return os.cpu_count() or 1


def law_code(law):
    try:
        return _LAW_CODE[law]
    except KeyError:
        raise ValueError(f"unknown velocity law {law!r}; expected one of {LAWS}")


def _integrate_raw(sol, law, x0, t_end, t0, dt):
    code = law_code(law)
    if dt <= 0.0:
        raise ValueError(f"dt={dt!r} must be positive")
    if t_end <= t0:
        raise ValueError(f"need t_end > t0, got [{t0!r}, {t_end!r}]")
    ts, xs, status, halvings, stag = kernels.rk4_trajectory(
        sol.params, code, float(x0), float(t0), float(t_end), float(dt))
    return Trajectory(law=law, t=ts, x=xs, x0=float(x0), t0=float(t0),
                      dt=float(dt), halvings=int(halvings),
                      stagnation_steps=int(stag),
                      termination=_STATUS_TAG[int(status)])


def integrate_trajectory(sol, law, x0, t_end, t0=0.0, dt=0.01):
    """Integrate dx/dt = v(x) from (t0, x0) to t_end on a fixed t grid.

    Raises NodeApproachError (with the partial world line attached) when a
    node-sensitive law runs into a node, DegenerateError on the
    measure-zero eigen failures. Emits StagnationNotice when the speed
    stays below 1e-8 for several consecutive steps.
    """
    traj = _integrate_raw(sol, law, x0, t_end, t0, dt)
    if traj.termination == "node":
        raise NodeApproachError(
            f"{law} velocity hit a node near x={traj.x[-1]!r} "
            f"at t={traj.t[-1]!r}", trajectory=traj)
    if traj.termination != "completed":
        raise DegenerateError(
            f"eigen decomposition failed ({traj.termination}) near "
            f"x={traj.x[-1]!r} at t={traj.t[-1]!r}")
    if traj.stagnation_steps >= STAGNATION_SUSTAIN:
        warnings.warn(
            f"trajectory from x0={x0!r} effectively at rest for "
            f"{traj.stagnation_steps} steps (|v| < {kernels.STAGNATION_EPS})",
            StagnationNotice)
    return traj


def integrate_bundle(sol, law, seeds, t_end, t0=0.0, dt=0.01):
    """Integrate one trajectory per seed, in parallel, order-preserving.

    Per-seed failures do not abort the bundle: partial trajectories are
    returned with their termination tag ("node", "both-null", ...) so the
    caller can report causes. Output order matches the seed order exactly
    regardless of scheduling; KGFLOW_THREADS caps the worker pool.
    """
    seeds = [float(s) for s in seeds]
    if not seeds:
        return []
    workers = min(worker_count(), len(seeds))
    if workers == 1:
        return [_integrate_raw(sol, law, s, t_end, t0, dt) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(
            lambda s: _integrate_raw(sol, law, s, t_end, t0, dt), seeds))


def direction_field(sol, law, t_grid, x_grid):
    """(t_mesh, x_mesh, v, defined) over the grid product.

    Stationary fields are t-independent, so one row is evaluated and
    broadcast across the t grid; `defined` is False where the law is
    undefined (nodes, flagged eigen points) and v is NaN there.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    v_row, ok_row = kernels.direction_samples(sol.params, law_code(law), x_grid)
    t_mesh, x_mesh = np.meshgrid(t_grid, x_grid, indexing="ij")
    v = np.tile(v_row, (t_grid.size, 1))
    defined = np.tile(ok_row.astype(bool), (t_grid.size, 1))
    return t_mesh, x_mesh, v, defined


def boost_velocity(v, beta):
    """Relativistic velocity composition (v - beta)/(1 - v beta)."""
    if abs(beta) >= 1.0:
        raise ValueError(f"|beta|={abs(beta)!r} must be < 1")
    return (v - beta) / (1.0 - v * beta)


def boost_trajectory(traj, rapidity):
    """Passive re-coordinatisation of a world line by rapidity alpha.

    Each event maps to (t cosh a - x sinh a, x cosh a - t sinh a); the
    point set is re-sorted by the new time, which only matters for
    superluminal laws where simultaneity order can invert. For the eigen
    law the transformed chords are verified sub-luminal and
    CausalityViolationError is raised otherwise (a covariance regression
    that must never fire).
    """
    ch = math.cosh(rapidity)
    sh = math.sinh(rapidity)
    tp = traj.t * ch - traj.x * sh
    xp = traj.x * ch - traj.t * sh
    order = np.argsort(tp, kind="stable")
    tp = tp[order]
    xp = xp[order]
    if traj.law == "eigen" and tp.size >= 2:
        dt = np.diff(tp)
        dx = np.diff(xp)
        if np.any(dt <= 0.0) or np.any(np.abs(dx) >= np.abs(dt)):
            worst = float(np.max(np.abs(dx) / np.where(dt > 0, dt, np.nan)))
            raise CausalityViolationError(
                f"boost alpha={rapidity!r} produced a chord speed "
                f"{worst!r} >= 1 on an eigen-law world line")
    return replace(traj, t=tp, x=xp, x0=float(xp[0]), t0=float(tp[0]))


def integrate_callable(v_fun, x0, t0, t_end, dt,
                       max_depth=kernels.MAX_HALVE_DEPTH):
    """RK4 for dx/dt = v(t, x) with the same halving rule as the kernels.

    Twin of the kernel integrator for genuinely time-dependent fields
    (boosted frames). v_fun returns a float and may raise to abort.
    """
    frac = kernels.HALVE_FRACTION

    def advance(t, x, v0, h, depth):
        k1 = v0
        k2 = v_fun(t + 0.5 * h, x + 0.5 * h * k1)
        k3 = v_fun(t + 0.5 * h, x + 0.5 * h * k2)
        k4 = v_fun(t + h, x + h * k3)
        x1 = x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        v1 = v_fun(t + h, x1)
        if depth < max_depth and abs(v1 - v0) > frac * (abs(v0) + 1e-14):
            xm = advance(t, x, v0, 0.5 * h, depth + 1)
            vm = v_fun(t + 0.5 * h, xm)
            return advance(t + 0.5 * h, xm, vm, 0.5 * h, depth + 1)
        return x1

    nsteps = max(1, int(math.ceil((t_end - t0) / dt - 1e-12)))
    ts = [t0]
    xs = [x0]
    x = x0
    for i in range(nsteps):
        t = ts[-1]
        t_next = min(t0 + (i + 1) * dt, t_end)
        x = advance(t, x, v_fun(t, x), t_next - t, 0)
        ts.append(t_next)
        xs.append(x)
    return np.asarray(ts), np.asarray(xs)


def boost_check(sol, law, x0, t_end, rapidities, t0=0.0, dt=0.01, tol=1e-4):
    """Covariance report: integrate-then-boost vs boost-then-integrate.

    For each rapidity the lab trajectory is boosted passively, and an
    independent integration is run in the boosted frame through the
    composed field v'(t', x') = boost(v(x' cosh a + t' sinh a)). The two
    must agree pointwise; eigen-law chords must stay sub-luminal. Returns
    a JSON-ready dict with one entry per rapidity.
    """
    base = integrate_trajectory(sol, law, x0, t_end, t0=t0, dt=dt)
    p = sol.params
    code = law_code(law)
    entries = []
    for alpha in rapidities:
        alpha = float(alpha)
        beta = math.tanh(alpha)
        ch = math.cosh(alpha)
        sh = math.sinh(alpha)
        causal = True
        try:
            boosted = boost_trajectory(base, alpha)
        except CausalityViolationError:
            causal = False
            entries.append({"rapidity": alpha, "beta": beta, "causal": False,
                            "max_chord_speed": None, "max_deviation": None,
                            "pass": False})
            continue
        chords = boosted.chord_speeds()
        max_chord = float(chords.max()) if chords.size else 0.0

        def v_prime(tp, xp):
            x_lab = xp * ch + tp * sh
            v, status = kernels.velocity(p, code, x_lab)
            if status != kernels.STATUS_OK:
                raise DegenerateError(
                    f"law {law} undefined at boosted sample x={x_lab!r}")
            return boost_velocity(v, beta)

        tp, xp = integrate_callable(v_prime, float(boosted.x[0]),
                                    float(boosted.t[0]), float(boosted.t[-1]),
                                    dt)
        ref = np.interp(tp, boosted.t, boosted.x)
        deviation = float(np.max(np.abs(xp - ref)))
        # sub-luminal chords are a law property, not a covariance one;
        # only the eigen flow promises them
        chord_ok = max_chord < 1.0 if law == "eigen" else True
        ok = causal and chord_ok and deviation < tol
        entries.append({"rapidity": alpha, "beta": beta, "causal": causal,
                        "max_chord_speed": max_chord,
                        "max_deviation": deviation, "pass": ok})
    return {"law": law, "x0": float(x0), "t0": float(t0),
            "t_end": float(t_end), "dt": float(dt), "tolerance": tol,
            "rapidities": entries,
            "pass": all(e["pass"] for e in entries)}


def lambda_weighted_seeds(sol, x_lo, x_hi, n, grid=2048):
    """n seed positions with density proportional to the flow eigenvalue.

    Deterministic quantile placement: the lambda profile is integrated on
    a dense grid and seeds sit at the (i + 1/2)/n quantiles of its CDF.
    Falls back to equal spacing where lambda is flat.
    """
    if n < 1:
        raise ValueError(f"need at least one seed, got n={n!r}")
    xs = np.linspace(float(x_lo), float(x_hi), int(grid))
    lam = np.array([kernels.lambda_at(sol.params, float(x)) for x in xs])
    lam = np.where(np.isfinite(lam) & (lam > 0.0), lam, 0.0)
    cdf = np.cumsum((lam[1:] + lam[:-1]) * 0.5 * np.diff(xs))
    if cdf.size == 0 or cdf[-1] <= 0.0:
        return np.linspace(float(x_lo), float(x_hi), n + 2)[1:-1]
    cdf = np.concatenate([[0.0], cdf]) / cdf[-1]
    targets = (np.arange(n) + 0.5) / n
    return np.interp(targets, cdf, xs)
