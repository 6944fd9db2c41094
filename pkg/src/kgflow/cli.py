"""Command-line front end.

Subcommands: solve, scan, field, traj, boost-check, find-v. Flags mirror
the library call signatures; a JSON config file may supply any flag by its
destination name, with command-line flags taking precedence and unknown
config keys rejected. `--k` and `--omega` are mutually exclusive (omega is
derived as sqrt(k^2 + m^2) when the momentum is given); `--kind` must be
stated whenever a positive potential is involved.

Exit codes: 0 success, 2 configuration/validation error, 3 numeric or
solver error, 4 covariance regression failure.
"""
import argparse
import math
import sys

import numpy as np

from . import io
from .backend import backend_name, kernels
from .barrier import KINDS, BarrierSpec
from .errors import (
    CausalityViolationError,
    KGFlowError,
    SubThresholdError,
)
from .scattering import (
    closed_form_RT,
    find_potential_for_reflection,
    free_superposition,
    match_boundaries,
    scan_transmission,
)
from .trajectories import LAWS, boost_check, integrate_bundle, lambda_weighted_seeds

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_COVARIANCE = 4


class ConfigError(Exception):
    """Invalid flag/config combination; maps to exit code 2."""


def _add_mode_flags(p, with_barrier=True):
    p.add_argument("--k", type=float, default=None,
                   help="incident momentum (mutually exclusive with --omega)")
    p.add_argument("--omega", type=float, default=None,
                   help="mode frequency (mutually exclusive with --k)")
    p.add_argument("--m", type=float, default=None,
                   help="rest mass (default 1)")
    if with_barrier:
        p.add_argument("--V", type=float, default=None,
                       help="barrier height (default 0)")
        p.add_argument("--a", type=float, default=None,
                       help="barrier width")
        p.add_argument("--kind", default=None,
                       help="potential coupling: scalar or electrostatic "
                            "(required when V > 0)")
    p.add_argument("--config", default=None,
                   help="JSON file supplying any flag by name; flags override")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="kgflow",
        description="Square-barrier scattering of the 1+1D Klein-Gordon "
                    "field and causal trajectories under three velocity laws.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="match boundaries, report amplitudes")
    _add_mode_flags(p)
    p.add_argument("--out", default=None, help="also write the JSON report here")

    p = sub.add_parser("scan", help="|T|^2 over a (V, a) grid to CSV")
    _add_mode_flags(p, with_barrier=False)
    p.add_argument("--kind", default=None)
    p.add_argument("--V-min", dest="v_min", type=float, default=None)
    p.add_argument("--V-max", dest="v_max", type=float, default=None)
    p.add_argument("--V-steps", dest="v_steps", type=int, default=None)
    p.add_argument("--a-min", dest="a_min", type=float, default=None)
    p.add_argument("--a-max", dest="a_max", type=float, default=None)
    p.add_argument("--a-steps", dest="a_steps", type=int, default=None)
    p.add_argument("--out", default=None, required=False)

    p = sub.add_parser("field", help="profile x, |phi|^2, lambda, velocities")
    _add_mode_flags(p)
    p.add_argument("--x-min", dest="x_min", type=float, default=None)
    p.add_argument("--x-max", dest="x_max", type=float, default=None)
    p.add_argument("--x-steps", dest="x_steps", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("traj", help="integrate a trajectory bundle to CSV")
    _add_mode_flags(p)
    p.add_argument("--law", default=None, help="|".join(LAWS))
    p.add_argument("--x0", type=float, nargs="+", default=None,
                   help="explicit seed positions")
    p.add_argument("--x0-min", dest="x0_min", type=float, default=None)
    p.add_argument("--x0-max", dest="x0_max", type=float, default=None)
    p.add_argument("--n-traj", dest="n_traj", type=int, default=None)
    p.add_argument("--seed-weighting", dest="seed_weighting", default=None,
                   help="equal (default) or lambda")
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("boost-check",
                       help="world-line covariance report under boosts")
    _add_mode_flags(p)
    p.add_argument("--law", default=None)
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--rapidities", type=float, nargs="+", default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("find-v",
                       help="invert |R|(V) for a target reflected amplitude")
    _add_mode_flags(p, with_barrier=False)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--kind", default=None)
    p.add_argument("--target", type=float, default=None,
                   help="target |R| in (0, 1)")
    p.add_argument("--bracket", type=float, nargs=2, default=None,
                   help="V bracket straddling the target")
    p.add_argument("--out", default=None)
    return ap


def _merge_config(args):
    if getattr(args, "config", None) is None:
        return
    cfg = io.load_json(args.config)
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {args.config!r} must be a JSON object")
    allowed = set(vars(args)) - {"cmd", "config"}
    for key, value in sorted(cfg.items()):
        if key not in allowed:
            raise ConfigError(
                f"unknown config key {key!r}; allowed: {sorted(allowed)}")
        if getattr(args, key) is None:
            setattr(args, key, value)


def _resolve_mode(args):
    """(omega, m0) from --k/--omega/--m with mutual exclusion enforced."""
    m0 = 1.0 if args.m is None else float(args.m)
    if m0 <= 0.0:
        raise ConfigError(f"m: rest mass must be positive, got {m0}")
    if args.k is not None and args.omega is not None:
        raise ConfigError("k/omega: give exactly one of --k and --omega")
    if args.k is not None:
        k = float(args.k)
        if k <= 0.0:
            raise ConfigError(f"k: incident momentum must be positive, got {k}")
        return math.sqrt(k * k + m0 * m0), m0
    if args.omega is not None:
        return float(args.omega), m0
    raise ConfigError("k/omega: one of --k or --omega is required")


def _resolve_kind(args, v_positive):
    kind = getattr(args, "kind", None)
    if kind is None:
        if v_positive:
            raise ConfigError("kind: required when the potential is positive")
        return "scalar"
    if kind not in KINDS:
        raise ConfigError(f"kind: expected one of {KINDS}, got {kind!r}")
    return kind


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "--" + name.replace("_", "-")
            raise ConfigError(f"{name}: missing required option {flag}")


def _solution(args, omega, m0):
    """Barrier solution for V > 0, free plane wave for V = 0."""
    V = 0.0 if getattr(args, "V", None) is None else float(args.V)
    kind = _resolve_kind(args, V > 0.0)
    if V > 0.0:
        _require(args, "a")
        spec = BarrierSpec(omega=omega, V=V, a=float(args.a), kind=kind, m0=m0)
        return match_boundaries(spec)
    if omega <= m0:
        raise SubThresholdError(
            f"omega={omega} must exceed the rest mass m0={m0}")
    return free_superposition(math.sqrt(omega * omega - m0 * m0), 0.0, m0=m0)


def cmd_solve(args):
    omega, m0 = _resolve_mode(args)
    V = 0.0 if args.V is None else float(args.V)
    kind = _resolve_kind(args, V > 0.0)
    _require(args, "a")
    spec = BarrierSpec(omega=omega, V=V, a=float(args.a), kind=kind, m0=m0)
    sol = match_boundaries(spec)
    refl2, trans2 = closed_form_RT(spec)
    report = {
        "omega": spec.omega, "m0": spec.m0, "V": spec.V, "a": spec.a,
        "kind": spec.kind, "regime": spec.regime,
        "k1": spec.k1, "k2": complex(spec.k2),
        "R": complex(sol.R), "G": complex(sol.G), "H": complex(sol.H),
        "J": complex(sol.J),
        "refl2": sol.refl2, "trans2": sol.trans2,
        "closed_form": {"refl2": refl2, "trans2": trans2},
        "unitarity_residual": sol.unitarity_residual,
        "backend": backend_name(),
    }
    text = io.dump_json(report, args.out)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_scan(args):
    omega, m0 = _resolve_mode(args)
    _require(args, "v_min", "v_max", "v_steps", "a_min", "a_max", "a_steps",
             "out")
    if args.v_steps < 0 or args.a_steps < 0:
        raise ConfigError("V-steps/a-steps: step counts must be nonnegative")
    kind = _resolve_kind(args, float(args.v_max) > 0.0 or float(args.v_min) > 0.0)
    Vs = np.linspace(float(args.v_min), float(args.v_max), int(args.v_steps))
    As = np.linspace(float(args.a_min), float(args.a_max), int(args.a_steps))
    grid = scan_transmission(omega, Vs, As, kind, m0=m0)
    io.write_scan_csv(grid, args.out)
    if grid.n_failed:
        sys.stderr.write(f"warning: {grid.n_failed} cells failed (NaN)\n")
    return EXIT_OK


def cmd_field(args):
    omega, m0 = _resolve_mode(args)
    _require(args, "x_min", "x_max", "x_steps", "out")
    sol = _solution(args, omega, m0)
    xs = np.linspace(float(args.x_min), float(args.x_max), int(args.x_steps))
    a2, lam, v_S, v_dB, v_e, _ = kernels.profile_grid(sol.params, xs)
    io.write_profile_csv(args.out, xs, a2, lam, v_S, v_dB, v_e)
    return EXIT_OK


def cmd_traj(args):
    omega, m0 = _resolve_mode(args)
    _require(args, "law", "t_end", "out")
    if args.law not in LAWS:
        raise ConfigError(f"law: expected one of {LAWS}, got {args.law!r}")
    sol = _solution(args, omega, m0)
    weighting = args.seed_weighting or "equal"
    if args.x0 is not None:
        seeds = [float(s) for s in np.atleast_1d(args.x0)]
    else:
        _require(args, "x0_min", "x0_max", "n_traj")
        if args.n_traj < 1:
            raise ConfigError(f"n_traj: need at least one seed, got {args.n_traj}")
        if weighting == "equal":
            seeds = np.linspace(float(args.x0_min), float(args.x0_max),
                                int(args.n_traj))
        elif weighting == "lambda":
            seeds = lambda_weighted_seeds(sol, float(args.x0_min),
                                          float(args.x0_max), int(args.n_traj))
        else:
            raise ConfigError(
                f"seed_weighting: expected equal or lambda, got {weighting!r}")
    t0 = 0.0 if args.t0 is None else float(args.t0)
    dt = 0.01 if args.dt is None else float(args.dt)
    bundle = integrate_bundle(sol, args.law, seeds, float(args.t_end),
                              t0=t0, dt=dt)
    io.write_traj_csv(args.out, bundle)
    io.dump_json(io.traj_summary(bundle, args.law),
                 args.out + ".summary.json")
    return EXIT_OK


def cmd_boost_check(args):
    omega, m0 = _resolve_mode(args)
    _require(args, "x0", "t_end")
    law = args.law or "eigen"
    if law not in LAWS:
        raise ConfigError(f"law: expected one of {LAWS}, got {law!r}")
    sol = _solution(args, omega, m0)
    rapidities = args.rapidities if args.rapidities is not None else [0.1, 0.3, 1.0]
    dt = 0.01 if args.dt is None else float(args.dt)
    tol = 1e-4 if args.tol is None else float(args.tol)
    report = boost_check(sol, law, float(args.x0), float(args.t_end),
                         rapidities, dt=dt, tol=tol)
    text = io.dump_json(report, args.out)
    sys.stdout.write(text)
    return EXIT_OK if report["pass"] else EXIT_COVARIANCE


def cmd_find_v(args):
    omega, m0 = _resolve_mode(args)
    _require(args, "a", "target", "bracket")
    kind = _resolve_kind(args, True)
    lo, hi = (float(v) for v in args.bracket)
    V = find_potential_for_reflection(omega, float(args.a), kind,
                                      float(args.target), (lo, hi), m0=m0)
    spec = BarrierSpec(omega=omega, V=V, a=float(args.a), kind=kind, m0=m0)
    refl2, trans2 = closed_form_RT(spec)
    report = {"V": V, "target_absR": float(args.target),
              "achieved_absR": math.sqrt(refl2), "refl2": refl2,
              "trans2": trans2, "kind": kind, "omega": omega, "m0": m0,
              "a": float(args.a), "regime": spec.regime}
    text = io.dump_json(report, args.out)
    sys.stdout.write(text)
    return EXIT_OK


_HANDLERS = {
    "solve": cmd_solve,
    "scan": cmd_scan,
    "field": cmd_field,
    "traj": cmd_traj,
    "boost-check": cmd_boost_check,
    "find-v": cmd_find_v,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return _HANDLERS[args.cmd](args)
    except (ConfigError, SubThresholdError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except CausalityViolationError as exc:
        sys.stderr.write(f"covariance failure: {exc}\n")
        return EXIT_COVARIANCE
    except KGFlowError as exc:
        sys.stderr.write(f"solver error: {exc}\n")
        return EXIT_SOLVER
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
