"""Compiled and pure kernel twins must agree on every exported operation."""
import math
import subprocess
import sys

import numpy as np
import pytest

import kgflow._kernels_py as kp
from kgflow import BarrierSpec, free_superposition, match_boundaries

kc = pytest.importorskip("kgflow._kernels",
                         reason="compiled kernels not built")

# one solution per regime, plus a standing wave with true nodes
SOLUTIONS = [
    free_superposition(0.95, 0.7),
    free_superposition(0.95, 1.0),
    match_boundaries(BarrierSpec(omega=1.38, V=0.36, a=12.0,
                                 kind="electrostatic")),
    match_boundaries(BarrierSpec(omega=1.38, V=1.0, a=6.0, kind="scalar")),
    match_boundaries(BarrierSpec.from_momentum(0.95, V=4.47, a=12.0,
                                               kind="electrostatic")),
]
XS = np.linspace(-7.0, 19.0, 157)


def test_layout_constants_match():
    assert kc.PARAMS_LEN == kp.PARAMS_LEN == 34
    assert kc.LAYOUT_VERSION == kp.LAYOUT_VERSION
    for name in ("KIND_SCALAR", "KIND_ELECTROSTATIC", "LAW_SCHRODINGER",
                 "LAW_DEBROGLIE", "LAW_EIGEN", "STATUS_OK", "STATUS_NODE",
                 "STATUS_BOTH_NULL", "STATUS_COMPLEX_PAIR", "NODE_EPS",
                 "HALVE_FRACTION", "MAX_HALVE_DEPTH", "STAGNATION_EPS"):
        assert getattr(kc, name) == getattr(kp, name), name
    assert kc.backend_name() == "cython"
    assert kp.backend_name() == "python"


def _close(a, b, tol=1e-12):
    if isinstance(a, complex) or isinstance(b, complex):
        return abs(a - b) <= tol * max(1.0, abs(b))
    if math.isnan(b):
        return math.isnan(a)
    return abs(a - b) <= tol * max(1.0, abs(b))


def test_pointwise_twins():
    for sol in SOLUTIONS:
        p = sol.params
        for x in XS:
            psi_c, dpsi_c, r_c = kc.psi_at(p, x)
            psi_p, dpsi_p, r_p = kp.psi_at(p, x)
            assert r_c == r_p
            assert _close(psi_c, psi_p) and _close(dpsi_c, dpsi_p)
            assert _close(kc.abs2_at(p, x), kp.abs2_at(p, x))
            assert _close(kc.current_at(p, x), kp.current_at(p, x))
            assert _close(kc.lambda_at(p, x), kp.lambda_at(p, x))
            gc, gp = kc.grad_at(p, x), kp.grad_at(p, x)
            assert gc[2:] == gp[2:]
            assert _close(gc[0], gp[0]) and _close(gc[1], gp[1])
            for fn in ("vS_at", "vdB_at", "vE_at"):
                vc, sc = getattr(kc, fn)(p, x)
                vp, sp = getattr(kp, fn)(p, x)
                assert sc == sp, (fn, x)
                assert _close(vc, vp), (fn, x)
            ec, ep = kc.emt_at(p, x), kp.emt_at(p, x)
            scale = max(abs(v) for v in ep) or 1.0
            assert all(abs(a - b) < 1e-12 * scale for a, b in zip(ec, ep))


def test_eig2_twin(rng):
    for _ in range(300):
        T00, T01, T11 = rng.normal(size=3) * 10.0
        T10 = -T01  # physical antisymmetry of the mixed off-diagonals
        out_c = kc.eig2(T00, T01, T10, T11)
        out_p = kp.eig2(T00, T01, T10, T11)
        assert out_c[6] == out_p[6]
        for a, b in zip(out_c[:6], out_p[:6]):
            assert _close(a, b, 1e-11)


def test_profile_grid_twin():
    for sol in SOLUTIONS:
        p = sol.params
        cols_c = kc.profile_grid(p, XS)
        cols_p = kp.profile_grid(p, XS)
        assert np.array_equal(cols_c[5], cols_p[5])
        for A, B in zip(cols_c[:5], cols_p[:5]):
            assert np.array_equal(np.isnan(A), np.isnan(B))
            m = ~np.isnan(B)
            assert np.allclose(A[m], B[m], rtol=1e-12, atol=1e-12)


def test_direction_samples_twin():
    sol = SOLUTIONS[0]
    p = sol.params
    for law in (kp.LAW_SCHRODINGER, kp.LAW_DEBROGLIE, kp.LAW_EIGEN):
        v_c, ok_c = kc.direction_samples(p, law, XS)
        v_p, ok_p = kp.direction_samples(p, law, XS)
        assert np.array_equal(ok_c, ok_p)
        m = ok_p == 1
        assert np.allclose(v_c[m], v_p[m], rtol=1e-12, atol=1e-14)


def test_rk4_twin():
    for sol, law, x0, t_end in ((SOLUTIONS[0], kp.LAW_EIGEN, -0.5, 5.0),
                                (SOLUTIONS[0], kp.LAW_DEBROGLIE, -2.0, 3.0),
                                (SOLUTIONS[2], kp.LAW_EIGEN, -4.0, 4.0)):
        p = sol.params
        ts_c, xs_c, st_c, h_c, g_c = kc.rk4_trajectory(p, law, x0, 0.0,
                                                       t_end, 0.01)
        ts_p, xs_p, st_p, h_p, g_p = kp.rk4_trajectory(p, law, x0, 0.0,
                                                       t_end, 0.01)
        assert (st_c, h_c, g_c) == (st_p, h_p, g_p)
        assert np.array_equal(ts_c, ts_p)
        assert np.max(np.abs(xs_c - xs_p)) < 1e-10


def test_backend_env_override():
    code = ("import kgflow; print(kgflow.backend_name())")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env={"PATH": "/usr/bin:/bin",
                                         "KGFLOW_FORCE_PY": "1"})
    assert out.stdout.strip() == "python"
    out2 = subprocess.run([sys.executable, "-c", code], capture_output=True,
                          text=True, env={"PATH": "/usr/bin:/bin"})
    assert out2.stdout.strip() == "cython"
