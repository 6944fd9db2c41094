"""Stress tensor construction, eigen flow extraction, velocity laws.

Frozen reference numbers were computed with a 50-digit mpmath evaluation
of the explicit mode functions (independent of this package's code path)
and rounded to double precision.
"""
import math

import numpy as np
import pytest

from kgflow import (
    KIND_ELECTROSTATIC,
    BarrierSpec,
    BothNullWarning,
    DegenerateError,
    MixedTensor,
    NodeError,
    eigen_analytic,
    eigen_numeric,
    emt_sample,
    evaluate_field,
    free_superposition,
    kinetic_polar,
    lambda_extrema,
    match_boundaries,
    stress_energy,
    stress_energy_polar,
    velocity_debroglie,
    velocity_eigen,
    velocity_schrodinger,
)
from conftest import draw_any_spec

K, R = 0.95, 0.7
X_REF = -0.5
# mpmath oracle at (K, R, X_REF), full-tensor normalization
A2_REF = 2.3043563252494369
THETA_REF = 3.0495659329135234
LAM_T_REF = 7.1159806156114020
V_S_REF = 0.21025394149819903
V_DB_REF = 0.15243398849718730
V_E_REF = 0.13630740155262615


def test_polar_equals_direct(rng):
    for _ in range(60):
        spec = draw_any_spec(rng)
        sol = match_boundaries(spec)
        x = float(rng.uniform(-2.0, spec.a + 2.0))
        s = evaluate_field(sol, 0.0, x)
        if s.at_node:
            continue
        T = stress_energy(s)
        P, S_kin, meff = kinetic_polar(s)
        Tp = stress_energy_polar(P, S_kin, s.absphi2, meff)
        scale = max(abs(T.T00), abs(T.T11), 1e-30)
        for attr in ("T00", "T01", "T10", "T11"):
            assert abs(getattr(T, attr) - getattr(Tp, attr)) < 1e-10 * scale


def test_plane_wave_flow():
    sol = free_superposition(0.95, 0.0)
    s = evaluate_field(sol, 0.0, 2.1)
    T = stress_energy(s)
    W_t, W_s, lam_t, lam_s = eigen_numeric(T)
    assert math.isclose(lam_t, 2.0 * s.absphi2, rel_tol=1e-12)
    assert math.isclose(W_t.x / W_t.t, 0.95 / sol.omega, rel_tol=1e-12)
    assert math.isclose(W_t.dot(W_t), 1.0, rel_tol=1e-12)
    es = emt_sample(sol, 2.1)
    assert math.isclose(es.v_e, 0.95 / sol.omega, rel_tol=1e-12)
    assert math.isclose(es.v_S, 0.95, rel_tol=1e-12)
    # P vanishes identically: theta degenerates to -inf
    assert es.theta == -math.inf


def test_evanescent_flow_at_rest():
    # pure decaying exponential: tensor exactly diagonal, flow at rest
    from kgflow import single_region

    kappa = math.sqrt((1.0 + 1.0) ** 2 - 1.38 ** 2)
    pure = single_region(1.38, 1j * kappa, 1.0, 0.0, V=1.0, kind="scalar",
                         m0=1.0)
    es = emt_sample(pure, 0.8)
    assert es.T01 == 0.0 and es.T10 == 0.0
    assert es.v_e == 0.0
    assert es.W.t == 1.0 and es.W.x == 0.0
    assert es.lambda_time > 0.0
    # wide-barrier interior: residual flux is exponentially negligible
    spec = BarrierSpec(omega=1.38, V=1.0, a=40.0, kind="scalar")
    sol = match_boundaries(spec)
    es2 = emt_sample(sol, 6.0)
    assert abs(es2.T01) < 1e-30 * abs(es2.T00)
    assert abs(es2.v_e) < 1e-12


def test_reference_point_values():
    sol = free_superposition(K, R)
    es = emt_sample(sol, X_REF)
    s = evaluate_field(sol, 0.0, X_REF)
    assert math.isclose(s.absphi2, A2_REF, rel_tol=1e-12)
    assert math.isclose(es.theta, THETA_REF, rel_tol=1e-12)
    assert math.isclose(es.lambda_time, LAM_T_REF, rel_tol=1e-12)
    assert math.isclose(es.v_S, V_S_REF, rel_tol=1e-12)
    assert math.isclose(es.v_dB, V_DB_REF, rel_tol=1e-12)
    assert math.isclose(es.v_e, V_E_REF, rel_tol=1e-12)
    # this point has P.S < 0: the time-like branch is S - e^{-theta} P,
    # which no sign convention can restore to the bare "+" candidate
    P, S_kin, _ = kinetic_polar(s)
    assert P.dot(S_kin) < 0.0


def test_analytic_equals_numeric(rng):
    sol = free_superposition(K, R)
    checked = 0
    for x in np.linspace(-4.0, 4.0, 41):
        s = evaluate_field(sol, 0.0, float(x))
        P, S_kin, meff = kinetic_polar(s)
        PS = P.dot(S_kin)
        scale = math.hypot(P.t, P.x) * math.hypot(S_kin.t, S_kin.x)
        if abs(PS) < 1e-9 * (scale + meff * meff):
            continue  # analytic route is degenerate at extrema
        theta, W_t, W_s, lam_t, lam_s = eigen_analytic(P, S_kin, meff, s.absphi2)
        W_tn, W_sn, lam_tn, lam_sn = eigen_numeric(stress_energy(s))
        assert abs(lam_t - lam_tn) < 1e-10 * max(1.0, abs(lam_tn))
        assert abs(lam_s - lam_sn) < 1e-10 * max(1.0, abs(lam_sn))
        assert abs(W_t.t - W_tn.t) < 1e-10 and abs(W_t.x - W_tn.x) < 1e-10
        assert abs(W_s.t - W_sn.t) < 1e-10 and abs(W_s.x - W_sn.x) < 1e-10
        checked += 1
    assert checked > 20


def test_eigen_structure(rng):
    for _ in range(100):
        spec = draw_any_spec(rng)
        sol = match_boundaries(spec)
        x = float(rng.uniform(-2.0, spec.a + 2.0))
        s = evaluate_field(sol, 0.0, x)
        W_t, W_s, lam_t, lam_s = eigen_numeric(stress_energy(s))
        assert abs(W_t.dot(W_s)) < 1e-10
        assert W_t.is_timelike() and not W_s.is_timelike()
        assert W_t.t > 0.0
        # time-like direction carries the larger eigenvalue
        assert lam_t >= lam_s - 1e-12 * abs(lam_t)
        assert lam_t > 0.0


def test_velocity_extrema_formulas():
    # density minima: v_S = k(1+R)/(1-R), v_dB scales by 1/omega
    k, r = 0.1, 0.99
    sol = free_superposition(k, r)
    omega = sol.omega
    xmin = math.pi / (2 * k)
    s = evaluate_field(sol, 0.0, xmin)
    assert math.isclose(velocity_schrodinger(sol, xmin), k * (1 + r) / (1 - r),
                        rel_tol=1e-10)
    assert math.isclose(velocity_schrodinger(sol, xmin), 19.9, rel_tol=1e-12)
    assert math.isclose(velocity_debroglie(s), 19.801240085178784, rel_tol=1e-12)
    assert math.isclose(velocity_eigen(s), 0.050501887543321057, rel_tol=1e-11)
    # density maxima: v_S = k(1-R)/(1+R)
    sol2 = free_superposition(K, R)
    s2 = evaluate_field(sol2, 0.0, 0.0)
    assert math.isclose(velocity_schrodinger(sol2, 0.0), K * (1 - R) / (1 + R),
                        rel_tol=1e-12)
    assert math.isclose(velocity_eigen(s2), 0.12154402269082819, rel_tol=1e-11)


def test_lambda_extrema_companions():
    # half-normalized closed forms; exact at density maxima
    lam_max, lam_min = lambda_extrema(K, R)
    assert math.isclose(lam_max, 4.1535, rel_tol=1e-13)
    assert math.isclose(lam_min, 1.3535, rel_tol=1e-13)
    sol = free_superposition(K, R)
    es = emt_sample(sol, 0.0)
    assert math.isclose(es.lambda_time / 2.0, lam_max, rel_tol=1e-12)


def test_lambda_at_density_minima():
    # at minima the half eigenvalue is 2 k^2 R whenever S.S < 0 there
    for k, r, lam_half in ((0.95, 0.7, 2 * 0.95 ** 2 * 0.7),
                           (0.1, 0.99, 2 * 0.1 ** 2 * 0.99)):
        sol = free_superposition(k, r)
        xmin = math.pi / (2 * k)
        es = emt_sample(sol, xmin)
        assert math.isclose(es.lambda_time / 2.0, lam_half, rel_tol=1e-10)


def test_eigen_velocity_vanishes_at_strong_reflection():
    vals = []
    for r in (0.9, 0.99, 0.999):
        sol = free_superposition(K, r)
        xmin = math.pi / (2 * K)
        vals.append(abs(velocity_eigen(evaluate_field(sol, 0.0, xmin))))
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 5e-3


def test_velocity_laws_node_behavior():
    sol = free_superposition(0.95, 1.0)
    xnode = math.pi / (2 * 0.95)
    with pytest.raises(NodeError):
        velocity_schrodinger(sol, xnode)
    # eigenvector flow stays defined through the node
    es = emt_sample(sol, xnode)
    assert math.isnan(es.v_S) and math.isnan(es.v_dB)
    assert es.v_e == 0.0
    assert es.lambda_time > 0.0


def test_debroglie_kinetic_frequency_in_barrier():
    # electrostatic coupling shifts the guiding frequency to omega - V
    spec = BarrierSpec.from_momentum(0.95, V=4.47, a=12.0,
                                     kind=KIND_ELECTROSTATIC)
    sol = match_boundaries(spec)
    s = evaluate_field(sol, 0.0, 6.0)
    if not s.at_node:
        P, S_kin, _ = kinetic_polar(s)
        expect = S_kin.x / (sol.omega - 4.47)
        assert math.isclose(velocity_debroglie(s), expect, rel_tol=1e-12)
        assert velocity_debroglie(s) < 0.0  # counter-directed in Klein zone


def test_polar_identity_inside_klein_barrier():
    spec = BarrierSpec.from_momentum(0.95, V=4.47, a=12.0,
                                     kind=KIND_ELECTROSTATIC)
    sol = match_boundaries(spec)
    s = evaluate_field(sol, 0.0, 6.3)
    T = stress_energy(s)
    P, S_kin, meff = kinetic_polar(s)
    Tp = stress_energy_polar(P, S_kin, s.absphi2, meff)
    scale = max(abs(T.T00), abs(T.T11))
    for attr in ("T00", "T01", "T10", "T11"):
        assert abs(getattr(T, attr) - getattr(Tp, attr)) < 1e-10 * scale


def test_degenerate_tensor_warnings():
    null_T = MixedTensor(1.0, -1.0, 1.0, -1.0)
    with pytest.warns(BothNullWarning):
        W_t, W_s, lam_t, lam_s = eigen_numeric(null_T)
    assert W_t is None and W_s is None
    rotation_like = MixedTensor(0.0, 1.0, -1.0, 0.0)
    with pytest.raises(DegenerateError):
        eigen_numeric(rotation_like)
