"""Stress tensor of the mode and its time-like flow decomposition.

Conventions, fixed here once for the whole package:

* metric signature (+, -); FourVector.dot contracts two same-variance
  vectors with the metric between them;
* the mixed tensor T^mu_nu acts on contravariant vectors, matrix rows are
  mu, columns nu, so eigenvectors W satisfy T W = lambda W with
  W = (W^t, W^x) and the flow three-velocity is W^x / W^t;
* couplings: a scalar potential shifts the mass (m0 -> m0 + V), an
  electrostatic potential shifts the kinetic frequency (omega -> omega - V
  through D_t phi = (d_t + iV) phi).

Two independent eigen routes are kept on purpose. The canonical one is
numeric: build T directly from bilinears in phi and d phi (total, finite
at nodes) and diagonalize. The analytic one goes through the polar data
(P_mu, S_mu) and the hyperbolic mixing parameter theta; it fails exactly
where the polar decomposition does (nodes, plane-wave degeneracy) and is
used to cross-validate the numeric path everywhere else.

The time-like eigenvalue lambda is reported in the tensor normalization,
where a unit plane wave has lambda = 2 m0^2. Closed-form interference
extrema (lambda_extrema) use the half normalization, plane wave
lambda = m0^2; the factor 2 bridges the two and is asserted in tests.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .barrier import KIND_ELECTROSTATIC
from .errors import BothNullWarning, DegenerateError, NodeError
from .field import NODE_EPS, evaluate_field, polar_gradients
from .fourvec import FourVector

DEGENERATE_TOL = 1e-12  # |P.S| below tol * (|P||S| + m0^2) is degenerate
NULL_TOL = 1e-12        # |W.W| below tol * |W|^2 counts as null


@dataclass(frozen=True)
class MixedTensor:
    """T^mu_nu components at a point."""

    T00: float
    T01: float
    T10: float
    T11: float

    def as_matrix(self):
        return np.array([[self.T00, self.T01], [self.T10, self.T11]])


@dataclass(frozen=True)
class EmtSample:
    """Full flow data at one point: tensor, eigen system, three velocities.

    theta is NaN at nodes, +-inf at plane-wave-like degeneracies. W is the
    unit future-pointing time-like eigenvector, None in the measure-zero
    both-null case. v_S and v_dB are NaN at nodes.
    """

    t: float
    x: float
    T00: float
    T01: float
    T10: float
    T11: float
    theta: float
    lambda_time: float
    lambda_space: float
    W: FourVector
    v_S: float
    v_dB: float
    v_e: float


def kinetic_polar(sample, V_local=None):
    """(P_mu, kinetic S_mu, m_eff) with the coupling substitution applied.

    Electrostatic: S_t -> S_t + V (so -S_t becomes omega - V), mass kept.
    Scalar: S_mu kept, mass m0 -> m0 + V. NodeError at nodes.
    """
    P_mu, S_mu = polar_gradients(sample)
    V = sample.V_local if V_local is None else V_local
    if sample.kind == KIND_ELECTROSTATIC:
        return P_mu, FourVector(S_mu.t + V, S_mu.x), sample.m0
    return P_mu, S_mu, sample.m0 + V


def stress_energy(sample, m0=None, V_local=None, kind=None):
    """Mixed tensor from bilinears in phi and its gradient. Total.

    T^mu_nu = 2 Re((D^mu phi)* D_nu phi)
              + delta^mu_nu [m_eff^2 |phi|^2 - (D_alpha phi)*(D^alpha phi)]

    finite at nodes because nothing divides by |phi|.
    """
    if m0 is None:
        m0 = sample.m0
    if V_local is None:
        V_local = sample.V_local
    if kind is None:
        kind = sample.kind
    phi = sample.phi
    if kind == KIND_ELECTROSTATIC:
        m_eff = m0
        Dt = sample.dphi.t + 1j * V_local * phi
    else:
        m_eff = m0 + V_local
        Dt = sample.dphi.t
    Dx = sample.dphi.x
    a2 = sample.absphi2
    at2 = abs(Dt) ** 2
    ax2 = abs(Dx) ** 2
    L = m_eff * m_eff * a2 - (at2 - ax2)
    T01 = 2.0 * (Dt.conjugate() * Dx).real
    return MixedTensor(T00=L + 2.0 * at2, T01=T01, T10=-T01, T11=L - 2.0 * ax2)


def stress_energy_polar(P_mu, S_mu, absphi2, m_eff):
    """Mixed tensor from kinetic polar data; equals stress_energy off nodes.

    T^mu_nu = |phi|^2 {2 (P^mu P_nu + S^mu S_nu)
                       + delta^mu_nu [m_eff^2 - P.P - S.S]}

    The caller supplies the kinetic S_mu and m_eff (see kinetic_polar);
    the identity with the bilinear form is exercised in tests.
    """
    C = m_eff * m_eff - P_mu.dot(P_mu) - S_mu.dot(S_mu)
    T00 = absphi2 * (2.0 * (P_mu.t ** 2 + S_mu.t ** 2) + C)
    T01 = absphi2 * 2.0 * (P_mu.t * P_mu.x + S_mu.t * S_mu.x)
    T11 = absphi2 * (-2.0 * (P_mu.x ** 2 + S_mu.x ** 2) + C)
    return MixedTensor(T00=T00, T01=T01, T10=-T01, T11=T11)


def _classify(vals, vecs):
    """Split a real 2x2 eigen system into (time-like, space-like) parts."""
    lam_t = lam_s = None
    W_t = W_s = None
    for lam, v in zip(vals, vecs):
        v0, v1 = float(v[0]), float(v[1])
        size = v0 * v0 + v1 * v1
        if size == 0.0:
            continue
        n = v0 * v0 - v1 * v1
        if n > NULL_TOL * size:
            s = 1.0 / math.sqrt(n)
            if v0 < 0.0:
                s = -s
            W_t = FourVector(v0 * s, v1 * s)
            lam_t = lam
        elif n < -NULL_TOL * size:
            s = 1.0 / math.sqrt(-n)
            if v1 < 0.0 or (v1 == 0.0 and v0 < 0.0):
                s = -s
            W_s = FourVector(v0 * s, v1 * s)
            lam_s = lam
    return lam_t, lam_s, W_t, W_s


def eigen_numeric(T):
    """Eigen-decompose a mixed tensor; classify by Minkowski norm.

    Returns (W_time, W_space, lambda_time, lambda_space) with W_time unit
    and future-pointing, W_space normalized to W.W = -1. Emits
    BothNullWarning and returns W entries None in the measure-zero case
    where both eigenvectors are null (then lambda_time >= lambda_space is
    the ordering).
    """
    M = T.as_matrix()
    vals, vecs = np.linalg.eig(M)
    scale = float(np.abs(M).max()) or 1.0
    if np.abs(vals.imag).max() > 1e-9 * scale:
        raise DegenerateError(
            f"mixed tensor produced a complex eigenpair: {vals!r}")
    vals = vals.real
    vecs = vecs.real
    lam_t, lam_s, W_t, W_s = _classify(vals, [vecs[:, 0], vecs[:, 1]])
    if W_t is None or W_s is None:
        warnings.warn("both eigenvectors are null; flow direction undefined",
                      BothNullWarning)
        lo, hi = sorted(vals)
        return None, None, hi, lo
    return W_t, W_s, lam_t, lam_s


def eigen_analytic(P_mu, S_mu, m0_eff, absphi2):
    """Eigen system from the polar data via the hyperbolic parameter theta.

    sinh(theta) = (P.P - S.S) / (2 P.S); the unnormalised eigenvectors are
    S^mu + e^theta P^mu and S^mu - e^{-theta} P^mu, with eigenvalues

        lambda = |phi|^2 [m_eff^2 +- sqrt((P.P - S.S)^2 + 4 (P.S)^2)].

    Which of the two carries the + branch follows the sign of P.S; the
    time-like one is found by its Minkowski norm, not assumed. Returns
    (theta, W_time, W_space, lambda_time, lambda_space). Raises
    DegenerateError when P.S ~ 0 (plane-wave-like points) where theta is
    undefined; callers fall back to eigen_numeric there.
    """
    PP = P_mu.dot(P_mu)
    SS = S_mu.dot(S_mu)
    PS = P_mu.dot(S_mu)
    p_size = math.hypot(P_mu.t, P_mu.x)
    s_size = math.hypot(S_mu.t, S_mu.x)
    if abs(PS) < DEGENERATE_TOL * (p_size * s_size + m0_eff * m0_eff):
        raise DegenerateError(
            f"P.S={PS!r} is degenerate relative to |P||S|={p_size * s_size!r}")
    s = (PP - SS) / (2.0 * PS)
    h = math.hypot(1.0, s)
    if s >= 0.0:
        cA = s + h          # e^theta
        cB = -1.0 / cA      # -e^{-theta}, root product is -1
    else:
        cB = s - h
        cA = -1.0 / cB
    theta = math.asinh(s)

    P_up = FourVector(P_mu.t, -P_mu.x)
    S_up = FourVector(S_mu.t, -S_mu.x)
    base = m0_eff * m0_eff + SS - PP
    cands = []
    for c in (cA, cB):
        W = S_up.plus(P_up.scaled(c))
        lam = absphi2 * (base + 2.0 * c * PS)
        cands.append((lam, (W.t, W.x)))
    lam_t, lam_s, W_t, W_s = _classify([c[0] for c in cands],
                                       [c[1] for c in cands])
    if W_t is None or W_s is None:
        raise DegenerateError(
            "eigenvector candidates did not split into time-like and "
            f"space-like: norms degenerate at P.S={PS!r}")
    return theta, W_t, W_s, lam_t, lam_s


def velocity_schrodinger(sol, x):
    """v_S = Im(psi'/psi); the nonrelativistic-form guidance velocity."""
    psi = sol.psi(x)
    if abs(psi) ** 2 < NODE_EPS * sol.amp_scale:
        raise NodeError(f"velocity undefined at node x={x!r}")
    return (sol.dpsi(x) / psi).imag


def velocity_debroglie(sample, omega=None, V_local=None):
    """v_dB = S_x / (omega - V); unbounded near nodes as |R| -> 1.

    V here is the electrostatic potential entering the kinetic phase; by
    default it is taken from the sample for electrostatic problems and 0
    for scalar ones (scalar coupling shifts the mass, not the phase).
    """
    _, S_mu = polar_gradients(sample)
    if omega is None:
        omega = sample.omega
    if V_local is None:
        V_local = sample.V_local if sample.kind == KIND_ELECTROSTATIC else 0.0
    return S_mu.x / (omega - V_local)


def velocity_eigen(sample, V_local=None):
    """v_e = W^x / W^t of the time-like flow; |v_e| < 1 wherever defined.

    Canonical numeric path: total, including nodes and plane-wave points.
    Returns NaN only in the flagged both-null case.
    """
    T = stress_energy(sample, V_local=V_local)
    W_t, _, _, _ = eigen_numeric(T)
    if W_t is None:
        return math.nan
    return W_t.x / W_t.t


def lambda_extrema(k1, absR, m0=1.0):
    """(lambda_max, lambda_min) of the interference pattern, half norm.

    Closed forms m0^2 (1 +- |R|)^2 + 2 k1^2 |R| for the flow eigenvalue at
    the density maxima/minima of e^{ikx} + R e^{-ikx}, in the
    normalization where a plane wave has lambda = m0^2 (half the tensor
    eigenvalue). The maxima value is exact; the minima companion is exact
    at |R| in {0, 1} and in particular stays positive at |R| = 1, where
    2 k1^2 bounds the eigenvalue away from zero even though |phi|^2
    touches zero.
    """
    lam_max = m0 * m0 * (1.0 + absR) ** 2 + 2.0 * k1 * k1 * absR
    lam_min = m0 * m0 * (1.0 - absR) ** 2 + 2.0 * k1 * k1 * absR
    return lam_max, lam_min


def emt_sample(sol, x, t=0.0):
    """Assemble the full EmtSample at (t, x) for a solution."""
    fs = evaluate_field(sol, t, x)
    T = stress_energy(fs)
    W_t, W_s, lam_t, lam_s = eigen_numeric(T)
    if fs.at_node:
        theta = math.nan
        v_S = math.nan
        v_dB = math.nan
    else:
        P_mu, S_kin, _ = kinetic_polar(fs)
        PS = P_mu.dot(S_kin)
        num = P_mu.dot(P_mu) - S_kin.dot(S_kin)
        if PS != 0.0:
            theta = math.asinh(num / (2.0 * PS))
        elif num != 0.0:
            theta = math.copysign(math.inf, num)
        else:
            theta = math.nan
        v_S = (sol.dpsi(x) / sol.psi(x)).imag
        v_dB = velocity_debroglie(fs)
    v_e = W_t.x / W_t.t if W_t is not None else math.nan
    return EmtSample(t=t, x=x, T00=T.T00, T01=T.T01, T10=T.T10, T11=T.T11,
                     theta=theta, lambda_time=lam_t, lambda_space=lam_s,
                     W=W_t, v_S=v_S, v_dB=v_dB, v_e=v_e)
