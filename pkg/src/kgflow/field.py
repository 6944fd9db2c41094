"""Field evaluation and polar decomposition on the t = const slice.

Reference implementations built directly on the RegionWave forms; the
kernel twins in kgflow._kernels / _kernels_py reproduce these numbers and
are tested against this module. All derivatives are analytic: the modes
are closed-form piecewise exponentials, so finite differences appear only
in tests as oracles.

Writing phi = e^{P + iS}, the gradients P_mu = Re(d_mu phi / phi) and
S_mu = Im(d_mu phi / phi) are the polar-decomposition data every flow
quantity is built from. They are undefined at nodes (phi = 0); samples
carry an at_node flag and the accessors raise NodeError there instead of
returning garbage.
"""
import cmath
from dataclasses import dataclass

from .errors import NodeError
from .fourvec import FourVector

NODE_EPS = 1e-10  # |phi|^2 below NODE_EPS * (global max |phi|^2) flags a node


@dataclass(frozen=True)
class FieldSample:
    """phi, its analytic gradient and polar data at one space-time point."""

    t: float
    x: float
    phi: complex
    dphi: FourVector          # complex components (d_t phi, d_x phi)
    absphi2: float
    at_node: bool
    P_mu: FourVector          # None when at_node
    S_mu: FourVector          # None when at_node
    region: int
    k_local: complex
    V_local: float
    kind: str
    m0: float
    omega: float


def evaluate_field(sol, t, x):
    """Sample phi(t, x) = psi(x) e^{-i omega t} and its polar data.

    Total over the domain: at nodes the polar gradients are left unset and
    at_node is raised on the sample instead of failing. The node threshold
    is relative to the solution's global amplitude bound.
    """
    r = sol.region_at(x)
    wave = sol.regions[r]
    phase = cmath.exp(-1j * sol.omega * t)
    psi = wave.psi(x)
    dpsi = wave.dpsi(x)
    phi = psi * phase
    dphi = FourVector(-1j * sol.omega * phi, dpsi * phase)
    absphi2 = abs(phi) ** 2
    at_node = absphi2 < NODE_EPS * sol.amp_scale
    if at_node:
        P_mu = S_mu = None
    else:
        ld = dpsi / psi
        P_mu = FourVector(0.0, ld.real)
        S_mu = FourVector(-sol.omega, ld.imag)
    return FieldSample(t=t, x=x, phi=phi, dphi=dphi, absphi2=absphi2,
                       at_node=at_node, P_mu=P_mu, S_mu=S_mu, region=r,
                       k_local=complex(wave.k), V_local=wave.V,
                       kind=sol.kind, m0=sol.m0, omega=sol.omega)


def polar_gradients(sample):
    """(P_mu, S_mu) of a sample; NodeError where the decomposition is singular."""
    if sample.at_node:
        raise NodeError(
            f"polar decomposition undefined at node x={sample.x!r} "
            f"(|phi|^2={sample.absphi2:.3e})")
    return sample.P_mu, sample.S_mu


def hj_residual(sample, m0=None):
    """Hamilton-Jacobi residual S.S - (box|phi|)/|phi| - m0^2 at a sample.

    The amplitude term is assembled analytically: with ld = psi'/psi,
    d_x ld = -k^2 - ld^2 (each exponential solves psi'' = -k^2 psi), so
    P_xx = Re(-k^2 - ld^2) and box R / R = -(P_xx + P_x^2) for stationary
    modes. Exact solutions in free regions give residual ~ 0 to rounding.

    Requires a free region (V = 0): with a potential the identity picks up
    coupling terms this diagnostic deliberately does not model.
    """
    if sample.V_local != 0.0:
        raise ValueError(
            f"hj_residual requires a free region, got V={sample.V_local!r}")
    P_mu, S_mu = polar_gradients(sample)
    if m0 is None:
        m0 = sample.m0
    ld = complex(P_mu.x, S_mu.x)
    P_xx = (-sample.k_local ** 2 - ld * ld).real
    SS = S_mu.dot(S_mu)
    box_ratio = -(P_xx + P_mu.x ** 2)
    return SS - box_ratio - m0 * m0


def conserved_current(sol, x):
    """j(x) = Im(psi* psi'); x-independent for valid stationary solutions."""
    psi = sol.psi(x)
    dpsi = sol.dpsi(x)
    return (psi.conjugate() * dpsi).imag
