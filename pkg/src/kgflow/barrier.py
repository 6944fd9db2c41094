"""Square-barrier setups and wavenumber branches.

A stationary mode phi(t, x) = psi(x) exp(-i omega t) scatters off a square
potential of height V on [0, a]. Two couplings are supported:

* scalar: the potential adds to the mass, k^2 = omega^2 - (m0 + V)^2;
* electrostatic: the potential shifts the energy, k^2 = (omega - V)^2 - m0^2.

Units hbar = c = 1 throughout; omega > m0 > 0 is required so the incident
wave propagates.
"""
import math
from dataclasses import dataclass, field

from .errors import SubThresholdError

KIND_SCALAR = "scalar"
KIND_ELECTROSTATIC = "electrostatic"
KINDS = (KIND_SCALAR, KIND_ELECTROSTATIC)

REGIME_PROPAGATING = "propagating"
REGIME_EVANESCENT = "evanescent"
REGIME_KLEIN = "klein"


def incident_wavenumber(omega, m0=1.0):
    """k1 = +sqrt(omega^2 - m0^2) for the free regions."""
    if omega <= m0:
        raise SubThresholdError(
            f"omega={omega!r} must exceed the rest mass m0={m0!r}")
    return math.sqrt(omega * omega - m0 * m0)


def omega_from_momentum(k1, m0=1.0):
    """Positive-energy branch omega = +sqrt(k1^2 + m0^2)."""
    if k1 <= 0.0:
        raise ValueError(f"incident momentum k1={k1!r} must be positive")
    return math.sqrt(k1 * k1 + m0 * m0)


def barrier_k2_squared(omega, V, kind, m0=1.0):
    """k2^2 inside the barrier; real by construction, any sign."""
    if kind == KIND_SCALAR:
        return omega * omega - (m0 + V) ** 2
    if kind == KIND_ELECTROSTATIC:
        return (omega - V) ** 2 - m0 * m0
    raise ValueError(f"unknown coupling kind {kind!r}")


def barrier_wavenumber(omega, V, kind, m0=1.0):
    """Complex k2 on the physical branch.

    Oscillatory barriers get a real k2 whose sign follows the kinetic
    energy omega - V, so the group velocity inside points along the
    transmitted flux even in the Klein regime (electrostatic V > omega + m0,
    where k2 < 0). Evanescent barriers get k2 = i kappa with kappa > 0.
    """
    q = barrier_k2_squared(omega, V, kind, m0)
    if q >= 0.0:
        k2 = math.sqrt(q)
        if kind == KIND_ELECTROSTATIC and omega - V < 0.0:
            k2 = -k2
        return complex(k2, 0.0)
    return complex(0.0, math.sqrt(-q))


def barrier_regime(omega, V, kind, m0=1.0):
    """Classify the barrier interior: propagating, evanescent or klein."""
    q = barrier_k2_squared(omega, V, kind, m0)
    if q < 0.0:
        return REGIME_EVANESCENT
    if kind == KIND_ELECTROSTATIC and omega - V < 0.0:
        return REGIME_KLEIN
    return REGIME_PROPAGATING


@dataclass(frozen=True)
class BarrierSpec:
    """One scattering problem: mode energy, barrier height/width, coupling."""

    omega: float
    V: float
    a: float
    kind: str = KIND_SCALAR
    m0: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        if self.m0 <= 0.0:
            raise ValueError(f"rest mass m0={self.m0!r} must be positive")
        if self.V < 0.0:
            raise ValueError(f"potential height V={self.V!r} must be nonnegative")
        if self.a <= 0.0:
            raise ValueError(f"barrier width a={self.a!r} must be positive")
        if self.omega <= self.m0:
            raise SubThresholdError(
                f"omega={self.omega!r} must exceed the rest mass m0={self.m0!r}")

    @classmethod
    def from_momentum(cls, k1, V, a, kind=KIND_SCALAR, m0=1.0):
        """Build a spec from the incident momentum instead of the energy."""
        return cls(omega=omega_from_momentum(k1, m0), V=V, a=a, kind=kind, m0=m0)

    @property
    def k1(self):
        return incident_wavenumber(self.omega, self.m0)

    @property
    def k2(self):
        return barrier_wavenumber(self.omega, self.V, self.kind, self.m0)

    @property
    def k2_squared(self):
        return barrier_k2_squared(self.omega, self.V, self.kind, self.m0)

    @property
    def regime(self):
        return barrier_regime(self.omega, self.V, self.kind, self.m0)


def wavenumbers(omega, V, kind, m0=1.0):
    """(k1, k2) for a barrier problem; k1 real positive, k2 complex branch."""
    return incident_wavenumber(omega, m0), barrier_wavenumber(omega, V, kind, m0)
