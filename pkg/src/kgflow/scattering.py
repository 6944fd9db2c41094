"""Stationary scattering solutions for the square barrier.

Two independent routes to the scattering data are kept deliberately
separate so they can cross-check each other:

* ``match_boundaries`` solves the 4x4 interface-matching system for the
  full set of complex amplitudes (needed to evaluate the field anywhere);
* ``closed_form_RT`` evaluates |R|^2 and |T|^2 from the standard closed
  form, rearranged so unitarity |R|^2 + |T|^2 = 1 holds to rounding and
  wide evanescent barriers cannot overflow.

The matching system is written in an anchored basis: the backward wave in
the barrier is referenced to x = a and the transmitted wave to x = a, so
every matrix entry stays O(1) no matter how opaque the barrier is. Plain
common-origin amplitudes are recovered on the solution object.
"""
import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .backend import PARAMS_LEN, kernels
from .barrier import KIND_SCALAR, KINDS, BarrierSpec, omega_from_momentum
from .errors import KGFlowError, NoBracketError, SingularSystemError

COND_LIMIT = 1e12       # matching matrix condition number guard
SINH_ARG_LIMIT = 350.0  # beyond this kappa*a the barrier is numerically opaque


@dataclass(frozen=True)
class RegionWave:
    """Plane-wave pair psi = amp+ e^{ik(x-x+)} + amp- e^{-ik(x-x-)}.

    The anchors x+ and x- let each exponential be referenced to the edge
    where it is largest, which keeps amplitudes representable for wide
    evanescent barriers. Im(k) >= 0 always; a growing exponential is
    expressed through amp_minus, never through the branch of k.
    """

    k: complex
    amp_plus: complex
    amp_minus: complex
    anchor_plus: float = 0.0
    anchor_minus: float = 0.0
    V: float = 0.0

    def psi(self, x):
        up = self.amp_plus * cmath.exp(1j * self.k * (x - self.anchor_plus))
        um = self.amp_minus * cmath.exp(-1j * self.k * (x - self.anchor_minus))
        return up + um

    def dpsi(self, x):
        up = self.amp_plus * cmath.exp(1j * self.k * (x - self.anchor_plus))
        um = self.amp_minus * cmath.exp(-1j * self.k * (x - self.anchor_minus))
        return 1j * self.k * (up - um)


@dataclass(frozen=True)
class ScatteringSolution:
    """A stationary mode, piecewise plane waves over 1 or 3 regions.

    Barrier solutions have regions (I, II, III) split at ``left`` and
    ``right``; synthetic one-region modes cover the whole line. The shared
    frequency lives here rather than on each RegionWave.
    """

    omega: float
    m0: float
    kind: str
    regions: tuple
    left: float = 0.0
    right: float = 0.0
    spec: BarrierSpec = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        if len(self.regions) not in (1, 3):
            raise ValueError("expected 1 or 3 regions")

    def region_at(self, x):
        if len(self.regions) == 1:
            return 0
        if x < self.left:
            return 0
        if x <= self.right:
            return 1
        return 2

    def psi(self, x):
        return self.regions[self.region_at(x)].psi(x)

    def dpsi(self, x):
        return self.regions[self.region_at(x)].dpsi(x)

    @property
    def k1(self):
        """Wavenumber of the leftmost region (incident, for barrier setups)."""
        return self.regions[0].k.real

    @property
    def k2(self):
        return self.regions[1].k if len(self.regions) == 3 else None

    @property
    def R(self):
        """Reflected amplitude."""
        return self.regions[0].amp_minus

    @property
    def G(self):
        """Forward in-barrier amplitude (common-origin convention)."""
        if len(self.regions) != 3:
            return None
        return self.regions[1].amp_plus

    @property
    def H(self):
        """Backward in-barrier amplitude (common-origin convention)."""
        if len(self.regions) != 3:
            return None
        w = self.regions[1]
        return w.amp_minus * cmath.exp(1j * w.k * w.anchor_minus)

    @property
    def J(self):
        """Transmitted amplitude (common-origin convention)."""
        if len(self.regions) == 1:
            return self.regions[0].amp_plus
        w = self.regions[2]
        return w.amp_plus * cmath.exp(-1j * w.k * w.anchor_plus)

    @property
    def refl2(self):
        return abs(self.R) ** 2

    @property
    def trans2(self):
        # incident and transmitted momenta are equal, so the flux ratio
        # k1|J|^2 / k1 reduces to |J|^2
        return abs(self.J) ** 2

    @property
    def unitarity_residual(self):
        return self.refl2 + self.trans2 - 1.0

    @property
    def amp_scale(self):
        """Reference max |psi|^2, the scale behind the node threshold."""
        return max((abs(w.amp_plus) + abs(w.amp_minus)) ** 2 for w in self.regions)

    @cached_property
    def params(self):
        """Kernel parameter vector (layout in kgflow._kernels_py)."""
        p = np.zeros(PARAMS_LEN)
        p[0] = self.m0
        p[1] = self.omega
        p[2] = 0.0 if self.kind == KIND_SCALAR else 1.0
        p[3] = float(len(self.regions))
        p[4] = self.left
        p[5] = self.right
        for r, w in enumerate(self.regions):
            b = 6 + 9 * r
            k = complex(w.k)
            ap = complex(w.amp_plus)
            am = complex(w.amp_minus)
            p[b] = k.real
            p[b + 1] = k.imag
            p[b + 2] = ap.real
            p[b + 3] = ap.imag
            p[b + 4] = am.real
            p[b + 5] = am.imag
            p[b + 6] = w.anchor_plus
            p[b + 7] = w.anchor_minus
            p[b + 8] = w.V
        p[33] = self.amp_scale
        return p

    def current(self, x=None):
        """Conserved current Im(psi* psi'); evaluated in region I by default."""
        if x is None:
            x = self.left - 1.0 if len(self.regions) == 3 else 0.0
        return kernels.current_at(self.params, float(x))


def match_boundaries(spec):
    """Solve the two-interface matching system for a barrier spec.

    Unknowns are (R, G, H_a, J_a) with the region fields

        psi_I   = e^{i k1 x} + R e^{-i k1 x}
        psi_II  = G e^{i k2 x} + H_a e^{-i k2 (x - a)}
        psi_III = J_a e^{i k1 (x - a)}

    Continuity of psi and psi' at x = 0 and x = a gives a 4x4 complex
    system whose entries are bounded by construction (|e^{i k2 a}| <= 1 on
    the physical branch). Raises SingularSystemError when the system is
    ill-conditioned, which happens exactly at the band edge k2 = 0 where
    the exponential basis degenerates.
    """
    k1 = spec.k1
    k2 = spec.k2
    a = spec.a
    E = cmath.exp(1j * k2 * a)
    M = np.array([
        [1.0, -1.0, -E, 0.0],
        [-k1, -k2, k2 * E, 0.0],
        [0.0, E, 1.0, -1.0],
        [0.0, k2 * E, -k2, -k1],
    ], dtype=complex)
    rhs = np.array([-1.0, -k1, 0.0, 0.0], dtype=complex)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(
            f"matching system is ill-conditioned (cond={cond:.3e}) for "
            f"omega={spec.omega}, V={spec.V}, a={spec.a}, kind={spec.kind}")
    R, G, Ha, Ja = np.linalg.solve(M, rhs)
    regions = (
        RegionWave(k=complex(k1), amp_plus=1.0 + 0.0j, amp_minus=R, V=0.0),
        RegionWave(k=k2, amp_plus=G, amp_minus=Ha,
                   anchor_plus=0.0, anchor_minus=a, V=spec.V),
        RegionWave(k=complex(k1), amp_plus=Ja, amp_minus=0.0j,
                   anchor_plus=a, anchor_minus=a, V=0.0),
    )
    return ScatteringSolution(omega=spec.omega, m0=spec.m0, kind=spec.kind,
                              regions=regions, left=0.0, right=a, spec=spec)


def rt_from_q(k1, q, a):
    """(|R|^2, |T|^2) from k1 > 0, barrier k2^2 = q (any sign) and width a.

    Algebraically identical to the textbook closed form but arranged as
    num / (F + num) with every term nonnegative, so the pair is unitary to
    rounding. Handles the band edge q = 0 by its exact limit and saturates
    to (1, 0) once sinh would overflow. Even in q, hence invariant under
    k2 -> -k2.
    """
    kk = k1 * k1
    if q == 0.0:
        num = kk * kk * a * a
        F = 4.0 * kk
    elif q > 0.0:
        s = math.sin(math.sqrt(q) * a)
        num = (kk - q) ** 2 * s * s
        F = 4.0 * kk * q
    else:
        arg = math.sqrt(-q) * a
        if arg > SINH_ARG_LIMIT:
            return 1.0, 0.0
        s = math.sinh(arg)
        num = (kk - q) ** 2 * s * s
        F = 4.0 * kk * (-q)
    den = F + num
    return num / den, F / den


def closed_form_RT(spec):
    """(refl2, trans2) for a barrier spec, independent of match_boundaries."""
    return rt_from_q(spec.k1, spec.k2_squared, spec.a)


@dataclass(frozen=True)
class ScanGrid:
    """|T|^2 (and |R|^2) over the product of a V grid and an a grid.

    trans2[i, j] corresponds to (V_values[i], a_values[j]). n_failed
    counts non-finite cells; the physical branch of the dispersion is
    total, so the count is zero unless inputs are themselves non-finite.
    """

    omega: float
    m0: float
    kind: str
    V_values: np.ndarray
    a_values: np.ndarray
    refl2: np.ndarray
    trans2: np.ndarray
    n_failed: int = 0

    def iter_rows(self):
        """Yield (V, a, trans2) row-major, V outermost."""
        for i, V in enumerate(self.V_values):
            for j, a in enumerate(self.a_values):
                yield V, a, self.trans2[i, j]


def _monotone(grid, name):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1:
        raise ValueError(f"{name} must be a 1-d sequence")
    if g.size >= 2:
        d = np.diff(g)
        if not (np.all(d >= 0.0) or np.all(d <= 0.0)):
            raise ValueError(f"{name} must be monotone")
    return g


def scan_transmission(omega, V_values, a_values, kind, m0=1.0):
    """Closed-form coefficients over the (V, a) product grid.

    Cells are independent; a cell that fails to evaluate is emitted as
    NaN and counted in n_failed instead of aborting the scan. Empty grids
    yield an empty ScanGrid.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown coupling kind {kind!r}")
    Vs = _monotone(V_values, "V_values")
    As = _monotone(a_values, "a_values")
    if np.any(Vs < 0.0):
        raise ValueError("potential heights must be nonnegative")
    if np.any(As <= 0.0):
        raise ValueError("barrier widths must be positive")
    if omega <= m0:
        # same rejection BarrierSpec applies, surfaced before any cells
        from .barrier import incident_wavenumber
        incident_wavenumber(omega, m0)
    shape = (Vs.size, As.size)
    refl2 = np.full(shape, np.nan)
    trans2 = np.full(shape, np.nan)
    n_failed = 0
    for i, V in enumerate(Vs):
        if kind == KIND_SCALAR:
            q = omega * omega - (m0 + V) ** 2
        else:
            q = (omega - V) ** 2 - m0 * m0
        for j, a in enumerate(As):
            try:
                r2, t2 = rt_from_q(math.sqrt(omega * omega - m0 * m0), q, a)
            except (ValueError, OverflowError):
                n_failed += 1
                continue
            refl2[i, j] = r2
            trans2[i, j] = t2
    return ScanGrid(omega=omega, m0=m0, kind=kind, V_values=Vs, a_values=As,
                    refl2=refl2, trans2=trans2, n_failed=n_failed)


def find_potential_for_reflection(omega, a, kind, target_absR, bracket,
                                  m0=1.0, xtol=1e-12):
    """Barrier height V inside ``bracket`` with reflected amplitude target_absR.

    |R|(V) is continuous but not monotone, so the caller provides the
    bracket (V_lo, V_hi). Raises NoBracketError, carrying |R| at both
    endpoints, when the bracket does not straddle the target.
    """
    if not 0.0 < target_absR < 1.0:
        raise ValueError(
            f"target |R|={target_absR!r} must lie strictly inside (0, 1)")
    if kind not in KINDS:
        raise ValueError(f"unknown coupling kind {kind!r}")
    V_lo, V_hi = bracket
    if not V_lo < V_hi:
        raise ValueError(f"need V_lo < V_hi, got {bracket!r}")
    if V_lo < 0.0:
        raise ValueError("potential heights must be nonnegative")
    k1 = BarrierSpec(omega=omega, V=V_lo, a=a, kind=kind, m0=m0).k1

    def absr(V):
        if kind == KIND_SCALAR:
            q = omega * omega - (m0 + V) ** 2
        else:
            q = (omega - V) ** 2 - m0 * m0
        r2, _ = rt_from_q(k1, q, a)
        return math.sqrt(r2)

    f_lo = absr(V_lo) - target_absR
    f_hi = absr(V_hi) - target_absR
    if f_lo == 0.0:
        return V_lo
    if f_hi == 0.0:
        return V_hi
    if f_lo * f_hi > 0.0:
        raise NoBracketError(
            f"|R| - {target_absR} does not change sign on "
            f"[{V_lo}, {V_hi}]: |R|={f_lo + target_absR:.6f} at the low end, "
            f"|R|={f_hi + target_absR:.6f} at the high end",
            absr_lo=f_lo + target_absR, absr_hi=f_hi + target_absR)
    V = brentq(lambda V: absr(V) - target_absR, V_lo, V_hi,
               xtol=xtol, rtol=8.9e-16)
    resid = abs(absr(V) - target_absR)
    if resid > 1e-8:
        raise KGFlowError(
            f"root refinement left |R| residual {resid:.3e} at V={V!r}")
    return V


def free_superposition(k, R, m0=1.0):
    """Exact free-space mode e^{ikx} + R e^{-ikx} with prescribed R.

    Single region, V = 0, omega on the positive branch. Used to probe the
    flow machinery at exactly known reflection amplitudes, including
    |R| = 1 standing waves that a physical barrier can only approach.
    """
    if k <= 0.0:
        raise ValueError(f"momentum k={k!r} must be positive")
    if abs(R) > 1.0:
        raise ValueError(f"|R|={abs(R)!r} > 1 would carry negative current")
    region = RegionWave(k=complex(k), amp_plus=1.0 + 0.0j,
                        amp_minus=complex(R), V=0.0)
    return ScatteringSolution(omega=omega_from_momentum(k, m0), m0=m0,
                              kind=KIND_SCALAR, regions=(region,))


def single_region(omega, k, amp_plus=1.0, amp_minus=0.0, V=0.0,
                  kind=KIND_SCALAR, m0=1.0):
    """Synthetic one-region mode with explicit parameters.

    Diagnostic constructor: no dispersion check ties omega, k, V and m0
    together, so the caller owns physical consistency. Useful for pure
    evanescent profiles amp_plus e^{-kappa x} via imaginary k.
    """
    region = RegionWave(k=complex(k), amp_plus=complex(amp_plus),
                        amp_minus=complex(amp_minus), V=V)
    return ScatteringSolution(omega=omega, m0=m0, kind=kind, regions=(region,))
