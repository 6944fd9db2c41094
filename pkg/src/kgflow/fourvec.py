"""Minimal 1+1 four-vector with metric signature (+, -).

The same container is used for covariant gradients (P_mu, S_mu) and for
contravariant flow vectors (W); the Minkowski product below is for two
vectors of the SAME variance: u.v = u_t v_t - u_x v_x. Components may be
float or complex (complex is used for the field gradient d_mu phi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class FourVector:
    t: float | complex
    x: float | complex

    def dot(self, other: "FourVector"):
        """Minkowski product u.v = u_t v_t - u_x v_x (same variance, no conjugation)."""
        return self.t * other.t - self.x * other.x

    def norm2(self):
        return self.dot(self)

    def is_timelike(self) -> bool:
        return self.norm2().real > 0.0 if isinstance(self.norm2(), complex) else self.norm2() > 0.0

    def is_spacelike(self) -> bool:
        n = self.norm2()
        return (n.real if isinstance(n, complex) else n) < 0.0

    def scaled(self, c) -> "FourVector":
        return FourVector(c * self.t, c * self.x)

    def plus(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t + other.t, self.x + other.x)

    def unit_timelike(self) -> "FourVector":
        """Normalize to u.u = 1 with u_t > 0 (future-pointing)."""
        n = self.norm2()
        if n <= 0.0:
            raise ValueError("not a time-like vector")
        s = 1.0 / math.sqrt(n)
        if self.t < 0.0:
            s = -s
        return self.scaled(s)

    def as_tuple(self):
        return (self.t, self.x)
