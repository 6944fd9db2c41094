"""Shared samplers for the test suite.

Random barrier draws stay clear of band edges (|k2| small) where the
matching system is near-singular; those limits get dedicated tests.
"""
import numpy as np
import pytest

from kgflow import (
    KIND_ELECTROSTATIC,
    KIND_SCALAR,
    BarrierSpec,
    barrier_wavenumber,
)

K2_FLOOR = 0.05


def draw_propagating_spec(rng):
    """One random spec with a real barrier wavenumber (normal or Klein)."""
    while True:
        omega = 1.0 + 10.0 ** rng.uniform(-1.5, 0.7)
        a = 10.0 ** rng.uniform(-1.0, 1.1)
        kind = KIND_SCALAR if rng.random() < 0.5 else KIND_ELECTROSTATIC
        if kind == KIND_SCALAR:
            V = rng.uniform(0.0, omega - 1.0)
        elif rng.random() < 0.5:
            V = rng.uniform(0.0, omega - 1.0)
        else:
            V = omega + 1.0 + 10.0 ** rng.uniform(-1.0, 0.7)
        k2 = barrier_wavenumber(omega, V, kind)
        if abs(k2.real) > K2_FLOOR and k2.imag == 0.0:
            return BarrierSpec(omega=omega, V=V, a=a, kind=kind)


def draw_any_spec(rng):
    """Random spec from any regime, evanescent included."""
    while True:
        omega = 1.0 + 10.0 ** rng.uniform(-1.5, 0.7)
        a = 10.0 ** rng.uniform(-1.0, 1.0)
        kind = KIND_SCALAR if rng.random() < 0.5 else KIND_ELECTROSTATIC
        V = rng.uniform(0.0, 2.5 * omega)
        k2 = barrier_wavenumber(omega, V, kind)
        if abs(k2) > K2_FLOOR:
            return BarrierSpec(omega=omega, V=V, a=a, kind=kind)


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
