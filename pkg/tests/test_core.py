import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from quantum_otto.core import (
    CODATA,
    HBAR,
    KB,
    BathSpec,
    DomainError,
    NoiseSpec,
    ObservableTriple,
    SegmentPropagator,
    arccoth,
    casimir_form,
    coth,
    equilibrium_energy,
    lagrange_multipliers,
    thermal_triple,
)

W = 2 * math.pi * 1000.0


def temperature_for_x(omega, x):
    return HBAR * omega / (2 * KB * x)


def test_constants_are_codata():
    assert CODATA.hbar == 1.054571817e-34
    assert CODATA.kB == 1.380649e-23


def test_equilibrium_energy_ground_state_limit():
    assert equilibrium_energy(W, 1e-12) == pytest.approx(HBAR * W / 2, rel=1e-12)


def test_equilibrium_energy_at_unit_argument():
    t = temperature_for_x(W, 1.0)
    assert equilibrium_energy(W, t) == pytest.approx(HBAR * W / 2 * O.COTH_1, rel=1e-13)


def test_equilibrium_energy_high_temperature():
    t = temperature_for_x(W, 1e-6)
    assert equilibrium_energy(W, t) == pytest.approx(KB * t, rel=1e-9)


def test_coth_series_branch_is_continuous():
    x = 1e-8
    assert coth(x * 0.999999) == pytest.approx(1 / math.tanh(x * 0.999999), rel=1e-12)
    assert coth(x) == pytest.approx(1 / x, rel=1e-12)
    with pytest.raises(DomainError):
        coth(0.0)


def test_arccoth_inverts_coth():
    for x in (1e-3, 0.3, 2.0, 5.0):
        assert arccoth(coth(x)) == pytest.approx(x, rel=1e-9)
    with pytest.raises(DomainError):
        arccoth(1.0)


def test_thermal_triple():
    t = temperature_for_x(W, 1.0)
    trip = thermal_triple(W, t)
    assert trip.h == pytest.approx(1.3130 * HBAR * W / 2, rel=1e-4)
    assert trip.l == 0.0 and trip.d == 0.0
    ground = thermal_triple(W, 1e-12)
    assert ground.h == pytest.approx(HBAR * W / 2, rel=1e-12)


def test_lagrange_multipliers_thermal():
    t = 17.0
    lm = lagrange_multipliers(thermal_triple(W, t), W)
    assert lm.alpha == 0
    assert lm.beta == pytest.approx(1 / (KB * t), rel=1e-9)


def test_lagrange_multipliers_d_reflection():
    trip = ObservableTriple(3e-31, 1e-31, 5e-32)
    flipped = ObservableTriple(trip.h, trip.l, -trip.d)
    a, b = lagrange_multipliers(trip, W), lagrange_multipliers(flipped, W)
    assert b.alpha == pytest.approx(a.alpha.conjugate())
    assert b.beta == a.beta


@settings(max_examples=200, deadline=None)
@given(st.floats(0.1, 1000.0), st.floats(math.log(2 * math.pi * 10), math.log(2 * math.pi * 1e6)))
def test_beta_recovery_over_grid(t, log_w):
    w = math.exp(log_w)
    h = equilibrium_energy(w, t)
    # artanh oracle: beta = (2 / hbar w) artanh(hbar w / 2 h)
    expected = 2 / (HBAR * w) * math.atanh(HBAR * w / (2 * h))
    beta = lagrange_multipliers(thermal_triple(w, t), w).beta
    assert beta == pytest.approx(expected, rel=1e-9)
    assert beta == pytest.approx(1 / (KB * t), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-6, 1e4), st.floats(1.0, 1e7))
def test_ground_state_bound(t, w):
    assert equilibrium_energy(w, t) >= HBAR * w / 2 * (1 - 1e-15)


def test_casimir_form_examples():
    assert casimir_form(ObservableTriple(HBAR * W / 2, 0, 0), W) == pytest.approx(0.25)
    t = temperature_for_x(W, 0.7)
    assert casimir_form(thermal_triple(W, t), W) == pytest.approx((coth(0.7) / 2) ** 2, rel=1e-13)
    trip = ObservableTriple(4e-31, 1e-31, -2e-31)
    scaled = ObservableTriple(3 * trip.h, 3 * trip.l, 3 * trip.d)
    assert casimir_form(scaled, W) == pytest.approx(9 * casimir_form(trip, W), rel=1e-14)


def test_spec_validation():
    with pytest.raises(DomainError):
        BathSpec(-1.0, W, 1.0)
    with pytest.raises(DomainError):
        BathSpec(1.0, W, 0.0)
    with pytest.raises(DomainError):
        NoiseSpec(-1e-9, 0.0)
    assert NoiseSpec().is_zero


def test_segment_propagator_composition_order():
    a = SegmentPropagator(np.diag([2.0, 1.0, 1.0]), np.array([1.0, 0, 0]))
    b = SegmentPropagator(np.diag([3.0, 1.0, 1.0]), np.array([0.0, 5.0, 0]))
    x = ObservableTriple(1.0, 2.0, 3.0)
    assert a.then(b).apply(x) == b.apply(a.apply(x))
