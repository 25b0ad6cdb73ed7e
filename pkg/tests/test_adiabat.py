import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from quantum_otto.adiabat import (
    CASIMIR_METRIC,
    AdiabatSpec,
    adiabat_generator,
    adiabat_trace,
    adiabaticity_delta,
    analytic_U1_U2,
    frictionless_mu,
    frictionless_tau,
    omega_profile,
    propagate_adiabat_numeric,
    u2_matrix,
)
from quantum_otto.core import DomainError, NoiseSpec, SegmentPropagator, casimir_form, thermal_triple

WH, WC = O.OMEGA_H, O.OMEGA_C


def test_frictionless_mu_examples():
    assert frictionless_mu(WH, WC, 1) == pytest.approx(O.MU_N1, abs=1e-12)
    assert frictionless_mu(WH, WC, 1) == pytest.approx(-0.911899, abs=1e-6)
    assert frictionless_mu(WC, WC, 3) == 0.0
    n = 5000
    assert frictionless_mu(WH, WC, n) == pytest.approx(-math.log(25) / (n * math.pi), rel=1e-6)
    assert frictionless_mu(WC, WH, 1) == pytest.approx(-O.MU_N1, rel=1e-15)
    with pytest.raises(DomainError):
        frictionless_mu(WH, WC, 0)


def test_frictionless_tau_examples():
    assert frictionless_tau(WH, WC, 1) == pytest.approx(O.TAU_N1, abs=1e-8)
    assert frictionless_tau(WH, WC, 1) == pytest.approx(O.TAU_N1, rel=1e-13)
    assert frictionless_tau(WC, WH, 1) > 0
    spec = AdiabatSpec.frictionless(WH, WC, 1)
    assert spec.duration == pytest.approx(O.TAU_N1, rel=1e-13)


def test_omega_profile():
    spec = AdiabatSpec.frictionless(WH, WC, 1)
    assert omega_profile(spec, 0.0) == WH
    assert omega_profile(spec, frictionless_tau(WH, WC, 1)) == pytest.approx(WC, rel=1e-12)
    flat = AdiabatSpec(WC, WC, 0.0)
    assert omega_profile(flat, 0.0) == WC


def test_spec_domain():
    with pytest.raises(DomainError):
        AdiabatSpec(WH, WC, -2.0)
    with pytest.raises(DomainError):
        AdiabatSpec(WH, WC, 0.3)  # wrong sign for an expansion
    with pytest.raises(DomainError):
        AdiabatSpec(WC, WC, 0.1)


def test_generator_examples():
    spec = AdiabatSpec.frictionless(WH, WC, 2)
    mu = spec.mu
    m0 = np.array([[mu, -mu, 0], [-mu, mu, -2], [0, 2, mu]])
    assert np.array_equal(adiabat_generator(spec, 0.3 * spec.duration), m0)
    gp = 1e-6
    flat = AdiabatSpec(WC, WC, 0.0, NoiseSpec(gp, 0.0))
    want = np.array([[0, 0, 0], [0, -4 * gp * WC, -2], [0, 2, -4 * gp * WC]])
    assert np.allclose(adiabat_generator(flat, 0.0), want, rtol=1e-15, atol=0)


def test_degenerate_identity():
    spec = AdiabatSpec(WC, WC, 0.0)
    assert np.array_equal(propagate_adiabat_numeric(spec).matrix, np.eye(3))


@pytest.mark.parametrize("n", [1, 3, 17])
def test_frictionless_closure(n):
    spec = AdiabatSpec.frictionless(WH, WC, n)
    u = propagate_adiabat_numeric(spec, 1e-10).matrix
    assert np.max(np.abs(u - (WC / WH) * np.eye(3))) < 1e-8


def test_generic_mu_matches_closed_form():
    tol = 1e-10
    spec = AdiabatSpec(WH, WC, -0.5)
    num = propagate_adiabat_numeric(spec, tol).matrix
    ana = analytic_U1_U2(spec).matrix
    assert np.max(np.abs(num - ana)) < 10 * tol


def test_u2_identities():
    assert np.allclose(u2_matrix(-0.7, 0.0), np.eye(3), atol=1e-15)
    mu = frictionless_mu(WH, WC, 4)
    big = math.sqrt(4 - mu * mu)
    assert np.allclose(u2_matrix(mu, 8 * math.pi / big), np.eye(3), atol=1e-13)


def test_delta_examples():
    assert adiabaticity_delta(SegmentPropagator((WC / WH) * np.eye(3)), WH, WC) == pytest.approx(0, abs=1e-15)
    mu = -0.5
    spec = AdiabatSpec(WH, WC, mu)
    big = math.sqrt(4 - mu * mu)
    want = (4 - math.cos(big * spec.theta_final) * mu * mu) / big ** 2 - 1
    got = adiabaticity_delta(propagate_adiabat_numeric(spec), WH, WC)
    assert got == pytest.approx(want, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.9), st.floats(1.5, 100.0), st.booleans())
def test_casimir_metric_invariance(abs_mu, ratio, expand):
    w0, wf = (ratio * WC, WC) if expand else (WC, ratio * WC)
    mu = -abs_mu if expand else abs_mu
    spec = AdiabatSpec(w0, wf, mu)
    u = propagate_adiabat_numeric(spec, 1e-11).matrix
    lhs = u.T @ CASIMIR_METRIC @ u
    rhs = (wf / w0) ** 2 * CASIMIR_METRIC
    assert np.max(np.abs(lhs - rhs)) / (wf / w0) ** 2 < 1e-8


def test_composition_semigroup():
    mu = -0.4
    wm = 7 * WC
    full = propagate_adiabat_numeric(AdiabatSpec(WH, WC, mu), 1e-11).matrix
    a = propagate_adiabat_numeric(AdiabatSpec(WH, wm, mu), 1e-11)
    b = propagate_adiabat_numeric(AdiabatSpec(wm, WC, mu), 1e-11)
    assert np.max(np.abs(a.then(b).matrix - full)) < 1e-9


def test_tolerance_refinement_is_monotone():
    spec = AdiabatSpec(WH, WC, -0.5)
    ana = analytic_U1_U2(spec).matrix
    errs = [np.max(np.abs(propagate_adiabat_numeric(spec, tol).matrix - ana))
            for tol in (1e-6, 5e-7, 2.5e-7, 1.25e-7)]
    # allow round-off sized wiggles once the error is already tiny
    assert all(b <= a + 1e-14 for a, b in zip(errs, errs[1:]))


def test_trace_endpoints_and_casimir():
    spec = AdiabatSpec.frictionless(WH, WC, 2)
    start = thermal_triple(WH, 300.0)
    theta, omega, states = adiabat_trace(spec, start, 41)
    assert omega[0] == WH and omega[-1] == WC
    assert theta[-1] == spec.theta_final
    forms = [casimir_form(type(start)(*s), w) for s, w in zip(states, omega)]
    assert np.max(np.abs(np.array(forms) / forms[0] - 1)) < 1e-8
    assert states[-1][0] == pytest.approx(start.h * WC / WH, rel=1e-8)


def test_closed_form_rejects_noise(ref_spec):
    with pytest.raises(DomainError):
        analytic_U1_U2(ref_spec(1))
