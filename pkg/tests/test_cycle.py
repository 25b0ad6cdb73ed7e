import math

import numpy as np
import pytest

import oracles as O
from quantum_otto.adiabat import adiabaticity_delta, propagate_adiabat_numeric
from quantum_otto.core import HBAR, KB, BathSpec, DomainError, NoiseSpec, thermal_triple
from quantum_otto.cycle import (
    CycleConfig,
    NonContractiveError,
    carnot_limit,
    compose_cycle,
    cycle_energetics,
    find_limit_cycle,
    iterate_cycle,
    max_heat,
    minimum_temperature,
    refrigeration_possible,
    tc_bound,
)
from quantum_otto.isochore import rates_from_bath

WH, WC = O.OMEGA_H, O.OMEGA_C
NOISE = NoiseSpec(O.GAMMA_P, O.GAMMA_A)


def config(t_c=50.0, noise=None, durations=None, k=1e9, n=1):
    return CycleConfig(
        hot=BathSpec(O.T_H, WH, k),
        cold=BathSpec(t_c, WC, k),
        n_expansion=n,
        n_compression=n,
        noise=noise or NoiseSpec(),
        isochore_durations=durations,
    )


def long_durations(cfg, relax=60.0):
    return (relax / rates_from_bath(cfg.hot).gamma_cap,
            relax / rates_from_bath(cfg.cold).gamma_cap)


def test_config_validation():
    with pytest.raises(DomainError):
        CycleConfig(BathSpec(300.0, WC, 1.0), BathSpec(50.0, WH, 1.0))
    with pytest.raises(DomainError):
        CycleConfig(BathSpec(50.0, WH, 1.0), BathSpec(300.0, WC, 1.0))
    with pytest.raises(DomainError):
        config(n=0)


def test_degenerate_cycle_is_identity():
    cfg = CycleConfig(BathSpec(300.0, WC, 1.0), BathSpec(50.0, WC, 1.0),
                      isochore_durations=(0.0, 0.0))
    cyc = compose_cycle(cfg)
    assert np.array_equal(cyc.matrix, np.eye(3))
    assert np.array_equal(cyc.offset, np.zeros(3))


def test_offset_nonzero_with_contact():
    cfg = CycleConfig(BathSpec(300.0, WC, 1.0), BathSpec(50.0, WC, 1.0),
                      isochore_durations=(1e-3, 0.0))
    assert np.any(compose_cycle(cfg).offset != 0)


def test_long_isochores_closed_form():
    cfg = config()
    cfg = config(durations=long_durations(cfg))
    cyc = compose_cycle(cfg)
    assert np.max(np.abs(cyc.matrix)) < 1e-20
    want = (WH / WC) * thermal_triple(WC, 50.0).h
    assert cyc.offset[0] == pytest.approx(want, rel=1e-9)
    rep = cycle_energetics(cfg)
    hot_exit = rep.states["hot_isochore"]
    assert hot_exit.h == pytest.approx(thermal_triple(WH, O.T_H).h, rel=1e-12)
    after_exp = rep.states["expansion"]
    assert after_exp.h == pytest.approx(thermal_triple(WH, O.T_H).h * WC / WH, rel=1e-8)


def test_fixed_point_residual_and_power_iteration():
    cfg = config(noise=NOISE)
    cfg = config(noise=NOISE, durations=long_durations(cfg, 1.0))
    cyc = compose_cycle(cfg)
    a = find_limit_cycle(cfg).as_array()
    resid = cyc.matrix @ a + cyc.offset - a
    assert np.linalg.norm(resid) < 1e-10 * np.linalg.norm(a)
    it = iterate_cycle(cyc, thermal_triple(WC, 50.0), 200).as_array()
    assert np.max(np.abs(it - a)) < 1e-10 * np.max(np.abs(a))


def test_non_contractive_map_raises():
    # without bath contact the noisy adiabats pump energy in every cycle
    cfg = config(noise=NOISE, durations=(0.0, 0.0))
    with pytest.raises(NonContractiveError):
        find_limit_cycle(cfg)


def test_max_heat_examples():
    cfg = config()
    q0 = max_heat(cfg, 0.0)
    assert q0 > 0
    assert all(max_heat(cfg, d) < q0 for d in (1e-6, 1e-3, 0.1))
    carnot = config(t_c=carnot_limit(WC, WH, O.T_H))
    assert max_heat(carnot, 0.0) == pytest.approx(0.0, abs=1e-12 * q0)
    deltas = np.linspace(0, 1, 50)
    heats = [max_heat(cfg, d) for d in deltas]
    assert all(b < a for a, b in zip(heats, heats[1:]))
    with pytest.raises(DomainError):
        max_heat(cfg, -0.1)


def test_tc_bound_examples():
    assert tc_bound(WC, WH, O.T_H, 0.0) == pytest.approx(12.0, rel=1e-12)
    for wc, wh, th in ((1.0, 3.0, 7.0), (2e3, 9e5, 0.01), (5.0, 5e7, 1e4)):
        assert tc_bound(wc, wh, th, 0.0) == pytest.approx(wc / wh * th, rel=1e-12)
    deltas = [0.0, 1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3]
    bounds = [tc_bound(WC, WH, O.T_H, d) for d in deltas]
    assert all(b > a for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] > 1e3 * bounds[0]


def test_minimum_temperature_examples():
    noisy = minimum_temperature(WC, WH, O.T_H, NOISE)
    assert noisy > 12.0
    assert noisy == pytest.approx(tc_bound(WC, WH, O.T_H, O.DELTA_OPT_PRINTED), rel=1e-12)
    assert minimum_temperature(WC, WH, O.T_H, NoiseSpec()) == pytest.approx(12.0, rel=1e-12)
    additive = minimum_temperature(WC, WH, O.T_H, NOISE, rule="additive")
    assert additive > noisy
    with pytest.raises(ValueError):
        minimum_temperature(WC, WH, O.T_H, NOISE, rule="other")


def test_minimum_temperature_decreases_with_omega_c():
    grid = np.geomspace(2 * math.pi * 1e-3, 2 * math.pi * 1e3, 40)
    temps = [minimum_temperature(w, WH, O.T_H, NOISE) for w in grid]
    assert all(b > a for a, b in zip(temps, temps[1:]))


def test_refrigeration_above_carnot():
    rep = cycle_energetics(config())
    assert rep.q_cold > 0 and rep.refrigerating
    assert rep.cop == pytest.approx(WC / (WH - WC), rel=1e-6)
    assert rep.converged
    assert rep.first_law_residual < 1e-9


def test_no_refrigeration_below_carnot():
    rep = cycle_energetics(config(t_c=5.0))
    assert rep.q_cold <= 0 and not rep.refrigerating
    assert rep.cop is None


def test_no_refrigeration_below_noisy_bound():
    cfg = config(noise=NOISE, n=1)
    delta = adiabaticity_delta(propagate_adiabat_numeric(cfg.expansion()), WH, WC)
    bound = tc_bound(WC, WH, O.T_H, delta)
    cold = config(t_c=0.98 * bound, noise=NOISE, n=1)
    cold = config(t_c=0.98 * bound, noise=NOISE, n=1, durations=long_durations(cold))
    assert not refrigeration_possible(cold, delta)
    assert cycle_energetics(cold).q_cold <= 0


def test_simulated_heat_bounded_by_max_heat():
    for n in (1, 5, 15):
        cfg = config(noise=NOISE, n=n)
        cfg = config(noise=NOISE, n=n, durations=long_durations(cfg))
        rep = cycle_energetics(cfg)
        bound = max_heat(cfg, rep.delta_expansion)
        assert rep.q_cold <= bound + 1e-9 * abs(bound)


def test_first_law_audit_noisy_partial_contact():
    base = config(noise=NOISE, n=3)
    for relax in (0.5, 1.0, 3.0, None):
        durations = None if relax is None else long_durations(base, relax)
        rep = cycle_energetics(config(noise=NOISE, durations=durations, n=3))
        assert rep.converged
        scale = max(abs(rep.q_cold), abs(rep.q_hot), abs(rep.w_net))
        assert abs(rep.q_cold + rep.q_hot + rep.w_net) < 1e-9 * scale


def test_report_serialises_to_plain_types():
    d = cycle_energetics(config(noise=NOISE)).as_dict()
    assert all(type(v) in (float, bool, type(None)) for v in d.values())


def test_thermal_x_helper_consistency():
    # Carnot point: equal hbar w / 2 kB T on both baths
    t_c = carnot_limit(WC, WH, O.T_H)
    assert HBAR * WC / (KB * t_c) == pytest.approx(HBAR * WH / (KB * O.T_H), rel=1e-14)
