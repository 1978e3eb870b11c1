import math

import numpy as np
import pytest

from sagnacsim import (
    DriveCircuit,
    GateSchedule,
    Waveform,
    edge_time_10_90,
    recovery_fraction,
    simulate,
)


def reference_circuit(mosfet_on_r=25.0, gate_rise_time=400e-12, supply=96.476):
    return DriveCircuit(
        supply_voltage=supply,
        recharge_r=20e3,
        total_c=50e-12,
        mosfet_on_r=mosfet_on_r,
        gate_rise_time=gate_rise_time,
        gate_delay=0.0,
    )


class TestDriveCircuit:
    def test_time_constants(self):
        c = reference_circuit()
        assert c.tau_recharge == pytest.approx(1e-6)
        assert c.tau_discharge == pytest.approx(25.0 * 20e3 / (25.0 + 20e3) * 50e-12)

    def test_on_resistance_ratio_enforced(self):
        with pytest.raises(ValueError, match="1%"):
            reference_circuit(mosfet_on_r=250.0)

    def test_positive_fields(self):
        with pytest.raises(ValueError):
            DriveCircuit(96.0, 20e3, -50e-12, 25.0, 400e-12)


class TestGateSchedule:
    def test_must_increase(self):
        with pytest.raises(ValueError, match="increasing"):
            GateSchedule((1e-6, 1e-6), 1e-7)

    def test_no_overlap(self):
        with pytest.raises(ValueError, match="overlap"):
            GateSchedule((0.0, 0.5e-6), 1e-6)

    def test_periodic_builder(self):
        g = GateSchedule.periodic(100e3, 3, 1e-6, start=2e-6)
        np.testing.assert_allclose(g.on_times, (2e-6, 12e-6, 22e-6), rtol=1e-12)


class TestSimulate:
    def test_dt_precondition(self):
        c = reference_circuit()
        with pytest.raises(ValueError, match="too coarse"):
            simulate(c, GateSchedule((1e-6,), 1e-7), 2e-6, 1e-9)

    def test_recharge_matches_closed_form(self):
        c = reference_circuit()
        gates = GateSchedule((1.0,), 1e-6)  # gate far beyond the window
        w = simulate(c, gates, 5e-6, 1e-10, v_start=0.0)
        expected = c.supply_voltage * (1.0 - np.exp(-w.times / c.tau_recharge))
        np.testing.assert_allclose(w.samples, expected, rtol=1e-12, atol=1e-12)

    def test_five_tau_point(self):
        c = reference_circuit()
        w = simulate(c, GateSchedule((1.0,), 1e-6), 6e-6, 1e-10, v_start=0.0)
        k = int(round(5e-6 / 1e-10))
        assert w.samples[k] / c.supply_voltage == pytest.approx(1 - math.exp(-5), rel=1e-10)

    def test_discharge_matches_closed_form_for_fast_ramp(self):
        # With a negligible gate rise time the discharge is one exponential
        # toward the divider voltage with tau_d.
        c = reference_circuit(gate_rise_time=1e-12)
        gates = GateSchedule((0.0,), 40e-9)
        w = simulate(c, gates, 30e-9, 10e-12, v_start=c.supply_voltage)
        v_inf = c.on_state_voltage
        expected = v_inf + (c.supply_voltage - v_inf) * np.exp(-w.times / c.tau_discharge)
        assert np.max(np.abs(w.samples - expected)) / c.supply_voltage < 1e-3

    def test_voltage_fall_10_90(self):
        c = reference_circuit(gate_rise_time=1e-12)
        w = simulate(c, GateSchedule((2e-9,), 40e-9), 40e-9, 10e-12, v_start=c.supply_voltage)
        fall = edge_time_10_90(w, falling=True)
        assert fall == pytest.approx(math.log(9.0) * c.tau_discharge, rel=0.01)

    def test_monotone_segments(self):
        c = reference_circuit()
        gates = GateSchedule((2e-9,), 20e-9)
        w = simulate(c, gates, 60e-9, 10e-12, v_start=c.supply_voltage)
        t = w.times
        on_window = (t >= 2e-9) & (t < 2e-9 + 20e-9)
        assert np.all(np.diff(w.samples[on_window]) <= 1e-12)
        off_window = t >= 2e-9 + 20e-9 + 1e-10
        assert np.all(np.diff(w.samples[off_window]) >= -1e-12)

    def test_steady_state_periodicity(self):
        c = reference_circuit()
        rate = 200e3
        gates = GateSchedule.periodic(rate, 25, 1e-6)
        dt = 5e-11
        w = simulate(c, gates, 25 / rate, dt, v_start=c.supply_voltage)
        per = int(round(1 / rate / dt))
        a = w.samples[22 * per : 23 * per]
        b = w.samples[23 * per : 24 * per]
        assert np.max(np.abs(a - b)) < 1e-6 * c.supply_voltage

    def test_waveform_stays_in_range(self):
        c = reference_circuit()
        w = simulate(c, GateSchedule((5e-9,), 30e-9), 100e-9, 10e-12, v_start=c.supply_voltage)
        assert np.all(w.samples >= -0.01 * c.supply_voltage)
        assert np.all(w.samples <= 1.01 * c.supply_voltage)

    def test_energy_balance_during_discharge(self):
        # MOSFET dissipation over one discharge approximates the capacitor
        # energy drop; the recharge resistor contributes ~tau_d / tau_r.
        c = reference_circuit()
        gates = GateSchedule((0.0,), 40e-9)
        dt = 1e-12
        w = simulate(c, gates, 40e-9, dt, v_start=c.supply_voltage)
        t = w.times
        conductance = np.where(
            t < c.gate_rise_time,
            t / (c.gate_rise_time * c.mosfet_on_r),
            1.0 / c.mosfet_on_r,
        )
        dissipated = np.trapezoid(w.samples**2 * conductance, dx=dt)
        cap_drop = 0.5 * c.total_c * (w.samples[0] ** 2 - w.samples[-1] ** 2)
        assert dissipated == pytest.approx(cap_drop, rel=0.01)


class TestRecoveryFraction:
    def test_100khz(self):
        c = reference_circuit()
        assert recovery_fraction(c, 100e3, 0.0) == pytest.approx(1 - math.exp(-10), abs=1e-12)

    def test_slow_rate_limit(self):
        c = reference_circuit()
        assert recovery_fraction(c, 1e-3, 0.0) == pytest.approx(1.0)

    def test_ninety_percent_period(self):
        c = reference_circuit()
        hold = 1e-6
        period = math.log(10.0) * c.tau_recharge + hold
        assert recovery_fraction(c, 1.0 / period, hold) == pytest.approx(0.90, abs=1e-12)

    def test_period_must_exceed_hold(self):
        c = reference_circuit()
        with pytest.raises(ValueError, match="hold"):
            recovery_fraction(c, 1e6, 2e-6)

    def test_cross_validates_against_simulate(self):
        c = reference_circuit()
        rate, hold = 150e3, 20e-9
        gates = GateSchedule.periodic(rate, 25, hold)
        dt = 2e-11
        w = simulate(c, gates, 24.999 / rate, dt, v_start=c.supply_voltage)
        pre_pulse = w.samples[int(round(24 / rate / dt)) - 2]
        closed = recovery_fraction(c, rate, hold)
        assert pre_pulse / c.supply_voltage == pytest.approx(closed, abs=1e-3)


class TestEdgeTime:
    def test_exponential_decay(self):
        tau = 1e-9
        t = np.arange(0, 10e-9, tau / 100)
        w = Waveform(0.0, tau / 100, np.exp(-t / tau))
        assert edge_time_10_90(w, falling=True) == pytest.approx(math.log(9.0) * tau, rel=0.01)

    def test_linear_ramp(self):
        n = 1001
        w = Waveform(0.0, 1e-3, np.linspace(0.0, 1.0, n))
        total = (n - 1) * 1e-3
        assert edge_time_10_90(w, falling=False) == pytest.approx(0.8 * total, rel=1e-6)

    def test_constant_rejected(self):
        with pytest.raises(ValueError, match="no edge found"):
            edge_time_10_90(Waveform(0.0, 1e-3, np.ones(100)), falling=True)

    def test_wrong_direction_rejected(self):
        w = Waveform(0.0, 1e-3, np.linspace(0.0, 1.0, 100))
        with pytest.raises(ValueError, match="no edge found"):
            edge_time_10_90(w, falling=True)

    def test_rising_exponential(self):
        tau = 2e-9
        t = np.arange(0, 20e-9, tau / 200)
        w = Waveform(0.0, tau / 200, 1.0 - np.exp(-t / tau))
        assert edge_time_10_90(w, falling=False) == pytest.approx(math.log(9.0) * tau, rel=0.01)


class TestWaveform:
    def test_dt_positive(self):
        with pytest.raises(ValueError):
            Waveform(0.0, 0.0, np.zeros(4))

    def test_finite_samples(self):
        with pytest.raises(ValueError):
            Waveform(0.0, 1e-9, np.array([0.0, np.nan]))

    def test_times(self):
        w = Waveform(1.0, 0.5, np.zeros(3))
        np.testing.assert_allclose(w.times, [1.0, 1.5, 2.0])
