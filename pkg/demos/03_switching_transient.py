#!/usr/bin/env python3
"""Walkthrough: nanosecond switching driven by the MOSFET discharge.

Simulates the driver (MOSFET pulls the crystal from the half-wave voltage
toward ground through its on-resistance; a 20 kOhm resistor recharges it),
maps the voltage through the interferometer, and extracts the optical 10-90
switching time. The on-resistance is then fitted so the optical edge lands
on a 1.6 ns target; writes the fitted trace to switching_trace.csv.
"""

import csv

from sagnacsim import (
    CrystalSpec,
    DriveCircuit,
    GateSchedule,
    MzSetup,
    build_default_loop,
    fit_mosfet_on_r,
    half_wave_voltage,
    linear_state,
    switching_trace,
)

crystal = CrystalSpec(20e-3, 1e-3, 632.8e-9, 2.20, 30.8e-12)
v_half = half_wave_voltage(crystal)
setup = MzSetup(loop=build_default_loop(crystal))
state = linear_state(0.0)

circuit = DriveCircuit(
    supply_voltage=v_half,
    recharge_r=20e3,       # recharge resistor
    total_c=50e-12,        # lumped node capacitance (crystal + parasitics)
    mosfet_on_r=25.0,      # first guess, refitted below
    gate_rise_time=400e-12,
)
gates = GateSchedule(on_times=(2e-9,), hold_duration=30e-9)
t_end, dt = 40e-9, 10e-12

print(f"time constants: discharge {circuit.tau_discharge * 1e9:.2f} ns, "
      f"recharge {circuit.tau_recharge * 1e6:.2f} us")

result = switching_trace(setup, state, circuit, gates, t_end, dt)
print(f"optical 10-90 with R_on = 25 ohm: {result.optical_10_90 * 1e9:.3f} ns")

target = 1.6e-9
fitted = fit_mosfet_on_r(setup, state, circuit, gates, t_end, dt, target)
print(f"fitted R_on for a {target * 1e9:.1f} ns edge: {fitted:.1f} ohm")

fitted_circuit = DriveCircuit(v_half, 20e3, 50e-12, fitted, 400e-12)
result = switching_trace(setup, state, fitted_circuit, gates, t_end, dt)
print(f"optical 10-90 after the fit: {result.optical_10_90 * 1e9:.3f} ns")
print(f"voltage span: {result.voltage.samples.max():.1f} V down to "
      f"{result.voltage.samples.min():.2f} V")

with open("switching_trace.csv", "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["t_s", "v_V", "intensity"])
    for t, v, i in zip(result.voltage.times, result.voltage.samples, result.intensity.samples):
        writer.writerow([f"{t:.12g}", f"{v:.12g}", f"{i:.12g}"])
print("wrote switching_trace.csv")
