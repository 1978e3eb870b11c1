#!/usr/bin/env python3
"""Walkthrough: fringe visibility and on/off contrast per input polarization.

Places the loop in a Mach-Zehnder interferometer, sweeps a sawtooth voltage,
and reports visibility and contrast for 0, 45, and 90 degree inputs. The
imperfection model has two knobs: a scalar mode-overlap factor gamma for the
wavefront match and a diagonal phase delta in the reference arm for the
polarization compensation. Both are fitted here to a target visibility
triple; the 45 degree row is the stringent test, since it is the one that
feels any loss of phase relationship between the H and V components.
"""

import csv
import math

import numpy as np

from sagnacsim import (
    CrystalSpec,
    MzSetup,
    build_default_loop,
    fit_reference_imperfections,
    half_wave_voltage,
    linear_state,
    sweep_curve,
    table1_report,
)

crystal = CrystalSpec(20e-3, 1e-3, 632.8e-9, 2.20, 30.8e-12)
layout = build_default_loop(crystal)
print(f"nominal half-wave voltage: {half_wave_voltage(crystal):.1f} V")

print("\nideal bench first: perfect overlap, identity reference arm")
for angle_deg, rec in zip((0, 45, 90), table1_report(MzSetup(loop=layout))):
    print(
        f"  {angle_deg:2d} deg: V_half fit {rec.v_half_fit:6.2f} V, "
        f"visibility {rec.visibility:.4f}"
    )

targets = (0.961, 0.933, 0.947)
gamma, delta = fit_reference_imperfections(*targets)
print(
    f"\nfitting the imperfection model to visibilities {targets}:"
    f"\n  mode overlap gamma = {gamma:.4f}"
    f"\n  reference-arm diagonal phase delta = {math.degrees(delta):.2f} deg"
)

setup = MzSetup(
    loop=layout,
    ref_arm=np.diag([1.0, np.exp(1j * delta)]),
    mode_overlap=gamma,
)
records = table1_report(setup)
print("\npolarization | V_half fit (V) | visibility | contrast (dB)")
for angle_deg, rec in zip((0, 45, 90), records):
    print(
        f"  {angle_deg:10d} | {rec.v_half_fit:14.2f} | {rec.visibility:10.4f} | "
        f"{rec.contrast_ratio:6.1f} ({rec.contrast_db:4.1f})"
    )
print("\nthe 45 degree row sits strictly below the 0/90 rows, as it must when")
print("the deficit comes from the relative phase between the components.")

voltages, intensities = sweep_curve(
    setup, linear_state(math.pi / 4), 2 * half_wave_voltage(crystal), 1001
)
with open("sweep_45deg.csv", "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["voltage_V", "intensity"])
    for v, i in zip(voltages, intensities):
        writer.writerow([f"{v:.12g}", f"{i:.12g}"])
print("wrote the raw 45 degree fringe to sweep_45deg.csv")
