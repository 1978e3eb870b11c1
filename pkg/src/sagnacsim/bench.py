"""Mach-Zehnder test bench around the loop phase shifter.

The device sits in one arm, a reference transform (default identity) in the
other. Detected power for input state s at drive voltage V:

  I = background
      + 1/4 ||M_dev(V) s + gamma sqrt(b) M_ref s||^2
      + 1/8 (1 - gamma^2) (||M_dev(V) s||^2 + b ||M_ref s||^2)

where gamma in [0, 1] is a scalar mode-overlap factor for the wavefront
match of the two arms (only the overlapping fraction interferes; the
remainder adds incoherently) and b is the arm power imbalance. For the ideal
setup this reduces to (1 + cos(pi V / V_half)) / 2 + background. A diagonal
reference-arm phase diag(1, e^{i delta}) models imperfect polarization
compensation of the external interferometer: it leaves the 0 and 90 degree
fringe visibilities at gamma and pulls the 45 degree visibility down to
gamma |cos(delta / 2)|, the signature of losing the phase relationship
between the two polarization components.

Visibility is (I_on - I_off) / (I_on + I_off) after background subtraction;
the on/off contrast (1 + v) / (1 - v) is reported as a ratio and in dB.
Note that a visibility quoted rounded to three digits implies a contrast
ratio uncertain by more than its own last digit, so tabulated (visibility,
contrast) pairs need not be exactly consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .circuit import DriveCircuit, GateSchedule, Waveform, edge_time_10_90, simulate
from .elements import half_wave_voltage
from .loop import LoopLayout, device_matrix_batch
from .polarization import linear_state

__all__ = [
    "InfiniteContrastError",
    "MeasurementRecord",
    "MzSetup",
    "SwitchingTrace",
    "contrast_from_visibility",
    "fit_mosfet_on_r",
    "fit_reference_imperfections",
    "insertion_loss",
    "mz_intensity",
    "sawtooth_sweep",
    "sweep_curve",
    "switching_trace",
    "table1_report",
    "visibility_from_contrast",
]


class InfiniteContrastError(ValueError):
    """Raised when a visibility of exactly 1 implies infinite contrast."""


@dataclass(frozen=True)
class MzSetup:
    """Interferometer around a loop layout.

    ref_arm: 2x2 transform of the reference arm (identity by default);
    mode_overlap: wavefront-match factor gamma in [0, 1]; background: power
    offset added to every reading; arm_imbalance: reference-to-device arm
    power ratio.
    """

    loop: LoopLayout
    ref_arm: np.ndarray = None
    mode_overlap: float = 1.0
    background: float = 0.0
    arm_imbalance: float = 1.0

    def __post_init__(self):
        ref = np.eye(2, dtype=complex) if self.ref_arm is None else np.asarray(self.ref_arm, complex)
        if ref.shape != (2, 2):
            raise ValueError("ref_arm must be a 2x2 transform")
        ref = ref.copy()
        ref.setflags(write=False)
        object.__setattr__(self, "ref_arm", ref)
        if not 0.0 <= self.mode_overlap <= 1.0:
            raise ValueError(f"mode_overlap must lie in [0, 1], got {self.mode_overlap}")
        if not self.background >= 0.0:
            raise ValueError(f"background must be non-negative, got {self.background}")
        if not (math.isfinite(self.arm_imbalance) and self.arm_imbalance > 0.0):
            raise ValueError(f"arm_imbalance must be positive, got {self.arm_imbalance}")


@dataclass(frozen=True)
class MeasurementRecord:
    """One fringe measurement: background-corrected extrema, visibility,
    contrast, and the fitted half-wave voltage."""

    i_on: float
    i_off: float
    visibility: float
    contrast_ratio: float
    contrast_db: float
    v_half_fit: float

    def __post_init__(self):
        if not self.i_on >= self.i_off >= -1e-12:
            raise ValueError(f"need i_on >= i_off >= 0, got {self.i_on}, {self.i_off}")
        if not -1e-12 <= self.visibility <= 1.0 + 1e-12:
            raise ValueError(f"visibility out of range: {self.visibility}")


def _intensities(setup: MzSetup, state, voltages) -> np.ndarray:
    """Detected power for each voltage; vectorized over the sweep."""
    s = np.asarray(state, dtype=complex)
    voltages = np.atleast_1d(np.asarray(voltages, dtype=float))
    dev = np.einsum("vij,j->vi", device_matrix_batch(setup.loop, voltages), s)
    ref = setup.ref_arm @ s
    gamma = setup.mode_overlap
    scaled_ref = math.sqrt(setup.arm_imbalance) * ref
    coherent = 0.25 * np.sum(np.abs(dev + gamma * scaled_ref[None, :]) ** 2, axis=1)
    incoherent = 0.125 * (1.0 - gamma**2) * (
        np.sum(np.abs(dev) ** 2, axis=1) + float(np.sum(np.abs(scaled_ref) ** 2))
    )
    return setup.background + coherent + incoherent


def mz_intensity(setup: MzSetup, state, drive_voltage: float) -> float:
    """Detected power for a normalized input at one drive voltage."""
    norm2 = float(np.sum(np.abs(np.asarray(state, dtype=complex)) ** 2))
    if abs(norm2 - 1.0) > 1e-6:
        raise ValueError(f"mz_intensity expects a normalized input, got norm^2 = {norm2}")
    return float(_intensities(setup, state, [drive_voltage])[0])


def sweep_curve(setup: MzSetup, state, v_max: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Raw fringe curve of a linear 0..v_max sweep: (voltages, intensities)."""
    voltages = np.linspace(0.0, v_max, n)
    return voltages, _intensities(setup, state, voltages)


def _extrema_spacing(voltages: np.ndarray, values: np.ndarray) -> float:
    """Voltage spacing between adjacent fringe extrema.

    Uses interior extrema (sign changes of the sampled derivative) when at
    least two exist, otherwise the spacing between the global extremes.
    """
    d = np.diff(values)
    signs = np.sign(d)
    # carry the previous nonzero sign through flat spots
    for i in range(1, len(signs)):
        if signs[i] == 0:
            signs[i] = signs[i - 1]
    flips = np.nonzero(signs[1:] * signs[:-1] < 0)[0] + 1
    if len(flips) >= 2:
        return float(np.median(np.diff(voltages[flips])))
    return float(abs(voltages[int(np.argmax(values))] - voltages[int(np.argmin(values))]))


def sawtooth_sweep(setup: MzSetup, state, v_max: float, n: int) -> MeasurementRecord:
    """Fringe measurement from a linear 0..v_max voltage sweep.

    Requires v_max >= 1.5x the crystal's nominal half-wave voltage and
    n >= 64 samples so both fringe extrema are contained. The background is
    subtracted before computing visibility; v_half_fit is the voltage
    spacing between adjacent extrema.
    """
    nominal = half_wave_voltage(setup.loop.crystal)
    if v_max < 1.5 * nominal:
        raise ValueError(
            f"sweep range {v_max:g} V too short; need at least 1.5 * V_half = {1.5 * nominal:g} V"
        )
    if n < 64:
        raise ValueError(f"need at least 64 sweep samples, got {n}")
    voltages = np.linspace(0.0, v_max, n)
    corrected = _intensities(setup, state, voltages) - setup.background
    i_on = float(np.max(corrected))
    i_off = float(np.min(corrected))
    if i_on - i_off <= 1e-15 * max(i_on, 1.0):
        raise ValueError("sweep too short: no fringe extrema found")
    visibility = (i_on - i_off) / (i_on + i_off)
    if i_off > 0.0:
        ratio = i_on / i_off
        db = 10.0 * math.log10(ratio)
    else:
        ratio = math.inf
        db = math.inf
    return MeasurementRecord(
        i_on=i_on,
        i_off=i_off,
        visibility=visibility,
        contrast_ratio=ratio,
        contrast_db=db,
        v_half_fit=_extrema_spacing(voltages, corrected),
    )


def contrast_from_visibility(visibility: float) -> tuple[float, float]:
    """On/off contrast (ratio, dB) implied by a fringe visibility.

    ratio = (1 + v) / (1 - v), monotone increasing on [0, 1). A visibility
    of exactly 1 is signaled distinctly as InfiniteContrastError.
    """
    if visibility == 1.0:
        raise InfiniteContrastError("infinite contrast: visibility is exactly 1")
    if not 0.0 <= visibility < 1.0:
        raise ValueError(f"visibility must lie in [0, 1), got {visibility}")
    ratio = (1.0 + visibility) / (1.0 - visibility)
    return ratio, 10.0 * math.log10(ratio)


def visibility_from_contrast(ratio: float) -> float:
    """Inverse of ``contrast_from_visibility`` on ratios above 1."""
    if not ratio >= 1.0:
        raise ValueError(f"contrast ratio must be at least 1, got {ratio}")
    return (ratio - 1.0) / (ratio + 1.0)


def insertion_loss(transmissions: Sequence[float]) -> float:
    """Total insertion loss in dB of a chain of power transmissions."""
    total = 1.0
    for t in transmissions:
        if not 0.0 < t <= 1.0:
            raise ValueError(f"transmissions must lie in (0, 1], got {t}")
        total *= t
    return -10.0 * math.log10(total)


@dataclass(frozen=True)
class SwitchingTrace:
    """Time-domain switching result: drive voltage and detected intensity on
    a shared grid, plus the optical 10-90 transition time."""

    voltage: Waveform
    intensity: Waveform
    optical_10_90: float


def switching_trace(
    setup: MzSetup,
    state,
    circuit: DriveCircuit,
    gates: GateSchedule,
    t_end: float,
    dt: float,
) -> SwitchingTrace:
    """Drive the modulator and record the interferometer output over time.

    The voltage waveform from the circuit simulation is mapped pointwise
    through the interferometer response; the optical switching time is the
    first 10-90 transition of the intensity (a rising edge when the crystal
    discharges from the half-wave voltage toward the bright fringe).
    """
    voltage = simulate(circuit, gates, t_end, dt, v_start=circuit.supply_voltage)
    intensity = Waveform(voltage.t0, voltage.dt, _intensities(setup, state, voltage.samples))
    # Direction of the first switching edge, judged over the first conduction
    # window (the later recharge swings the trace back the other way).
    window_end = gates.on_times[0] + circuit.gate_delay + gates.hold_duration
    k = int(np.searchsorted(intensity.times, min(window_end, t_end)))
    rising = intensity.samples[max(k - 1, 1)] >= intensity.samples[0]
    edge = edge_time_10_90(intensity, falling=not rising)
    return SwitchingTrace(voltage=voltage, intensity=intensity, optical_10_90=edge)


def fit_mosfet_on_r(
    setup: MzSetup,
    state,
    circuit: DriveCircuit,
    gates: GateSchedule,
    t_end: float,
    dt: float,
    target_edge: float,
    bracket: tuple[float, float] = (5.0, 150.0),
) -> float:
    """MOSFET on-resistance that reproduces a target optical 10-90 time.

    One-dimensional root find; the optical edge grows monotonically with the
    discharge time constant R_on * C. The bracket must keep R_on * C / 10
    above the sample step and R_on below 1% of the recharge resistor.
    """

    def edge_error(r_on: float) -> float:
        trial = replace(circuit, mosfet_on_r=r_on)
        return switching_trace(setup, state, trial, gates, t_end, dt).optical_10_90 - target_edge

    return float(brentq(edge_error, bracket[0], bracket[1], xtol=1e-3))


def fit_reference_imperfections(
    vis_0deg: float, vis_45deg: float, vis_90deg: float
) -> tuple[float, float]:
    """Fit (gamma, delta) of the imperfection model to three visibilities.

    The 0 and 90 degree sweeps both read gamma, so gamma is their mean; the
    45 degree deficit fixes the reference-arm phase via
    vis_45 = gamma |cos(delta / 2)|.
    """
    gamma = 0.5 * (vis_0deg + vis_90deg)
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"fitted mode overlap out of range: {gamma}")
    ratio = vis_45deg / gamma
    if ratio > 1.0:
        raise ValueError("45 degree visibility exceeds the 0/90 degree level; model cannot fit")
    delta = 2.0 * math.acos(ratio)
    return gamma, delta


def table1_report(
    setup: MzSetup,
    input_angles: Sequence[float] = (0.0, math.pi / 4, math.pi / 2),
    v_max: float | None = None,
    n: int = 2001,
) -> list[MeasurementRecord]:
    """Fringe sweep per linear input polarization angle.

    The headline device characterization: one record per input angle with
    fitted half-wave voltage, visibility, and contrast.
    """
    if v_max is None:
        v_max = 2.0 * half_wave_voltage(setup.loop.crystal)
    return [sawtooth_sweep(setup, linear_state(a), v_max, n) for a in input_angles]
