"""Transient simulation of the modulator driver: a MOSFET that discharges the
crystal capacitance through its on-resistance and a supply resistor that
recharges it toward the half-wave voltage.

The node equation is C dV/dt = (supply - V) / R - V * G(t) with the MOSFET
conductance G ramping linearly from 0 to 1/R_on over the gate rise time and
constant afterwards. Every segment is linear, so the waveform is evaluated
piecewise analytically with no stepping error:

  gate off:   V relaxes toward the supply with tau_r = R * C
  gate on:    V relaxes toward the divider supply * R_on / (R_on + R)
              with tau_d = (R_on || R) * C
  gate ramp:  integrating-factor solution; the exponential-of-quadratic
              integral is expressed through the Dawson function, which keeps
              the evaluation stable for arbitrarily long ramps.

The discharge is fast (tau_d ~ ns) while the recharge is slow (tau_r ~ us),
which is what limits the repetition rate of the switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import dawsn

__all__ = [
    "DriveCircuit",
    "GateSchedule",
    "Waveform",
    "edge_time_10_90",
    "recovery_fraction",
    "simulate",
]


@dataclass(frozen=True)
class DriveCircuit:
    """Driver parameters. ``supply_voltage`` is nominally the half-wave
    voltage; ``mosfet_on_r`` must be far below ``recharge_r`` (ratio < 0.01)
    or the on state cannot hold the crystal near 0 V."""

    supply_voltage: float
    recharge_r: float
    total_c: float
    mosfet_on_r: float
    gate_rise_time: float
    gate_delay: float = 0.0

    def __post_init__(self):
        for name in ("supply_voltage", "recharge_r", "total_c", "mosfet_on_r", "gate_rise_time"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"DriveCircuit.{name} must be finite and positive, got {value}")
        if not (math.isfinite(self.gate_delay) and self.gate_delay >= 0.0):
            raise ValueError(f"gate delay must be finite and non-negative, got {self.gate_delay}")
        if self.mosfet_on_r / self.recharge_r >= 0.01:
            raise ValueError(
                "mosfet_on_r must be below 1% of recharge_r "
                f"(got ratio {self.mosfet_on_r / self.recharge_r:.3g})"
            )

    @property
    def tau_recharge(self) -> float:
        return self.recharge_r * self.total_c

    @property
    def tau_discharge(self) -> float:
        parallel = self.mosfet_on_r * self.recharge_r / (self.mosfet_on_r + self.recharge_r)
        return parallel * self.total_c

    @property
    def on_state_voltage(self) -> float:
        """Divider voltage the crystal settles to while the MOSFET conducts."""
        return self.supply_voltage * self.mosfet_on_r / (self.mosfet_on_r + self.recharge_r)


@dataclass(frozen=True)
class GateSchedule:
    """Gate pulse train: conduction starts ``gate_delay`` after each entry of
    ``on_times`` and lasts ``hold_duration`` (which must cover the rise)."""

    on_times: tuple
    hold_duration: float

    def __post_init__(self):
        object.__setattr__(self, "on_times", tuple(float(t) for t in self.on_times))
        if not self.on_times:
            raise ValueError("GateSchedule needs at least one on time")
        if not (math.isfinite(self.hold_duration) and self.hold_duration > 0.0):
            raise ValueError(f"hold duration must be positive, got {self.hold_duration}")
        for a, b in zip(self.on_times, self.on_times[1:]):
            if b <= a:
                raise ValueError("on_times must be strictly increasing")
            if b <= a + self.hold_duration:
                raise ValueError("gate pulses overlap after adding hold_duration")

    @classmethod
    def periodic(cls, repetition_rate: float, count: int, hold_duration: float, start: float = 0.0):
        period = 1.0 / repetition_rate
        return cls(tuple(start + i * period for i in range(count)), hold_duration)


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled trace (voltage or intensity) starting at ``t0``."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("waveform samples must be finite")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))


def _off_segment(v0: float, u: np.ndarray, circuit: DriveCircuit) -> np.ndarray:
    sup = circuit.supply_voltage
    return sup + (v0 - sup) * np.exp(-u / circuit.tau_recharge)


def _on_segment(v0: float, u: np.ndarray, circuit: DriveCircuit) -> np.ndarray:
    target = circuit.on_state_voltage
    return target + (v0 - target) * np.exp(-u / circuit.tau_discharge)


def _ramp_segment(v0: float, u: np.ndarray, circuit: DriveCircuit) -> np.ndarray:
    # dV/du = (supply/R - V (1/R + u / (R_on t_rise))) / C
    # V(u) = e^{-B} v0 + supply (p / sqrt(q)) (dawsn(z1) - e^{-B} dawsn(z0))
    # with B = p u + q u^2, z0 = p / (2 sqrt(q)), z1 = z0 + sqrt(q) u.
    p = 1.0 / (circuit.recharge_r * circuit.total_c)
    q = 1.0 / (2.0 * circuit.total_c * circuit.mosfet_on_r * circuit.gate_rise_time)
    sq = math.sqrt(q)
    z0 = p / (2.0 * sq)
    z1 = z0 + sq * u
    damp = np.exp(-(p * u + q * u**2))
    return damp * v0 + circuit.supply_voltage * (p / sq) * (dawsn(z1) - damp * dawsn(z0))


def simulate(
    circuit: DriveCircuit,
    gates: GateSchedule,
    t_end: float,
    dt: float,
    v_start: float = 0.0,
) -> Waveform:
    """Voltage across the modulator on a uniform grid from 0 to ``t_end``.

    ``dt`` must resolve the fast discharge edge: dt < R_on * C / 10. The
    initial voltage defaults to a fully discharged crystal.
    """
    if dt >= circuit.mosfet_on_r * circuit.total_c / 10.0:
        raise ValueError(
            f"dt = {dt:g} too coarse to resolve the discharge; "
            f"need dt < mosfet_on_r * total_c / 10 = {circuit.mosfet_on_r * circuit.total_c / 10.0:g}"
        )
    if gates.hold_duration <= circuit.gate_rise_time:
        raise ValueError("hold_duration must exceed the gate rise time")
    if not (-0.01 * circuit.supply_voltage <= v_start <= 1.01 * circuit.supply_voltage):
        raise ValueError("v_start outside the physical voltage range")

    # Segment boundaries: (start, kind); kinds alternate off / ramp / on.
    bounds: list[tuple[float, str]] = [(0.0, "off")]
    for on_time in gates.on_times:
        s = on_time + circuit.gate_delay
        if s >= t_end:
            break
        bounds.append((s, "ramp"))
        bounds.append((min(s + circuit.gate_rise_time, t_end), "on"))
        bounds.append((min(s + gates.hold_duration, t_end), "off"))
    bounds = [(t, kind) for t, kind in bounds if t < t_end]

    times = np.arange(math.floor(t_end / dt) + 1) * dt
    samples = np.empty_like(times)
    evaluators = {"off": _off_segment, "on": _on_segment, "ramp": _ramp_segment}

    v0 = float(v_start)
    for (start, kind), nxt in zip(bounds, [b[0] for b in bounds[1:]] + [np.inf]):
        seg_end = min(nxt, t_end + dt)
        lo = int(np.searchsorted(times, start, side="left"))
        hi = int(np.searchsorted(times, seg_end, side="left"))
        evaluate = evaluators[kind]
        if hi > lo:
            samples[lo:hi] = evaluate(v0, times[lo:hi] - start, circuit)
        if nxt is not np.inf and math.isfinite(nxt):
            v0 = float(evaluate(v0, np.array([nxt - start]), circuit)[0])
    return Waveform(0.0, dt, samples)


def recovery_fraction(circuit: DriveCircuit, repetition_rate: float, hold_duration: float) -> float:
    """Steady-state pre-pulse voltage as a fraction of the supply.

    Closed form 1 - exp(-t_recharge / tau_r) with t_recharge = period - hold,
    assuming each pulse discharges the crystal fully; the divider residual
    shifts this by less than mosfet_on_r / recharge_r. Cross-validated
    against ``simulate`` in the test suite.
    """
    if not (math.isfinite(repetition_rate) and repetition_rate > 0.0):
        raise ValueError(f"repetition rate must be positive, got {repetition_rate}")
    if hold_duration < 0.0:
        raise ValueError("hold duration must be non-negative")
    period = 1.0 / repetition_rate
    if period <= hold_duration:
        raise ValueError(
            f"period {period:g} s must exceed the hold duration {hold_duration:g} s"
        )
    return 1.0 - math.exp(-(period - hold_duration) / circuit.tau_recharge)


def _interpolate_crossing(times: np.ndarray, values: np.ndarray, k: int, level: float) -> float:
    """Linear interpolation of the crossing time between samples k-1 and k."""
    v0, v1 = values[k - 1], values[k]
    if v1 == v0:
        return float(times[k])
    frac = (level - v0) / (v1 - v0)
    return float(times[k - 1] + frac * (times[k] - times[k - 1]))


def edge_time_10_90(waveform: Waveform, falling: bool) -> float:
    """Duration of the first 10%-to-90% transition of a monotone edge.

    Levels are taken at 10% and 90% of the waveform's full span. For a
    falling edge the 90% level must be crossed first; thresholds are located
    by linear interpolation between the bracketing samples. Raises
    ValueError("no edge found") when the waveform never spans both levels.
    """
    values = waveform.samples
    times = waveform.times
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi <= lo:
        raise ValueError("no edge found: waveform is constant")
    level_10 = lo + 0.1 * (hi - lo)
    level_90 = lo + 0.9 * (hi - lo)
    first, second = (level_90, level_10) if falling else (level_10, level_90)

    def first_crossing(start: int, level: float) -> tuple[int, float] | None:
        if falling:
            below = values[start:] < level
        else:
            below = values[start:] > level
        hits = np.nonzero(below)[0]
        for offset in hits:
            k = start + int(offset)
            if k == 0:
                continue
            prev, cur = values[k - 1], values[k]
            if (prev >= level > cur) if falling else (prev <= level < cur):
                return k, _interpolate_crossing(times, values, k, level)
        return None

    a = first_crossing(0, first)
    if a is None:
        raise ValueError("no edge found: first threshold never crossed")
    b = first_crossing(a[0], second)
    if b is None:
        raise ValueError("no edge found: second threshold never crossed")
    return b[1] - a[1]
