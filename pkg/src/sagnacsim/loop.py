"""Sagnac-loop topology: split at the PBS, counter-propagate, recombine.

The clockwise beam is the PBS-transmitted (H) component and traverses
``cw_path`` in list order with forward matrices; the counter-clockwise beam
is the reflected (V) component and traverses the same elements in reverse
with backward matrices. The default layout places a half-wave plate /
Faraday rotator pair on each side of the modulator crystal, oriented so the
clockwise beam meets the wave plate first on both sides. Each such pair
exchanges the H and V lines for the wave-plate-first direction and preserves
them for the rotator-first direction, so the clockwise beam is rotated by 90
degrees twice (H at the ports, V at the crystal) while the counter-clockwise
beam stays V throughout. Both components then pick up the same modulator
phase pi * V / V_half and leave through the exit port carrying it as a pure
global phase.

The modulator sits at the midpoint index of the path; that placement matters
for the timing symmetry of the two beams in the physical device, not for the
static matrices computed here, and is therefore recommended but not enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .elements import (
    CrystalSpec,
    Eom,
    FaradayRotator,
    HalfWavePlate,
    Pbs,
    element_matrix,
    half_wave_voltage,
    pbs_combine_ports,
    pbs_split,
)
from .polarization import H, V, global_phase_decompose, scaled_identity_infidelity

__all__ = [
    "LoopLayout",
    "ScanPoint",
    "build_default_loop",
    "device_matrix",
    "device_matrix_batch",
    "independence_scan",
    "trace",
    "trace_ports",
]


@dataclass(frozen=True)
class LoopLayout:
    """One shared element list read in both directions.

    ``cw_path`` as seen by the clockwise beam; the counter-clockwise beam
    reads it in reverse with backward matrices. ``output_port`` selects which
    recombined output ``trace`` returns: "B", the exit port distinct from the
    input (the default), or "A", the input-side return port.
    """

    pbs: Pbs
    cw_path: tuple
    crystal: CrystalSpec
    output_port: str = "B"

    def __post_init__(self):
        object.__setattr__(self, "cw_path", tuple(self.cw_path))
        eoms = [e for e in self.cw_path if isinstance(e, Eom)]
        if len(eoms) != 1:
            raise ValueError(f"cw_path must contain exactly one Eom, found {len(eoms)}")
        if eoms[0].crystal != self.crystal:
            raise ValueError("the Eom in cw_path must use the layout's crystal")
        if self.output_port not in ("A", "B"):
            raise ValueError(f"output_port must be 'A' or 'B', got {self.output_port!r}")

    @property
    def eom(self) -> Eom:
        return next(e for e in self.cw_path if isinstance(e, Eom))

    @property
    def eom_index(self) -> int:
        return next(i for i, e in enumerate(self.cw_path) if isinstance(e, Eom))


def build_default_loop(
    crystal: CrystalSpec,
    fr_angle: float = math.pi / 4,
    hwp_angle: float = math.pi / 8,
    pbs: Pbs | None = None,
    rotated_beam: str = "cw",
    eom_residual_phase: float = 0.0,
) -> LoopLayout:
    """Five-element loop with the modulator at the center (index 2).

    ``rotated_beam`` picks which counter-propagating component gets the
    double 90-degree rotation: "cw" (default) puts the wave plates ahead of
    the rotators for the clockwise beam and drives the crystal's V axis;
    "ccw" mirrors the pairs and drives H. The defaults fr_angle = 45 deg and
    hwp_angle = 22.5 deg realize the full rotation; other angle pairs are
    accepted and simply degrade the device, which is useful in negative
    tests.
    """
    if rotated_beam not in ("cw", "ccw"):
        raise ValueError(f"rotated_beam must be 'cw' or 'ccw', got {rotated_beam!r}")
    hwp = HalfWavePlate(hwp_angle)
    fr = FaradayRotator(fr_angle)
    if rotated_beam == "cw":
        eom = Eom(crystal, axis="V", residual_orthogonal_phase=eom_residual_phase)
        path = (hwp, fr, eom, hwp, fr)
    else:
        eom = Eom(crystal, axis="H", residual_orthogonal_phase=eom_residual_phase)
        path = (fr, hwp, eom, fr, hwp)
    return LoopLayout(pbs=pbs if pbs is not None else Pbs(), cw_path=path, crystal=crystal)


def _path_matrix(
    layout: LoopLayout,
    direction: str,
    drive_voltage: float,
    eom_override: np.ndarray | None = None,
) -> np.ndarray:
    """Composite matrix of the loop elements for one traversal direction."""
    elements = layout.cw_path if direction == "forward" else tuple(reversed(layout.cw_path))
    m = np.eye(2, dtype=complex)
    for el in elements:
        if eom_override is not None and isinstance(el, Eom):
            m = eom_override @ m
        else:
            m = element_matrix(el, direction, drive_voltage) @ m
    return m


def trace_ports(
    layout: LoopLayout,
    state,
    drive_voltage: float,
    _eom_override: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Propagate ``state`` through the loop; return (port B, port A) states.

    Port B is the exit port distinct from the input; for an ideal layout all
    light leaves there and the port A amplitude is exactly zero.
    """
    transmitted, reflected = pbs_split(layout.pbs, state)
    cw_out = _path_matrix(layout, "forward", drive_voltage, _eom_override) @ transmitted
    ccw_out = _path_matrix(layout, "backward", drive_voltage, _eom_override) @ reflected
    return pbs_combine_ports(layout.pbs, cw_out, ccw_out)


def trace(layout: LoopLayout, state, drive_voltage: float) -> np.ndarray:
    """State at the layout's output port for a normalized input state."""
    norm2 = float(np.sum(np.abs(np.asarray(state, dtype=complex)) ** 2))
    if abs(norm2 - 1.0) > 1e-6:
        raise ValueError(f"trace expects a normalized input state, got norm^2 = {norm2}")
    port_b, port_a = trace_ports(layout, state, drive_voltage)
    return port_b if layout.output_port == "B" else port_a


def device_matrix(layout: LoopLayout, drive_voltage: float) -> np.ndarray:
    """Effective 2x2 transfer matrix of the loop at one drive voltage.

    Columns are the traced outputs for H and V inputs; by linearity the trace
    of any superposition equals this matrix applied to it.
    """
    return np.column_stack(
        [trace(layout, H, drive_voltage), trace(layout, V, drive_voltage)]
    )


def _indicator_parts(layout: LoopLayout) -> tuple[np.ndarray, np.ndarray]:
    """Device matrices with the Eom replaced by the H / V axis projectors.

    Because the modulator appears exactly once on each beam's path, the full
    device matrix is linear in the two Eom phase factors:
    M(V) = e^{i r V} * P_residual_axis + e^{i pi V / V_half} * P_driven_axis.
    """
    dh = np.diag([1.0 + 0.0j, 0.0j])
    dv = np.diag([0.0j, 1.0 + 0.0j])
    parts = []
    for ind in (dh, dv):
        cols = [trace_ports(layout, basis, 0.0, _eom_override=ind)[0] for basis in (H, V)]
        parts.append(np.column_stack(cols))
    return parts[0], parts[1]


def device_matrix_batch(layout: LoopLayout, voltages) -> np.ndarray:
    """Device matrices for an array of voltages, shape (n, 2, 2).

    Exactly equal to stacking ``device_matrix`` per voltage, but computed
    from the two Eom-indicator parts so that large sweeps cost two traces
    plus vectorized phase factors.
    """
    voltages = np.asarray(voltages, dtype=float)
    part_h, part_v = _indicator_parts(layout)
    eom = layout.eom
    driven = np.exp(1j * math.pi * voltages / half_wave_voltage(eom.crystal))
    residual = np.exp(1j * eom.residual_orthogonal_phase * voltages)
    if eom.axis == "V":
        factor_h, factor_v = residual, driven
    else:
        factor_h, factor_v = driven, residual
    return (
        factor_h[..., None, None] * part_h[None, :, :]
        + factor_v[..., None, None] * part_v[None, :, :]
    )


class ScanPoint(NamedTuple):
    voltage: float
    global_phase: float
    infidelity: float
    port_a_power: float


def independence_scan(layout: LoopLayout, voltages: Sequence[float]) -> list[ScanPoint]:
    """Phase and polarization-independence figures across a voltage list.

    Per voltage: the unwrapped global phase of the device matrix, the
    scale-invariant identity infidelity (zero for a pure global phase even
    when the layout leaks power), and the input-averaged power returned to
    port A. For the ideal default layout the phase is linear with slope
    pi / V_half and the infidelity vanishes.
    """
    voltages = list(voltages)
    if not voltages:
        raise ValueError("independence_scan needs a non-empty voltage list")
    matrices = device_matrix_batch(layout, voltages)
    wrapped = [global_phase_decompose(m).global_phase for m in matrices]
    phases = np.unwrap(wrapped)
    points = []
    for v, phase, m in zip(voltages, phases, matrices):
        infid = scaled_identity_infidelity(m)
        _, port_a = trace_ports(layout, H, v)
        _, port_a_v = trace_ports(layout, V, v)
        leak = 0.5 * float(np.sum(np.abs(port_a) ** 2) + np.sum(np.abs(port_a_v) ** 2))
        points.append(ScanPoint(float(v), float(phase), infid, leak))
    return points
