"""Shared helpers: reference hardware values, random generators, and an
independently coded brute-force oracle for the loop transfer matrix."""

from __future__ import annotations

import math

import numpy as np

from sagnacsim import CrystalSpec, Eom, FaradayRotator, HalfWavePlate, LossElement, Mirror, Pbs
from sagnacsim.loop import LoopLayout


def reference_crystal() -> CrystalSpec:
    """20 mm x 1 mm lithium-niobate modulator at the HeNe line, with the
    commonly quoted constants n_e = 2.20 and r33 = 30.8 pm/V."""
    return CrystalSpec(
        length=20e-3, thickness=1e-3, wavelength=632.8e-9, n_e=2.20, r33=30.8e-12
    )


def random_state(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return z / np.linalg.norm(z)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary via QR with phase-fixed diagonal."""
    z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_imperfect_layout(rng: np.random.Generator) -> LoopLayout:
    """Loop with randomized angles, extinction, residual phase, and optional
    extra mirror / loss elements around the modulator."""
    crystal = reference_crystal()
    eom = Eom(
        crystal,
        axis=rng.choice(["H", "V"]),
        residual_orthogonal_phase=rng.uniform(-0.01, 0.01),
    )
    inner: list = [eom]
    if rng.random() < 0.5:
        inner.insert(0, Mirror(rng.uniform(-math.pi, math.pi)))
    if rng.random() < 0.5:
        inner.append(LossElement(rng.uniform(0.5, 1.0)))
    path = (
        HalfWavePlate(rng.uniform(-math.pi, math.pi)),
        FaradayRotator(rng.uniform(-math.pi, math.pi)),
        *inner,
        HalfWavePlate(rng.uniform(-math.pi, math.pi)),
        FaradayRotator(rng.uniform(-math.pi, math.pi)),
    )
    pbs = Pbs(extinction_t=rng.uniform(0.0, 0.29), extinction_r=rng.uniform(0.0, 0.29))
    return LoopLayout(pbs=pbs, cw_path=path, crystal=crystal)


def oracle_device_matrix(layout: LoopLayout, voltage: float) -> np.ndarray:
    """Brute-force loop transfer matrix, written independently of the
    package internals: its own rotation matrices, its own half-wave-voltage
    arithmetic, explicit per-component PBS leakage, and explicit matrix
    products in traversal order."""

    def rot(a: float) -> np.ndarray:
        return np.array(
            [[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]], dtype=complex
        )

    def matrix_of(el) -> np.ndarray:
        if isinstance(el, HalfWavePlate):
            return rot(el.axis_angle) @ np.diag([1.0 + 0j, -1.0 + 0j]) @ rot(-el.axis_angle)
        if isinstance(el, FaradayRotator):
            return rot(el.rotation)
        if isinstance(el, Eom):
            c = el.crystal
            v_half = c.wavelength * c.thickness / (c.length * c.r33 * c.n_e**3)
            driven = complex(np.exp(1j * math.pi * voltage / v_half))
            residual = complex(np.exp(1j * el.residual_orthogonal_phase * voltage))
            return np.diag([residual, driven]) if el.axis == "V" else np.diag([driven, residual])
        if isinstance(el, Mirror):
            return complex(np.exp(1j * el.phase_offset)) * np.eye(2, dtype=complex)
        if isinstance(el, LossElement):
            return math.sqrt(el.transmission) * np.eye(2, dtype=complex)
        raise TypeError(f"oracle cannot handle {el!r}")

    cw = np.eye(2, dtype=complex)
    for el in layout.cw_path:
        cw = matrix_of(el) @ cw
    ccw = np.eye(2, dtype=complex)
    for el in reversed(layout.cw_path):
        ccw = matrix_of(el) @ ccw

    st, sr = layout.pbs.extinction_t, layout.pbs.extinction_r
    ct, cr = math.sqrt(1.0 - st * st), math.sqrt(1.0 - sr * sr)
    columns = []
    for s in (np.array([1.0, 0.0], complex), np.array([0.0, 1.0], complex)):
        transmit_arm = np.array([cr * s[0], st * s[1]])
        reflect_arm = np.array([sr * s[0], ct * s[1]])
        x = cw @ transmit_arm
        y = ccw @ reflect_arm
        port_b = np.array([cr * x[0] - sr * y[0], ct * y[1] - st * x[1]])
        port_a = np.array([sr * x[0] + cr * y[0], st * y[1] + ct * x[1]])
        columns.append(port_b if layout.output_port == "B" else port_a)
    return np.column_stack(columns)
