"""Line-oriented scene configuration: INI-style sections, ``key = value``
lines, ``#`` comments, and SI-suffixed numbers (p, n, u, m, k, M).

``parse_config`` is strict: unknown sections or keys, malformed numbers, and
violated invariants fail with a diagnostic naming the line and key.
``render_config`` writes a canonical text that parses back to an equal
configuration.
"""

from __future__ import annotations

import math
from dataclasses import MISSING, dataclass, fields
from typing import Optional

from .circuit import DriveCircuit
from .elements import CrystalSpec, Eom, FaradayRotator, HalfWavePlate, Pbs, half_wave_voltage
from .loop import LoopLayout

__all__ = [
    "ConfigError",
    "SceneConfig",
    "parse_config",
    "parse_number",
    "render_config",
]

_SI_SUFFIXES = {"p": 1e-12, "n": 1e-9, "u": 1e-6, "m": 1e-3, "k": 1e3, "M": 1e6}


class ConfigError(ValueError):
    """Configuration problem with a line/key diagnostic."""


def parse_number(text: str) -> float:
    """Float with an optional SI suffix: '50p' -> 5e-11, '20k' -> 2e4."""
    text = text.strip()
    if text and text[-1] in _SI_SUFFIXES:
        try:
            return float(text[:-1]) * _SI_SUFFIXES[text[-1]]
        except ValueError:
            pass
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"malformed number {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"number must be finite, got {text!r}")
    return value


@dataclass(frozen=True)
class CrystalConfig:
    length_L: float
    thickness_d: float
    wavelength: float
    n_e: float
    r33: float


@dataclass(frozen=True)
class LoopConfig:
    fr_angle_deg: float = 45.0
    hwp_angle_deg: float = 22.5
    fr2_angle_deg: Optional[float] = None
    hwp2_angle_deg: Optional[float] = None
    rotated_beam: str = "cw"
    eom_axis: Optional[str] = None
    eom_residual_phase_per_volt: float = 0.0
    pbs_extinction_t: float = 0.0
    pbs_extinction_r: float = 0.0
    output_port: str = "B"


@dataclass(frozen=True)
class MzConfig:
    mode_overlap: float = 1.0
    ref_phase_deg: float = 0.0
    background: float = 0.0
    arm_imbalance: float = 1.0


@dataclass(frozen=True)
class CircuitConfig:
    R: float
    C: float
    mosfet_on_R: float
    supply_voltage: Optional[float] = None
    gate_rise_time: float = 400e-12
    gate_delay: float = 0.0


@dataclass(frozen=True)
class ScanConfig:
    v_max: Optional[float] = None
    samples: float = 101


@dataclass(frozen=True)
class SweepConfig:
    v_max: Optional[float] = None
    samples: float = 1001


@dataclass(frozen=True)
class TraceConfig:
    t_end: float = 30e-9
    dt: float = 10e-12
    gate_on: float = 2e-9
    hold: float = 1e-6
    input_angle_deg: float = 0.0


@dataclass(frozen=True)
class RecoveryConfig:
    repetition_rate: float = 100e3
    hold: float = 0.0


@dataclass(frozen=True)
class LossConfig:
    transmissions: tuple


@dataclass(frozen=True)
class SceneConfig:
    crystal: Optional[CrystalConfig] = None
    loop: Optional[LoopConfig] = None
    mz: Optional[MzConfig] = None
    circuit: Optional[CircuitConfig] = None
    scan: Optional[ScanConfig] = None
    sweep: Optional[SweepConfig] = None
    trace: Optional[TraceConfig] = None
    recovery: Optional[RecoveryConfig] = None
    loss: Optional[LossConfig] = None

    def crystal_spec(self) -> CrystalSpec:
        if self.crystal is None:
            raise ConfigError("missing required section [crystal]")
        c = self.crystal
        return CrystalSpec(
            length=c.length_L,
            thickness=c.thickness_d,
            wavelength=c.wavelength,
            n_e=c.n_e,
            r33=c.r33,
        )

    def loop_layout(self) -> LoopLayout:
        crystal = self.crystal_spec()
        lp = self.loop if self.loop is not None else LoopConfig()
        fr1 = math.radians(lp.fr_angle_deg)
        hwp1 = math.radians(lp.hwp_angle_deg)
        fr2 = math.radians(lp.fr2_angle_deg) if lp.fr2_angle_deg is not None else fr1
        hwp2 = math.radians(lp.hwp2_angle_deg) if lp.hwp2_angle_deg is not None else hwp1
        axis = lp.eom_axis if lp.eom_axis is not None else ("V" if lp.rotated_beam == "cw" else "H")
        eom = Eom(crystal, axis=axis, residual_orthogonal_phase=lp.eom_residual_phase_per_volt)
        if lp.rotated_beam == "cw":
            path = (HalfWavePlate(hwp1), FaradayRotator(fr1), eom,
                    HalfWavePlate(hwp2), FaradayRotator(fr2))
        elif lp.rotated_beam == "ccw":
            path = (FaradayRotator(fr1), HalfWavePlate(hwp1), eom,
                    FaradayRotator(fr2), HalfWavePlate(hwp2))
        else:
            raise ConfigError(f"rotated_beam must be 'cw' or 'ccw', got {lp.rotated_beam!r}")
        pbs = Pbs(extinction_t=lp.pbs_extinction_t, extinction_r=lp.pbs_extinction_r)
        return LoopLayout(pbs=pbs, cw_path=path, crystal=crystal, output_port=lp.output_port)

    def drive_circuit(self) -> DriveCircuit:
        if self.circuit is None:
            raise ConfigError("missing required section [circuit]")
        cc = self.circuit
        supply = cc.supply_voltage
        if supply is None:
            supply = half_wave_voltage(self.crystal_spec())
        return DriveCircuit(
            supply_voltage=supply,
            recharge_r=cc.R,
            total_c=cc.C,
            mosfet_on_r=cc.mosfet_on_R,
            gate_rise_time=cc.gate_rise_time,
            gate_delay=cc.gate_delay,
        )


_SECTION_TYPES = {
    "crystal": CrystalConfig,
    "loop": LoopConfig,
    "mz": MzConfig,
    "circuit": CircuitConfig,
    "scan": ScanConfig,
    "sweep": SweepConfig,
    "trace": TraceConfig,
    "recovery": RecoveryConfig,
    "loss": LossConfig,
}

_STRING_KEYS = {"rotated_beam", "eom_axis", "output_port"}
_LIST_KEYS = {"transmissions"}


def _convert(section: str, key: str, raw: str, lineno: int):
    try:
        if key in _STRING_KEYS:
            return raw.strip()
        if key in _LIST_KEYS:
            items = [part for part in raw.split(",") if part.strip()]
            if not items:
                raise ValueError("empty list")
            return tuple(parse_number(part) for part in items)
        return parse_number(raw)
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: key '{key}' in [{section}]: {exc}") from None


def parse_config(text: str) -> SceneConfig:
    """Parse configuration text into a SceneConfig.

    Defaults are filled in for omitted optional keys; required keys of a
    present section must appear. Unknown sections/keys and duplicate keys
    are rejected with the offending line number.
    """
    raw_sections: dict[str, dict[str, object]] = {}
    key_fields: dict[str, dict] = {
        name: {f.name: f for f in fields(cls)} for name, cls in _SECTION_TYPES.items()
    }
    current: Optional[str] = None
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not (line.endswith("]") and len(line) > 2):
                raise ConfigError(f"line {lineno}: malformed section header {line!r}")
            name = line[1:-1].strip()
            if name not in _SECTION_TYPES:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            if name in raw_sections:
                raise ConfigError(f"line {lineno}: duplicate section [{name}]")
            raw_sections[name] = {}
            current = name
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any section")
        key, raw_value = (part.strip() for part in line.split("=", 1))
        if key not in key_fields[current]:
            raise ConfigError(f"line {lineno}: unknown key '{key}' in [{current}]")
        if key in raw_sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key '{key}' in [{current}]")
        raw_sections[current][key] = _convert(current, key, raw_value, lineno)

    built: dict[str, object] = {}
    for name, values in raw_sections.items():
        cls = _SECTION_TYPES[name]
        required = {
            f.name for f in fields(cls) if f.default is MISSING and f.name not in values
        }
        if required:
            missing = ", ".join(sorted(required))
            raise ConfigError(f"section [{name}] is missing required key(s): {missing}")
        built[name] = cls(**values)
    return SceneConfig(**built)


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (int,)):
        return repr(float(value))
    return str(value)


def render_config(config: SceneConfig) -> str:
    """Canonical text form; parse_config(render_config(c)) equals c."""
    lines: list[str] = []
    for name in _SECTION_TYPES:
        section = getattr(config, name)
        if section is None:
            continue
        lines.append(f"[{name}]")
        for f in fields(section):
            value = getattr(section, f.name)
            if value is None:
                continue
            lines.append(f"{f.name} = {_format_value(value)}")
        lines.append("")
    return "\n".join(lines)
