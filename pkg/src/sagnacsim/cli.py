"""Command-line front end.

    sagnacsim <command> --config FILE --out FILE [--sweep-max V] [--dt S] [--t-end S]

Commands: device-matrix, independence-scan, table1, transient, recovery,
loss. Each writes a CSV report and prints a one-line summary. Exit codes:
0 ok, 1 usage, 2 configuration error, 3 runtime/domain error. Output is
byte-identical across runs for identical inputs (fixed 12-significant-digit
float formatting, '\\n' line endings).
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from .bench import MzSetup, switching_trace, table1_report, insertion_loss
from .circuit import GateSchedule, recovery_fraction
from .config import ConfigError, SceneConfig, parse_config
from .elements import half_wave_voltage
from .loop import device_matrix_batch, independence_scan
from .polarization import linear_state

_COMMANDS = ("device-matrix", "independence-scan", "table1", "transient", "recovery", "loss")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _mz_setup(cfg: SceneConfig) -> MzSetup:
    layout = cfg.loop_layout()
    mz = cfg.mz
    if mz is None:
        return MzSetup(loop=layout)
    delta = math.radians(mz.ref_phase_deg)
    ref = np.diag([1.0, np.exp(1j * delta)])
    return MzSetup(
        loop=layout,
        ref_arm=ref,
        mode_overlap=mz.mode_overlap,
        background=mz.background,
        arm_imbalance=mz.arm_imbalance,
    )


def _scan_voltages(cfg: SceneConfig, sweep_max: float | None) -> np.ndarray:
    scan = cfg.scan
    v_max = sweep_max
    if v_max is None:
        v_max = scan.v_max if scan is not None and scan.v_max is not None else None
    if v_max is None:
        v_max = 2.0 * half_wave_voltage(cfg.crystal_spec())
    samples = int(scan.samples) if scan is not None else 101
    return np.linspace(0.0, v_max, samples)


def _run_device_matrix(cfg: SceneConfig, out: str, args) -> str:
    layout = cfg.loop_layout()
    voltages = _scan_voltages(cfg, args.sweep_max)
    matrices = device_matrix_batch(layout, voltages)
    rows = []
    for v, m in zip(voltages, matrices):
        rows.append(
            [v, m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag,
             m[1, 0].real, m[1, 0].imag, m[1, 1].real, m[1, 1].imag]
        )
    header = ["voltage_V", "m00_re", "m00_im", "m01_re", "m01_im",
              "m10_re", "m10_im", "m11_re", "m11_im"]
    _write_csv(out, header, rows)
    v_half = half_wave_voltage(layout.crystal)
    return f"device-matrix: {len(voltages)} voltages, v_half={_fmt(v_half)} V"


def _run_independence_scan(cfg: SceneConfig, out: str, args) -> str:
    layout = cfg.loop_layout()
    voltages = _scan_voltages(cfg, args.sweep_max)
    points = independence_scan(layout, voltages)
    rows = [[p.voltage, p.global_phase, p.infidelity, p.port_a_power] for p in points]
    _write_csv(out, ["voltage_V", "phase_rad_unwrapped", "infidelity", "portA_power"], rows)
    worst = max(p.infidelity for p in points)
    return f"independence-scan: {len(points)} voltages, max_infidelity={worst:.3e}"


def _run_table1(cfg: SceneConfig, out: str, args) -> str:
    setup = _mz_setup(cfg)
    sweep = cfg.sweep
    v_max = args.sweep_max
    if v_max is None and sweep is not None and sweep.v_max is not None:
        v_max = sweep.v_max
    n = int(sweep.samples) if sweep is not None else 1001
    angles_deg = (0.0, 45.0, 90.0)
    records = table1_report(
        setup, [math.radians(a) for a in angles_deg], v_max=v_max, n=n
    )
    rows = [
        [deg, r.v_half_fit, r.visibility, r.contrast_ratio, r.contrast_db]
        for deg, r in zip(angles_deg, records)
    ]
    _write_csv(out, ["pol_deg", "v_half_V", "visibility", "contrast_ratio", "contrast_db"], rows)
    summary = " ".join(
        f"{deg:g}deg={r.visibility:.4f}" for deg, r in zip(angles_deg, records)
    )
    return f"table1: visibility {summary}"


def _run_transient(cfg: SceneConfig, out: str, args) -> str:
    setup = _mz_setup(cfg)
    circuit = cfg.drive_circuit()
    trace_cfg = cfg.trace
    if trace_cfg is None:
        from .config import TraceConfig

        trace_cfg = TraceConfig()
    t_end = args.t_end if args.t_end is not None else trace_cfg.t_end
    dt = args.dt if args.dt is not None else trace_cfg.dt
    gates = GateSchedule((trace_cfg.gate_on,), trace_cfg.hold)
    state = linear_state(math.radians(trace_cfg.input_angle_deg))
    result = switching_trace(setup, state, circuit, gates, t_end, dt)
    times = result.voltage.times
    rows = np.column_stack([times, result.voltage.samples, result.intensity.samples])
    _write_csv(out, ["t_s", "v_V", "intensity"], rows)
    return f"transient: optical_10_90={_fmt(result.optical_10_90)} s"


def _run_recovery(cfg: SceneConfig, out: str, args) -> str:
    circuit = cfg.drive_circuit()
    rec = cfg.recovery
    if rec is None:
        from .config import RecoveryConfig

        rec = RecoveryConfig()
    rates = np.geomspace(10e3, 1e6, 61)
    rows = [[rate, recovery_fraction(circuit, rate, rec.hold)] for rate in rates]
    _write_csv(out, ["repetition_rate_hz", "recovery_fraction"], rows)
    fraction = recovery_fraction(circuit, rec.repetition_rate, rec.hold)
    return f"recovery_fraction={fraction:.5f}"


def _run_loss(cfg: SceneConfig, out: str, args) -> str:
    if cfg.loss is None:
        raise ConfigError("missing required section [loss]")
    transmissions = cfg.loss.transmissions
    rows = []
    cumulative = 1.0
    for i, t in enumerate(transmissions):
        cumulative *= t
        rows.append([float(i), t, -10.0 * math.log10(cumulative)])
    total = insertion_loss(transmissions)
    _write_csv(out, ["index", "transmission", "cumulative_db"], rows)
    return f"insertion_loss_db={_fmt(total)}"


_RUNNERS = {
    "device-matrix": _run_device_matrix,
    "independence-scan": _run_independence_scan,
    "table1": _run_table1,
    "transient": _run_transient,
    "recovery": _run_recovery,
    "loss": _run_loss,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _Parser(prog="sagnacsim", description="Sagnac-loop phase shifter simulator")
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--config", required=True, help="scene configuration file")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--sweep-max", type=float, default=None, help="sweep ceiling in volts")
    parser.add_argument("--dt", type=float, default=None, help="transient sample step in seconds")
    parser.add_argument("--t-end", type=float, default=None, help="transient duration in seconds")
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        cfg = parse_config(text)
        summary = _RUNNERS[args.command](cfg, args.out, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
