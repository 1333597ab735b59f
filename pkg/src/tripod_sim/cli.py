"""Command-line surface.

Subcommands map one-to-one onto the library operations: spectrum, traces,
map2d, decompose, dressed, evolve, contrast and list-presets.  Settings
resolve in three layers: built-in defaults, then the preset (if any),
then explicit config keys, with repeatable --set overrides applied last.
CSV files are the canonical outputs; --svg adds a minimal plot.

Exit codes: 0 success, 2 config/usage errors, 3 unknown preset,
4 singular steady state, 5 other model errors, 6 I/O failures.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import geometry, output, spectra
from .config import Config, parse_config, parse_overrides
from .dressed import (bright_states, compare_splitting, dark_states, eigensystem,
                      generalized_rabi)
from .errors import (DuplicateKey, ParseError, SingularSystem, TripodSimError,
                     UnknownKey, UnknownPreset)
from .model import max_step, time_evolve
from .params import DecayModel, SystemParams

COMMANDS = ("spectrum", "map2d", "traces", "decompose", "dressed", "evolve",
            "contrast", "list-presets")

_DEFAULTS = {
    "rabi.omega_c_khz": 10.0,
    "rabi.omega_p_khz": 1.0,
    "rabi.omega_a_khz": 10.0,
    "detuning.delta_c_khz": 0.0,
    "detuning.delta_p_khz": 0.0,
    "detuning.delta_a_khz": 0.0,
    "decay.gamma0_khz": 6.0,
    "decay.gamma_opt_khz": 30.0,
    "decay.gamma_ground_khz": 1.25,
    "decay.ground_mix_khz": 0.0,
    "decay.beta1": 1 / 3,
    "decay.beta2": 1 / 3,
    "decay.beta3": 1 / 3,
    "sweep.dp_min_khz": -30.0,
    "sweep.dp_max_khz": 30.0,
    "sweep.dp_points": 401,
    "map.d_min_khz": -10.0,
    "map.d_max_khz": 10.0,
    "map.d_points": 201,
    "spectrum.normalize": False,
}


@dataclass
class RunReport:
    """Outcome summary of one CLI run."""

    scenario: str
    wall_time_s: float
    outputs: tuple[str, ...]
    residual_max: float
    warnings: tuple[str, ...] = ()


def _preset_overlay(scenario: geometry.Scenario) -> dict:
    params = scenario.params
    decay = params.decay
    overlay = {
        "rabi.omega_c_khz": params.omega_c,
        "rabi.omega_p_khz": params.omega_p,
        "rabi.omega_a_khz": params.omega_a,
        "detuning.delta_c_khz": params.delta_c,
        "detuning.delta_p_khz": params.delta_p,
        "detuning.delta_a_khz": params.delta_a,
        "decay.gamma0_khz": decay.gamma_pop,
        "decay.gamma_opt_khz": decay.optical_rates[0],
        "decay.gamma_ground_khz": decay.gamma_ground,
        "decay.ground_mix_khz": decay.ground_mix,
        "decay.beta1": decay.branching[0],
        "decay.beta2": decay.branching[1],
        "decay.beta3": decay.branching[2],
        "sweep.dp_min_khz": float(scenario.dp_axis[0]),
        "sweep.dp_max_khz": float(scenario.dp_axis[-1]),
        "sweep.dp_points": len(scenario.dp_axis),
    }
    if scenario.d_axis is not None:
        overlay["map.d_min_khz"] = float(scenario.d_axis[0])
        overlay["map.d_max_khz"] = float(scenario.d_axis[-1])
        overlay["map.d_points"] = len(scenario.d_axis)
    return overlay


def resolve_settings(config: Config) -> dict:
    """Built-in defaults, preset overlay, then explicit keys."""
    settings = dict(_DEFAULTS)
    name = config.get("preset")
    if name is not None:
        settings.update(_preset_overlay(geometry.preset(name)))
    settings.update({k: v for k, v in config.values.items() if k != "preset"})
    settings["scenario"] = name or "custom"
    return settings


def _params_from(settings: dict) -> SystemParams:
    try:
        decay = DecayModel(
            gamma_pop=settings["decay.gamma0_khz"],
            branching=(settings["decay.beta1"], settings["decay.beta2"],
                       settings["decay.beta3"]),
            gamma_opt=settings["decay.gamma_opt_khz"],
            gamma_ground=settings["decay.gamma_ground_khz"],
            ground_mix=settings["decay.ground_mix_khz"],
        )
        return SystemParams(
            omega_c=settings["rabi.omega_c_khz"],
            omega_p=settings["rabi.omega_p_khz"],
            omega_a=settings["rabi.omega_a_khz"],
            decay=decay,
            delta_c=settings["detuning.delta_c_khz"],
            delta_p=settings["detuning.delta_p_khz"],
            delta_a=settings["detuning.delta_a_khz"],
        )
    except ValueError as exc:
        raise TripodSimError(f"invalid parameters: {exc}") from exc


def _dp_axis(settings: dict) -> np.ndarray:
    lo, hi = settings["sweep.dp_min_khz"], settings["sweep.dp_max_khz"]
    n = settings["sweep.dp_points"]
    if n < 2 or hi <= lo:
        raise TripodSimError(f"bad sweep axis: [{lo}, {hi}] with {n} points")
    return np.linspace(lo, hi, n)


def _d_axis(settings: dict) -> np.ndarray:
    lo, hi = settings["map.d_min_khz"], settings["map.d_max_khz"]
    n = settings["map.d_points"]
    if n < 2 or hi <= lo:
        raise TripodSimError(f"bad map axis: [{lo}, {hi}] with {n} points")
    return np.linspace(lo, hi, n)


def _fmt_state(state) -> str:
    amps = ", ".join(f"{a.real:+.6f}{a.imag:+.6f}j" for a in state.vector())
    tail = "" if state.eigenvalue is None else f"  (eigenvalue {state.eigenvalue:+.6f} kHz)"
    return f"|{state.label}> = [{amps}]{tail}"


def _run_dressed(params: SystemParams, println) -> None:
    omega = generalized_rabi(*params.rabi)
    println(f"generalized Rabi frequency Omega = {omega:.6f} kHz")
    eig = eigensystem(params)
    println("eigenvalues (kHz): " + ", ".join(f"{v:+.6f}" for v in eig.eigenvalues))
    for state in (*dark_states(*params.rabi), *bright_states(*params.rabi)):
        println(_fmt_state(state))
    sym = abs(params.delta_c + params.delta_a) < 1e-12
    delta = params.delta_c if sym else 0.0
    cmp = compare_splitting(params, delta=delta)
    println(f"splitting comparison at delta = {cmp.delta:g} kHz "
            "(asymptotic formula vs exact eigenvalues, reported side by side):")
    println(f"  asymptote: e+ = {cmp.asymptote_plus:+.6f}, e- = {cmp.asymptote_minus:+.6f}")
    println(f"  exact:     e+ = {cmp.exact_plus:+.6f}, e- = {cmp.exact_minus:+.6f}")
    println(f"  ratio asymptote/exact = {cmp.ratio_at_center:.6f}")


def run(command: str, config: Config, out: str | None = None,
        svg: str | None = None, stdout=None) -> RunReport:
    """Execute one subcommand against a resolved configuration."""
    stdout = stdout or sys.stdout

    def println(text=""):
        print(text, file=stdout)

    started = time.perf_counter()
    outputs = []
    warnings = []
    residual = 0.0

    if command == "list-presets":
        for name in geometry.preset_names():
            println(name)
        return RunReport("catalog", time.perf_counter() - started, (), 0.0)

    settings = resolve_settings(config)
    params = _params_from(settings)
    scenario = settings["scenario"]

    if command in ("spectrum", "traces"):
        axis = _dp_axis(settings)
        if command == "spectrum":
            series = spectra.probe_sweep(params, axis,
                                         normalize=settings["spectrum.normalize"])
        else:
            series = spectra.coherence_traces(params, axis)
        residual = series.residual_max
        if out:
            output.write_spectrum_csv(series, out)
            outputs.append(out)
        if svg:
            output.write_line_svg(series, svg)
            outputs.append(svg)
        println(f"{command}: {len(axis)} points, residual max {residual:.3e}")

    elif command == "map2d":
        map2d = spectra.detuning_map(params, _dp_axis(settings), _d_axis(settings))
        residual = map2d.residual_max
        if out:
            output.write_map_csv(map2d, out)
            outputs.append(out)
        if svg:
            output.write_heatmap_svg(map2d, svg)
            outputs.append(svg)
        println(f"map2d: {map2d.grid.shape[0]}x{map2d.grid.shape[1]} grid, "
                f"residual max {residual:.3e}")

    elif command == "decompose":
        result = spectra.decomposition_compare(params, _dp_axis(settings))
        residual = max(result.tripod.residual_max, result.average.residual_max)
        if out:
            stem, dot, ext = out.rpartition(".")
            base = stem if dot else out
            ext = f".{ext}" if dot else ".csv"
            for tag, series in (("tripod", result.tripod), ("lambda_c", result.lambda_c),
                                ("lambda_a", result.lambda_a), ("average", result.average)):
                path = f"{base}.{tag}{ext}"
                output.write_spectrum_csv(series, path)
                outputs.append(path)
        println(f"decompose: {len(result.tripod.axis)} points, "
                f"residual max {residual:.3e}")

    elif command == "dressed":
        _run_dressed(params, println)

    elif command == "contrast":
        report = spectra.switching_contrast(params)
        println(f"switching contrast = {report.ratio:.6g}")
        println(f"  on  (central bright feature at delta_p = "
                f"{report.on_position:+.4f} kHz): {report.on_value:.6e}")
        println(f"  off (transparent reference at delta_p = 0): {report.off_value:.6e}")
        if report.guarded:
            warnings.append("reference absorption below 1e-15; ratio reported as inf")
        if out:
            lines = ["quantity,value",
                     f"ratio,{report.ratio!r}",
                     f"on_value,{report.on_value!r}",
                     f"off_value,{report.off_value!r}",
                     f"on_position_khz,{report.on_position!r}"]
            with open(out, "w", encoding="utf-8", newline="") as handle:
                handle.write("\n".join(lines) + "\n")
            outputs.append(out)

    elif command == "evolve":
        rest = np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex)
        gamma = params.decay.gamma_pop
        t_end = settings.get("evolve.t_end_ms")
        if t_end is None:
            if gamma <= 0:
                raise TripodSimError("evolve.t_end_ms required when decay.gamma0_khz = 0")
            t_end = 200.0 / gamma
        dt = settings.get("evolve.dt_ms")
        if dt is None:
            bound = max_step(params)
            dt = 0.05 if not np.isfinite(bound) else bound / 2
        stride = settings.get("evolve.stride")
        if stride is None:
            stride = max(1, int(round(t_end / dt)) // 2000 or 1)
        trajectory = time_evolve(params, rest, t_end, dt, sample_stride=stride)
        if out:
            output.write_trajectory_csv(trajectory, out)
            outputs.append(out)
        println(f"evolve: {len(trajectory)} samples to t = {trajectory.times[-1]:.6g} ms")

    else:
        raise TripodSimError(f"unknown command {command!r}")

    return RunReport(scenario, time.perf_counter() - started, tuple(outputs),
                     residual, tuple(warnings))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tripod-sim",
        description="Steady-state and time-domain simulator of a four-level "
                    "tripod medium: absorption spectra, detuning maps, "
                    "coherence traces and dressed-state reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--preset", help="catalog scenario name")
        cmd.add_argument("--config", help="path to a key = value config file")
        cmd.add_argument("--out", help="output CSV path")
        cmd.add_argument("--svg", help="optional SVG plot path")
        cmd.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                         help="override a single config key (repeatable)")
    return parser


def _gather_config(args) -> Config:
    config = Config()
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            config.update_from(parse_config(handle.read()))
    if args.set:
        config.update_from(parse_overrides(args.set))
    if args.preset:
        preset_cfg = parse_config(f"preset = {args.preset}")
        if "preset" in config:
            raise DuplicateKey(0, "preset given both as a flag and a config key")
        config.values["preset"] = preset_cfg.values["preset"]
        config.lines["preset"] = 0
    return config


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        report = run(args.command, _gather_config(args), out=args.out, svg=args.svg)
    except (ParseError, UnknownKey, DuplicateKey) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except UnknownPreset as exc:
        print(f"error: UnknownPreset: {exc}", file=sys.stderr)
        return 3
    except SingularSystem as exc:
        print(f"error: SingularSystem: {exc}", file=sys.stderr)
        return 4
    except (TripodSimError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 6
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
