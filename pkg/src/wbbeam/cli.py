"""Command-line front end: scenario configs in, CSV or JSON results out.

Exit codes: 0 success, 2 config error, 3 numerical error, 4 IO error.
Angles live in degrees at this boundary and in radians everywhere else.
All floating-point output carries 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .arrays import ArrayGeometry, half_wavelength_spacing
from .patterns import (
    DEFAULT_FREQ_GRID_POINTS,
    DEFAULT_THETA_GRID_POINTS,
    beam_pattern_family,
    monte_carlo_compare,
    soi_gain_profile,
    solve_both,
    trial_covariance,
)
from .scenario import DEFAULT_LOADING_SCALE, Scenario
from .solvers import DegenerateConstraintsError, NumericalRankError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

COMMANDS = ("solve", "pattern", "sweep", "montecarlo", "compare")
METHODS = ("mvdr", "mvmfdr")

__all__ = ["ConfigError", "RunConfig", "parse_config", "run", "main"]


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    command: str = "compare"
    covariance_source: str = "sample"
    output_path: Path = Path("out")
    output_format: str = "csv"
    loading_scale: float = DEFAULT_LOADING_SCALE
    theta_grid_deg: tuple = (-90.0, 90.0, DEFAULT_THETA_GRID_POINTS)
    freq_grid_points: int = DEFAULT_FREQ_GRID_POINTS

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command: expected one of {COMMANDS}, got {self.command!r}")
        if self.covariance_source not in ("ideal", "sample"):
            raise ConfigError(
                f"covariance: expected 'ideal' or 'sample', got {self.covariance_source!r}"
            )
        if self.output_format not in ("csv", "structured"):
            raise ConfigError(f"format: expected 'csv' or 'structured', got {self.output_format!r}")
        if not self.loading_scale >= 0:
            raise ConfigError(f"loading_scale: must be nonnegative, got {self.loading_scale!r}")
        start, stop, num = self.theta_grid_deg
        if not (start < stop and int(num) >= 2):
            raise ConfigError(f"theta_grid_deg: expected [start, stop, num>=2], got {self.theta_grid_deg!r}")
        if int(self.freq_grid_points) < 2:
            raise ConfigError(f"freq_grid_points: must be >= 2, got {self.freq_grid_points!r}")


def _as_float(section: str, key: str, value) -> float:
    # YAML 1.1 reads bare "1e-6" as a string; accept and coerce.
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{section}.{key}: expected a number, got {value!r}") from None


def _as_int(section: str, key: str, value) -> int:
    if isinstance(value, bool) or (not isinstance(value, int) and not (
        isinstance(value, str) and value.strip().lstrip("+-").isdigit()
    )):
        raise ConfigError(f"{section}.{key}: expected an integer, got {value!r}")
    return int(value)


def _as_float_list(section: str, key: str, value) -> tuple:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{section}.{key}: expected a list of numbers, got {value!r}")
    return tuple(_as_float(section, key, v) for v in value)


def _take(section_name: str, section: dict, key: str, required: bool = False, default=None):
    if key in section:
        return section.pop(key)
    if required:
        raise ConfigError(f"{section_name}.{key}: required key is missing")
    return default


def _scenario_from_mapping(raw: dict) -> Scenario:
    sec = dict(raw)
    name = "scenario"
    num_sensors = _as_int(name, "num_sensors", _take(name, sec, "num_sensors", required=True))
    band_lo = _as_float(name, "band_lo_hz", _take(name, sec, "band_lo_hz", required=True))
    band_hi = _as_float(name, "band_hi_hz", _take(name, sec, "band_hi_hz", required=True))
    speed = _as_float(
        name, "propagation_speed_mps", _take(name, sec, "propagation_speed_mps", default=2.99792458e8)
    )
    spacing = _take(name, sec, "spacing_m")
    if spacing is None:
        if band_hi <= 0:
            raise ConfigError("scenario.band_hi_hz: must be positive to derive the default spacing")
        spacing = half_wavelength_spacing(band_hi, speed)
    else:
        spacing = _as_float(name, "spacing_m", spacing)
    try:
        geometry = ArrayGeometry(
            num_sensors=num_sensors, spacing_m=spacing, propagation_speed_mps=speed
        )
    except ValueError as exc:
        raise ConfigError(f"scenario.{exc}") from exc

    convention = _take(name, sec, "angle_convention", default="broadside")
    if convention not in ("broadside", "axis"):
        raise ConfigError(
            f"scenario.angle_convention: expected 'broadside' or 'axis', got {convention!r}"
        )
    soi_doa_deg = _as_float(name, "soi_doa_deg", _take(name, sec, "soi_doa_deg", required=True))
    interferer_doas_deg = _as_float_list(
        name, "interferer_doas_deg", _take(name, sec, "interferer_doas_deg", default=())
    )
    if convention == "axis":
        # Angles quoted from the array axis; internally everything is broadside.
        soi_doa_deg = 90.0 - soi_doa_deg
        interferer_doas_deg = tuple(90.0 - t for t in interferer_doas_deg)
    constraint_freqs = _as_float_list(
        name, "constraint_freqs_hz", _take(name, sec, "constraint_freqs_hz", required=True)
    )
    snr_db = _as_float(name, "snr_db", _take(name, sec, "snr_db", required=True))
    sir_db = _as_float(name, "sir_db", _take(name, sec, "sir_db", default=0.0))
    num_snapshots = _as_int(name, "num_snapshots", _take(name, sec, "num_snapshots", required=True))
    num_trials = _as_int(name, "num_trials", _take(name, sec, "num_trials", required=True))
    rng_seed = _as_int(name, "rng_seed", _take(name, sec, "rng_seed", required=True))

    gain_raw = _take(name, sec, "constraint_gain_b", default=1.0)
    if isinstance(gain_raw, (list, tuple)):
        if len(gain_raw) != 2:
            raise ConfigError(f"scenario.constraint_gain_b: expected a scalar or [re, im], got {gain_raw!r}")
        gain = complex(
            _as_float(name, "constraint_gain_b", gain_raw[0]),
            _as_float(name, "constraint_gain_b", gain_raw[1]),
        )
    else:
        gain = complex(_as_float(name, "constraint_gain_b", gain_raw))

    sim_freqs = _take(name, sec, "sim_freqs_hz")
    num_sim_freqs = _take(name, sec, "num_sim_freqs")
    if sim_freqs is not None:
        sim_freqs = _as_float_list(name, "sim_freqs_hz", sim_freqs)
    elif num_sim_freqs is not None:
        points = _as_int(name, "num_sim_freqs", num_sim_freqs)
        if points < 1:
            raise ConfigError(f"scenario.num_sim_freqs: must be >= 1, got {points}")
        sim_freqs = tuple(np.linspace(band_lo, band_hi, points))
    interferer_freqs = _take(name, sec, "interferer_freqs_hz")
    if interferer_freqs is not None:
        interferer_freqs = _as_float_list(name, "interferer_freqs_hz", interferer_freqs)
    noise_power = _as_float(name, "noise_power", _take(name, sec, "noise_power", default=1.0))

    if sec:
        raise ConfigError(f"scenario.{sorted(sec)[0]}: unknown key")
    try:
        return Scenario(
            geometry=geometry,
            soi_doa_rad=math.radians(soi_doa_deg),
            interferer_doas_rad=tuple(math.radians(t) for t in interferer_doas_deg),
            band_lo_hz=band_lo,
            band_hi_hz=band_hi,
            constraint_freqs_hz=constraint_freqs,
            sim_freqs_hz=sim_freqs,
            snr_db=snr_db,
            sir_db=sir_db,
            num_snapshots=num_snapshots,
            num_trials=num_trials,
            rng_seed=rng_seed,
            constraint_gain_b=gain,
            noise_power=noise_power,
            interferer_freqs_hz=interferer_freqs,
        )
    except ValueError as exc:
        raise ConfigError(f"scenario.{exc}") from exc


def parse_config(path) -> RunConfig:
    """Load and fully validate a run configuration file.

    Raises ``FileNotFoundError`` for a missing file and ``ConfigError`` for
    syntax or validation problems; nothing is computed or written here.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config syntax: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config: expected a mapping with a 'scenario' section")
    raw = dict(raw)
    scenario_raw = raw.pop("scenario", None)
    if not isinstance(scenario_raw, dict):
        raise ConfigError("scenario: required section is missing or not a mapping")
    scenario = _scenario_from_mapping(scenario_raw)

    run_raw = raw.pop("run", None) or {}
    if raw:
        raise ConfigError(f"{sorted(raw)[0]}: unknown top-level section")
    if not isinstance(run_raw, dict):
        raise ConfigError("run: expected a mapping")
    run_sec = dict(run_raw)
    command = _take("run", run_sec, "command", default="compare")
    covariance = _take("run", run_sec, "covariance", default="sample")
    out_format = _take("run", run_sec, "format", default="csv")
    output = _take("run", run_sec, "output", default="out")
    loading_scale = _as_float(
        "run", "loading_scale", _take("run", run_sec, "loading_scale", default=DEFAULT_LOADING_SCALE)
    )
    theta_grid = _take("run", run_sec, "theta_grid_deg", default=(-90.0, 90.0, DEFAULT_THETA_GRID_POINTS))
    if not isinstance(theta_grid, (list, tuple)) or len(theta_grid) != 3:
        raise ConfigError(f"run.theta_grid_deg: expected [start, stop, num], got {theta_grid!r}")
    theta_grid = (
        _as_float("run", "theta_grid_deg", theta_grid[0]),
        _as_float("run", "theta_grid_deg", theta_grid[1]),
        _as_int("run", "theta_grid_deg", theta_grid[2]),
    )
    freq_points = _as_int(
        "run", "freq_grid_points", _take("run", run_sec, "freq_grid_points", default=DEFAULT_FREQ_GRID_POINTS)
    )
    if run_sec:
        raise ConfigError(f"run.{sorted(run_sec)[0]}: unknown key")
    return RunConfig(
        scenario=scenario,
        command=command,
        covariance_source=covariance,
        output_path=Path(output),
        output_format=out_format,
        loading_scale=loading_scale,
        theta_grid_deg=theta_grid,
        freq_grid_points=freq_points,
    )


def _fmt(value: float) -> str:
    return f"{float(value):.12g}"


def _round12(value: float) -> float:
    return float(_fmt(value))


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _theta_grid_deg(config: RunConfig) -> np.ndarray:
    start, stop, num = config.theta_grid_deg
    return np.linspace(start, stop, int(num))


def _emit_weights(config: RunConfig, solved: dict) -> None:
    if config.output_format == "csv":
        rows = []
        for method in METHODS:
            for i, c in enumerate(solved[method].weights):
                rows.append((method, i, _fmt(c.real), _fmt(c.imag)))
        _write_csv(config.output_path / "weights.csv", ("method", "sensor", "weight_re", "weight_im"), rows)
        return
    payload = {}
    for method in METHODS:
        w = solved[method]
        payload[method] = {
            "weights": [[_round12(c.real), _round12(c.imag)] for c in w.weights],
            "multipliers": [[_round12(c.real), _round12(c.imag)] for c in w.multipliers],
            "objective_value": _round12(w.objective_value),
            "gram_condition": _round12(w.gram_condition),
            "constraint_freqs_hz": [_round12(f) for f in config.scenario.constraint_freqs_hz],
        }
    _write_json(config.output_path / "weights.json", {"methods": payload})


def _pattern_rows(config: RunConfig, solved: dict):
    scn = config.scenario
    grid_deg = _theta_grid_deg(config)
    grid_rad = np.radians(grid_deg)
    for method in METHODS:
        family = beam_pattern_family(
            solved[method], scn.geometry, scn.constraint_freqs_hz, grid_rad, "global_peak"
        )
        for pattern in family:
            for theta_deg, gain_db in zip(grid_deg, pattern.gains_db):
                yield method, pattern.freq_hz, theta_deg, gain_db


def _emit_patterns(config: RunConfig, solved: dict) -> None:
    if config.output_format == "csv":
        rows = (
            (method, _fmt(freq), _fmt(theta), _fmt(gain))
            for method, freq, theta, gain in _pattern_rows(config, solved)
        )
        _write_csv(config.output_path / "patterns.csv", ("method", "freq_hz", "theta_deg", "gain_db"), rows)
        return
    scn = config.scenario
    grid_deg = _theta_grid_deg(config)
    payload = {"theta_deg": [_round12(t) for t in grid_deg], "methods": {}}
    for method in METHODS:
        family = beam_pattern_family(
            solved[method], scn.geometry, scn.constraint_freqs_hz, np.radians(grid_deg), "global_peak"
        )
        payload["methods"][method] = [
            {"freq_hz": _round12(p.freq_hz), "gain_db": [_round12(g) for g in p.gains_db]}
            for p in family
        ]
    _write_json(config.output_path / "patterns.json", payload)


def _emit_sweep(config: RunConfig, solved: dict) -> None:
    scn = config.scenario
    freqs = np.linspace(scn.band_lo_hz, scn.band_hi_hz, int(config.freq_grid_points))
    theta_deg = math.degrees(scn.soi_doa_rad)
    if config.output_format == "csv":
        rows = []
        for method in METHODS:
            gains = soi_gain_profile(solved[method], scn.geometry, scn.soi_doa_rad, freqs)
            gains_db = 20.0 * np.log10(np.maximum(gains, 1e-150))
            for f, g in zip(freqs, gains_db):
                rows.append((method, _fmt(f), _fmt(theta_deg), _fmt(g)))
        _write_csv(config.output_path / "sweep.csv", ("method", "freq_hz", "theta_deg", "gain_db"), rows)
        return
    payload = {"freq_hz": [_round12(f) for f in freqs], "theta_deg": _round12(theta_deg), "methods": {}}
    for method in METHODS:
        gains = soi_gain_profile(solved[method], scn.geometry, scn.soi_doa_rad, freqs)
        gains_db = 20.0 * np.log10(np.maximum(gains, 1e-150))
        payload["methods"][method] = [_round12(g) for g in gains_db]
    _write_json(config.output_path / "sweep.json", payload)


def _emit_report(config: RunConfig, report) -> None:
    if config.output_format == "csv":
        rows = []
        for method in METHODS:
            for metric, stat in report.per_method[method].items():
                rows.append((method, metric, _fmt(stat.mean), _fmt(stat.std)))
        _write_csv(config.output_path / "report.csv", ("method", "metric", "mean", "std"), rows)
        return
    payload = {
        "num_trials": report.num_trials,
        "covariance_source": report.covariance_source,
        "methods": {
            method: {
                metric: {"mean": _round12(stat.mean), "std": _round12(stat.std)}
                for metric, stat in report.per_method[method].items()
            }
            for method in METHODS
        },
    }
    _write_json(config.output_path / "report.json", payload)


def _solved_weights(config: RunConfig) -> dict:
    r = trial_covariance(
        config.scenario, config.covariance_source, trial_index=0, loading_scale=config.loading_scale
    )
    return solve_both(config.scenario, r)


def run(config: RunConfig) -> int:
    """Execute the configured command; returns the process exit status."""
    config.output_path.mkdir(parents=True, exist_ok=True)
    if config.command == "solve":
        _emit_weights(config, _solved_weights(config))
    elif config.command == "pattern":
        _emit_patterns(config, _solved_weights(config))
    elif config.command == "sweep":
        _emit_sweep(config, _solved_weights(config))
    elif config.command == "montecarlo":
        report = monte_carlo_compare(
            config.scenario,
            covariance_source=config.covariance_source,
            freq_grid_points=int(config.freq_grid_points),
            loading_scale=config.loading_scale,
        )
        _emit_report(config, report)
    else:
        solved = _solved_weights(config)
        report = monte_carlo_compare(
            config.scenario,
            covariance_source=config.covariance_source,
            freq_grid_points=int(config.freq_grid_points),
            loading_scale=config.loading_scale,
        )
        _emit_weights(config, solved)
        _emit_patterns(config, solved)
        _emit_report(config, report)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wbbeam",
        description="Minimum-variance beamformer synthesis and wideband scenario simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    help_lines = {
        "solve": "compute weight vectors for both methods",
        "pattern": "export beam patterns at the constraint frequencies",
        "sweep": "export the look-direction gain over a band sweep",
        "montecarlo": "run all trials and export the metric report",
        "compare": "solve, export patterns, and export the metric report",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=help_lines[name])
        sp.add_argument("--config", required=True, help="path to the scenario config file")
        sp.add_argument("--out", default=None, help="output directory (default from config)")
        sp.add_argument("--seed", type=int, default=None, help="override the scenario rng_seed")
        sp.add_argument("--covariance", choices=("ideal", "sample"), default=None)
        sp.add_argument("--format", choices=("csv", "structured"), default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = parse_config(args.config)
        updates = {"command": args.command}
        if args.out is not None:
            updates["output_path"] = Path(args.out)
        if args.covariance is not None:
            updates["covariance_source"] = args.covariance
        if args.format is not None:
            updates["output_format"] = args.format
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError(f"seed: must be nonnegative, got {args.seed}")
            updates["scenario"] = dataclasses.replace(config.scenario, rng_seed=args.seed)
        config = dataclasses.replace(config, **updates)
        return run(config)
    except (NumericalRankError, DegenerateConstraintsError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
