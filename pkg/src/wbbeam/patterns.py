"""Beam patterns, cross-frequency gain ripple, SINR, and Monte Carlo comparison.

The narrowband solver pinned at one frequency and the multi-frequency solver
are always evaluated on the same footing: the same look-direction frequency
sweep, the same interference directions, and the same exact per-component
covariances for SINR, so that differences between the reports are differences
between the methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayGeometry, steering_matrix, steering_vector
from .scenario import (
    CovarianceMatrix,
    Scenario,
    default_loading_factor,
    generate_snapshots,
    ideal_covariance,
    sample_covariance,
)
from .solvers import (
    ConstraintSet,
    DegenerateConstraintsError,
    NumericalRankError,
    WeightVector,
    mvdr_weights,
    mvmfdr_weights,
)

NORMALIZATIONS = ("none", "global_peak", "per_frequency_peak")

SINR_FLOOR_DB = -250.0
"""Reported for any ratio at or below this level, instead of running off to -inf.

Rounding leaves exact nulls at roughly -300 dB, so the floor also absorbs
those; -250 dB is far below any physically meaningful output ratio.
"""

DEFAULT_FREQ_GRID_POINTS = 101
DEFAULT_THETA_GRID_POINTS = 721

_GAIN_FLOOR = 1e-150  # keeps log10 finite for exact nulls

__all__ = [
    "NORMALIZATIONS",
    "SINR_FLOOR_DB",
    "DEFAULT_FREQ_GRID_POINTS",
    "DEFAULT_THETA_GRID_POINTS",
    "BeamPattern",
    "MetricStat",
    "ComparisonReport",
    "beam_pattern",
    "beam_pattern_family",
    "soi_gain_profile",
    "gain_ripple_db",
    "output_sinr",
    "solve_both",
    "trial_covariance",
    "monte_carlo_compare",
]


@dataclass(frozen=True)
class BeamPattern:
    """Gain in dB versus direction for one weight vector at one frequency."""

    theta_grid_rad: np.ndarray
    freq_hz: float
    gains_db: np.ndarray
    normalization: str

    def __post_init__(self):
        grid = np.ascontiguousarray(self.theta_grid_rad, dtype=float)
        gains = np.ascontiguousarray(self.gains_db, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("theta_grid_rad: need a non-empty 1-D grid")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("theta_grid_rad: grid must be strictly increasing")
        if gains.shape != grid.shape:
            raise ValueError(
                f"gains_db: expected shape {grid.shape}, got {gains.shape}"
            )
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(
                f"normalization: expected one of {NORMALIZATIONS}, got {self.normalization!r}"
            )
        grid.flags.writeable = False
        gains.flags.writeable = False
        object.__setattr__(self, "theta_grid_rad", grid)
        object.__setattr__(self, "gains_db", gains)


def _gains_db(w: WeightVector, geom: ArrayGeometry, theta_grid, freq_hz: float) -> np.ndarray:
    columns = steering_matrix(geom, theta_grid, freq_hz)
    gains = np.abs(w.weights.conj() @ columns)
    return 20.0 * np.log10(np.maximum(gains, _GAIN_FLOOR))


def beam_pattern(
    w: WeightVector,
    geom: ArrayGeometry,
    freq_hz: float,
    theta_grid_rad,
    normalization: str = "none",
) -> BeamPattern:
    """Beam pattern 20 log10 |w^H a(theta, f)| over ``theta_grid_rad``.

    For ``global_peak`` with a single pattern the family is just this pattern;
    use ``beam_pattern_family`` to normalize jointly across frequencies.
    """
    (pattern,) = beam_pattern_family(w, geom, [freq_hz], theta_grid_rad, normalization)
    return pattern


def beam_pattern_family(
    w: WeightVector,
    geom: ArrayGeometry,
    freqs_hz,
    theta_grid_rad,
    normalization: str = "none",
) -> tuple:
    """Patterns of one weight vector at several frequencies, normalized jointly.

    ``global_peak`` shifts the whole family so its single largest gain is
    0 dB, preserving gain differences between frequencies;
    ``per_frequency_peak`` flattens each pattern's own peak to 0 dB instead.
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"normalization: expected one of {NORMALIZATIONS}, got {normalization!r}")
    grid = np.atleast_1d(np.asarray(theta_grid_rad, dtype=float))
    if grid.size == 0:
        raise ValueError("theta_grid_rad: need a non-empty grid")
    freqs = np.atleast_1d(np.asarray(freqs_hz, dtype=float))
    if freqs.size == 0:
        raise ValueError("freqs_hz: need a non-empty frequency list")
    raw = [_gains_db(w, geom, grid, f) for f in freqs]
    if normalization == "global_peak":
        peak = max(float(g.max()) for g in raw)
        raw = [g - peak for g in raw]
    elif normalization == "per_frequency_peak":
        raw = [g - float(g.max()) for g in raw]
    return tuple(
        BeamPattern(theta_grid_rad=grid, freq_hz=float(f), gains_db=g, normalization=normalization)
        for f, g in zip(freqs, raw)
    )


def soi_gain_profile(w: WeightVector, geom: ArrayGeometry, theta0_rad: float, freq_grid_hz) -> np.ndarray:
    """Linear gain |w^H a(theta0, f)| at each frequency of ``freq_grid_hz``."""
    freqs = np.atleast_1d(np.asarray(freq_grid_hz, dtype=float))
    if freqs.size == 0:
        raise ValueError("freq_grid_hz: need a non-empty grid")
    columns = steering_matrix(geom, theta0_rad, freqs)
    return np.abs(w.weights.conj() @ columns)


def gain_ripple_db(gains: np.ndarray) -> float:
    """Max minus min of the gains, in dB."""
    gains = np.asarray(gains, dtype=float)
    if gains.size == 0:
        raise ValueError("gains: need a non-empty gain profile")
    lo = max(float(gains.min()), _GAIN_FLOOR)
    hi = max(float(gains.max()), _GAIN_FLOOR)
    return 20.0 * np.log10(hi / lo)


def _component_covariances(scn: Scenario):
    """Exact SOI and interference covariance pieces of the scenario model."""
    n = scn.geometry.num_sensors
    signal_cov = np.zeros((n, n), dtype=complex)
    interference_cov = np.zeros((n, n), dtype=complex)
    for i, (theta, freqs, power) in enumerate(scn.source_components()):
        columns = steering_matrix(scn.geometry, theta, freqs)
        term = power * (columns @ columns.conj().T)
        if i == 0:
            signal_cov += term
        else:
            interference_cov += term
    return signal_cov, interference_cov


def output_sinr(w: WeightVector, scn: Scenario) -> float:
    """Output SINR in dB against the scenario's exact per-component covariances.

    Uses the ideal covariances even when the weights came from estimated data,
    which isolates estimation loss in the weights themselves. Returns
    ``SINR_FLOOR_DB`` instead of -inf when the signal is fully nulled.
    """
    if not scn.noise_power > 0:
        raise ValueError("noise_power: output SINR needs strictly positive noise power")
    signal_cov, interference_cov = _component_covariances(scn)
    denom_matrix = interference_cov + scn.noise_power * np.eye(scn.geometry.num_sensors)
    signal = max(float(np.real(w.weights.conj() @ signal_cov @ w.weights)), 0.0)
    denom = float(np.real(w.weights.conj() @ denom_matrix @ w.weights))
    if signal <= 0 or denom <= 0:
        return SINR_FLOOR_DB
    return max(10.0 * np.log10(signal / denom), SINR_FLOOR_DB)


def solve_both(scn: Scenario, r: CovarianceMatrix) -> dict:
    """Solve the narrowband and multi-frequency problems on the same covariance.

    The narrowband weights are pinned at the band-center frequency with unit
    response; the multi-frequency weights at ``scn.constraint_freqs_hz`` with
    gain ``scn.constraint_gain_b``.
    """
    center = steering_vector(scn.geometry, scn.soi_doa_rad, scn.center_freq_hz)
    cs = ConstraintSet.for_direction(
        scn.geometry, scn.soi_doa_rad, scn.constraint_freqs_hz, gain=scn.constraint_gain_b
    )
    return {"mvdr": mvdr_weights(r, center), "mvmfdr": mvmfdr_weights(r, cs)}


@dataclass(frozen=True)
class MetricStat:
    mean: float
    std: float


@dataclass(frozen=True)
class ComparisonReport:
    """Per-method metric means and standard deviations across trials."""

    per_method: dict
    num_trials: int
    covariance_source: str

    def __post_init__(self):
        for method, metrics in self.per_method.items():
            ripple = metrics.get("soi_ripple_db")
            if ripple is not None and ripple.mean < 0:
                raise ValueError(f"{method}: soi_ripple_db must be nonnegative")

    def metric_names(self) -> list:
        first = next(iter(self.per_method.values()))
        return list(first.keys())


class _EvalContext:
    """Steering matrices and covariance pieces reused across trials."""

    def __init__(self, scn: Scenario, freq_grid_points: int):
        self.scenario = scn
        self.freq_grid_hz = np.linspace(scn.band_lo_hz, scn.band_hi_hz, freq_grid_points)
        self.sweep_columns = steering_matrix(scn.geometry, scn.soi_doa_rad, self.freq_grid_hz)
        self.eval_freqs = np.asarray(scn.constraint_freqs_hz)
        self.soi_eval_columns = steering_matrix(scn.geometry, scn.soi_doa_rad, self.eval_freqs)
        self.interferer_eval = [
            (j, theta, self.eval_freqs, steering_matrix(scn.geometry, theta, self.eval_freqs))
            for j, theta in enumerate(scn.interferer_doas_rad)
        ]
        self.signal_cov, self.interference_cov = _component_covariances(scn)
        self.noise_cov = scn.noise_power * np.eye(scn.geometry.num_sensors)

    def metrics(self, w: WeightVector) -> dict:
        out = {}
        profile = np.abs(w.weights.conj() @ self.sweep_columns)
        profile_db = 20.0 * np.log10(np.maximum(profile, _GAIN_FLOOR))
        out["soi_ripple_db"] = gain_ripple_db(profile)
        out["soi_mean_gain_db"] = float(profile_db.mean())
        soi_gains = np.abs(w.weights.conj() @ self.soi_eval_columns)
        for f, g in zip(self.eval_freqs, soi_gains):
            out[f"soi_gain_db_at_{f:.10g}hz"] = 20.0 * np.log10(max(float(g), _GAIN_FLOOR))
        for j, _theta, freqs, columns in self.interferer_eval:
            gains = np.abs(w.weights.conj() @ columns)
            for f, g in zip(freqs, gains):
                key = f"interferer{j}_gain_db_at_{f:.10g}hz"
                out[key] = 20.0 * np.log10(max(float(g), _GAIN_FLOOR))
        signal = max(float(np.real(w.weights.conj() @ self.signal_cov @ w.weights)), 0.0)
        denom = float(
            np.real(w.weights.conj() @ (self.interference_cov + self.noise_cov) @ w.weights)
        )
        if signal <= 0 or denom <= 0:
            out["sinr_db"] = SINR_FLOOR_DB
        else:
            out["sinr_db"] = max(10.0 * np.log10(signal / denom), SINR_FLOOR_DB)
        out["objective"] = w.objective_value
        return out


def trial_covariance(
    scn: Scenario,
    source: str = "sample",
    trial_index: int = 0,
    loading_scale: float = 1e-6,
) -> CovarianceMatrix:
    """Covariance for one trial: the exact model covariance or the loaded estimate."""
    if source == "ideal":
        return ideal_covariance(scn)
    if source != "sample":
        raise ValueError(f"source: expected 'ideal' or 'sample', got {source!r}")
    x = generate_snapshots(scn, trial_index)
    return sample_covariance(x, default_loading_factor(x, loading_scale))


def monte_carlo_compare(
    scn: Scenario,
    covariance_source: str = "sample",
    freq_grid_points: int = DEFAULT_FREQ_GRID_POINTS,
    loading_scale: float = 1e-6,
) -> ComparisonReport:
    """Run the scenario's trials and compare both methods metric by metric.

    Each trial draws fresh snapshots, estimates the loaded sample covariance,
    solves both beamformers on it, and scores them. Metrics are accumulated
    per trial index and reduced in index order, so the report is a pure
    function of the scenario. With ``covariance_source="ideal"`` the trials
    would all be identical, so a single evaluation is performed and reported
    with zero spread.
    """
    if covariance_source not in ("ideal", "sample"):
        raise ValueError(f"covariance_source: expected 'ideal' or 'sample', got {covariance_source!r}")
    ctx = _EvalContext(scn, freq_grid_points)
    num_trials = 1 if covariance_source == "ideal" else scn.num_trials
    per_trial = {"mvdr": [], "mvmfdr": []}
    solver_errors = (NumericalRankError, DegenerateConstraintsError, np.linalg.LinAlgError, ValueError)
    for trial in range(num_trials):
        try:
            r = trial_covariance(scn, covariance_source, trial, loading_scale)
            solved = solve_both(scn, r)
        except solver_errors as exc:
            raise type(exc)(f"trial {trial}: {exc}") from exc
        for method, w in solved.items():
            per_trial[method].append(ctx.metrics(w))
    per_method = {}
    for method, rows in per_trial.items():
        stats = {}
        for key in rows[0]:
            values = np.array([row[key] for row in rows], dtype=float)
            stats[key] = MetricStat(mean=float(values.mean()), std=float(values.std()))
        per_method[method] = stats
    return ComparisonReport(
        per_method=per_method, num_trials=num_trials, covariance_source=covariance_source
    )
