import dataclasses
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wbbeam import (
    ArrayGeometry,
    BeamPattern,
    ConstraintSet,
    CovarianceMatrix,
    NumericalRankError,
    SINR_FLOOR_DB,
    WeightVector,
    beam_pattern,
    beam_pattern_family,
    gain_ripple_db,
    half_wavelength_spacing,
    ideal_covariance,
    kkt_oracle,
    monte_carlo_compare,
    mvdr_weights,
    output_sinr,
    reference_scenario,
    soi_gain_profile,
    solve_both,
    steering_vector,
    trial_covariance,
)

# Regression constants fixed from the first verified run of the dense
# block-system solve path on the bundled reference scenario.
MVMFDR_IDEAL_RIPPLE_DB = 5.70978678489518e-09
MVDR_IDEAL_RIPPLE_DB = 0.0307554104800543
MVMFDR_IDEAL_SINR_DB = 17.3403369151
MVDR_IDEAL_SINR_DB = 27.9494701301


@pytest.fixture(scope="module")
def reference_solution():
    scn = reference_scenario()
    r = ideal_covariance(scn)
    return scn, solve_both(scn, r)


class TestBeamPattern:
    def test_matched_beamformer_peaks_at_zero_db(self):
        geom = ArrayGeometry(num_sensors=8, spacing_m=half_wavelength_spacing(3.6e9))
        theta0, freq = math.radians(40.0), 3.55e9
        w = mvdr_weights(CovarianceMatrix(matrix=np.eye(8)), steering_vector(geom, theta0, freq))
        pattern = beam_pattern(w, geom, freq, np.array([theta0]), normalization="none")
        assert pattern.gains_db[0] == pytest.approx(0.0, abs=1e-12)

    def test_constraint_gains_identical_across_frequencies(self, reference_solution):
        scn, solved = reference_solution
        grid = np.array([scn.soi_doa_rad])
        family = beam_pattern_family(
            solved["mvmfdr"], scn.geometry, scn.constraint_freqs_hz, grid, normalization="none"
        )
        gains = np.array([p.gains_db[0] for p in family])
        assert np.max(np.abs(gains - 20.0 * math.log10(abs(scn.constraint_gain_b)))) < 1e-8

    def test_narrowband_gain_drifts_across_band_while_multi_does_not(self, reference_solution):
        scn, solved = reference_solution
        grid = np.array([scn.soi_doa_rad])
        edges_and_center = (scn.band_lo_hz, scn.center_freq_hz, scn.band_hi_hz)
        nb = [
            beam_pattern(solved["mvdr"], scn.geometry, f, grid).gains_db[0]
            for f in edges_and_center
        ]
        mf = [
            beam_pattern(solved["mvmfdr"], scn.geometry, f, grid).gains_db[0]
            for f in edges_and_center
        ]
        assert abs(nb[0] - nb[1]) > 1e-3 and abs(nb[2] - nb[1]) > 1e-3
        assert max(mf) - min(mf) < 1e-7

    def test_gain_invariant_under_unit_modulus_weight_scaling(self, reference_solution):
        scn, solved = reference_solution
        w = solved["mvmfdr"]
        phase = np.exp(1j * 0.83)
        cs = w.constraints
        rotated = WeightVector(
            weights=w.weights * phase,
            constraints=ConstraintSet(
                steering_matrix=cs.steering_matrix, response=cs.response * np.conj(phase)
            ),
            multipliers=w.multipliers * phase,
            objective_value=w.objective_value,
        )
        grid = np.radians(np.linspace(-90, 90, 181))
        base = beam_pattern(w, scn.geometry, scn.center_freq_hz, grid)
        spun = beam_pattern(rotated, scn.geometry, scn.center_freq_hz, grid)
        assert_allclose(spun.gains_db, base.gains_db, atol=1e-12)

    def test_per_frequency_peak_normalization_pins_each_maximum(self, reference_solution):
        scn, solved = reference_solution
        grid = np.radians(np.linspace(-90, 90, 361))
        family = beam_pattern_family(
            solved["mvdr"], scn.geometry, scn.constraint_freqs_hz, grid, "per_frequency_peak"
        )
        for pattern in family:
            assert pattern.gains_db.max() == 0.0

    def test_global_peak_normalization_pins_family_maximum(self, reference_solution):
        scn, solved = reference_solution
        grid = np.radians(np.linspace(-90, 90, 361))
        family = beam_pattern_family(
            solved["mvdr"], scn.geometry, scn.constraint_freqs_hz, grid, "global_peak"
        )
        assert max(p.gains_db.max() for p in family) == 0.0
        raw = beam_pattern_family(
            solved["mvdr"], scn.geometry, scn.constraint_freqs_hz, grid, "none"
        )
        for norm, plain in zip(family, raw):
            shift = plain.gains_db - norm.gains_db
            assert np.max(np.abs(shift - shift[0])) < 1e-12

    def test_bad_inputs_rejected(self, reference_solution):
        scn, solved = reference_solution
        with pytest.raises(ValueError, match="non-empty"):
            beam_pattern(solved["mvdr"], scn.geometry, 3.55e9, np.array([]))
        with pytest.raises(ValueError, match="normalization"):
            beam_pattern(solved["mvdr"], scn.geometry, 3.55e9, np.array([0.0]), "maximum")
        with pytest.raises(ValueError, match="increasing"):
            BeamPattern(
                theta_grid_rad=np.array([0.5, 0.1]),
                freq_hz=1e9,
                gains_db=np.zeros(2),
                normalization="none",
            )


class TestSoiGainProfile:
    def test_multi_constraint_profile_hits_gain_at_constraint_freqs(self, reference_solution):
        scn, solved = reference_solution
        gains = soi_gain_profile(
            solved["mvmfdr"], scn.geometry, scn.soi_doa_rad, scn.constraint_freqs_hz
        )
        assert np.max(np.abs(gains - abs(scn.constraint_gain_b))) < 1e-8

    def test_single_constraint_profile_is_one_at_its_frequency(self, reference_solution):
        scn, solved = reference_solution
        gain = soi_gain_profile(
            solved["mvdr"], scn.geometry, scn.soi_doa_rad, [scn.center_freq_hz]
        )[0]
        assert abs(gain - 1.0) < 1e-10

    def test_band_sweep_ripple_regression(self, reference_solution):
        scn, solved = reference_solution
        grid = np.linspace(scn.band_lo_hz, scn.band_hi_hz, 101)
        ripple_mf = gain_ripple_db(
            soi_gain_profile(solved["mvmfdr"], scn.geometry, scn.soi_doa_rad, grid)
        )
        ripple_nb = gain_ripple_db(
            soi_gain_profile(solved["mvdr"], scn.geometry, scn.soi_doa_rad, grid)
        )
        assert ripple_mf < ripple_nb
        assert 0.0 <= ripple_mf < 5e-8
        assert ripple_nb == pytest.approx(MVDR_IDEAL_RIPPLE_DB, abs=1e-6)

    def test_empty_grid_rejected(self, reference_solution):
        scn, solved = reference_solution
        with pytest.raises(ValueError, match="non-empty"):
            soi_gain_profile(solved["mvdr"], scn.geometry, scn.soi_doa_rad, [])
        with pytest.raises(ValueError, match="non-empty"):
            gain_ripple_db(np.array([]))


class TestOutputSinr:
    def test_matched_filter_gain_with_single_component(self):
        power = 5.0
        scn = dataclasses.replace(
            reference_scenario(),
            snr_db=10.0 * math.log10(power),
            interferer_doas_rad=(),
            sim_freqs_hz=(3.55e9,),
        )
        a = steering_vector(scn.geometry, scn.soi_doa_rad, 3.55e9)
        w = mvdr_weights(CovarianceMatrix(matrix=np.eye(8)), a)
        assert output_sinr(w, scn) == pytest.approx(10.0 * math.log10(power * 8), abs=1e-9)

    def test_weights_orthogonal_to_signal_hit_the_floor(self):
        freq = 3.0e9
        geom = ArrayGeometry(num_sensors=8, spacing_m=half_wavelength_spacing(freq))
        scn = dataclasses.replace(
            reference_scenario(),
            geometry=geom,
            soi_doa_rad=0.0,
            interferer_doas_rad=(),
            sim_freqs_hz=(freq,),
            constraint_freqs_hz=(3.55e9,),
        )
        # sin(theta) = 1/4 puts this direction exactly one DFT bin away from
        # broadside, so it is orthogonal to the all-ones signal vector.
        ortho = steering_vector(geom, math.asin(0.25), freq).entries
        w = WeightVector(
            weights=ortho / 8,
            constraints=ConstraintSet(
                steering_matrix=ortho[:, np.newaxis], response=np.ones(1, dtype=complex)
            ),
            multipliers=np.ones(1, dtype=complex) / 8,
            objective_value=1.0 / 8.0,
        )
        assert output_sinr(w, scn) == SINR_FLOOR_DB

    def test_zero_noise_power_rejected(self, reference_solution):
        scn, solved = reference_solution
        dark = dataclasses.replace(scn, noise_power=0.0)
        with pytest.raises(ValueError, match="noise_power"):
            output_sinr(solved["mvdr"], dark)

    def test_reference_scenario_sinr_regression(self, reference_solution):
        scn, solved = reference_solution
        assert output_sinr(solved["mvmfdr"], scn) == pytest.approx(MVMFDR_IDEAL_SINR_DB, abs=0.01)
        assert output_sinr(solved["mvdr"], scn) == pytest.approx(MVDR_IDEAL_SINR_DB, abs=1e-6)
        oracle = kkt_oracle(
            ideal_covariance(scn),
            ConstraintSet.for_direction(scn.geometry, scn.soi_doa_rad, scn.constraint_freqs_hz),
        )
        assert output_sinr(oracle, scn) == pytest.approx(MVMFDR_IDEAL_SINR_DB, abs=1e-6)


class TestSolveBoth:
    def test_returns_both_methods_on_same_covariance(self, reference_solution):
        scn, solved = reference_solution
        assert set(solved) == {"mvdr", "mvmfdr"}
        assert solved["mvdr"].constraints.num_constraints == 1
        assert solved["mvmfdr"].constraints.num_constraints == 5

    def test_trial_covariance_sources(self, reference):
        ideal = trial_covariance(reference, "ideal")
        assert ideal.loading_factor == 0.0
        sampled = trial_covariance(reference, "sample", trial_index=0)
        assert sampled.loading_factor > 0.0
        with pytest.raises(ValueError, match="source"):
            trial_covariance(reference, "estimated")


class TestMonteCarloCompare:
    def test_two_runs_with_same_seed_are_identical(self, reference):
        scn = dataclasses.replace(reference, num_trials=25)
        assert monte_carlo_compare(scn) == monte_carlo_compare(scn)

    def test_seed_changes_the_report(self, reference):
        scn = dataclasses.replace(reference, num_trials=25)
        other = dataclasses.replace(scn, rng_seed=scn.rng_seed + 1)
        assert monte_carlo_compare(scn) != monte_carlo_compare(other)

    def test_ideal_source_collapses_to_single_shot(self, reference_solution):
        scn, solved = reference_solution
        report = monte_carlo_compare(scn, covariance_source="ideal")
        assert report.num_trials == 1
        grid = np.linspace(scn.band_lo_hz, scn.band_hi_hz, 101)
        ripple = gain_ripple_db(
            soi_gain_profile(solved["mvmfdr"], scn.geometry, scn.soi_doa_rad, grid)
        )
        stats = report.per_method["mvmfdr"]
        assert stats["soi_ripple_db"].mean == pytest.approx(ripple, abs=1e-12)
        assert stats["soi_ripple_db"].std == 0.0
        assert stats["objective"].mean == pytest.approx(solved["mvmfdr"].objective_value, rel=1e-12)
        assert stats["sinr_db"].mean == pytest.approx(output_sinr(solved["mvmfdr"], scn), abs=1e-12)

    def test_metric_names_cover_soi_and_interferer_gains(self, reference):
        scn = dataclasses.replace(reference, num_trials=2)
        report = monte_carlo_compare(scn)
        names = report.metric_names()
        assert "soi_ripple_db" in names and "sinr_db" in names and "objective" in names
        assert "soi_gain_db_at_3500000000hz" in names
        assert "interferer0_gain_db_at_3600000000hz" in names

    def test_reference_scenario_regression_values(self, reference):
        report = monte_carlo_compare(reference)
        nb = report.per_method["mvdr"]
        mf = report.per_method["mvmfdr"]
        assert nb["soi_ripple_db"].mean == pytest.approx(1.57213130913, abs=1e-6)
        assert nb["sinr_db"].mean == pytest.approx(9.70802371933, abs=1e-6)
        assert nb["soi_mean_gain_db"].mean == pytest.approx(-0.0075769638155, abs=1e-9)
        assert nb["objective"].mean == pytest.approx(89.22440137, abs=1e-4)
        assert 0.0 <= mf["soi_ripple_db"].mean < 1e-7
        assert mf["sinr_db"].mean == pytest.approx(11.9413125578, abs=1e-6)
        assert mf["objective"].mean == pytest.approx(97.3320653567, abs=1e-4)
        assert mf["soi_ripple_db"].mean < nb["soi_ripple_db"].mean
        assert mf["soi_mean_gain_db"].mean >= nb["soi_mean_gain_db"].mean

    def test_trial_errors_carry_the_trial_index(self):
        dead = dataclasses.replace(
            reference_scenario(num_trials=3),
            snr_db=float("-inf"),
            interferer_doas_rad=(),
            noise_power=0.0,
            num_snapshots=4,
        )
        with pytest.raises(NumericalRankError, match="trial 0"):
            monte_carlo_compare(dead)

    def test_bad_covariance_source_rejected(self, reference):
        with pytest.raises(ValueError, match="covariance_source"):
            monte_carlo_compare(reference, covariance_source="estimated")

    def test_long_snapshot_trials_converge_to_ideal_metrics(self, reference):
        # 2% agreement is asserted on each metric's linear amplitude or power
        # form; dB values near nulls cannot converge in relative terms.
        scn = dataclasses.replace(reference, num_snapshots=100_000, num_trials=10)
        mc = monte_carlo_compare(scn)
        ideal = monte_carlo_compare(scn, covariance_source="ideal")
        for method in ("mvdr", "mvmfdr"):
            for name in mc.metric_names():
                got = mc.per_method[method][name].mean
                want = ideal.per_method[method][name].mean
                if name == "sinr_db":
                    assert 10 ** (got / 10) == pytest.approx(10 ** (want / 10), rel=0.02)
                elif name == "objective":
                    assert got == pytest.approx(want, rel=0.02)
                elif name == "soi_ripple_db":
                    spread_got = 10 ** (got / 20) - 1.0
                    spread_want = 10 ** (want / 20) - 1.0
                    assert abs(spread_got - spread_want) < 0.02
                else:
                    assert abs(10 ** (got / 20) - 10 ** (want / 20)) < 0.02
