"""ROC curves, AUC, hypothesis trials, densities."""

import numpy as np
import pytest

from asnr_lab import (
    ConfigError,
    RocConfig,
    auc,
    density_histogram,
    make_grid,
    roc_analysis,
    roc_curve,
    run_hypothesis_trials,
)


def test_auc_of_diagonal_points():
    assert auc([0.0, 0.5, 1.0], [0.0, 0.5, 1.0]) == 0.5


def test_auc_sorts_by_fpr_with_tpr_tiebreak():
    # shuffled input, duplicate FPR values
    fpr = [1.0, 0.0, 0.5, 0.5]
    tpr = [1.0, 0.0, 0.9, 0.4]
    assert auc(fpr, tpr) == pytest.approx(
        auc([0.0, 0.5, 0.5, 1.0], [0.0, 0.4, 0.9, 1.0]))
    with pytest.raises(ConfigError):
        auc([0.5], [0.5])


def test_roc_identical_samples_is_diagonal():
    rng = np.random.default_rng(21)
    values = rng.standard_normal(4000)
    curve = roc_curve(values, values, np.arange(0, 10.05, 0.05))
    assert np.array_equal(curve.fpr, curve.tpr)
    assert curve.auc == pytest.approx(0.5, abs=1e-12)


def test_roc_perfect_separation():
    rng = np.random.default_rng(22)
    h0 = rng.uniform(0.0, 1.0, 1000)
    h1 = rng.uniform(5.0, 6.0, 1000)
    curve = roc_curve(h0, h1, np.arange(0, 10.05, 0.05))
    assert curve.auc == pytest.approx(1.0, abs=1e-12)


def test_roc_endpoint_augmentation_covers_signed_values():
    # signed values with a tau grid starting at 0: the raw sweep cannot
    # reach FPR = 1, but the fixed endpoints close the curve
    h0 = np.array([-2.0, -1.0, 1.0])
    h1 = np.array([-0.5, 2.0, 3.0])
    tau = np.arange(0, 10.05, 0.05)
    curve = roc_curve(h0, h1, tau)
    assert curve.fpr.max() < 1.0
    assert 0.0 <= curve.auc <= 1.0


def test_roc_curves_are_nonincreasing_in_tau():
    rng = np.random.default_rng(23)
    curve = roc_curve(rng.standard_normal(2000),
                      rng.standard_normal(2000) + 1.0,
                      np.arange(0, 10.05, 0.05))
    assert np.all(np.diff(curve.fpr) <= 0)
    assert np.all(np.diff(curve.tpr) <= 0)


def test_hypothesis_trials_are_paired_and_shifted():
    config = RocConfig(family="gaussian", amplitude=0.5, fwhm_bins=50,
                       n_mc=400, n_repeats=1, base_seed=24)
    values = run_hypothesis_trials(config)
    # identical noise: H1 - H0 equals the clean contribution, a constant
    diff = values.h1_asnr - values.h0_asnr
    assert np.ptp(diff) < 1e-9
    assert diff.mean() > 2.0


def test_amplitude_zero_hypotheses_coincide():
    config = RocConfig(family="gaussian", amplitude=0.0, fwhm_bins=20,
                       n_mc=300, n_repeats=1, base_seed=25)
    values = run_hypothesis_trials(config)
    assert np.array_equal(values.h0_asnr, values.h1_asnr)
    assert np.array_equal(values.h0_psnr, values.h1_psnr)
    curve = roc_curve(np.abs(values.h0_asnr), np.abs(values.h1_asnr),
                      np.arange(0, 10.05, 0.05))
    assert curve.auc == pytest.approx(0.5, abs=1e-12)


def test_hypothesis_means_fig7_smoke():
    config = RocConfig(family="gaussian", amplitude=0.3, width_param=0.5,
                       fwhm_bins=None, n_mc=3000, n_repeats=1, base_seed=26)
    values = run_hypothesis_trials(config)
    assert values.h1_asnr.mean() == pytest.approx(2.64, abs=0.1)
    assert values.h0_asnr.mean() == pytest.approx(0.0, abs=0.08)
    assert values.h0_psnr.mean() == pytest.approx(0.798, abs=0.03)


def test_auc_matches_pairwise_rank_oracle():
    config = RocConfig(family="gaussian", amplitude=0.5, fwhm_bins=50,
                       n_mc=3000, n_repeats=1, base_seed=27, two_sided=True)
    result = roc_analysis(config)
    values = run_hypothesis_trials(config)
    # oracle: P(h1 > h0) + 0.5 P(h1 = h0) on a 1000-element subsample
    rng = np.random.default_rng(99)
    h0 = np.abs(values.h0_asnr)
    h1 = np.abs(values.h1_asnr)
    i0 = rng.choice(h0.size, 1000, replace=False)
    i1 = rng.choice(h1.size, 1000, replace=False)
    a, b = h0[i0][None, :], h1[i1][:, None]
    rank = (b > a).mean() + 0.5 * (b == a).mean()
    curve = roc_curve(h0, h1, config.tau_grid())
    assert curve.auc == pytest.approx(rank, abs=0.01)
    assert result.auc_asnr == pytest.approx(curve.auc, abs=0.02)


def test_roc_analysis_trends_small_scale():
    aucs = {}
    for width in (3, 10, 50):
        config = RocConfig(family="gaussian", amplitude=0.5, fwhm_bins=width,
                           n_mc=2000, n_repeats=2, base_seed=28)
        result = roc_analysis(config)
        aucs[width] = (result.auc_psnr, result.auc_asnr)
        assert result.auc_asnr > result.auc_psnr
    assert aucs[3][1] < aucs[10][1] < aucs[50][1]
    psnr_values = [aucs[w][0] for w in (3, 10, 50)]
    assert max(psnr_values) - min(psnr_values) < 0.03


def test_two_sided_flag_changes_the_asnr_curve():
    import dataclasses

    config = RocConfig(family="gaussian", amplitude=0.4, fwhm_bins=50,
                       n_mc=2000, n_repeats=1, base_seed=29)
    folded = roc_analysis(config)
    signed = roc_analysis(dataclasses.replace(config, two_sided=False))
    assert folded.auc_asnr != signed.auc_asnr
    assert folded.auc_psnr == signed.auc_psnr


def test_roc_config_validation():
    with pytest.raises(ConfigError):
        RocConfig(fwhm_bins=None, width_param=None)
    with pytest.raises(ConfigError):
        RocConfig(tau_step=0.0)
    with pytest.raises(ConfigError):
        RocConfig(tau_min=5.0, tau_max=1.0)


# ---------------------------------------------------------------------------
# densities


def test_density_histogram_has_unit_area():
    rng = np.random.default_rng(30)
    hist = density_histogram(rng.standard_normal(50_000), 0.1)
    assert float(hist.density.sum() * 0.1) == pytest.approx(1.0, abs=1e-12)
    assert hist.mean == pytest.approx(0.0, abs=0.02)
    assert hist.std == pytest.approx(1.0, abs=0.02)


def test_density_histogram_matches_standard_normal_shape():
    from scipy import stats

    rng = np.random.default_rng(31)
    hist = density_histogram(rng.standard_normal(100_000), 0.2)
    centers = 0.5 * (hist.edges[:-1] + hist.edges[1:])
    core = np.abs(centers) < 2.0
    assert np.allclose(hist.density[core], stats.norm.pdf(centers[core]),
                       atol=0.03)


def test_density_histogram_constant_input():
    hist = density_histogram(np.full(10, 3.7), 0.5)
    assert hist.density.shape == (1,)
    assert hist.density[0] == pytest.approx(1.0 / 0.5)


def test_density_histogram_validation():
    with pytest.raises(ConfigError):
        density_histogram(np.array([]), 0.1)
    with pytest.raises(ConfigError):
        density_histogram(np.ones(5), 0.0)
