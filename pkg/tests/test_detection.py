"""Detection statistics and analytic improvement factors."""

import numpy as np
import pytest
from scipy import integrate

from asnr_lab import (
    ConfigError,
    LineshapeSpec,
    NoiseModel,
    RoiMask,
    asnr,
    default_grid_1d,
    default_grid_2d,
    eval_2d,
    eval_gaussian,
    extract_roi,
    extract_roi_2d,
    gamma_analytic,
    gamma_per_bin,
    make_template,
    psnr,
    sample_noise,
    vsnr,
    width_param_from_fwhm,
)
from asnr_lab.detection import roi_width_over_b
from asnr_lab.lineshapes import gaussian_profile, lorentzian_profile


def test_psnr_noiseless_peak():
    grid = default_grid_1d()
    clean = eval_gaussian(grid, 3.0, 0.5)
    assert psnr(clean, grid.center_index, 1.0) == 3.0


def test_psnr_takes_absolute_value():
    y = np.array([0.0, -2.5, 0.0])
    assert psnr(y, 1, 1.0) == 2.5


def test_psnr_null_mean_is_half_normal():
    grid = default_grid_1d()
    model = NoiseModel(sigma=1.0, master_seed=51)
    values = [psnr(sample_noise(model, grid, t), grid.center_index, 1.0)
              for t in range(20_000)]
    assert np.mean(values) == pytest.approx(np.sqrt(2 / np.pi), abs=0.02)


def test_asnr_noiseless_fig7_condition():
    grid = default_grid_1d()
    clean = make_template(LineshapeSpec("gaussian", 0.3, 1.0), grid,
                          width_param=0.5)
    mask = extract_roi(clean, 0.5)
    assert asnr(clean, mask, 1.0) == pytest.approx(2.64, abs=0.02)


def test_asnr_null_mean_is_zero():
    grid = default_grid_1d()
    clean = eval_gaussian(grid, 1.0, 0.5)
    mask = extract_roi(clean, 0.5)
    model = NoiseModel(sigma=1.0, master_seed=52)
    values = [asnr(sample_noise(model, grid, t), mask, 1.0)
              for t in range(20_000)]
    assert np.mean(values) == pytest.approx(0.0, abs=0.03)
    assert np.var(values) == pytest.approx(1.0, abs=0.05)


def test_single_bin_asnr_is_signed_psnr():
    y = np.array([0.1, -1.7, 0.4])
    mask = RoiMask(indices=np.array([1]), n_roi=1, eta=0.5, width_bins=1,
                   peak_index=1, dim=1)
    assert asnr(y, mask, 1.0) == -1.7
    assert psnr(y, 1, 1.0) == 1.7


def test_vsnr_noiseless_gaussian_2d():
    grid = default_grid_2d()
    clean = eval_2d(grid, LineshapeSpec("gaussian", 5.0, 20 * grid.spacing,
                                        dim=2))
    mask = extract_roi_2d(clean, 0.5)
    assert vsnr(clean, mask, 1.0) == pytest.approx(64.0, abs=2.0)


def test_vsnr_single_pixel_mask():
    y = np.arange(9.0).reshape(3, 3)
    mask = RoiMask(indices=(np.array([2]), np.array([1])), n_roi=1, eta=0.5,
                   width_bins=1, peak_index=(2, 1), dim=2)
    assert vsnr(y, mask, 2.0) == y[2, 1] / 2.0


def test_vsnr_null_mean_near_zero():
    grid = default_grid_2d()
    clean = eval_2d(grid, LineshapeSpec("gaussian", 1.0, 1.0, dim=2))
    mask = extract_roi_2d(clean, 0.5)
    model = NoiseModel(sigma=1.0, master_seed=53)
    values = [vsnr(sample_noise(model, grid, t), mask, 1.0)
              for t in range(10_000)]
    assert np.mean(values) == pytest.approx(0.0, abs=0.05)


def test_statistics_validate_inputs():
    y = np.ones(5)
    with pytest.raises(ConfigError):
        psnr(y, 2, 0.0)
    mask = RoiMask(indices=np.array([], dtype=int), n_roi=0, eta=0.5,
                   width_bins=0, peak_index=0, dim=1)
    with pytest.raises(ConfigError):
        asnr(y, mask, 1.0)
    mask1d = RoiMask(indices=np.array([1]), n_roi=1, eta=0.5, width_bins=1,
                     peak_index=1, dim=1)
    with pytest.raises(ConfigError):
        vsnr(y, mask1d, 1.0)


def test_statistics_are_linear_in_the_observation():
    grid = default_grid_1d()
    model = NoiseModel(sigma=1.0, master_seed=54)
    y = eval_gaussian(grid, 2.0, 0.3) + sample_noise(model, grid, 0)
    mask = extract_roi(eval_gaussian(grid, 1.0, 0.3), 0.5)
    for c in (0.5, 3.0, 17.25):
        assert asnr(c * y, mask, 1.0) == pytest.approx(c * asnr(y, mask, 1.0),
                                                       rel=1e-12)
        assert psnr(c * y, grid.center_index, 1.0) == pytest.approx(
            c * psnr(y, grid.center_index, 1.0), rel=1e-12)


# ---------------------------------------------------------------------------
# improvement factors


def test_gamma_gaussian_reference_values():
    assert gamma_analytic("gaussian", 100.0, 0.5) == pytest.approx(12.43,
                                                                   abs=0.01)
    coeff = gamma_analytic("gaussian", 100.0, 0.5) / 10.0
    assert coeff == pytest.approx(1.243, abs=0.001)


def test_gamma_lorentzian_reference_values():
    coeff = gamma_analytic("lorentzian", 100.0, 0.5) / 10.0
    assert coeff == pytest.approx(1.111, abs=0.001)
    exact = np.pi / (2.0 * np.sqrt(2.0))
    assert coeff == pytest.approx(exact, rel=1e-12)


def test_gamma_per_bin_forms():
    assert gamma_per_bin("gaussian", 0.5) == pytest.approx(0.81, rel=0.01)
    assert gamma_per_bin("lorentzian", 0.5) == pytest.approx(0.78, rel=0.01)
    # Voigt sits between the two
    v = gamma_per_bin("voigt", 0.5)
    assert gamma_per_bin("lorentzian", 0.5) < v < gamma_per_bin("gaussian", 0.5)


@pytest.mark.parametrize("family,profile", [
    ("gaussian", gaussian_profile),
    ("lorentzian", lorentzian_profile),
])
@pytest.mark.parametrize("eta", [0.2, 0.5, 0.8])
def test_gamma_matches_quadrature_oracle(family, profile, eta):
    # independent route: numerically integrate the profile over the
    # level-eta window and normalize per the definition
    b_over_dx = 40.0
    b, dx = b_over_dx, 1.0
    w = roi_width_over_b(family, eta) * b
    integral, _ = integrate.quad(lambda x: profile(np.array([x]), 1.0, b)[0],
                                 -w / 2, w / 2)
    expected = integral / np.sqrt(w * dx)
    assert gamma_analytic(family, b_over_dx, eta) == pytest.approx(
        expected, rel=1e-4)


def test_gamma_closed_form_identity():
    # gamma_G(1/2) = sqrt(2 pi) erf(sqrt(ln 2)) / sqrt(2 sqrt(2 ln 2))
    from scipy import special

    expected = (np.sqrt(2 * np.pi) * special.erf(np.sqrt(np.log(2.0)))
                / np.sqrt(2.0 * np.sqrt(2.0 * np.log(2.0))))
    coeff = gamma_analytic("gaussian", 1.0, 0.5)
    assert coeff == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.243, abs=0.001)


@pytest.mark.parametrize("family", ["gaussian", "lorentzian", "voigt"])
@pytest.mark.parametrize("fwhm_bins", [10, 20, 50])
def test_noiseless_consistency_with_discrete_statistics(family, fwhm_bins):
    # with zero noise, asnr/psnr on the sampled template should sit
    # within 3% of the continuous gamma for widths of 10+ bins
    grid = default_grid_1d()
    fwhm = fwhm_bins * grid.spacing
    clean = make_template(LineshapeSpec(family, 1.0, fwhm), grid)
    mask = extract_roi(clean, 0.5)
    ratio = asnr(clean, mask, 1.0) / psnr(clean, grid.center_index, 1.0)
    b = width_param_from_fwhm(family, fwhm, fine_step=grid.spacing / 4)
    expected = gamma_analytic(family, b / grid.spacing, 0.5)
    assert ratio == pytest.approx(expected, rel=0.03)


def test_gamma_rejects_bad_eta():
    with pytest.raises(ConfigError):
        gamma_analytic("gaussian", 10.0, 0.0)
    with pytest.raises(ConfigError):
        gamma_analytic("gaussian", 10.0, 1.0)
    with pytest.raises(ConfigError):
        gamma_analytic("gaussian", -5.0, 0.5)
