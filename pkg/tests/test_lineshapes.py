"""Template evaluation, FWHM matching, and the Voigt construction."""

import numpy as np
import pytest

from asnr_lab import (
    ConfigError,
    LineshapeSpec,
    SpanTooSmallError,
    build_voigt,
    default_grid_1d,
    default_grid_2d,
    eval_2d,
    eval_gaussian,
    eval_lorentzian,
    make_template,
    measure_fwhm,
    width_param_from_fwhm,
)
from asnr_lab.lineshapes import (
    GAUSS_FWHM_OVER_B,
    build_voigt_kernel,
    gaussian_profile,
    lorentzian_profile,
)


def olivero_longbothum_fwhm(b_l, b_g):
    """Published approximation for the Voigt FWHM (independent oracle)."""
    fl = 2.0 * b_l
    fg = GAUSS_FWHM_OVER_B * b_g
    return 0.5346 * fl + np.sqrt(0.2166 * fl**2 + fg**2)


# ---------------------------------------------------------------------------
# width parameters


def test_gaussian_width_param_inverts_fwhm_factor():
    assert width_param_from_fwhm("gaussian", GAUSS_FWHM_OVER_B) == pytest.approx(1.0)
    assert width_param_from_fwhm("gaussian", 2.3548) == pytest.approx(1.0, abs=1e-4)


def test_lorentzian_width_param_is_half_fwhm():
    assert width_param_from_fwhm("lorentzian", 2.0) == 1.0


def test_voigt_width_param_matches_target_and_oracle():
    b = width_param_from_fwhm("voigt", 1.0)
    kernel = build_voigt_kernel(b, b, fine_step=1.0 / 100.0)
    measured = measure_fwhm(kernel.offsets, kernel.profile)
    assert 0.999 <= measured <= 1.001
    assert olivero_longbothum_fwhm(b, b) == pytest.approx(1.0, rel=0.02)


def test_width_param_rejects_bad_inputs():
    with pytest.raises(ConfigError):
        width_param_from_fwhm("gaussian", -1.0)
    with pytest.raises(ConfigError):
        width_param_from_fwhm("sinc", 1.0)


# ---------------------------------------------------------------------------
# Gaussian


def test_gaussian_peak_value():
    grid = default_grid_1d()
    t = eval_gaussian(grid, 2.0, 1.0)
    assert t[grid.center_index] == 2.0


def test_gaussian_half_maximum_abscissa():
    x_half = np.sqrt(2.0 * np.log(2.0))  # ~1.1774
    value = gaussian_profile(np.array([x_half]), 1.0, 1.0)[0]
    assert value == pytest.approx(0.5, abs=1e-12)


def test_gaussian_area_against_closed_form():
    grid = default_grid_1d()
    t = eval_gaussian(grid, 1.0, 0.5)
    area = np.trapezoid(t, grid.axis)
    expected = 0.5 * np.sqrt(2.0 * np.pi)  # ~1.2533
    assert area == pytest.approx(expected, rel=1e-3)


# ---------------------------------------------------------------------------
# Lorentzian


def test_lorentzian_peak_value():
    grid = default_grid_1d()
    assert eval_lorentzian(grid, 3.0, 1.0)[grid.center_index] == 3.0


def test_lorentzian_half_max_at_b():
    assert lorentzian_profile(np.array([1.0]), 1.0, 1.0)[0] == 0.5


def test_lorentzian_truncated_area_documents_tail_deficit():
    # Analytic area on the infinite domain is pi*h*b = pi/2; the
    # truncated grid keeps 2*b*arctan(half_extent/b), a ~1.6% deficit.
    grid = default_grid_1d()
    t = eval_lorentzian(grid, 1.0, 0.5)
    area = np.trapezoid(t, grid.axis)
    truncated = 2.0 * 0.5 * np.arctan(20.0 / 0.5)
    assert area == pytest.approx(truncated, rel=1e-4)
    deficit = 1.0 - area / (np.pi / 2.0)
    assert 0.014 < deficit < 0.018


# ---------------------------------------------------------------------------
# Voigt


def test_voigt_degenerates_to_gaussian():
    grid = default_grid_1d()
    b = 0.5
    values, _ = build_voigt(grid, 1.0, b, 1e-6 * b)
    reference = eval_gaussian(grid, 1.0, b)
    window = np.abs(grid.axis) <= 5.0 * b
    assert np.allclose(values[window], reference[window], rtol=1e-3)


def test_voigt_degenerates_to_lorentzian():
    grid = default_grid_1d()
    b = 0.5
    values, _ = build_voigt(grid, 1.0, 1e-6 * b, b)
    reference = eval_lorentzian(grid, 1.0, b)
    window = np.abs(grid.axis) <= 5.0 * b
    assert np.allclose(values[window], reference[window], rtol=1e-3)


def test_voigt_fwhm_against_published_approximation():
    grid = default_grid_1d()
    values, _ = build_voigt(grid, 1.0, 0.5, 0.5)
    measured = measure_fwhm(grid.axis, values)
    assert measured == pytest.approx(olivero_longbothum_fwhm(0.5, 0.5),
                                     rel=0.02)


def test_voigt_peak_equals_amplitude():
    grid = default_grid_1d()
    values, kernel = build_voigt(grid, 2.5, 0.3, 0.3)
    assert abs(values[grid.center_index] - 2.5) <= 1e-6 * 2.5
    assert kernel.profile.max() == 1.0
    assert kernel.area_unit > 0


def test_voigt_rejects_too_small_span():
    grid = default_grid_1d()
    with pytest.raises(SpanTooSmallError):
        build_voigt(grid, 1.0, 0.5, 0.5, span=1.0)


def test_voigt_solve_signals_misconfiguration():
    from asnr_lab import WidthSolveError

    # a fine step far coarser than the target width cannot bracket it
    with pytest.raises(WidthSolveError):
        width_param_from_fwhm("voigt", 0.01, fine_step=1.0)


# ---------------------------------------------------------------------------
# 2D separable templates


def test_2d_peak_value():
    grid = default_grid_2d()
    spec = LineshapeSpec("gaussian", 5.0, 1.0, dim=2)
    t = eval_2d(grid, spec)
    assert t[50, 50] == 5.0
    assert t.shape == (101, 101)


def test_2d_separability_along_axis():
    grid = default_grid_2d()
    spec = LineshapeSpec("gaussian", 1.0, 1.0, dim=2)
    t = eval_2d(grid, spec)
    b = width_param_from_fwhm("gaussian", 1.0)
    # the half-max abscissa along an axis, rounded onto the grid
    x_half = b * np.sqrt(2.0 * np.log(2.0))
    j = 50 + int(round(x_half / grid.spacing))
    assert t[50, j] == pytest.approx(0.5, abs=0.02)


def test_2d_gaussian_product_value():
    grid = default_grid_2d()
    fwhm = GAUSS_FWHM_OVER_B  # makes b = 1
    spec = LineshapeSpec("gaussian", 1.0, fwhm, dim=2)
    t = eval_2d(grid, spec)
    i = 50 + int(round(1.0 / grid.spacing))
    assert t[i, i] == pytest.approx(np.exp(-1.0), abs=1e-6)


def test_2d_requires_matching_dims():
    with pytest.raises(ConfigError):
        make_template(LineshapeSpec("gaussian", 1.0, 1.0, dim=2),
                      default_grid_1d())
    with pytest.raises(ConfigError):
        eval_2d(default_grid_1d(), LineshapeSpec("gaussian", 1.0, 1.0, dim=2))


# ---------------------------------------------------------------------------
# shared template properties


@pytest.mark.parametrize("family", ["gaussian", "lorentzian", "voigt"])
def test_templates_are_symmetric(family):
    grid = default_grid_1d()
    spec = LineshapeSpec(family, 1.7, 0.5)
    t = make_template(spec, grid)
    if family == "voigt":
        assert np.allclose(t, t[::-1], atol=1e-9)
    else:
        assert np.array_equal(t, t[::-1])


@pytest.mark.parametrize("family", ["gaussian", "lorentzian", "voigt"])
@pytest.mark.parametrize("fwhm", [0.03, 0.1, 0.5])
def test_fwhm_round_trip(family, fwhm):
    grid = default_grid_1d()
    spec = LineshapeSpec(family, 1.0, fwhm)
    t = make_template(spec, grid)
    measured = measure_fwhm(grid.axis, t)
    assert abs(measured - fwhm) <= grid.spacing


@pytest.mark.parametrize("family", ["gaussian", "lorentzian", "voigt"])
def test_monotone_decay_from_peak(family):
    grid = default_grid_1d()
    t = make_template(LineshapeSpec(family, 1.0, 0.5), grid)
    right = t[grid.center_index:]
    assert np.all(np.diff(right) <= 1e-12)


def test_signal_fraction_inside_fwhm():
    # Gaussian keeps erf(sqrt(ln 2)) ~ 76.1% of its area inside the
    # FWHM; the heavy-tailed Lorentzian keeps exactly 50%.
    from scipy import integrate, special

    grid = default_grid_1d()
    for family, total, expected in (
        ("gaussian", width_param_from_fwhm("gaussian", 0.5) * np.sqrt(2 * np.pi),
         special.erf(np.sqrt(np.log(2.0)))),
        ("lorentzian", np.pi * 0.25, 0.5),
    ):
        t = make_template(LineshapeSpec(family, 1.0, 0.5), grid)
        inside = np.abs(grid.axis) <= 0.25
        fraction = integrate.trapezoid(t[inside], grid.axis[inside]) / total
        assert fraction == pytest.approx(expected, rel=0.01)
