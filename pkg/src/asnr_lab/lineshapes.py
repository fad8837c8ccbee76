"""Gaussian, Lorentzian, and Voigt clean-signal templates.

All widths are parameterized by the target full width at half maximum
so the three families can be compared like for like:

* Gaussian:   s(x) = h exp(-x^2 / 2 b_G^2),    b_G = FWHM / (2 sqrt(2 ln 2))
* Lorentzian: s(x) = h / (1 + (x / b_L)^2),    b_L = FWHM / 2
* Voigt: discrete convolution of a unit-peak Gaussian and a unit-peak
  Lorentzian with a common parameter b = b_VG = b_VL, evaluated on a
  fine auxiliary grid, peak-normalized, and interpolated onto the
  simulation grid.  b is solved numerically so the measured FWHM of the
  kernel matches the request.

2D templates are separable products of the 1D profile along each axis,
rescaled so the peak equals the requested amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, SpanTooSmallError, WidthSolveError
from .grids import SpectralGrid

GAUSSIAN = "gaussian"
LORENTZIAN = "lorentzian"
VOIGT = "voigt"
FAMILIES = (GAUSSIAN, LORENTZIAN, VOIGT)

#: FWHM of a unit Gaussian divided by its b parameter: 2 sqrt(2 ln 2).
GAUSS_FWHM_OVER_B = 2.0 * np.sqrt(2.0 * np.log(2.0))

#: Default half-span of the Voigt convolution grid, in units of max(b_G, b_L).
VOIGT_SPAN_FACTOR = 20.0

#: Relative tolerance on the measured FWHM of a solved Voigt kernel.
VOIGT_FWHM_RTOL = 1e-3


def _check_family(family: str) -> str:
    if family not in FAMILIES:
        raise ConfigError(f"unknown lineshape family {family!r}; "
                          f"expected one of {FAMILIES}")
    return family


# ---------------------------------------------------------------------------
# closed-form profiles


def gaussian_profile(x: np.ndarray, amplitude: float, b: float,
                     center: float = 0.0) -> np.ndarray:
    if not (b > 0):
        raise ConfigError(f"Gaussian width parameter must be positive, got {b}")
    d = np.asarray(x, dtype=float) - center
    return amplitude * np.exp(-(d * d) / (2.0 * b * b))


def lorentzian_profile(x: np.ndarray, amplitude: float, b: float,
                       center: float = 0.0) -> np.ndarray:
    if not (b > 0):
        raise ConfigError(f"Lorentzian width parameter must be positive, got {b}")
    d = (np.asarray(x, dtype=float) - center) / b
    return amplitude / (1.0 + d * d)


def eval_gaussian(grid: SpectralGrid, amplitude: float, b: float,
                  center: float = 0.0) -> np.ndarray:
    """Gaussian template on the grid axis (1D)."""
    return gaussian_profile(grid.axis, amplitude, b, center)


def eval_lorentzian(grid: SpectralGrid, amplitude: float, b: float,
                    center: float = 0.0) -> np.ndarray:
    """Lorentzian template on the grid axis (1D)."""
    return lorentzian_profile(grid.axis, amplitude, b, center)


# ---------------------------------------------------------------------------
# width measurement on sampled profiles


def measure_level_width(x: np.ndarray, y: np.ndarray,
                        level_fraction: float = 0.5) -> float:
    """Width of a sampled single-peak profile at a fraction of its maximum.

    The two crossings are located by linear interpolation between the
    bracketing samples, giving sub-bin accuracy.  Raises if the profile
    never falls below the level on either side of the peak.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    peak = float(y.max())
    if not (peak > 0):
        raise ConfigError("profile has no positive maximum")
    if not (0 < level_fraction < 1):
        raise ConfigError(f"level fraction must be in (0, 1), got {level_fraction}")
    level = level_fraction * peak
    p = int(np.argmax(y))

    i = p
    while i >= 0 and y[i] >= level:
        i -= 1
    if i < 0:
        raise ConfigError("profile does not cross the level left of the peak")
    x_left = x[i] + (level - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i])

    j = p
    while j < len(y) and y[j] >= level:
        j += 1
    if j >= len(y):
        raise ConfigError("profile does not cross the level right of the peak")
    x_right = x[j - 1] + (level - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    return float(x_right - x_left)


def measure_fwhm(x: np.ndarray, y: np.ndarray) -> float:
    return measure_level_width(x, y, 0.5)


# ---------------------------------------------------------------------------
# Voigt construction


@dataclass(frozen=True)
class VoigtKernel:
    """Peak-normalized Voigt profile on its fine construction grid."""

    fine_step: float
    span: float
    offsets: np.ndarray
    profile: np.ndarray
    area_unit: float

    def interpolate(self, x: np.ndarray) -> np.ndarray:
        """Linear interpolation of the unit-peak profile; zero outside span."""
        return np.interp(x, self.offsets, self.profile, left=0.0, right=0.0)


def build_voigt_kernel(b_vg: float, b_vl: float, fine_step: float,
                       span: float | None = None) -> VoigtKernel:
    """Convolve unit-peak Gaussian and Lorentzian factors on a fine grid.

    The discrete convolution is scaled by the fine step and renormalized
    to unit maximum.  The span must comfortably contain the Gaussian
    factor: convolution with a truncated Gaussian corrupts the profile
    near the peak, so configurations where the Gaussian factor at the
    span edge exceeds 1e-4 of its peak are rejected, as are spans below
    ten Lorentzian half-widths.
    """
    if not (b_vg > 0 and b_vl > 0):
        raise ConfigError("Voigt width parameters must be positive")
    if not (fine_step > 0):
        raise ConfigError("fine_step must be positive")
    if span is None:
        span = VOIGT_SPAN_FACTOR * max(b_vg, b_vl)
    edge = np.exp(-(span * span) / (2.0 * b_vg * b_vg))
    if edge > 1e-4 or span < 10.0 * b_vl:
        raise SpanTooSmallError(
            f"Voigt span {span} too small for widths b_vg={b_vg}, b_vl={b_vl}"
        )
    m = int(np.ceil(span / fine_step))
    offsets = (np.arange(2 * m + 1) - m) * fine_step
    g = np.exp(-(offsets * offsets) / (2.0 * b_vg * b_vg))
    h = 1.0 / (1.0 + (offsets / b_vl) ** 2)
    v = np.convolve(g, h, mode="same") * fine_step
    v /= v.max()
    area = float(np.trapezoid(v, offsets))
    return VoigtKernel(fine_step=float(fine_step), span=float(span),
                       offsets=offsets, profile=v, area_unit=area)


def build_voigt(grid: SpectralGrid, amplitude: float, b_vg: float,
                b_vl: float, center: float = 0.0,
                fine_step: float | None = None,
                span: float | None = None) -> tuple[np.ndarray, VoigtKernel]:
    """Voigt template on the simulation grid, plus its construction kernel.

    The fine step defaults to a quarter of the grid spacing.  The peak
    value equals ``amplitude`` exactly whenever ``center`` lies on both
    grids (the default center 0 does).
    """
    if fine_step is None:
        fine_step = grid.spacing / 4.0
    kernel = build_voigt_kernel(b_vg, b_vl, fine_step, span)
    values = amplitude * kernel.interpolate(grid.axis - center)
    return values, kernel


@lru_cache(maxsize=256)
def _solve_voigt_b(fwhm: float, fine_step: float) -> float:
    lo, hi = fwhm / 10.0, fwhm

    def measured(b: float) -> float:
        k = build_voigt_kernel(b, b, fine_step)
        return measure_fwhm(k.offsets, k.profile)

    w_lo, w_hi = measured(lo), measured(hi)
    if not (w_lo < fwhm < w_hi):
        raise WidthSolveError(
            f"target FWHM {fwhm} not bracketed by b in [{lo}, {hi}] "
            f"(measured {w_lo}..{w_hi}); check fine step and span"
        )
    b = 0.5 * (lo + hi)
    for _ in range(80):
        b = 0.5 * (lo + hi)
        w = measured(b)
        if abs(w - fwhm) <= VOIGT_FWHM_RTOL * fwhm:
            return b
        if w < fwhm:
            lo = b
        else:
            hi = b
    raise WidthSolveError(
        f"Voigt width bisection did not converge for FWHM {fwhm} "
        f"with fine step {fine_step}"
    )


def voigt_b_from_fwhm(fwhm: float, fine_step: float | None = None) -> float:
    """Common Voigt parameter b = b_VG = b_VL matching the target FWHM.

    Solved by bisection on b over [fwhm/10, fwhm], measuring the kernel
    FWHM by linear interpolation on the fine grid, to relative tolerance
    1e-3.  Without an explicit fine step the kernel is built at fwhm/100
    resolution.
    """
    if not (fwhm > 0):
        raise ConfigError(f"fwhm must be positive, got {fwhm}")
    if fine_step is None:
        fine_step = fwhm / 100.0
    return _solve_voigt_b(float(fwhm), float(fine_step))


def width_param_from_fwhm(family: str, fwhm: float,
                          fine_step: float | None = None) -> float:
    """Family width parameter (b_G, b_L, or the common Voigt b) for a FWHM."""
    _check_family(family)
    if not (fwhm > 0):
        raise ConfigError(f"fwhm must be positive, got {fwhm}")
    if family == GAUSSIAN:
        return fwhm / GAUSS_FWHM_OVER_B
    if family == LORENTZIAN:
        return fwhm / 2.0
    return voigt_b_from_fwhm(fwhm, fine_step)


# ---------------------------------------------------------------------------
# templates


@dataclass(frozen=True)
class LineshapeSpec:
    """A clean peak: family, height (in noise-sigma units), FWHM, center."""

    family: str
    amplitude: float
    fwhm: float
    center: float = 0.0
    dim: int = 1

    def __post_init__(self):
        _check_family(self.family)
        if not (self.fwhm > 0):
            raise ConfigError(f"fwhm must be positive, got {self.fwhm}")
        if self.dim not in (1, 2):
            raise ConfigError(f"dim must be 1 or 2, got {self.dim}")


def _unit_profile_1d(family: str, fwhm: float, grid: SpectralGrid,
                     center: float, width_param: float | None) -> np.ndarray:
    if width_param is None:
        width_param = width_param_from_fwhm(family, fwhm,
                                            fine_step=grid.spacing / 4.0)
    if family == GAUSSIAN:
        return gaussian_profile(grid.axis, 1.0, width_param, center)
    if family == LORENTZIAN:
        return lorentzian_profile(grid.axis, 1.0, width_param, center)
    values, _ = build_voigt(grid, 1.0, width_param, width_param, center)
    return values


def make_template(spec: LineshapeSpec, grid: SpectralGrid,
                  width_param: float | None = None) -> np.ndarray:
    """Evaluate the clean template for ``spec`` on ``grid``.

    ``width_param`` overrides the FWHM-derived family parameter when the
    caller wants to pin b directly (the FWHM field is then ignored for
    evaluation but kept as metadata).
    """
    if spec.dim != grid.dim:
        raise ConfigError(
            f"spec dim {spec.dim} does not match grid dim {grid.dim}"
        )
    if grid.dim == 1:
        u = _unit_profile_1d(spec.family, spec.fwhm, grid, spec.center,
                             width_param)
        return spec.amplitude * u
    return eval_2d(grid, spec, width_param=width_param)


def eval_2d(grid: SpectralGrid, spec: LineshapeSpec,
            width_param: float | None = None) -> np.ndarray:
    """Separable 2D template: unit 1D factors multiplied, scaled to peak.

    s(x_i, y_j) = amplitude * u(x_i) * u(y_j) with u the unit-amplitude
    1D profile, so the peak value is the amplitude itself.
    """
    if grid.dim != 2:
        raise ConfigError("eval_2d requires a 2D grid")
    axis_grid = SpectralGrid(dim=1, spacing=grid.spacing,
                             half_extent=grid.half_extent,
                             points_per_axis=grid.points_per_axis)
    u = _unit_profile_1d(spec.family, spec.fwhm, axis_grid, spec.center,
                         width_param)
    return spec.amplitude * np.outer(u, u)
