"""Monte Carlo experiment engine.

Covers the detection-probability sweeps: amplitude sweeps with
critical-amplitude extraction (threshold crossings at 50% detection),
width sweeps with aSNR/pSNR ratio curves, and the 2D width x amplitude
surface sweep.

Seeding scheme: every repetition derives its own master seed from
``(base_seed, repeat_index)``; within a repetition, each experimental
condition (one family/width/amplitude cell) owns a disjoint block of
trial indices, so any parallel schedule reproduces the serial results
exactly.  The 2D sweep is the one deliberate exception: all cells of a
family's surface share a single per-repeat noise stream, mirroring the
original protocol's single noise array per surface (this is also what
keeps the surface maxima free of selection bias across cells).

Detection uses the convention "statistic >= threshold".  Worker count
for parallel execution is capped by the ASNR_LAB_THREADS environment
variable (default 1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .detection import asnr, psnr
from .errors import ConfigError
from .grids import (
    NoiseModel,
    SpectralGrid,
    default_grid_1d,
    default_grid_2d,
    derive_seed,
    sample_noise,
    trial_generator,
)
from .lineshapes import LineshapeSpec, make_template
from .roi import RoiMask, extract_roi, extract_roi_2d

DEFAULT_AMPLITUDES = tuple(np.arange(0.0, 5.0001, 0.5))

_THREADS_ENV = "ASNR_LAB_THREADS"


def max_workers() -> int:
    """Worker cap from ASNR_LAB_THREADS; at least 1."""
    raw = os.environ.get(_THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{_THREADS_ENV} must be an integer, got {raw!r}")


def _run_tasks(fn, tasks):
    """Run tasks preserving order; thread pool only when it can help."""
    workers = max_workers()
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# single-condition statistics


@dataclass(frozen=True)
class CellStats:
    """Per-condition Monte Carlo summary of both statistics."""

    prob_psnr: float
    prob_asnr: float
    mean_psnr: float
    std_psnr: float
    mean_asnr: float
    std_asnr: float


def detection_probability(clean: np.ndarray, roi: RoiMask, threshold: float,
                          n_mc: int, noise_model: NoiseModel,
                          grid: SpectralGrid,
                          trial_offset: int = 0) -> CellStats:
    """Fraction of trials with statistic >= threshold, plus moments.

    Each trial t draws one full-grid noise realization from the stream
    keyed by (master_seed, trial_offset + t) and evaluates pSNR and
    aSNR on y = clean + noise.
    """
    if n_mc < 1:
        raise ConfigError("n_mc must be >= 1")
    sigma = noise_model.sigma
    p_vals = np.empty(n_mc)
    a_vals = np.empty(n_mc)
    for t in range(n_mc):
        y = clean + sample_noise(noise_model, grid, trial_offset + t)
        p_vals[t] = psnr(y, roi.peak_index, sigma)
        a_vals[t] = asnr(y, roi, sigma)
    ddof = 1 if n_mc > 1 else 0
    return CellStats(
        prob_psnr=float(np.count_nonzero(p_vals >= threshold) / n_mc),
        prob_asnr=float(np.count_nonzero(a_vals >= threshold) / n_mc),
        mean_psnr=float(p_vals.mean()),
        std_psnr=float(p_vals.std(ddof=ddof)),
        mean_asnr=float(a_vals.mean()),
        std_asnr=float(a_vals.std(ddof=ddof)),
    )


# ---------------------------------------------------------------------------
# detection curves and critical amplitudes


@dataclass(frozen=True)
class DetectionCurve:
    """Detection statistics along an axis (amplitudes or widths)."""

    family: str
    fwhm_bins: int | None
    axis: np.ndarray
    prob_psnr: np.ndarray
    prob_asnr: np.ndarray
    mean_psnr: np.ndarray
    std_psnr: np.ndarray
    mean_asnr: np.ndarray
    std_asnr: np.ndarray


@dataclass(frozen=True)
class CriticalAmplitude:
    """Amplitude where a statistic first crosses the target probability."""

    kind: str
    value: float
    std_over_repeats: float
    in_range: bool


def interp_crossing(axis, probs, target: float = 0.5) -> tuple[float, bool]:
    """First upward crossing of ``target`` by linear interpolation.

    Returns (nan, False) when no bracketing pair exists in the sweep
    range; an out-of-range crossing is reported, not raised.
    """
    axis = np.asarray(axis, dtype=float)
    probs = np.asarray(probs, dtype=float)
    for k in range(len(axis) - 1):
        if probs[k] < target <= probs[k + 1]:
            frac = (target - probs[k]) / (probs[k + 1] - probs[k])
            return float(axis[k] + frac * (axis[k + 1] - axis[k])), True
    return float("nan"), False


def critical_amplitude(curve: DetectionCurve, kind: str = "asnr",
                       target_prob: float = 0.5) -> CriticalAmplitude:
    probs = curve.prob_asnr if kind == "asnr" else curve.prob_psnr
    value, in_range = interp_crossing(curve.axis, probs, target_prob)
    return CriticalAmplitude(kind=kind, value=value,
                             std_over_repeats=float("nan"), in_range=in_range)


def _mean_curve(curves: list[DetectionCurve]) -> DetectionCurve:
    def avg(name):
        return np.mean([getattr(c, name) for c in curves], axis=0)

    first = curves[0]
    return DetectionCurve(
        family=first.family, fwhm_bins=first.fwhm_bins, axis=first.axis,
        prob_psnr=avg("prob_psnr"), prob_asnr=avg("prob_asnr"),
        mean_psnr=avg("mean_psnr"), std_psnr=avg("std_psnr"),
        mean_asnr=avg("mean_asnr"), std_asnr=avg("std_asnr"),
    )


# ---------------------------------------------------------------------------
# amplitude sweep


@dataclass(frozen=True)
class SweepConfig:
    """Configuration for the amplitude sweep (Table 1 protocol)."""

    families: tuple[str, ...] = ("gaussian",)
    fwhm_bins: tuple[int, ...] = (3, 10, 50)
    amplitudes: tuple[float, ...] = DEFAULT_AMPLITUDES
    threshold: float = 3.0
    n_mc: int = 2000
    n_repeats: int = 10
    sigma: float = 1.0
    eta: float = 0.5
    base_seed: int = 42
    grid: SpectralGrid = field(default_factory=default_grid_1d)


@dataclass(frozen=True)
class CriticalRow:
    """One Table-1-style row aggregated over repeats."""

    family: str
    width_bins: int
    threshold: float
    psnr_crit_mean: float
    psnr_crit_std: float
    asnr_crit_mean: float
    asnr_crit_std: float
    improvement_factor: float | None
    psnr_in_range: bool
    asnr_in_range: bool


@dataclass(frozen=True)
class AmpSweepResult:
    config: SweepConfig
    mean_curves: dict[tuple[str, int], DetectionCurve]
    repeat_curves: dict[tuple[str, int], list[DetectionCurve]]
    criticals: list[CriticalRow]


def _condition_geometry(family: str, width_bins: int, grid: SpectralGrid,
                        eta: float):
    """Unit-amplitude template and its ROI, shared across a condition."""
    fwhm = width_bins * grid.spacing
    spec = LineshapeSpec(family=family, amplitude=1.0, fwhm=fwhm, dim=grid.dim)
    unit = make_template(spec, grid)
    mask = extract_roi(unit, eta) if grid.dim == 1 else extract_roi_2d(unit, eta)
    return unit, mask


def _axis_curve(family, width_bins, unit, mask, amplitudes, threshold, n_mc,
                sigma, master_seed, grid, offsets) -> DetectionCurve:
    cells = []
    model = NoiseModel(sigma=sigma, master_seed=master_seed)
    for amp, offset in zip(amplitudes, offsets):
        cells.append(detection_probability(amp * unit, mask, threshold, n_mc,
                                           model, grid, trial_offset=offset))
    return DetectionCurve(
        family=family, fwhm_bins=width_bins,
        axis=np.asarray(amplitudes, dtype=float),
        prob_psnr=np.array([c.prob_psnr for c in cells]),
        prob_asnr=np.array([c.prob_asnr for c in cells]),
        mean_psnr=np.array([c.mean_psnr for c in cells]),
        std_psnr=np.array([c.std_psnr for c in cells]),
        mean_asnr=np.array([c.mean_asnr for c in cells]),
        std_asnr=np.array([c.std_asnr for c in cells]),
    )


def _repeat_stats(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std


def amplitude_sweep(config: SweepConfig) -> AmpSweepResult:
    """Detection probability vs amplitude, repeated with independent noise.

    The same ROI (from the unit-amplitude clean template, which shares
    its super-level sets with every positive amplitude) is reused across
    all trials of a condition.  Critical amplitudes are extracted per
    repeat and summarized as mean +/- sample std.
    """
    geometries = {
        (fam, wb): _condition_geometry(fam, wb, config.grid, config.eta)
        for fam in config.families for wb in config.fwhm_bins
    }
    n_amp = len(config.amplitudes)

    def condition_offsets(fam_i: int, width_i: int) -> list[int]:
        base = (fam_i * len(config.fwhm_bins) + width_i) * n_amp
        return [(base + a) * config.n_mc for a in range(n_amp)]

    tasks = [
        (fam_i, width_i, repeat)
        for fam_i in range(len(config.families))
        for width_i in range(len(config.fwhm_bins))
        for repeat in range(config.n_repeats)
    ]

    def run(task):
        fam_i, width_i, repeat = task
        fam = config.families[fam_i]
        wb = config.fwhm_bins[width_i]
        unit, mask = geometries[(fam, wb)]
        master = derive_seed(config.base_seed, repeat)
        return _axis_curve(fam, wb, unit, mask, config.amplitudes,
                           config.threshold, config.n_mc, config.sigma,
                           master, config.grid,
                           condition_offsets(fam_i, width_i))

    results = _run_tasks(run, tasks)

    repeat_curves: dict[tuple[str, int], list[DetectionCurve]] = {}
    for task, curve in zip(tasks, results):
        fam_i, width_i, _ = task
        key = (config.families[fam_i], config.fwhm_bins[width_i])
        repeat_curves.setdefault(key, []).append(curve)

    mean_curves = {k: _mean_curve(v) for k, v in repeat_curves.items()}

    criticals = []
    for (fam, wb), curves in repeat_curves.items():
        p_crits = [critical_amplitude(c, "psnr") for c in curves]
        a_crits = [critical_amplitude(c, "asnr") for c in curves]
        p_ok = all(c.in_range for c in p_crits)
        a_ok = all(c.in_range for c in a_crits)
        p_mean, p_std = _repeat_stats([c.value for c in p_crits]) if p_ok \
            else (float("nan"), float("nan"))
        a_mean, a_std = _repeat_stats([c.value for c in a_crits]) if a_ok \
            else (float("nan"), float("nan"))
        improvement = p_mean / a_mean if (p_ok and a_ok) else None
        criticals.append(CriticalRow(
            family=fam, width_bins=wb, threshold=config.threshold,
            psnr_crit_mean=p_mean, psnr_crit_std=p_std,
            asnr_crit_mean=a_mean, asnr_crit_std=a_std,
            improvement_factor=improvement,
            psnr_in_range=p_ok, asnr_in_range=a_ok,
        ))
    return AmpSweepResult(config=config, mean_curves=mean_curves,
                          repeat_curves=repeat_curves, criticals=criticals)


# ---------------------------------------------------------------------------
# width sweep


@dataclass(frozen=True)
class WidthSweepConfig:
    """Configuration for the width sweep (FWHM in bins along the axis)."""

    families: tuple[str, ...] = ("gaussian", "lorentzian", "voigt")
    amplitudes: tuple[float, ...] = (1.0, 2.0, 3.0)
    fwhm_bins: tuple[int, ...] = tuple(range(1, 51))
    threshold: float = 3.0
    n_mc: int = 2000
    n_repeats: int = 1
    sigma: float = 1.0
    eta: float = 0.5
    base_seed: int = 42
    grid: SpectralGrid = field(default_factory=default_grid_1d)


@dataclass(frozen=True)
class WidthCurve:
    """Mean statistics vs width at a fixed amplitude, repeat-averaged."""

    family: str
    amplitude: float
    widths: np.ndarray
    mean_psnr: np.ndarray
    std_psnr: np.ndarray
    mean_asnr: np.ndarray
    std_asnr: np.ndarray
    ratio: np.ndarray
    ratio_std: np.ndarray
    prob_psnr: np.ndarray
    prob_asnr: np.ndarray


@dataclass(frozen=True)
class WidthSweepResult:
    config: WidthSweepConfig
    curves: dict[tuple[str, float], WidthCurve]


def width_sweep(config: WidthSweepConfig) -> WidthSweepResult:
    """Mean pSNR/aSNR and their ratio as the FWHM grows, amplitude fixed."""
    geometries = {
        (fam, wb): _condition_geometry(fam, wb, config.grid, config.eta)
        for fam in config.families for wb in config.fwhm_bins
    }
    n_width = len(config.fwhm_bins)
    n_amp = len(config.amplitudes)

    tasks = [
        (fam_i, amp_i, repeat)
        for fam_i in range(len(config.families))
        for amp_i in range(n_amp)
        for repeat in range(config.n_repeats)
    ]

    def run(task):
        fam_i, amp_i, repeat = task
        fam = config.families[fam_i]
        amp = config.amplitudes[amp_i]
        master = derive_seed(config.base_seed, repeat)
        model = NoiseModel(sigma=config.sigma, master_seed=master)
        cells = []
        for width_i, wb in enumerate(config.fwhm_bins):
            unit, mask = geometries[(fam, wb)]
            cond = (fam_i * n_amp + amp_i) * n_width + width_i
            cells.append(detection_probability(
                amp * unit, mask, config.threshold, config.n_mc, model,
                config.grid, trial_offset=cond * config.n_mc))
        return cells

    results = _run_tasks(run, tasks)

    by_key: dict[tuple[str, float], list[list[CellStats]]] = {}
    for task, cells in zip(tasks, results):
        fam_i, amp_i, _ = task
        key = (config.families[fam_i], config.amplitudes[amp_i])
        by_key.setdefault(key, []).append(cells)

    curves = {}
    for (fam, amp), repeats in by_key.items():
        mean_p = np.array([[c.mean_psnr for c in cells] for cells in repeats])
        mean_a = np.array([[c.mean_asnr for c in cells] for cells in repeats])
        ratios = mean_a / mean_p
        curves[(fam, amp)] = WidthCurve(
            family=fam, amplitude=amp,
            widths=np.asarray(config.fwhm_bins, dtype=int),
            mean_psnr=mean_p.mean(axis=0),
            std_psnr=np.array([[c.std_psnr for c in cells]
                               for cells in repeats]).mean(axis=0),
            mean_asnr=mean_a.mean(axis=0),
            std_asnr=np.array([[c.std_asnr for c in cells]
                               for cells in repeats]).mean(axis=0),
            ratio=ratios.mean(axis=0),
            ratio_std=(ratios.std(axis=0, ddof=1) if len(repeats) > 1
                       else np.zeros(n_width)),
            prob_psnr=np.array([[c.prob_psnr for c in cells]
                                for cells in repeats]).mean(axis=0),
            prob_asnr=np.array([[c.prob_asnr for c in cells]
                                for cells in repeats]).mean(axis=0),
        )
    return WidthSweepResult(config=config, curves=curves)


# ---------------------------------------------------------------------------
# 2D surface sweep


@dataclass(frozen=True)
class Sweep2DConfig:
    families: tuple[str, ...] = ("gaussian", "lorentzian", "voigt")
    widths_px: tuple[int, ...] = tuple(range(1, 21))
    amplitudes: tuple[float, ...] = DEFAULT_AMPLITUDES
    n_mc: int = 200
    n_repeats: int = 1
    sigma: float = 1.0
    eta: float = 0.5
    base_seed: int = 42
    grid: SpectralGrid = field(default_factory=default_grid_2d)


@dataclass(frozen=True)
class Surface2D:
    """Mean pSNR and vSNR over the width x amplitude plane, one family."""

    family: str
    widths_px: np.ndarray
    amplitudes: np.ndarray
    mean_psnr: np.ndarray     # shape (n_widths, n_amplitudes)
    std_psnr: np.ndarray
    mean_vsnr: np.ndarray
    std_vsnr: np.ndarray
    max_mean_psnr: float
    max_mean_vsnr: float
    enhancement: float
    max_psnr_std_repeats: float
    max_vsnr_std_repeats: float
    enhancement_std_repeats: float


@dataclass(frozen=True)
class Sweep2DResult:
    config: Sweep2DConfig
    surfaces: dict[str, Surface2D]


def sweep_2d(config: Sweep2DConfig) -> Sweep2DResult:
    """Mean pSNR and vSNR surfaces over (width, amplitude), per family.

    All cells of one family's surface share the same per-repeat noise
    stream (one 2D realization per trial), so a cell's statistics are
    the exact values the direct per-cell evaluation would produce with
    that stream.  Statistics are affine in amplitude, which lets each
    trial contribute its peak value and per-width ROI sums once.
    """
    if config.grid.dim != 2:
        raise ConfigError("sweep_2d requires a 2D grid")
    amps = np.asarray(config.amplitudes, dtype=float)
    widths = np.asarray(config.widths_px, dtype=int)
    sigma = config.sigma
    center = config.grid.peak_index

    surfaces = {}
    for fam_i, fam in enumerate(config.families):
        geo = [_condition_geometry(fam, int(wb), config.grid, config.eta)
               for wb in widths]
        peak_unit = np.array([unit[center] for unit, _ in geo])
        roi_unit_sums = np.array([float(mask.values(unit).sum())
                                  for unit, mask in geo])
        roi_sizes = np.array([mask.n_roi for _, mask in geo], dtype=float)

        def run_repeat(repeat, fam_i=fam_i, geo=geo):
            master = derive_seed(config.base_seed, repeat, fam_i)
            peak_noise = np.empty(config.n_mc)
            roi_noise = np.empty((len(widths), config.n_mc))
            for t in range(config.n_mc):
                noise = sigma * trial_generator(master, t).standard_normal(
                    config.grid.shape)
                peak_noise[t] = noise[center]
                for wi, (_, mask) in enumerate(geo):
                    roi_noise[wi, t] = noise[mask.indices].sum()
            return peak_noise, roi_noise

        repeat_data = _run_tasks(run_repeat, list(range(config.n_repeats)))

        mean_p = np.zeros((config.n_repeats, len(widths), len(amps)))
        std_p = np.zeros_like(mean_p)
        mean_v = np.zeros_like(mean_p)
        std_v = np.zeros_like(mean_p)
        for r, (peak_noise, roi_noise) in enumerate(repeat_data):
            for wi in range(len(widths)):
                for ai, a in enumerate(amps):
                    p_vals = np.abs(a * peak_unit[wi] + peak_noise) / sigma
                    v_vals = (a * roi_unit_sums[wi] + roi_noise[wi]) / (
                        sigma * np.sqrt(roi_sizes[wi]))
                    mean_p[r, wi, ai] = p_vals.mean()
                    std_p[r, wi, ai] = p_vals.std(ddof=1)
                    mean_v[r, wi, ai] = v_vals.mean()
                    std_v[r, wi, ai] = v_vals.std(ddof=1)

        max_p = mean_p.reshape(config.n_repeats, -1).max(axis=1)
        max_v = mean_v.reshape(config.n_repeats, -1).max(axis=1)
        enh = max_v / max_p
        surfaces[fam] = Surface2D(
            family=fam, widths_px=widths, amplitudes=amps,
            mean_psnr=mean_p.mean(axis=0), std_psnr=std_p.mean(axis=0),
            mean_vsnr=mean_v.mean(axis=0), std_vsnr=std_v.mean(axis=0),
            max_mean_psnr=float(max_p.mean()),
            max_mean_vsnr=float(max_v.mean()),
            enhancement=float(enh.mean()),
            max_psnr_std_repeats=float(max_p.std(ddof=1)) if len(max_p) > 1 else 0.0,
            max_vsnr_std_repeats=float(max_v.std(ddof=1)) if len(max_v) > 1 else 0.0,
            enhancement_std_repeats=float(enh.std(ddof=1)) if len(enh) > 1 else 0.0,
        )
    return Sweep2DResult(config=config, surfaces=surfaces)
