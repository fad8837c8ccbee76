"""Builders that flatten experiment results into ResultTable objects.

Each builder attaches a ``suggested_filename`` (no extension) to the
table metadata so clients can lay files out consistently:
``<out>/<experiment>/<family>_<width>_<amp-or-thr>.<fmt>``.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .detection import gamma_analytic, gamma_per_bin, roi_width_over_b
from .experiments import AmpSweepResult, Sweep2DResult, WidthSweepResult
from .lineshapes import GAUSSIAN, LORENTZIAN
from .roc import Histogram, HypothesisValues, RocConfig, RocResult
from .tables import ResultTable, base_meta


def _clean(value: float) -> float | None:
    """NaN cells become None so JSON stays standard-compliant."""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return None
    return float(value)


def amp_sweep_tables(result: AmpSweepResult, seed: int,
                     config_echo: dict[str, Any]) -> list[ResultTable]:
    tables = []
    thr = result.config.threshold
    for (family, width), curve in result.mean_curves.items():
        rows = []
        for i, amp in enumerate(curve.axis):
            rows.append([
                family, width, float(amp),
                float(curve.prob_psnr[i]), float(curve.prob_asnr[i]),
                float(curve.mean_psnr[i]), float(curve.std_psnr[i]),
                float(curve.mean_asnr[i]), float(curve.std_asnr[i]),
            ])
        meta = base_meta("detection_curve", seed, config_echo,
                         suggested_filename=f"{family}_{width}_thr{thr:g}",
                         family=family, fwhm_bins=width, threshold=thr)
        tables.append(ResultTable(
            name="detection_curve",
            columns=["family", "fwhm_bins", "amplitude", "prob_psnr",
                     "prob_asnr", "mean_psnr", "std_psnr", "mean_asnr",
                     "std_asnr"],
            rows=rows, meta=meta))

    crit_rows = []
    for row in result.criticals:
        crit_rows.append([
            row.family, row.width_bins, row.threshold,
            _clean(row.psnr_crit_mean), _clean(row.psnr_crit_std),
            _clean(row.asnr_crit_mean), _clean(row.asnr_crit_std),
            _clean(row.improvement_factor),
        ])
    meta = base_meta("critical_amplitudes", seed, config_echo,
                     suggested_filename="critical_amplitudes",
                     n_repeats=result.config.n_repeats)
    warnings = [f"{r.family}/{r.width_bins}: no 50% crossing in range"
                for r in result.criticals
                if not (r.psnr_in_range and r.asnr_in_range)]
    if warnings:
        meta["warnings"] = warnings
    tables.append(ResultTable(
        name="critical_amplitudes",
        columns=["lineshape", "width_bins", "threshold", "psnr_crit_mean",
                 "psnr_crit_std", "asnr_crit_mean", "asnr_crit_std",
                 "improvement_factor"],
        rows=crit_rows, meta=meta))
    return tables


def width_sweep_tables(result: WidthSweepResult, seed: int,
                       config_echo: dict[str, Any]) -> list[ResultTable]:
    tables = []
    widths = result.config.fwhm_bins
    span = f"w{min(widths)}-{max(widths)}"
    for (family, amp), curve in result.curves.items():
        rows = []
        for i, wb in enumerate(curve.widths):
            rows.append([
                family, float(amp), int(wb),
                float(curve.mean_psnr[i]), float(curve.std_psnr[i]),
                float(curve.mean_asnr[i]), float(curve.std_asnr[i]),
                float(curve.ratio[i]), float(curve.ratio_std[i]),
                float(curve.prob_psnr[i]), float(curve.prob_asnr[i]),
            ])
        meta = base_meta("width_curve", seed, config_echo,
                         suggested_filename=f"{family}_{span}_amp{amp:g}",
                         family=family, amplitude=amp)
        tables.append(ResultTable(
            name="width_curve",
            columns=["family", "amplitude", "fwhm_bins", "mean_psnr",
                     "std_psnr", "mean_asnr", "std_asnr", "ratio_asnr_psnr",
                     "ratio_std", "prob_psnr", "prob_asnr"],
            rows=rows, meta=meta))
    return tables


def _roc_width_tag(config: RocConfig) -> str:
    if config.width_param is not None:
        return f"b{config.width_param:g}"
    return str(config.fwhm_bins)


def roc_tables(result: RocResult, seed: int,
               config_echo: dict[str, Any]) -> list[ResultTable]:
    cfg = result.config
    tag = _roc_width_tag(cfg)
    stem = f"{cfg.family}_{tag}_amp{cfg.amplitude:g}"
    curve_rows = []
    for i, tau in enumerate(result.thresholds):
        curve_rows.append([
            float(tau),
            float(result.fpr_psnr[i]), float(result.tpr_psnr[i]),
            float(result.fpr_asnr[i]), float(result.tpr_asnr[i]),
        ])
    curve = ResultTable(
        name="roc_curve",
        columns=["tau", "fpr_psnr", "tpr_psnr", "fpr_asnr", "tpr_asnr"],
        rows=curve_rows,
        meta=base_meta("roc_curve", seed, config_echo,
                       suggested_filename=stem, family=cfg.family,
                       amplitude=cfg.amplitude))

    auc_rows = [[r, float(result.auc_psnr_repeats[r]),
                 float(result.auc_asnr_repeats[r])]
                for r in range(cfg.n_repeats)]
    repeats = ResultTable(
        name="roc_auc_repeats",
        columns=["repeat", "auc_psnr", "auc_asnr"],
        rows=auc_rows,
        meta=base_meta("roc_auc_repeats", seed, config_echo,
                       suggested_filename=f"{stem}_auc_repeats"))

    summary = ResultTable(
        name="roc_auc_summary",
        columns=["family", "width", "amplitude", "auc_psnr_mean",
                 "auc_psnr_std", "auc_asnr_mean", "auc_asnr_std",
                 "n_repeats", "two_sided"],
        rows=[[cfg.family, tag, cfg.amplitude,
               result.auc_psnr, result.auc_psnr_std,
               result.auc_asnr, result.auc_asnr_std,
               cfg.n_repeats, int(cfg.two_sided)]],
        meta=base_meta("roc_auc_summary", seed, config_echo,
                       suggested_filename=f"{stem}_auc_summary"))
    return [curve, repeats, summary]


def density_tables(config: RocConfig, histograms: dict[str, Histogram],
                   values: HypothesisValues, seed: int,
                   config_echo: dict[str, Any]) -> list[ResultTable]:
    tag = _roc_width_tag(config)
    stem = f"{config.family}_{tag}_amp{config.amplitude:g}"
    rows = []
    for key, hist in histograms.items():
        statistic, hypothesis = key.split("_")
        for i in range(len(hist.density)):
            rows.append([statistic, hypothesis,
                         float(hist.edges[i]), float(hist.edges[i + 1]),
                         float(hist.density[i])])
    hist_table = ResultTable(
        name="density_histogram",
        columns=["statistic", "hypothesis", "bin_left", "bin_right",
                 "density"],
        rows=rows,
        meta=base_meta("density_histogram", seed, config_echo,
                       suggested_filename=stem))
    summary_rows = [
        [key.split("_")[0], key.split("_")[1], hist.mean, hist.std, hist.n]
        for key, hist in histograms.items()
    ]
    summary = ResultTable(
        name="density_summary",
        columns=["statistic", "hypothesis", "mean", "std", "n_trials"],
        rows=summary_rows,
        meta=base_meta("density_summary", seed, config_echo,
                       suggested_filename=f"{stem}_summary"))
    return [hist_table, summary]


def sweep2d_tables(result: Sweep2DResult, seed: int,
                   config_echo: dict[str, Any]) -> list[ResultTable]:
    tables = []
    cfg = result.config
    span = f"w{min(cfg.widths_px)}-{max(cfg.widths_px)}"
    for family, surface in result.surfaces.items():
        rows = []
        for wi, wb in enumerate(surface.widths_px):
            for ai, amp in enumerate(surface.amplitudes):
                rows.append([
                    family, int(wb), float(amp),
                    float(surface.mean_psnr[wi, ai]),
                    float(surface.std_psnr[wi, ai]),
                    float(surface.mean_vsnr[wi, ai]),
                    float(surface.std_vsnr[wi, ai]),
                ])
        tables.append(ResultTable(
            name="surface_2d",
            columns=["family", "width_px", "amplitude", "mean_psnr",
                     "std_psnr", "mean_vsnr", "std_vsnr"],
            rows=rows,
            meta=base_meta("surface_2d", seed, config_echo,
                           suggested_filename=f"{family}_{span}",
                           family=family)))
    summary_rows = [
        [family, s.max_mean_psnr, s.max_psnr_std_repeats,
         s.max_mean_vsnr, s.max_vsnr_std_repeats,
         s.enhancement, s.enhancement_std_repeats]
        for family, s in result.surfaces.items()
    ]
    tables.append(ResultTable(
        name="sweep2d_summary",
        columns=["family", "max_mean_psnr", "max_psnr_std", "max_mean_vsnr",
                 "max_vsnr_std", "enhancement", "enhancement_std"],
        rows=summary_rows,
        meta=base_meta("sweep2d_summary", seed, config_echo,
                       suggested_filename="summary")))
    return tables


def gamma_table(families: tuple[str, ...], eta: float, b_over_dx: float,
                seed: int, config_echo: dict[str, Any]) -> ResultTable:
    """Analytic improvement-factor coefficients per family.

    ``gamma_coeff`` multiplies sqrt(b/dx); ``gamma_per_bin`` multiplies
    sqrt(N_ROI).  The level-eta width over b is reported where a closed
    form exists.
    """
    rows = []
    for family in families:
        coeff = gamma_analytic(family, b_over_dx, eta) / np.sqrt(b_over_dx)
        per_bin = gamma_per_bin(family, eta, b_over_dx=b_over_dx)
        if family in (GAUSSIAN, LORENTZIAN):
            w_over_b = roi_width_over_b(family, eta)
        else:
            w_over_b = None
        rows.append([family, eta, _clean(w_over_b), float(coeff),
                     float(per_bin)])
    return ResultTable(
        name="gamma_table",
        columns=["family", "eta", "width_over_b", "gamma_coeff",
                 "gamma_per_bin"],
        rows=rows,
        meta=base_meta("gamma_table", seed, config_echo,
                       suggested_filename=f"gamma_eta{eta:g}"))
