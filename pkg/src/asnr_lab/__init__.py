"""Area-based vs peak-based SNR detection statistics for spectroscopy.

Core pieces: sampling grids with reproducible per-trial noise streams,
FWHM-matched Gaussian/Lorentzian/Voigt templates, half-maximum ROI
extraction, the pSNR/aSNR/vSNR statistics with their analytic
improvement factors, and the Monte Carlo experiment engine (amplitude
and width sweeps, critical amplitudes, ROC/AUC analysis, 2D surfaces).

The package is exposed three ways: this Python API, a FastAPI service
(``asnr_lab.service``), and a CLI (``asnr-lab``) that drives the
service and writes CSV/JSON result tables.
"""

__version__ = "0.1.0"

from .detection import asnr, gamma_analytic, gamma_per_bin, psnr, vsnr
from .errors import (
    AsnrLabError,
    ConfigError,
    NumericError,
    SpanTooSmallError,
    WidthSolveError,
)
from .experiments import (
    AmpSweepResult,
    CellStats,
    CriticalAmplitude,
    DetectionCurve,
    Sweep2DConfig,
    Sweep2DResult,
    SweepConfig,
    WidthSweepConfig,
    WidthSweepResult,
    amplitude_sweep,
    critical_amplitude,
    detection_probability,
    sweep_2d,
    width_sweep,
)
from .grids import (
    NoiseModel,
    SpectralGrid,
    TrialBatch,
    default_grid_1d,
    default_grid_2d,
    derive_seed,
    make_grid,
    sample_noise,
    trial_generator,
)
from .lineshapes import (
    FAMILIES,
    LineshapeSpec,
    VoigtKernel,
    build_voigt,
    eval_2d,
    eval_gaussian,
    eval_lorentzian,
    make_template,
    measure_fwhm,
    width_param_from_fwhm,
)
from .roc import (
    HypothesisValues,
    RocConfig,
    RocResult,
    auc,
    density_histogram,
    roc_analysis,
    roc_curve,
    run_hypothesis_trials,
)
from .roi import RoiMask, extract_roi, extract_roi_2d

__all__ = [
    "__version__",
    "AsnrLabError", "ConfigError", "NumericError", "SpanTooSmallError",
    "WidthSolveError",
    "SpectralGrid", "NoiseModel", "TrialBatch", "make_grid",
    "default_grid_1d", "default_grid_2d", "sample_noise", "trial_generator",
    "derive_seed",
    "FAMILIES", "LineshapeSpec", "VoigtKernel", "width_param_from_fwhm",
    "eval_gaussian", "eval_lorentzian", "build_voigt", "eval_2d",
    "make_template", "measure_fwhm",
    "RoiMask", "extract_roi", "extract_roi_2d",
    "psnr", "asnr", "vsnr", "gamma_analytic", "gamma_per_bin",
    "SweepConfig", "WidthSweepConfig", "Sweep2DConfig", "CellStats",
    "DetectionCurve", "CriticalAmplitude", "AmpSweepResult",
    "WidthSweepResult", "Sweep2DResult", "detection_probability",
    "amplitude_sweep", "critical_amplitude", "width_sweep", "sweep_2d",
    "RocConfig", "RocResult", "HypothesisValues", "run_hypothesis_trials",
    "roc_curve", "auc", "roc_analysis", "density_histogram",
]
