"""Region-of-interest extraction from clean templates.

The ROI is the connected super-level set of the clean signal at a
fraction ``eta`` of its maximum, restricted to the component containing
the peak.  Membership uses a closed comparison (>=), so bins exactly at
the threshold are included.  The ROI is always computed from the clean
template, never from a noisy observation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError


@dataclass(frozen=True)
class RoiMask:
    """Connected set of grid indices where clean >= eta * max(clean).

    ``indices`` is a sorted integer array in 1D, or an (rows, cols)
    index-array pair in 2D; either form can be used directly to fancy-
    index an observation array.  ``width_bins`` is the index span along
    the first axis.
    """

    indices: np.ndarray | tuple[np.ndarray, np.ndarray]
    n_roi: int
    eta: float
    width_bins: int
    peak_index: int | tuple[int, int]
    dim: int

    def values(self, y: np.ndarray) -> np.ndarray:
        """Observation values on the mask."""
        return y[self.indices]


def _check_template(clean: np.ndarray, eta: float, dim: int) -> np.ndarray:
    clean = np.asarray(clean, dtype=float)
    if clean.ndim != dim:
        raise ConfigError(f"expected a {dim}D template, got shape {clean.shape}")
    if not (0 < eta < 1):
        raise ConfigError(f"eta must be in (0, 1), got {eta}")
    if not (clean.max() > 0):
        raise ConfigError("template has no strictly positive maximum")
    return clean


def extract_roi(clean: np.ndarray, eta: float = 0.5) -> RoiMask:
    """Contiguous 1D interval around the peak where clean >= eta * peak."""
    clean = _check_template(clean, eta, 1)
    threshold = eta * clean.max()
    above = clean >= threshold
    peak = int(np.argmax(clean))
    lo = peak
    while lo - 1 >= 0 and above[lo - 1]:
        lo -= 1
    hi = peak
    while hi + 1 < clean.size and above[hi + 1]:
        hi += 1
    indices = np.arange(lo, hi + 1)
    return RoiMask(indices=indices, n_roi=indices.size, eta=float(eta),
                   width_bins=hi - lo + 1, peak_index=peak, dim=1)


def extract_roi_2d(clean: np.ndarray, eta: float = 0.5) -> RoiMask:
    """4-connected 2D component around the peak where clean >= eta * peak."""
    clean = _check_template(clean, eta, 2)
    threshold = eta * clean.max()
    above = clean >= threshold
    # scipy's default structuring element is the 4-connected cross.
    labels, _ = ndimage.label(above)
    peak = np.unravel_index(int(np.argmax(clean)), clean.shape)
    component = labels == labels[peak]
    rows, cols = np.nonzero(component)
    return RoiMask(indices=(rows, cols), n_roi=int(rows.size), eta=float(eta),
                   width_bins=int(rows.max() - rows.min() + 1),
                   peak_index=(int(peak[0]), int(peak[1])), dim=2)
