"""Uniform sampling grids and reproducible additive Gaussian noise.

Noise is organized as one independent stream per Monte Carlo trial.  A
trial stream is keyed by ``(master_seed, trial_index)`` through a
counter-based generator (Philox), so the draw for a given trial never
depends on how many other trials ran before it or on which worker ran
it.  Serial and parallel schedules therefore produce bit-identical
noise arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import ConfigError

_RATIO_TOL = 1e-9
_MAX_SEED = 2**64


@dataclass(frozen=True)
class SpectralGrid:
    """Symmetric uniform lattice about 0 in 1 or 2 dimensions.

    ``points_per_axis`` is always odd, so the point x = 0 lies exactly
    on the grid.  Coordinates are built as ``k * spacing`` with integer
    ``k``, which keeps the axis exactly antisymmetric in floating point.
    """

    dim: int
    spacing: float
    half_extent: float
    points_per_axis: int

    @property
    def center_index(self) -> int:
        return self.points_per_axis // 2

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def peak_index(self):
        """Index of the origin: int in 1D, (row, col) pair in 2D."""
        c = self.center_index
        return c if self.dim == 1 else (c, c)

    @cached_property
    def axis(self) -> np.ndarray:
        k = np.arange(self.points_per_axis) - self.center_index
        return k * self.spacing


def make_grid(dim: int, spacing: float, half_extent: float) -> SpectralGrid:
    """Build a symmetric grid with x_i = -half_extent + i*spacing.

    ``half_extent / spacing`` must be integral to within 1e-9 so the
    grid stays symmetric and contains x = 0 exactly.
    """
    if dim not in (1, 2):
        raise ConfigError(f"dim must be 1 or 2, got {dim}")
    if not (spacing > 0):
        raise ConfigError(f"spacing must be positive, got {spacing}")
    if not (half_extent > 0):
        raise ConfigError(f"half_extent must be positive, got {half_extent}")
    ratio = half_extent / spacing
    if abs(ratio - round(ratio)) > _RATIO_TOL * max(1.0, ratio):
        raise ConfigError(
            f"half_extent ({half_extent}) is not an integral multiple of "
            f"spacing ({spacing})"
        )
    n = 2 * int(round(ratio)) + 1
    return SpectralGrid(dim=dim, spacing=spacing, half_extent=half_extent,
                        points_per_axis=n)


def default_grid_1d() -> SpectralGrid:
    """The standard 1D simulation grid: x in [-20, 20], spacing 0.01."""
    return make_grid(1, 0.01, 20.0)


def default_grid_2d() -> SpectralGrid:
    """The standard 2D grid: x, y in [-5, 5], spacing 0.1 (101x101)."""
    return make_grid(2, 0.1, 5.0)


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean iid Gaussian noise with standard deviation ``sigma``."""

    sigma: float
    master_seed: int

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigError(f"sigma must be non-negative, got {self.sigma}")
        if not (0 <= int(self.master_seed) < _MAX_SEED):
            raise ConfigError("master_seed must fit in an unsigned 64-bit int")


def trial_generator(master_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based generator for one trial, pure in (seed, trial)."""
    if trial_index < 0:
        raise ConfigError(f"trial_index must be >= 0, got {trial_index}")
    key = np.array([master_seed, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_noise(model: NoiseModel, grid: SpectralGrid,
                 trial_index: int) -> np.ndarray:
    """One full-grid noise realization for the given trial index.

    Deterministic: repeated calls with the same arguments return
    bit-identical arrays.
    """
    rng = trial_generator(model.master_seed, trial_index)
    return model.sigma * rng.standard_normal(grid.shape)


def derive_seed(*parts: int) -> int:
    """Mix integer components (base seed, repeat, ...) into a 64-bit seed."""
    ss = np.random.SeedSequence([int(p) for p in parts])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class TrialBatch:
    """A clean template plus a family of per-trial noise realizations."""

    grid: SpectralGrid
    clean: np.ndarray
    n_trials: int
    noise_model: NoiseModel

    def __post_init__(self):
        if self.clean.shape != self.grid.shape:
            raise ConfigError(
                f"clean template shape {self.clean.shape} does not match "
                f"grid shape {self.grid.shape}"
            )
        if self.n_trials < 1:
            raise ConfigError("n_trials must be >= 1")

    def observation(self, trial_index: int) -> np.ndarray:
        """y = clean + noise for one trial."""
        if not (0 <= trial_index < self.n_trials):
            raise ConfigError(
                f"trial_index {trial_index} outside [0, {self.n_trials})"
            )
        return self.clean + sample_noise(self.noise_model, self.grid,
                                         trial_index)

    def __iter__(self) -> Iterator[np.ndarray]:
        for t in range(self.n_trials):
            yield self.observation(t)
