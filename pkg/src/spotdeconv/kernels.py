"""Separable Gaussian-derived convolution kernels on a scale grid.

Each scale bin [s_{k-1}, s_k] gets one rank-1 kernel: a 1-D factor of
pixel-integrated Gaussian taps at the bin midpoint scale, so the 2-D kernel
is the outer product of that factor with itself. Taps are truncated at
radius ceil(c * sigma_k) and deliberately not renormalized, which keeps the
total 2-D kernel mass <= 1.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

# Midpoint scales are clamped below this to avoid a degenerate sigma=0 bin.
SIGMA_MIN = 0.05

DEFAULT_TRUNCATION = 4.0


@dataclass(frozen=True)
class ScaleGrid:
    """Uniform partition of [0, sigma_max_pixels] into K scale bins."""

    sigma_max_pixels: float
    edges: np.ndarray  # K+1 strictly increasing values, edges[0]=0

    @property
    def num_bins(self):
        return len(self.edges) - 1

    def midpoint(self, k):
        return 0.5 * (self.edges[k] + self.edges[k + 1])


@dataclass(frozen=True)
class Kernel1D:
    """Odd-length symmetric tap vector for one scale bin."""

    taps: np.ndarray
    bin_index: int

    @property
    def radius(self):
        return (len(self.taps) - 1) // 2


@dataclass(frozen=True)
class KernelBank:
    grid: ScaleGrid
    factors: tuple  # one Kernel1D per bin

    @property
    def num_kernels(self):
        return len(self.factors)


def make_scale_grid(sigma_max_pixels, num_bins):
    if sigma_max_pixels <= 0:
        raise ValueError(f"sigma_max_pixels must be > 0, got {sigma_max_pixels}")
    if num_bins < 1:
        raise ValueError(f"num_bins must be >= 1, got {num_bins}")
    edges = np.linspace(0.0, sigma_max_pixels, num_bins + 1)
    return ScaleGrid(sigma_max_pixels=float(sigma_max_pixels), edges=edges)


def gaussian_factor_1d(grid, k, truncation=DEFAULT_TRUNCATION):
    """Pixel-integrated Gaussian taps for bin k at the (clamped) midpoint scale.

    taps[R+j] = 0.5 * (erf((j+0.5)/(sqrt(2) s)) - erf((j-0.5)/(sqrt(2) s)))
    """
    if not 0 <= k < grid.num_bins:
        raise ValueError(f"bin index {k} out of range [0, {grid.num_bins})")
    if truncation <= 0:
        raise ValueError(f"truncation must be > 0, got {truncation}")
    sigma = max(grid.midpoint(k), SIGMA_MIN)
    radius = int(np.ceil(truncation * sigma))
    j = np.arange(-radius, radius + 1)
    scale = 1.0 / (np.sqrt(2.0) * sigma)
    taps = 0.5 * (erf((j + 0.5) * scale) - erf((j - 0.5) * scale))
    return Kernel1D(taps=taps, bin_index=k)


def build_kernel_bank(grid, truncation=DEFAULT_TRUNCATION):
    factors = tuple(
        gaussian_factor_1d(grid, k, truncation) for k in range(grid.num_bins)
    )
    return KernelBank(grid=grid, factors=factors)
