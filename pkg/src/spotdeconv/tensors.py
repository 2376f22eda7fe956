"""Dense 2-D/3-D array helpers.

Images are (M, N) float64 arrays, volumes are (M, N, K) float64 arrays with
k the fastest-varying axis. Constructor-style validators check finiteness
once; the numeric kernels below assume validated inputs.
"""

import numpy as np


def as_image(arr):
    """Validate and return a finite 2-D float64 array."""
    img = np.asarray(arr, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image must be 2-D with positive dims, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite entries")
    return img


def as_volume(arr, nonneg=False):
    """Validate and return a finite 3-D (M, N, K) float64 array.

    With nonneg=True additionally require every entry >= 0.
    """
    vol = np.asarray(arr, dtype=np.float64)
    if vol.ndim != 3 or min(vol.shape) < 1:
        raise ValueError(f"volume must be 3-D with positive dims, got shape {vol.shape}")
    if not np.all(np.isfinite(vol)):
        raise ValueError("volume contains non-finite entries")
    if nonneg and np.any(vol < 0):
        raise ValueError("volume has negative entries")
    return vol


def project_nonneg(v):
    """Element-wise positive part [v]_+."""
    return np.maximum(v, 0.0)


def group_norm_image(v):
    """Per-pixel Euclidean norm across the scale axis: out[m,n] = ||v[m,n,:]||_2."""
    return np.sqrt(np.sum(np.square(v), axis=2))


def _check_shapes(a, b):
    if np.shape(a) != np.shape(b):
        raise ValueError(f"shape mismatch: {np.shape(a)} vs {np.shape(b)}")


def dot(a, b):
    """Inner product of same-shaped arrays."""
    _check_shapes(a, b)
    return float(np.vdot(a, b))


def frobenius_norm(a):
    return float(np.sqrt(np.vdot(a, a).real))


def ewise_mul(a, b):
    """Element-wise (Hadamard) product with a shape check."""
    _check_shapes(a, b)
    return np.multiply(a, b)


def axpy(alpha, x, y):
    """alpha * x + y for same-shaped arrays."""
    _check_shapes(x, y)
    return alpha * x + y
