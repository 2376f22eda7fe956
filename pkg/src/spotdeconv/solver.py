"""Accelerated proximal gradient solver for the group-sparse deconvolution.

Minimizes  ||w . (d_obs - sum_k g_k * a_k)||_2^2 + lambda * sum_{m,n} ||a_{m,n}||_2
over a >= 0, via gradient steps on the fidelity term, per-pixel group
shrinkage on the regularizer, and an optional momentum extrapolation.

Bookkeeping note: the gradient step uses eta times adjoint(w^2 . residual),
i.e. without the factor 2 from differentiating the squared norm, and the
shrinkage threshold is (eta/2)*lambda. Together this equals proximal
gradient with step eta/2 on the objective above; fixed-point and oracle
tests rely on that correspondence.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .convolution import adjoint, forward
from .tensors import frobenius_norm, group_norm_image, project_nonneg

BECK = "beck"
CHAMBOLLE = "chambolle"
NO_MOMENTUM = "none"


@dataclass
class SolverConfig:
    lam: float
    weights: np.ndarray
    momentum: str = BECK
    chambolle_a: float = 3.0
    max_iters: int = 5000
    rel_tol: float = 1e-6
    record_objective: bool = False
    safeguard: bool = False

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.momentum not in (BECK, CHAMBOLLE, NO_MOMENTUM):
            raise ValueError(f"unknown momentum scheme {self.momentum!r}")
        if self.momentum == CHAMBOLLE and self.chambolle_a <= 2:
            raise ValueError(f"Chambolle parameter must be > 2, got {self.chambolle_a}")
        if self.rel_tol <= 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")


@dataclass
class SolveResult:
    a_opt: np.ndarray
    iterations: int
    final_rel_change: float
    objective_trace: Optional[list] = None


def step_size(sigma_max_pixels, w):
    """Fixed step eta = (1 / sigma_max_pixels) / max|w|^2."""
    if sigma_max_pixels <= 0:
        raise ValueError(f"sigma_max_pixels must be > 0, got {sigma_max_pixels}")
    wmax = float(np.max(np.abs(w)))
    if wmax == 0.0:
        raise ValueError("degenerate weights: max|w| = 0")
    return (1.0 / sigma_max_pixels) / (wmax * wmax)


def momentum_alpha(scheme, i, state=None, chambolle_a=3.0):
    """Extrapolation coefficient alpha(i) for iteration i >= 1.

    Beck: t_1 = 1, t_{i+1} = (1 + sqrt(1 + 4 t_i^2)) / 2, alpha = (t_i - 1)/t_{i+1}.
    Chambolle: alpha = (i - 1) / (i + a - 1).  None: alpha = 0.
    Returns (alpha, state); state carries t_i across calls for Beck.
    """
    if i < 1:
        raise ValueError(f"iteration index must be >= 1, got {i}")
    if scheme == BECK:
        t = 1.0 if state is None else state
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        return (t - 1.0) / t_next, t_next
    if scheme == CHAMBOLLE:
        return (i - 1.0) / (i + chambolle_a - 1.0), None
    if scheme == NO_MOMENTUM:
        return 0.0, None
    raise ValueError(f"unknown momentum scheme {scheme!r}")


def prox_group(v, kappa):
    """Per-pixel group shrinkage: scale v[m,n,:] by (1 - kappa/||v[m,n,:]||)_+.

    Zero-norm pixels map to zero (the limit of the clamped expression).
    """
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    rho = group_norm_image(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(rho > 0.0, np.maximum(0.0, 1.0 - kappa / rho), 0.0)
    return v * factor[:, :, None]


def objective(a, d_obs, w, bank, lam):
    """Weighted squared fidelity (not halved) plus lambda * group norm."""
    if a.shape[:2] != d_obs.shape or d_obs.shape != w.shape:
        raise ValueError(
            f"shape mismatch: volume {a.shape}, observation {d_obs.shape}, weights {w.shape}"
        )
    residual = w * (d_obs - forward(a, bank))
    return float(np.sum(residual * residual) + lam * np.sum(group_norm_image(a)))


def apg_solve(d_obs, bank, cfg, a0=None, progress: Optional[Callable] = None):
    """Run the accelerated proximal gradient iteration until the relative
    Frobenius change of the iterate drops below cfg.rel_tol or max_iters hits.
    """
    m, n = d_obs.shape
    depth = bank.num_kernels
    if cfg.weights.shape != d_obs.shape:
        raise ValueError(
            f"weights shape {cfg.weights.shape} does not match observation {d_obs.shape}"
        )
    eta = step_size(bank.grid.sigma_max_pixels, cfg.weights)
    w2 = cfg.weights * cfg.weights
    kappa = 0.5 * eta * cfg.lam

    a = np.zeros((m, n, depth)) if a0 is None else project_nonneg(np.array(a0, dtype=np.float64))
    if a.shape != (m, n, depth):
        raise ValueError(f"a0 shape {a.shape} does not match problem {(m, n, depth)}")
    b = a.copy()

    trace = [] if cfg.record_objective else None
    mom_state = None
    rel_change = np.inf
    prev_obj = None
    iterations = 0

    for i in range(1, cfg.max_iters + 1):
        residual = forward(b, bank) - d_obs
        a_new = project_nonneg(b - eta * adjoint(w2 * residual, bank))
        a_new = prox_group(a_new, kappa)

        if not np.all(np.isfinite(a_new)):
            if cfg.safeguard:
                eta *= 0.5
                kappa = 0.5 * eta * cfg.lam
                a = np.zeros((m, n, depth))
                b = a.copy()
                mom_state = None
                continue
            raise FloatingPointError("divergence: non-finite iterate")

        rel_change = frobenius_norm(a_new - a) / max(frobenius_norm(a), 1e-12)
        obj = None
        if cfg.record_objective:
            obj = objective(a_new, d_obs, cfg.weights, bank, cfg.lam)
            trace.append(obj)
        if cfg.safeguard and cfg.momentum == NO_MOMENTUM and obj is not None:
            if prev_obj is not None and obj > 10.0 * prev_obj:
                eta *= 0.5
                kappa = 0.5 * eta * cfg.lam
                a = np.zeros((m, n, depth))
                b = a.copy()
                mom_state = None
                prev_obj = None
                continue
            prev_obj = obj

        alpha, mom_state = momentum_alpha(cfg.momentum, i, mom_state, cfg.chambolle_a)
        b = a_new + alpha * (a_new - a)
        a = a_new
        iterations = i

        if progress is not None:
            progress(i, rel_change, obj)
        if rel_change <= cfg.rel_tol:
            break

    return SolveResult(
        a_opt=a,
        iterations=iterations,
        final_rel_change=float(rel_change),
        objective_trace=trace,
    )
