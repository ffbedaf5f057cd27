"""Rademacher multiplier bootstrap critical values for sup statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg, rng
from .regression import SieveFit, project_variance


@dataclass(frozen=True)
class BootstrapConfig:
    m_draws: int = 500
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if int(self.m_draws) < 1:
            raise ValueError(f"m_draws must be >= 1, got {self.m_draws}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0 <= int(self.seed) <= rng.MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CriticalValue:
    cv: float
    draws: np.ndarray = field(repr=False)


def quantile_index(alpha: float, m: int) -> int:
    """1-based order-statistic index ``ceil((1 - alpha) * m)``, clamped to ``[1, m]``.

    A relative slack of 1e-12 keeps e.g. ``0.95 * 100`` from rounding up to 96.
    """
    x = (1.0 - alpha) * m
    return min(m, max(1, math.ceil(x - 1e-12 * max(1.0, x))))


def upper_quantile(draws, alpha: float) -> float:
    s = np.sort(np.asarray(draws, dtype=np.float64))
    return float(s[quantile_index(alpha, s.size) - 1])


def sup_draws(scores: np.ndarray, signs: np.ndarray, transform: np.ndarray) -> np.ndarray:
    """``max_j |(transform @ mean_i(eta_mi * scores_i))_j|`` for every sign row ``m``."""
    n = scores.shape[0]
    avg = signs @ scores / n  # (M, k)
    return np.max(np.abs(avg @ transform.T), axis=1)


def cv_general(fit: SieveFit, cfg: BootstrapConfig, *, signs=None) -> CriticalValue:
    """Critical value of the studentized sup statistic over all ``k`` score moments.

    ``signs`` overrides the seeded Rademacher matrix (shape ``(M, n)``); used
    to enumerate sign patterns exhaustively.
    """
    s_inv = linalg.inv_sqrt_sym(fit.omega_cov)
    if signs is None:
        signs = rng.rademacher(cfg.seed, cfg.m_draws, fit.n)
    draws = sup_draws(fit.omega_hat, np.asarray(signs, dtype=np.float64), s_inv)
    return CriticalValue(upper_quantile(draws, cfg.alpha), draws)


def cv_projected(fit: SieveFit, a0, cfg: BootstrapConfig, *, signs=None) -> CriticalValue:
    """Critical value of the studentized statistic for the functional rows ``a0``.

    Each draw is ``|| V^-1/2 A Q^-1 mean_i(eta_i omega_i) ||_inf``; for a
    single row this is ``|A Q^-1 mean_i(eta_i omega_i)| / sqrt(V)``.
    """
    a0 = np.atleast_2d(np.asarray(a0, dtype=np.float64))
    v_inv = linalg.inv_sqrt_sym(project_variance(fit, a0))
    # scores projected onto the functional: rows (A Q^-1 omega_i)^T
    proj = fit.omega_hat @ fit.gram_solve(a0.T)
    if signs is None:
        signs = rng.rademacher(cfg.seed, cfg.m_draws, fit.n)
    draws = sup_draws(proj, np.asarray(signs, dtype=np.float64), v_inv)
    return CriticalValue(upper_quantile(draws, cfg.alpha), draws)
