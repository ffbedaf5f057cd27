"""Sieve least squares and the sandwich variance of a linear functional."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NearSingular
from .sieve import SieveBasis


@dataclass(frozen=True)
class Dataset:
    """Scalar running variable ``x`` and outcome ``y``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if x.shape != y.shape:
            raise ValueError(f"x and y lengths differ: {x.size} vs {y.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("dataset has non-finite entries")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.size)

    def window(self, lo: float, hi: float) -> Dataset:
        """Observations with ``lo <= x <= hi``, order preserved."""
        keep = (self.x >= lo) & (self.x <= hi)
        return Dataset(self.x[keep], self.y[keep])


@dataclass(frozen=True)
class SieveFit:
    """Sieve OLS fit. All expectations use the ``1/n`` convention.

    Attributes
    ----------
    gram : (k, k) sample mean of ``p p^T``
    moment : (k,) sample mean of ``p y``
    beta_hat : (k,) least-squares coefficients
    omega_hat : (n, k) score rows ``p_i (y_i - p_i^T beta_hat)``
    omega_cov : (k, k) sample mean of ``omega_i omega_i^T``
    """

    basis: SieveBasis
    design: np.ndarray
    gram: np.ndarray
    moment: np.ndarray
    beta_hat: np.ndarray
    omega_hat: np.ndarray
    omega_cov: np.ndarray

    @property
    def n(self) -> int:
        return int(self.design.shape[0])

    @property
    def k(self) -> int:
        return self.basis.k

    def residual_moment(self, beta) -> np.ndarray:
        """Sample mean of ``p (y - p^T beta)``, i.e. ``moment - gram @ beta``."""
        return self.moment - self.gram @ np.asarray(beta, dtype=np.float64)

    def gram_solve(self, rhs) -> np.ndarray:
        return linalg.solve_spd(self.gram, rhs)


def fit(data: Dataset, basis: SieveBasis) -> SieveFit:
    """Least-squares regression of ``y`` on the sieve basis."""
    n, k = data.n, basis.k
    if n < k:
        raise ValueError(f"need at least k={k} observations, got {n}")
    p = basis.design(data.x)
    gram = linalg.symmetrize(p.T @ p / n)
    moment = p.T @ data.y / n
    try:
        beta = linalg.solve_spd(gram, moment)
    except NearSingular as exc:
        n_left = int(np.sum(data.x < basis.kink))
        raise NearSingular(
            f"sieve Gram matrix is singular for k={k} "
            f"({n_left} observations left of the kink, {n - n_left} at or right of it): {exc}"
        ) from exc
    resid = data.y - p @ beta
    omega = p * resid[:, None]
    omega_cov = linalg.symmetrize(omega.T @ omega / n)
    return SieveFit(basis, p, gram, moment, beta, omega, omega_cov)


def project_variance(fit: SieveFit, a0) -> np.ndarray:
    """Sandwich variance ``A Q^-1 Omega Q^-1 A^T`` of the functional rows ``a0``."""
    a0 = np.atleast_2d(np.asarray(a0, dtype=np.float64))
    if a0.shape[1] != fit.k:
        raise ValueError(f"functional has {a0.shape[1]} columns, basis has {fit.k}")
    w = fit.gram_solve(a0.T)  # Q^-1 A^T, shape (k, r)
    return linalg.symmetrize(w.T @ fit.omega_cov @ w)
