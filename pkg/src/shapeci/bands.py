"""Confidence intervals and bands as projections of a polyhedral region.

The region collects every coefficient vector ``beta`` that passes the
studentized sampling test (``|| S (moment - stat(beta)) ||_inf <= cv``) and
satisfies the shape rows ``B2 beta <= delta1``. A functional row ``a`` then
has the interval ``[min a beta - delta0, max a beta + delta0]`` over that
region; both ends come from one LP each.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg, lp
from .bootstrap import BootstrapConfig, cv_general, cv_projected
from .regression import SieveFit, project_variance
from .sieve import SieveBasis

BINDING_TOL = 1e-6


@dataclass(frozen=True)
class ShapeConstraints:
    """Rows ``b2 @ beta <= delta1``. Zero rows means no restriction."""

    b2: np.ndarray
    delta1: np.ndarray

    def __post_init__(self):
        b2 = np.asarray(self.b2, dtype=np.float64)
        delta1 = np.asarray(self.delta1, dtype=np.float64).reshape(-1)
        if b2.ndim != 2 or b2.shape[0] != delta1.size:
            raise ValueError(f"shape rows {b2.shape} do not match bounds {delta1.shape}")
        object.__setattr__(self, "b2", b2)
        object.__setattr__(self, "delta1", delta1)

    @classmethod
    def none(cls, k: int) -> ShapeConstraints:
        return cls(np.zeros((0, k)), np.zeros(0))

    @property
    def s(self) -> int:
        return self.b2.shape[0]

    def satisfied_by(self, beta, tol: float = 0.0) -> bool:
        return bool(np.all(self.b2 @ beta <= self.delta1 + tol))


@dataclass(frozen=True)
class Functional:
    """Target functional rows ``a0 @ beta`` with approximation bounds ``delta0``."""

    a0: np.ndarray
    delta0: np.ndarray

    def __post_init__(self):
        a0 = np.atleast_2d(np.asarray(self.a0, dtype=np.float64))
        delta0 = np.asarray(self.delta0, dtype=np.float64).reshape(-1)
        if delta0.size == 1 and a0.shape[0] > 1:
            delta0 = np.full(a0.shape[0], delta0[0])
        if delta0.size != a0.shape[0]:
            raise ValueError(f"{a0.shape[0]} functional rows but {delta0.size} bounds")
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "delta0", delta0)

    @property
    def r(self) -> int:
        return self.a0.shape[0]


@dataclass(frozen=True)
class ConfidenceInterval:
    """Projection interval.

    ``status`` is ``"optimal"`` when both LPs were solved, ``"unbounded"``
    when at least one end is infinite (marked by ``-inf``/``+inf``), and
    ``"infeasible"`` when the constraints admit no ``beta`` at this level;
    an infeasible interval is empty and its endpoints are NaN.
    """

    lower: float
    upper: float
    status: str = lp.OPTIMAL
    binding: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    cv: float = float("nan")
    beta_lower: np.ndarray | None = field(default=None, repr=False)
    beta_upper: np.ndarray | None = field(default=None, repr=False)
    infeasibility: float = 0.0

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def empty(self) -> bool:
        return self.status == lp.INFEASIBLE

    def contains(self, value: float) -> bool:
        return (not self.empty) and self.lower <= value <= self.upper


@dataclass(frozen=True)
class ConfidenceBand:
    grid: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    status: tuple[str, ...]
    cv: float = float("nan")

    def intervals(self) -> list[tuple[float, float, float]]:
        return list(zip(self.grid.tolist(), self.lower.tolist(), self.upper.tolist()))


def sampling_constraints_general(fit: SieveFit, cv: float) -> tuple[np.ndarray, np.ndarray]:
    """Linearize ``|| Omega^-1/2 (moment - gram beta) ||_inf <= cv`` as ``2k`` rows."""
    if cv < 0:
        raise ValueError("cv must be non-negative")
    s = linalg.inv_sqrt_sym(fit.omega_cov)
    sq = s @ fit.gram
    sm = s @ fit.moment
    # -S Q beta <= cv - S m  and  S Q beta <= cv + S m
    g = np.vstack([-sq, sq])
    h = np.concatenate([cv - sm, cv + sm])
    return g, h


def sampling_constraints_projected(fit: SieveFit, a0, cv: float) -> tuple[np.ndarray, np.ndarray]:
    """Linearize ``|| V^-1/2 (A beta_hat - A beta) ||_inf <= cv`` as ``2r`` rows.

    For one row this is the ``B0 - cv <= B1 beta <= B0 + cv`` pair with
    ``B1 = A / sqrt(V)`` and ``B0 = A beta_hat / sqrt(V)``.
    """
    if cv < 0:
        raise ValueError("cv must be non-negative")
    a0 = np.atleast_2d(np.asarray(a0, dtype=np.float64))
    v_inv = linalg.inv_sqrt_sym(project_variance(fit, a0))
    b1 = v_inv @ a0
    b0 = b1 @ fit.beta_hat
    return np.vstack([b1, -b1]), np.concatenate([b0 + cv, cv - b0])


def rkd_shape_constraints(basis: SieveBasis, n_grid: int = 99, delta1: float = 0.01) -> ShapeConstraints:
    """Continuity at the kink plus a non-positive slope right of the kink.

    Rows, each bounded by ``delta1``:

    * ``g(kink+) - g(kink-)`` and ``g(kink-) - g(kink+)``;
    * ``g'(xi_j)`` at ``n_grid`` equally spaced points strictly inside
      ``(kink, kink + half_width)``.
    """
    if n_grid < 1:
        raise ValueError("n_grid must be >= 1")
    val_left, val_right, _, _ = basis.kink_limits()
    jump = val_right - val_left
    xi = basis.kink + basis.half_width * np.arange(1, n_grid + 1) / (n_grid + 1)
    slopes = basis.eval_deriv(xi)
    slopes[:, 0::2] = 0.0
    b2 = np.vstack([jump, -jump, slopes])
    return ShapeConstraints(b2, np.full(b2.shape[0], float(delta1)))


def interval_over_polyhedron(
    a: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    delta0: float,
    shape: ShapeConstraints | None = None,
) -> ConfidenceInterval:
    """``[min a beta - delta0, max a beta + delta0]`` over ``{g beta <= h} & shape``."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    if shape is not None and shape.s:
        g_all = np.vstack([g, shape.b2])
        h_all = np.concatenate([h, shape.delta1])
    else:
        g_all, h_all = g, h
    lo = lp.solve(lp.LpProblem("minimize", a, g_all, h_all))
    if lo.status == lp.INFEASIBLE:
        n_shape = shape.s if shape is not None else 0
        return ConfidenceInterval(
            float("nan"), float("nan"), lp.INFEASIBLE,
            np.zeros(n_shape, dtype=bool), infeasibility=lo.infeasibility,
        )
    hi = lp.solve(lp.LpProblem("maximize", a, g_all, h_all))
    lower = lo.objective - delta0 if lo.optimal else -np.inf
    upper = hi.objective + delta0 if hi.optimal else np.inf
    status = lp.OPTIMAL if (lo.optimal and hi.optimal) else lp.UNBOUNDED
    binding = np.zeros(0, dtype=bool)
    if shape is not None and shape.s:
        binding = np.zeros(shape.s, dtype=bool)
        for sol in (lo, hi):
            if sol.optimal:
                binding |= np.abs(shape.b2 @ sol.beta - shape.delta1) <= BINDING_TOL
    return ConfidenceInterval(
        float(lower), float(upper), status, binding,
        beta_lower=lo.beta, beta_upper=hi.beta,
    )


def ci_projected(
    fit: SieveFit,
    functional: Functional,
    shape: ShapeConstraints | None,
    cfg: BootstrapConfig,
    *,
    cv: float | None = None,
) -> ConfidenceInterval:
    """Interval for a scalar functional using the studentized projected test.

    ``cv`` skips the bootstrap and uses the given critical value instead.
    """
    if functional.r != 1:
        raise ValueError("ci_projected handles a single functional row")
    if cv is None:
        cv = cv_projected(fit, functional.a0, cfg).cv
    g, h = sampling_constraints_projected(fit, functional.a0, cv)
    ci = interval_over_polyhedron(functional.a0[0], g, h, float(functional.delta0[0]), shape)
    return replace(ci, cv=float(cv))


def band_general(
    fit: SieveFit,
    grid,
    delta0,
    shape: ShapeConstraints | None,
    cfg: BootstrapConfig,
    *,
    cv: float | None = None,
) -> ConfidenceBand:
    """Band for ``g(w)`` over ``grid`` under the full ``k``-moment sampling test.

    One critical value is shared by every grid point. Point evaluation uses
    the regression design convention, so a grid point at the kink reads the
    right-hand family.
    """
    grid = np.asarray(grid, dtype=np.float64).reshape(-1)
    d0 = np.broadcast_to(np.asarray(delta0, dtype=np.float64), grid.shape)
    if cv is None:
        cv = cv_general(fit, cfg).cv
    g, h = sampling_constraints_general(fit, cv)
    rows = fit.basis.design(grid)
    lower = np.empty(grid.size)
    upper = np.empty(grid.size)
    status = []
    for i in range(grid.size):
        ci = interval_over_polyhedron(rows[i], g, h, float(d0[i]), shape)
        lower[i], upper[i] = ci.lower, ci.upper
        status.append(ci.status)
    return ConfidenceBand(grid, lower, upper, tuple(status), float(cv))

