"""Regression kink design: slope-jump functional and the end-to-end pipeline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bands import ConfidenceInterval, Functional, ShapeConstraints, ci_projected, rkd_shape_constraints
from .bootstrap import BootstrapConfig, cv_projected
from .errors import KinkError, ShapeCIError, StepError
from .regression import Dataset, fit
from .sieve import SieveBasis

SHAPE_MODES = ("none", "rkd")


@dataclass(frozen=True)
class KinkSchedule:
    """Piecewise-linear policy schedule with slopes ``slope_left``/``slope_right`` at ``kink``."""

    kink: float
    slope_left: float
    slope_right: float

    def __post_init__(self):
        if self.slope_left == self.slope_right:
            raise KinkError("schedule has the same slope on both sides of the kink")

    @classmethod
    def capped(cls, t: float, t_max: float) -> KinkSchedule:
        """``T(x) = t x`` below ``t_max / t`` and ``t_max`` above it."""
        if t == 0:
            raise KinkError("proportionality constant must be nonzero")
        return cls(kink=t_max / t, slope_left=t, slope_right=0.0)


def kink_denominator(schedule: KinkSchedule) -> float:
    """Jump in the schedule's slope, right limit minus left limit."""
    d = schedule.slope_right - schedule.slope_left
    if d == 0:
        raise KinkError("zero slope jump at the kink")
    return float(d)


def a0_row(basis: SieveBasis, schedule: KinkSchedule) -> np.ndarray:
    """Row ``a`` with ``a @ beta`` = (slope jump of ``p^T beta``) / (slope jump of ``T``)."""
    _, _, deriv_left, deriv_right = basis.kink_limits()
    return ((deriv_right - deriv_left) / kink_denominator(schedule)).reshape(1, -1)


@dataclass(frozen=True)
class RkdConfig:
    k: int = 4
    half_width: float = 1.0
    alpha: float = 0.05
    m_draws: int = 500
    seed: int = 0
    delta0: float = 0.01
    delta1: float = 0.01
    n_grid: int = 99
    modes: tuple[str, ...] = SHAPE_MODES
    # extra rows -beta <= 0 in the restricted mode; off by default (see README)
    nonnegative_coefficients: bool = False

    def __post_init__(self):
        bad = [m for m in self.modes if m not in SHAPE_MODES]
        if bad or not self.modes:
            raise ValueError(f"shape modes must be drawn from {SHAPE_MODES}, got {self.modes}")
        if self.delta0 < 0 or self.delta1 < 0:
            raise ValueError("delta0 and delta1 must be non-negative")
        SieveBasis(0.0, self.half_width, self.k)
        self.bootstrap_config()

    def bootstrap_config(self, seed: int | None = None) -> BootstrapConfig:
        return BootstrapConfig(self.m_draws, self.alpha, self.seed if seed is None else seed)


@dataclass(frozen=True)
class RkdReport:
    ci: ConfidenceInterval
    cv: float
    n_used: int
    plug_in: float
    shape_mode: str

    @property
    def length(self) -> float:
        return self.ci.length


def _step(name, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except (ShapeCIError, ValueError, ArithmeticError) as exc:
        raise StepError(name, exc) from exc


def run_rkd(
    data: Dataset,
    schedule: KinkSchedule,
    cfg: RkdConfig,
    *,
    seed: int | None = None,
    cv: float | None = None,
) -> dict[str, RkdReport]:
    """Confidence interval for the kink effect in each requested shape mode.

    Data are restricted to ``[kink - half_width, kink + half_width]`` first.
    All modes share the fit and one bootstrap critical value. ``seed``
    overrides ``cfg.seed`` for the bootstrap; ``cv`` skips it entirely.
    """
    basis = _step("basis", SieveBasis, schedule.kink, cfg.half_width, cfg.k)
    lo, hi = basis.window
    local = data.window(lo, hi)
    if local.n == 0:
        raise StepError("window", ValueError(f"no observations in [{lo}, {hi}]"))
    sieve_fit = _step("fit", fit, local, basis)
    a0 = _step("functional", a0_row, basis, schedule)
    functional = Functional(a0, [cfg.delta0])
    boot = cfg.bootstrap_config(seed)
    if cv is None:
        cv = _step("bootstrap", cv_projected, sieve_fit, a0, boot).cv
    plug_in = float(a0[0] @ sieve_fit.beta_hat)

    reports = {}
    for mode in cfg.modes:
        if mode == "rkd":
            shape = rkd_shape_constraints(basis, cfg.n_grid, cfg.delta1)
            if cfg.nonnegative_coefficients:
                shape = ShapeConstraints(
                    np.vstack([shape.b2, -np.eye(cfg.k)]),
                    np.concatenate([shape.delta1, np.zeros(cfg.k)]),
                )
        else:
            shape = ShapeConstraints.none(cfg.k)
        ci = _step("linear program", ci_projected, sieve_fit, functional, shape, boot, cv=cv)
        reports[mode] = RkdReport(ci, float(cv), local.n, plug_in, mode)
    return reports
