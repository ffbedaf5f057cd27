"""Split orthonormal shifted-Legendre sieve around a kink point.

The basis has ``k`` entries ordered as

    (l_L0, l_R0, l_L1, l_R1, ..., l_L{k/2-1}, l_R{k/2-1})

where the ``l_L*`` functions are orthonormal on ``[kink - h, kink]`` and the
``l_R*`` functions are orthonormal on ``[kink, kink + h]``. Each family is
extended by zero outside its own half-window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WindowError


def legendre_table(degree: int, t) -> tuple[np.ndarray, np.ndarray]:
    """Legendre polynomials ``P_0..P_degree`` and their derivatives at ``t``.

    Uses the three-term recurrence ``(j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1}``
    and ``P'_{j+1} = P'_{j-1} + (2j+1) P_j``. Returned arrays have shape
    ``(degree + 1, *t.shape)``.
    """
    t = np.asarray(t, dtype=np.float64)
    p = np.empty((degree + 1,) + t.shape)
    dp = np.empty_like(p)
    p[0] = 1.0
    dp[0] = 0.0
    if degree >= 1:
        p[1] = t
        dp[1] = 1.0
    for j in range(1, degree):
        p[j + 1] = ((2 * j + 1) * t * p[j] - j * p[j - 1]) / (j + 1)
        dp[j + 1] = dp[j - 1] + (2 * j + 1) * p[j]
    return p, dp


@dataclass(frozen=True)
class SieveBasis:
    """Split shifted-Legendre system on ``[kink - half_width, kink + half_width]``."""

    kink: float
    half_width: float
    k: int

    def __post_init__(self):
        if not (isinstance(self.k, (int, np.integer)) and self.k >= 2 and self.k % 2 == 0):
            raise ValueError(f"k must be an even integer >= 2, got {self.k!r}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width!r}")
        if not np.isfinite(self.kink):
            raise ValueError("kink must be finite")

    @property
    def degree(self) -> int:
        """Highest polynomial degree in each family."""
        return self.k // 2 - 1

    @property
    def window(self) -> tuple[float, float]:
        return (self.kink - self.half_width, self.kink + self.half_width)

    def _check(self, x: np.ndarray) -> None:
        lo, hi = self.window
        if np.any(~np.isfinite(x)) or np.any(x < lo) or np.any(x > hi):
            raise WindowError(f"points outside the basis window [{lo}, {hi}]")

    def _family(self, x: np.ndarray, side: str) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal values and derivatives of one family, no zero extension."""
        h = self.half_width
        a = self.kink - h if side == "L" else self.kink
        t = 2.0 * (x - a) / h - 1.0
        p, dp = legendre_table(self.degree, t)
        j = np.arange(self.degree + 1).reshape((-1,) + (1,) * x.ndim)
        norm = np.sqrt((2 * j + 1) / h)
        return norm * p, norm * dp * (2.0 / h)

    def _assemble(self, x, left_mask, right_mask, derivative: bool) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        self._check(x)
        idx = 1 if derivative else 0
        left = np.where(left_mask, self._family(x, "L")[idx], 0.0)
        right = np.where(right_mask, self._family(x, "R")[idx], 0.0)
        out = np.empty(x.shape + (self.k,))
        out[..., 0::2] = np.moveaxis(left, 0, -1)
        out[..., 1::2] = np.moveaxis(right, 0, -1)
        return out

    def eval(self, x) -> np.ndarray:
        """Basis values ``p_{1:k}(x)``; last axis has length ``k``.

        At ``x == kink`` both families are nonzero: the left family takes its
        left-limit value and the right family its value at the kink.
        """
        x = np.asarray(x, dtype=np.float64)
        return self._assemble(x, x <= self.kink, x >= self.kink, derivative=False)

    def eval_deriv(self, x) -> np.ndarray:
        """First derivatives of the basis, same zero-extension rule as :meth:`eval`."""
        x = np.asarray(x, dtype=np.float64)
        return self._assemble(x, x <= self.kink, x >= self.kink, derivative=True)

    def design(self, x) -> np.ndarray:
        """Regression design matrix, one row per observation.

        Unlike :meth:`eval`, an observation exactly at the kink is assigned
        to the right half-window only, so it is never counted twice.
        """
        x = np.asarray(x, dtype=np.float64)
        return self._assemble(x, x < self.kink, x >= self.kink, derivative=False)

    def kink_limits(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """One-sided limits at the kink.

        Returns ``(val_left, val_right, deriv_left, deriv_right)``; the left
        limits carry zeros in right-family slots and vice versa.
        """
        x = np.float64(self.kink)
        val_left = self._assemble(x, True, False, derivative=False)
        val_right = self._assemble(x, False, True, derivative=False)
        deriv_left = self._assemble(x, True, False, derivative=True)
        deriv_right = self._assemble(x, False, True, derivative=True)
        return val_left, val_right, deriv_left, deriv_right
