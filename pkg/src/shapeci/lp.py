"""Dense two-phase primal simplex for ``min/max c^T beta  s.t.  G beta <= h``.

``beta`` is free. Internally each coordinate is split as ``beta = u - v``
with ``u, v >= 0`` and every row gets a slack, giving the standard form
``[G, -G, I] z = h, z >= 0``. Rows with a negative right side are negated
and receive an artificial variable for phase 1.

Rows are equilibrated (divided by their largest coefficient) before
solving, so the absolute tolerances below act on unit-scale rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import IterationLimit

FEAS_TOL = 1e-7
OPT_TOL = 1e-9
PIVOT_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    sense: str
    c: np.ndarray
    g: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        if self.sense not in ("minimize", "maximize"):
            raise ValueError(f"sense must be 'minimize' or 'maximize', got {self.sense!r}")
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        g = np.asarray(self.g, dtype=np.float64)
        h = np.asarray(self.h, dtype=np.float64).reshape(-1)
        if g.ndim == 1:
            g = g.reshape(1, -1) if c.size > 1 or g.size == 1 else g.reshape(-1, 1)
        if g.ndim != 2 or g.shape[1] != c.size or g.shape[0] != h.size:
            raise ValueError(f"inconsistent shapes: c {c.shape}, g {g.shape}, h {h.shape}")
        if c.size < 1 or h.size < 1:
            raise ValueError("need at least one variable and one constraint")
        for name, arr in (("c", c), ("g", g), ("h", h)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)

    @property
    def k(self) -> int:
        return self.c.size

    @property
    def m(self) -> int:
        return self.h.size


@dataclass(frozen=True)
class LpSolution:
    """Solver outcome.

    ``beta`` and ``objective`` are set only when ``status == "optimal"``.
    For infeasible problems ``infeasibility`` holds the phase-1 optimum
    (sum of artificial variables on the equilibrated rows), a certificate
    that no point satisfies all rows.
    """

    status: str
    beta: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0
    infeasibility: float = 0.0
    slack: np.ndarray | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Simplex tableau with rows ``[A | b]`` and basis bookkeeping."""

    def __init__(self, a: np.ndarray, b: np.ndarray, basis: np.ndarray, budget: int, bland_after: int):
        self.t = np.hstack([a, b[:, None]])
        self.basis = basis
        self.budget = budget
        self.bland_after = bland_after
        self.iterations = 0
        self.degenerate_run = 0
        self.bland = False

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        """Row ``[c - c_B B^-1 A | -c_B B^-1 b]``."""
        ext = np.append(cost, 0.0)
        return ext - cost[self.basis] @ self.t

    def pivot(self, r: int, j: int, obj: np.ndarray) -> None:
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        obj -= obj[j] * t[r]
        self.basis[r] = j

    def run(self, obj: np.ndarray, allowed: np.ndarray) -> str:
        """Minimize until optimal or unbounded. ``obj`` is updated in place."""
        t = self.t
        while True:
            d = np.where(allowed, obj[:-1], 0.0)
            if self.bland:
                cand = np.flatnonzero(d < -OPT_TOL)
                if cand.size == 0:
                    return OPTIMAL
                j = int(cand[0])
            else:
                j = int(np.argmin(d))
                if d[j] >= -OPT_TOL:
                    return OPTIMAL
            col = t[:, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = np.maximum(t[rows, -1], 0.0) / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            if ties.size > 1:
                if self.bland:
                    r = int(ties[np.argmin(self.basis[ties])])
                else:
                    r = int(ties[np.argmax(col[ties])])
            else:
                r = int(ties[0])
            if best <= PIVOT_TOL:
                self.degenerate_run += 1
                if self.degenerate_run >= self.bland_after:
                    self.bland = True
            else:
                self.degenerate_run = 0
            self.pivot(r, j, obj)
            self.iterations += 1
            if self.iterations > self.budget:
                raise IterationLimit(f"simplex exceeded {self.budget} pivots")


def _equilibrate(g: np.ndarray, h: np.ndarray):
    scale = np.max(np.abs(g), axis=1)
    zero = scale == 0.0
    scale[zero] = 1.0
    return g / scale[:, None], h / scale, zero


def _minimize(c: np.ndarray, g: np.ndarray, h: np.ndarray) -> LpSolution:
    m0, k = g.shape
    gs, hs, zero_rows = _equilibrate(g, h)
    if np.any(hs[zero_rows] < -FEAS_TOL):
        return LpSolution(INFEASIBLE, infeasibility=float(-hs[zero_rows].min()))
    gs, hs = gs[~zero_rows], hs[~zero_rows]
    m = hs.size
    budget = 10_000 * (m0 + k)
    if m == 0:
        if np.any(c != 0.0):
            return LpSolution(UNBOUNDED)
        return LpSolution(OPTIMAL, np.zeros(k), 0.0, slack=h.copy())

    n_struct = 2 * k + m
    neg = hs < 0.0
    art_rows = np.flatnonzero(neg)
    n_art = art_rows.size
    a = np.zeros((m, n_struct + n_art))
    a[:, :k] = gs
    a[:, k : 2 * k] = -gs
    a[:, 2 * k : n_struct] = np.eye(m)
    b = hs.copy()
    a[neg] *= -1.0
    b[neg] *= -1.0
    a[art_rows, n_struct + np.arange(n_art)] = 1.0
    basis = np.arange(2 * k, n_struct)
    basis[art_rows] = n_struct + np.arange(n_art)

    tab = _Tableau(a, b, basis, budget, bland_after=m0 + k)
    allowed = np.ones(n_struct + n_art, dtype=bool)

    if n_art:
        cost1 = np.zeros(n_struct + n_art)
        cost1[n_struct:] = 1.0
        obj = tab.reduced_costs(cost1)
        tab.run(obj, allowed)
        infeas = float(-obj[-1])
        if infeas > FEAS_TOL:
            return LpSolution(INFEASIBLE, iterations=tab.iterations, infeasibility=infeas)
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if tab.basis[r] >= n_struct:
                row = tab.t[r, :n_struct]
                cand = np.flatnonzero(np.abs(row) > PIVOT_TOL)
                if cand.size:
                    tab.pivot(r, int(cand[np.argmax(np.abs(row[cand]))]), obj)
                else:
                    keep[r] = False
        tab.t = np.hstack([tab.t[keep, :n_struct], tab.t[keep, -1:]])
        tab.basis = tab.basis[keep]
        allowed = np.ones(n_struct, dtype=bool)
        tab.degenerate_run = 0
        tab.bland = False

    cost2 = np.zeros(n_struct)
    cost2[:k] = c
    cost2[k : 2 * k] = -c
    obj = tab.reduced_costs(cost2)
    status = tab.run(obj, allowed)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, iterations=tab.iterations)
    z = np.zeros(n_struct)
    z[tab.basis] = tab.t[:, -1]
    beta = z[:k] - z[k : 2 * k]
    slack = h - g @ beta
    return LpSolution(OPTIMAL, beta, float(c @ beta), iterations=tab.iterations, slack=slack)


def solve(problem: LpProblem) -> LpSolution:
    """Solve an inequality-constrained LP over free variables.

    Returns an :class:`LpSolution` with status ``optimal``, ``infeasible``
    or ``unbounded``. Dantzig pricing is used until ``m + k`` consecutive
    degenerate pivots occur, after which Bland's rule takes over.

    Raises
    ------
    IterationLimit
        After ``10000 * (m + k)`` pivots in one phase.
    """
    if problem.sense == "maximize":
        sol = _minimize(-problem.c, problem.g, problem.h)
        if sol.status != OPTIMAL:
            return sol
        return LpSolution(
            OPTIMAL, sol.beta, -sol.objective, iterations=sol.iterations, slack=sol.slack
        )
    return _minimize(problem.c, problem.g, problem.h)


# --- text format -----------------------------------------------------------


class LpFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _numbers(line_no: int, text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split()]
    except ValueError as exc:
        raise LpFormatError(line_no, f"not a number ({exc})") from None
    if count is not None and len(vals) != count:
        raise LpFormatError(line_no, f"expected {count} numbers, found {len(vals)}")
    if not all(np.isfinite(vals)):
        raise LpFormatError(line_no, "non-finite value")
    return vals


def parse_problem(text: str) -> LpProblem:
    """Parse the plain-text LP format.

    Line 1: ``min|max k m``; line 2: ``k`` objective coefficients; then ``m``
    lines, each a row of ``G`` followed by its ``h`` entry. Blank lines and
    ``#`` comments are ignored.
    """
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((no, body))
    if not lines:
        raise LpFormatError(1, "empty problem")
    no, head = lines[0]
    match = re.fullmatch(r"(min|max)\s+(\d+)\s+(\d+)", head)
    if not match:
        raise LpFormatError(no, "header must be 'min|max k m'")
    sense = "minimize" if match.group(1) == "min" else "maximize"
    k, m = int(match.group(2)), int(match.group(3))
    if k < 1 or m < 1:
        raise LpFormatError(no, "k and m must be positive")
    if len(lines) != m + 2:
        last = lines[-1][0]
        raise LpFormatError(last, f"expected {m + 2} non-blank lines, found {len(lines)}")
    c = _numbers(*lines[1], count=k)
    rows = [_numbers(ln, body, count=k + 1) for ln, body in lines[2:]]
    g = np.array([r[:k] for r in rows])
    h = np.array([r[k] for r in rows])
    return LpProblem(sense, np.array(c), g, h)


def format_solution(sol: LpSolution) -> str:
    if sol.status != OPTIMAL:
        return sol.status + "\n"
    beta = " ".join(f"{float(v):.17g}" for v in sol.beta)
    return f"{OPTIMAL} {sol.objective:.17g}\n{beta}\n"
