"""Monte Carlo coverage study for the kink design.

The data-generating process: ``(X, U)`` bivariate normal with zero means,
``Var(X) = 1``, ``Cov(X, U) = 0.1``, ``Var(U) = 0.1``; schedule
``T(x) = 0.5 x`` for ``x < 0`` and ``0`` otherwise; outcome
``Y = 0.5 T(X) - 0.1 X + U``. The true kink effect is 0.5.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import ShapeCIError
from .regression import Dataset
from .rkd import KinkSchedule, RkdConfig, run_rkd

TRUE_EFFECT = 0.5
SCHEDULE = KinkSchedule(kink=0.0, slope_left=0.5, slope_right=0.0)
COV_XU = np.array([[1.0, 0.1], [0.1, 0.1]])
THREADS_ENV = "SHAPECI_THREADS"
CSV_COLUMNS = ("k", "n", "shape_mode", "avg_length", "coverage", "reps", "infeasible_count")


def schedule_value(x):
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < 0.0, 0.5 * x, 0.0)


def dgp_outcome(x, u):
    return 0.5 * schedule_value(x) - 0.1 * np.asarray(x) + np.asarray(u)


def dgp_sample(n: int, seed: int) -> Dataset:
    """Draw ``n`` observations; pair ``i`` of Box-Muller normals drives observation ``i``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = rng.standard_normals(seed, 2 * n).reshape(n, 2)
    chol = np.linalg.cholesky(COV_XU)
    xu = z @ chol.T
    x, u = xu[:, 0], xu[:, 1]
    return Dataset(x, dgp_outcome(x, u))


@dataclass(frozen=True)
class SimDesign:
    n: int = 1000
    reps: int = 2000
    rkd_cfg: RkdConfig = field(default_factory=RkdConfig)
    base_seed: int = 20240101

    def __post_init__(self):
        if self.reps < 1 or self.n < 1:
            raise ValueError("reps and n must be >= 1")

    def seeds(self, rep: int) -> tuple[int, int]:
        """(data seed, bootstrap seed) for replication ``rep``."""
        return (self.base_seed ^ (2 * rep)) & rng.MASK64, (self.base_seed ^ (2 * rep + 1)) & rng.MASK64


@dataclass(frozen=True)
class RepOutcome:
    rep: int
    length: dict
    covered: dict
    infeasible: dict
    failed: str | None = None


@dataclass(frozen=True)
class SimResult:
    shape_mode: str
    avg_length: float
    coverage: float
    rep_count: int
    infeasible_count: int
    failed_count: int = 0


def run_replication(design: SimDesign, rep: int) -> RepOutcome:
    data_seed, boot_seed = design.seeds(rep)
    modes = design.rkd_cfg.modes
    try:
        reports = run_rkd(dgp_sample(design.n, data_seed), SCHEDULE, design.rkd_cfg, seed=boot_seed)
    except ShapeCIError as exc:
        nan = {m: float("nan") for m in modes}
        return RepOutcome(rep, nan, {m: False for m in modes}, {m: False for m in modes}, str(exc))
    return RepOutcome(
        rep,
        {m: r.length for m, r in reports.items()},
        {m: r.ci.contains(TRUE_EFFECT) for m, r in reports.items()},
        {m: r.ci.empty for m, r in reports.items()},
    )


def _run_chunk(args):
    design, reps = args
    return [run_replication(design, r) for r in reps]


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def replicate(design: SimDesign, workers: int | None = None) -> list[RepOutcome]:
    """All replications, in replication order regardless of ``workers``."""
    workers = default_workers() if workers is None else max(1, int(workers))
    reps = list(range(design.reps))
    if workers == 1:
        return _run_chunk((design, reps))
    chunks = [reps[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [(design, c) for c in chunks]))
    out = [o for part in parts for o in part]
    out.sort(key=lambda o: o.rep)
    return out


def summarize(outcomes: list[RepOutcome], modes) -> dict[str, SimResult]:
    """Average length and coverage over replications with a nonempty interval."""
    results = {}
    for mode in modes:
        ok = [o for o in outcomes if o.failed is None and not o.infeasible[mode]]
        lengths = [o.length[mode] for o in ok]
        covered = [o.covered[mode] for o in ok]
        results[mode] = SimResult(
            mode,
            float(np.mean(lengths)) if ok else float("nan"),
            float(np.mean(covered)) if ok else float("nan"),
            len(ok),
            sum(1 for o in outcomes if o.failed is None and o.infeasible[mode]),
            sum(1 for o in outcomes if o.failed is not None),
        )
    return results


def run_study(design: SimDesign, workers: int | None = None) -> dict[str, SimResult]:
    """Tabulate average interval length and coverage of the true effect per shape mode."""
    return summarize(replicate(design, workers), design.rkd_cfg.modes)


def results_csv(rows) -> str:
    """CSV text for ``(design, {mode: SimResult})`` pairs, one line per mode."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for design, results in rows:
        for mode, res in results.items():
            writer.writerow([
                design.rkd_cfg.k, design.n, mode, repr(res.avg_length), repr(res.coverage),
                res.rep_count, res.infeasible_count,
            ])
    return buf.getvalue()
