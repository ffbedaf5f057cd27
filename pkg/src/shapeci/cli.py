"""Command-line front end.

    shapeci analyze  --config run.cfg --data obs.csv [--out report.json]
    shapeci simulate --config sim.cfg [--out table.csv]
    shapeci lp solve problem.txt

Config files hold ``key = value`` lines; ``#`` starts a comment. Unknown
keys are rejected. Exit codes: 0 ok, 2 input error, 3 infeasible shape
restrictions, 4 numerical failure, 5 config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import lp
from .bands import ShapeConstraints, band_general, rkd_shape_constraints
from .bootstrap import BootstrapConfig
from .errors import ConvergenceError, IterationLimit, NearSingular, StepError, WindowError
from .regression import Dataset, fit
from .rkd import SHAPE_MODES, KinkSchedule, RkdConfig, run_rkd
from .sieve import SieveBasis
from .sim import SimDesign, results_csv, run_study

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERIC = 4
EXIT_CONFIG = 5


class ConfigError(ValueError):
    pass


class InputError(ValueError):
    pass


# --- config files --------------------------------------------------------


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _modes(text: str) -> tuple[str, ...]:
    if text == "both":
        return SHAPE_MODES
    modes = tuple(m.strip() for m in text.split(",") if m.strip())
    for m in modes:
        if m not in SHAPE_MODES:
            raise ValueError(f"unknown shape mode {m!r}")
    return modes


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return v


def _grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        lo, hi, count = text.split(":")
        return tuple(np.linspace(float(lo), float(hi), int(count)).tolist())
    return tuple(float(v) for v in text.split(","))


COMMON_KEYS = {
    "half_width": (float, 1.0),
    "alpha": (float, 0.05),
    "m_draws": (int, 500),
    "seed": (_seed, 0),
    "delta0": (float, 0.01),
    "delta1": (float, 0.01),
    "n_grid": (int, 99),
    "shape": (_modes, SHAPE_MODES),
    "nonnegative_coefficients": (_bool, False),
}

ANALYZE_KEYS = {
    **COMMON_KEYS,
    "k": (int, 4),
    "t": (float, None),
    "t_max": (float, None),
    "kink": (float, None),
    "slope_left": (float, None),
    "slope_right": (float, None),
    "format": (str, "json"),
    "band_grid": (_grid, None),
    "band_out": (str, None),
}

SIMULATE_KEYS = {
    **COMMON_KEYS,
    "k": (_ints, (4,)),
    "n": (_ints, (1000,)),
    "reps": (int, 2000),
    "seed": (_seed, 20240101),
}


def parse_config(text: str, schema: dict) -> dict:
    """Strict ``key = value`` parsing; returns every key with defaults filled in."""
    seen = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in schema:
            raise ConfigError(f"line {no}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {no}: duplicate key {key!r}")
        conv = schema[key][0]
        try:
            seen[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"line {no}: bad value for {key!r}: {exc}") from None
    return {key: seen.get(key, default) for key, (_, default) in schema.items()}


def _schedule(cfg: dict) -> KinkSchedule:
    capped = cfg["t"] is not None or cfg["t_max"] is not None
    explicit = any(cfg[k] is not None for k in ("kink", "slope_left", "slope_right"))
    if capped == explicit:
        raise ConfigError("give either 't' and 't_max' or 'kink', 'slope_left' and 'slope_right'")
    try:
        if capped:
            if cfg["t"] is None or cfg["t_max"] is None:
                raise ConfigError("both 't' and 't_max' are required")
            return KinkSchedule.capped(cfg["t"], cfg["t_max"])
        if any(cfg[k] is None for k in ("kink", "slope_left", "slope_right")):
            raise ConfigError("'kink', 'slope_left' and 'slope_right' are all required")
        return KinkSchedule(cfg["kink"], cfg["slope_left"], cfg["slope_right"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def rkd_config(cfg: dict, k: int) -> RkdConfig:
    try:
        return RkdConfig(
            k=k,
            half_width=cfg["half_width"],
            alpha=cfg["alpha"],
            m_draws=cfg["m_draws"],
            seed=cfg["seed"],
            delta0=cfg["delta0"],
            delta1=cfg["delta1"],
            n_grid=cfg["n_grid"],
            modes=cfg["shape"],
            nonnegative_coefficients=cfg["nonnegative_coefficients"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# --- data ------------------------------------------------------------------


def read_csv(path) -> Dataset:
    """Read a two-column ``x,y`` CSV; errors name the offending line."""
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from None
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y"]:
            raise InputError(f"{path}: line 1: header must be 'x,y'")
        xs, ys = [], []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise InputError(f"{path}: line {line}: expected 2 fields, found {len(row)}")
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                raise InputError(f"{path}: line {line}: non-numeric value") from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InputError(f"{path}: line {line}: non-finite value")
            xs.append(x)
            ys.append(y)
    return Dataset(np.array(xs), np.array(ys))


# --- commands --------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _num(value: float):
    return value if math.isfinite(value) else str(value)


def analyze(config_text: str, data: Dataset) -> tuple[dict, int, dict]:
    """Run the kink analysis; returns (report, exit code, band CSV texts by mode)."""
    cfg = parse_config(config_text, ANALYZE_KEYS)
    if cfg["format"] not in ("json", "csv"):
        raise ConfigError("format must be 'json' or 'csv'")
    schedule = _schedule(cfg)
    rcfg = rkd_config(cfg, cfg["k"])
    reports = run_rkd(data, schedule, rcfg)
    code = EXIT_OK
    out = {"config": {k: _jsonable(v) for k, v in sorted(cfg.items())}, "results": []}
    for mode, rep in reports.items():
        ci = rep.ci
        if ci.empty:
            code = EXIT_INFEASIBLE
        out["results"].append({
            "shape_mode": mode,
            "status": ci.status,
            "ci_lower": _num(ci.lower),
            "ci_upper": _num(ci.upper),
            "length": _num(ci.length),
            "cv": rep.cv,
            "plug_in": rep.plug_in,
            "n_used": rep.n_used,
            "k": rcfg.k,
            "alpha": rcfg.alpha,
            "seed": rcfg.seed,
            "binding_rows": int(np.sum(ci.binding)),
        })
    bands = {}
    if cfg["band_grid"] is not None:
        basis = SieveBasis(schedule.kink, rcfg.half_width, rcfg.k)
        local = data.window(*basis.window)
        try:
            sieve_fit = fit(local, basis)
        except (NearSingular, ValueError) as exc:
            raise StepError("band fit", exc) from exc
        boot = BootstrapConfig(rcfg.m_draws, rcfg.alpha, rcfg.seed)
        cv = None
        for mode in rcfg.modes:
            shape = (
                rkd_shape_constraints(basis, rcfg.n_grid, rcfg.delta1)
                if mode == "rkd" else ShapeConstraints.none(rcfg.k)
            )
            try:
                band = band_general(sieve_fit, cfg["band_grid"], rcfg.delta0, shape, boot, cv=cv)
            except (WindowError, NearSingular) as exc:
                raise StepError("band", exc) from exc
            cv = band.cv
            lines = ["w0,lower,upper"]
            lines += [f"{w!r},{lo!r},{hi!r}" for w, lo, hi in band.intervals()]
            bands[mode] = "\n".join(lines) + "\n"
            if any(s == lp.INFEASIBLE for s in band.status):
                code = EXIT_INFEASIBLE
    return out, code, bands


def format_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    cols = ["shape_mode", "status", "ci_lower", "ci_upper", "length", "cv", "plug_in",
            "n_used", "k", "alpha", "seed", "binding_rows"]
    lines = ["# " + json.dumps(report["config"], sort_keys=True), ",".join(cols)]
    for row in report["results"]:
        lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def simulate(config_text: str, workers: int | None = None) -> tuple[str, str]:
    """Run every (k, n) design; returns (results CSV, human summary)."""
    cfg = parse_config(config_text, SIMULATE_KEYS)
    rows = []
    summary = []
    for k in cfg["k"]:
        rcfg = rkd_config(cfg, k)
        for n in cfg["n"]:
            try:
                design = SimDesign(n=n, reps=cfg["reps"], rkd_cfg=rcfg, base_seed=cfg["seed"])
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            results = run_study(design, workers)
            rows.append((design, results))
            for mode, res in results.items():
                summary.append(
                    f"k={k:<3d} n={n:<6d} {mode:<5s} avg_length={res.avg_length:.4f} "
                    f"coverage={res.coverage:.4f} reps={res.rep_count} "
                    f"infeasible={res.infeasible_count} failed={res.failed_count}"
                )
    return results_csv(rows), "\n".join(summary) + "\n"


def _write(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _numeric_failure(exc: BaseException) -> bool:
    cause = exc.cause if isinstance(exc, StepError) else exc
    return isinstance(cause, (NearSingular, ConvergenceError, IterationLimit, ArithmeticError))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shapeci", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_an = sub.add_parser("analyze", help="confidence interval for the kink effect")
    p_an.add_argument("--config", required=True)
    p_an.add_argument("--data", required=True)
    p_an.add_argument("--out")
    p_sim = sub.add_parser("simulate", help="Monte Carlo coverage study")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out")
    p_lp = sub.add_parser("lp", help="linear-program utilities")
    lp_sub = p_lp.add_subparsers(dest="lp_command", required=True)
    p_solve = lp_sub.add_parser("solve", help="solve a problem in the text format")
    p_solve.add_argument("path")
    return parser


def _read_text(path, kind: type[Exception]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise kind(f"cannot read {path}: {exc.strerror}") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            config_text = _read_text(args.config, ConfigError)
            data = read_csv(args.data)
            report, code, bands = analyze(config_text, data)
            fmt = report["config"]["format"]
            _write(args.out, format_report(report, fmt))
            band_out = report["config"]["band_out"]
            for mode, text in bands.items():
                if band_out is None:
                    sys.stdout.write(f"# band ({mode})\n{text}")
                else:
                    _write(f"{band_out}.{mode}.csv", text)
            return code
        if args.command == "simulate":
            table, summary = simulate(_read_text(args.config, ConfigError))
            _write(args.out, table)
            # keep stdout clean when it carries the table
            (sys.stdout if args.out else sys.stderr).write(summary)
            return EXIT_OK
        text = _read_text(args.path, InputError)
        sys.stdout.write(lp.format_solution(lp.solve(lp.parse_problem(text))))
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputError, lp.LpFormatError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StepError as exc:
        if _numeric_failure(exc):
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        if isinstance(exc.cause, WindowError) or exc.step in ("window", "fit", "band fit"):
            print(f"input error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NearSingular, ConvergenceError, IterationLimit) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
