import csv
import io

import numpy as np
import pytest

from shapeci.rkd import RkdConfig
from shapeci.sim import (
    CSV_COLUMNS,
    SimDesign,
    dgp_outcome,
    dgp_sample,
    replicate,
    results_csv,
    run_study,
    summarize,
)


def test_moments_at_large_n():
    d = dgp_sample(1_000_000, 42)
    u = d.y - 0.5 * np.where(d.x < 0, 0.5 * d.x, 0.0) + 0.1 * d.x
    n = d.n
    vx, vu, cxu = np.var(d.x), np.var(u), np.cov(d.x, u)[0, 1]
    # standard errors of second moments of a bivariate normal
    assert abs(vx - 1.0) < 3 * np.sqrt(2 * 1.0**2 / n)
    assert abs(vu - 0.1) < 3 * np.sqrt(2 * 0.1**2 / n)
    assert abs(cxu - 0.1) < 3 * np.sqrt((1.0 * 0.1 + 0.1**2) / n)
    assert abs(np.mean(d.x)) < 3 / np.sqrt(n)


def test_outcome_arithmetic():
    assert dgp_outcome(np.array([-1.0]), np.array([0.0]))[0] == pytest.approx(-0.15)
    assert dgp_outcome(np.array([2.0]), np.array([0.0]))[0] == pytest.approx(-0.2)


def test_sample_determinism():
    a, b = dgp_sample(50, 9), dgp_sample(50, 9)
    np.testing.assert_array_equal(a.x, b.x)
    np.testing.assert_array_equal(a.y, b.y)
    assert not np.array_equal(a.x, dgp_sample(50, 10).x)
    with pytest.raises(ValueError):
        dgp_sample(0, 1)


def test_seed_policy():
    d = SimDesign(base_seed=0b1000)
    assert d.seeds(0) == (8, 9)
    assert d.seeds(1) == (10, 11)
    with pytest.raises(ValueError):
        SimDesign(reps=0)


def test_single_replication():
    res = run_study(SimDesign(n=400, reps=1, rkd_cfg=RkdConfig(m_draws=100)), workers=1)
    for r in res.values():
        assert r.coverage in (0.0, 1.0)
        assert r.rep_count == 1
    out = replicate(SimDesign(n=400, reps=1, rkd_cfg=RkdConfig(m_draws=100)), workers=1)
    assert res["none"].avg_length == out[0].length["none"]


def test_reproducible_and_nested():
    design = SimDesign(n=500, reps=12, rkd_cfg=RkdConfig(k=6, m_draws=100))
    outs = replicate(design, workers=1)
    for o in outs:
        assert o.length["rkd"] <= o.length["none"] + 1e-7
        assert (not o.covered["rkd"]) or o.covered["none"]
    a = summarize(outs, design.rkd_cfg.modes)
    assert a == run_study(design, workers=1)
    assert a["rkd"].avg_length <= a["none"].avg_length + 1e-7


def test_worker_count_does_not_matter():
    design = SimDesign(n=400, reps=6, rkd_cfg=RkdConfig(m_draws=100))
    assert run_study(design, workers=1) == run_study(design, workers=3)


def test_thread_env(monkeypatch):
    from shapeci import sim

    monkeypatch.setenv(sim.THREADS_ENV, "2")
    assert sim.default_workers() == 2
    monkeypatch.setenv(sim.THREADS_ENV, "lots")
    with pytest.raises(ValueError):
        sim.default_workers()


def test_csv_layout():
    design = SimDesign(n=300, reps=2, rkd_cfg=RkdConfig(m_draws=50))
    res = run_study(design, workers=1)
    rows = list(csv.DictReader(io.StringIO(results_csv([(design, res)]))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [r["shape_mode"] for r in rows] == ["none", "rkd"]
    assert float(rows[0]["avg_length"]) == res["none"].avg_length
