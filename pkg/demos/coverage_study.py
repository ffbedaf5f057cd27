"""
A small coverage study
======================

Repeated draws from the simulation design, recording how often the interval
covers the true effect of 0.5. Set SHAPECI_THREADS to use several processes.
"""

from shapeci import RkdConfig, SimDesign, run_study
from shapeci.sim import results_csv

design = SimDesign(n=1000, reps=200, rkd_cfg=RkdConfig(k=4, m_draws=500))
results = run_study(design)
for mode, res in results.items():
    print(f"{mode:5s} avg length {res.avg_length:.3f}  coverage {res.coverage:.3f}  "
          f"({res.rep_count} reps, {res.infeasible_count} infeasible)")

print(results_csv([(design, results)]), end="")
