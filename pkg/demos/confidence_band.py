"""
Uniform band for the regression function
========================================

Band for g(w) on a grid, using all k sieve moments in the sampling test.
"""

import numpy as np

from shapeci import BootstrapConfig, Dataset, SieveBasis, band_general, fit, rkd_shape_constraints

rng = np.random.default_rng(3)
x = rng.uniform(-1, 1, 800)
y = np.where(x < 0, 0.4 * x, 0.0) + 0.2 * rng.normal(size=x.size)

basis = SieveBasis(kink=0.0, half_width=1.0, k=6)
sieve_fit = fit(Dataset(x, y), basis)
grid = np.linspace(-0.9, 0.9, 7)
cfg = BootstrapConfig(m_draws=500, alpha=0.05, seed=11)

plain = band_general(sieve_fit, grid, 0.01, None, cfg)
shaped = band_general(sieve_fit, grid, 0.01, rkd_shape_constraints(basis), cfg)

print(f"critical value {plain.cv:.4f}")
print("   w0    lower   upper | restricted")
for w, lo, hi, slo, shi in zip(grid, plain.lower, plain.upper, shaped.lower, shaped.upper):
    print(f"{w:+.2f}  {lo:+.3f}  {hi:+.3f} | {slo:+.3f}  {shi:+.3f}")
