"""Independent reference computations used by the tests.

Nothing here imports the package's numerical kernels; each helper is a
separate route to the same quantity.
"""

from __future__ import annotations

import itertools

import numpy as np
from numpy.polynomial import legendre as npleg

MASK64 = (1 << 64) - 1


def gauss_jordan_inverse(m):
    a = np.array(m, dtype=float)
    n = a.shape[0]
    aug = np.hstack([a, np.eye(n)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        for r in range(n):
            if r != col:
                aug[r] -= aug[r, col] * aug[col]
    return aug[:, n:]


def random_spd(rng, n, floor=0.1):
    a = rng.normal(size=(n, n))
    return a @ a.T + floor * np.eye(n)


# --- quadrature and polynomials --------------------------------------------


def composite_gauss(f, a, b, panels=64, order=8):
    """Composite Gauss-Legendre rule with ``panels`` equal panels."""
    nodes, weights = npleg.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        x = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        total = total + 0.5 * (hi - lo) * np.tensordot(weights, f(x), axes=(0, 0))
    return total


def shifted_legendre(j, a, b, x, deriv=False):
    """Orthonormal degree-``j`` Legendre on ``[a, b]`` via numpy's coefficient form."""
    coef = np.zeros(j + 1)
    coef[j] = 1.0
    t = 2.0 * (np.asarray(x) - a) / (b - a) - 1.0
    norm = np.sqrt((2 * j + 1) / (b - a))
    if deriv:
        return norm * npleg.legval(t, npleg.legder(coef)) * 2.0 / (b - a)
    return norm * npleg.legval(t, coef)


def split_design(x, kink, h, k):
    """Design matrix with the kink point assigned to the right half."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(k // 2):
        cols.append(np.where(x < kink, shifted_legendre(j, kink - h, kink, x), 0.0))
        cols.append(np.where(x >= kink, shifted_legendre(j, kink, kink + h, x), 0.0))
    return np.column_stack(cols)


def kink_slope_row(kink, h, k):
    row = []
    for j in range(k // 2):
        row.append(-shifted_legendre(j, kink - h, kink, kink, deriv=True))
        row.append(shifted_legendre(j, kink, kink + h, kink, deriv=True))
    return np.array(row, dtype=float)


# --- random streams --------------------------------------------------------


def splitmix_sequence(seed, count):
    """Plain sequential SplitMix64."""
    out = []
    s = seed & MASK64
    for _ in range(count):
        s = (s + 0x9E3779B97F4A7C15) & MASK64
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        out.append(z ^ (z >> 31))
    return out


def finalizer(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def rademacher_rows(base, draws, n):
    root = finalizer(base)
    return np.array(
        [[1.0 if v >> 63 else -1.0 for v in splitmix_sequence(root ^ m, n)] for m in range(draws)]
    )


def all_sign_patterns(n):
    return np.array(list(itertools.product([-1.0, 1.0], repeat=n)))


# --- linear programming ----------------------------------------------------


def _rays(g):
    """Candidate extreme rays of ``{d : g d <= 0}`` for a pointed cone."""
    m, k = g.shape
    if k == 1:
        yield np.array([1.0])
        yield np.array([-1.0])
        return
    for rows in itertools.combinations(range(m), k - 1):
        sub = g[list(rows)]
        if np.linalg.matrix_rank(sub) != k - 1:
            continue
        d = np.linalg.svd(sub)[2][-1]
        yield d
        yield -d


def recession_rays(g):
    g = np.asarray(g, float)
    return [d for d in _rays(g) if np.all(g @ d <= 1e-10)]


def lp_vertex_oracle(sense, c, g, h, tol=1e-9):
    """Classify and solve ``opt c^T x s.t. g x <= h`` by enumeration.

    Assumes ``g`` has full column rank (pointed polyhedron): the region is
    nonempty iff it has a vertex, and the LP is unbounded iff some extreme
    ray of the recession cone improves the objective. Returns
    ``(status, objective)``.
    """
    c = np.asarray(c, float)
    g = np.asarray(g, float)
    h = np.asarray(h, float)
    m, k = g.shape
    cc = -c if sense == "maximize" else c
    scale = 1.0 + np.abs(h)
    vertices = []
    for rows in itertools.combinations(range(m), k):
        sub = g[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, h[list(rows)])
        if np.all(g @ x <= h + tol * scale):
            vertices.append(x)
    if not vertices:
        return "infeasible", None
    if any(cc @ d < -1e-10 for d in recession_rays(g)):
        return "unbounded", None
    best = min(float(cc @ v) for v in vertices)
    return "optimal", (-best if sense == "maximize" else best)


def random_lp(rng, kind):
    """Random small LP (k <= 3, m <= 6) of a given ``kind``.

    ``bounded``: nonempty polytope; ``infeasible``: two contradictory
    parallel rows; ``open``: unstructured, any status.
    """
    k = int(rng.integers(1, 4))
    c = rng.normal(size=k)
    if kind == "bounded":
        while True:
            m = int(rng.integers(k + 1, 7))
            g = rng.normal(size=(m, k))
            if np.linalg.matrix_rank(g) < k or recession_rays(g):
                continue
            x0 = rng.normal(size=k)
            h = g @ x0 + rng.uniform(0.05, 2.0, size=m)
            return c, g, h
    m = int(rng.integers(max(k, 2), 7))
    g = rng.normal(size=(m, k))
    h = rng.normal(size=m)
    if kind == "infeasible":
        s = rng.uniform(0.5, 2.0)
        g[-1] = -s * g[0]
        h[-1] = -s * (h[0] + rng.uniform(0.1, 1.0))
    return c, g, h


# --- end-to-end kink interval ----------------------------------------------


def reference_kink_ci(x, y, kink, slope_jump, h, k, seed, draws, alpha, delta0,
                      delta1=None, n_grid=99, cv=None):
    """Kink-effect interval built from numpy/scipy primitives only.

    ``delta1=None`` drops the shape rows. Returns ``(lower, upper, cv)``.
    """
    from scipy.optimize import linprog

    x = np.asarray(x, float)
    y = np.asarray(y, float)
    inside = (x >= kink - h) & (x <= kink + h)
    x, y = x[inside], y[inside]
    n = x.size
    p = split_design(x, kink, h, k)
    beta = np.linalg.lstsq(p, y, rcond=None)[0]
    a = kink_slope_row(kink, h, k) / slope_jump
    w = np.linalg.solve(p.T @ p / n, a)
    proj = (p * (y - p @ beta)[:, None]) @ w
    sd = np.sqrt(np.mean(proj**2))
    if cv is None:
        signs = rademacher_rows(seed, draws, n)
        stats = np.sort(np.abs(signs @ proj) / n / sd)
        cv = stats[int(np.ceil((1 - alpha) * draws - 1e-9)) - 1]
    rows = [a / sd, -a / sd]
    rhs = [a @ beta / sd + cv, cv - a @ beta / sd]
    if delta1 is not None:
        left = np.array([shifted_legendre(j, kink - h, kink, kink) for j in range(k // 2)])
        right = np.array([shifted_legendre(j, kink, kink + h, kink) for j in range(k // 2)])
        jump = np.empty(k)
        jump[0::2], jump[1::2] = -left, right
        rows += [jump, -jump]
        xi = kink + h * np.arange(1, n_grid + 1) / (n_grid + 1)
        for t in xi:
            r = np.zeros(k)
            r[1::2] = [shifted_legendre(j, kink, kink + h, t, deriv=True) for j in range(k // 2)]
            rows.append(r)
        rhs += [delta1] * (n_grid + 2)
    g, hh = np.array(rows), np.array(rhs)
    free = [(None, None)] * k
    lo = linprog(a, A_ub=g, b_ub=hh, bounds=free, method="highs")
    hi = linprog(-a, A_ub=g, b_ub=hh, bounds=free, method="highs")
    return lo.fun - delta0, -hi.fun + delta0, cv
