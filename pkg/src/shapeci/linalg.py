"""Small dense symmetric-matrix kernels.

Everything here works on plain ``numpy`` arrays. Matrix sizes never exceed
the sieve dimension (a few dozen), so a cyclic Jacobi eigensolver and a
textbook Cholesky factorization are accurate and fast enough.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, NearSingular

SYMMETRY_TOL = 1e-10
CONDITION_CUTOFF = 1e-12
MAX_SWEEPS = 50


def _as_square(m) -> np.ndarray:
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def symmetrize(m) -> np.ndarray:
    a = _as_square(m)
    return 0.5 * (a + a.T)


def _off_norm2(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sum(off * off))


def jacobi_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    The input is symmetrized first. Returns ``(eigenvalues, eigenvectors)``
    with ``m = V @ diag(lam) @ V.T``; eigenvalues are sorted ascending and
    eigenvectors are the columns of ``V``.

    Raises
    ------
    ValueError
        If ``m`` is not square.
    ConvergenceError
        If the off-diagonal mass has not vanished after 50 sweeps.
    """
    a = symmetrize(m)
    n = a.shape[0]
    v = np.eye(n)
    if n == 0:
        return np.zeros(0), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    target = (1e-13 * scale) ** 2
    for _ in range(MAX_SWEEPS):
        if _off_norm2(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) Givens rotation
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if _off_norm2(a) > target:
            raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    return lam[order], v[:, order]


def _check_pd(lam: np.ndarray, what: str) -> None:
    top = float(np.max(np.abs(lam))) if lam.size else 0.0
    low = float(np.min(lam)) if lam.size else 0.0
    if top == 0.0 or low <= CONDITION_CUTOFF * top:
        raise NearSingular(
            f"{what} is not numerically positive definite "
            f"(smallest eigenvalue {low:.3e}, largest {top:.3e})"
        )


def inv_sqrt_sym(m) -> np.ndarray:
    """Symmetric inverse square root ``S`` with ``S @ S @ m = I``.

    Raises NearSingular when the smallest eigenvalue is not above
    ``1e-12`` times the largest.
    """
    lam, v = jacobi_eigen(m)
    _check_pd(lam, "matrix")
    s = (v / np.sqrt(lam)) @ v.T
    return 0.5 * (s + s.T)


def cholesky(m) -> np.ndarray:
    """Lower-triangular Cholesky factor ``L`` with ``L @ L.T = m``."""
    a = symmetrize(m)
    n = a.shape[0]
    ell = np.zeros_like(a)
    top = float(np.max(np.abs(np.diag(a)))) if n else 0.0
    for j in range(n):
        d = a[j, j] - ell[j, :j] @ ell[j, :j]
        if not d > CONDITION_CUTOFF * top:
            raise NearSingular(f"matrix is not numerically positive definite (pivot {j} = {d:.3e})")
        ell[j, j] = np.sqrt(d)
        ell[j + 1 :, j] = (a[j + 1 :, j] - ell[j + 1 :, :j] @ ell[j, :j]) / ell[j, j]
    return ell


def _forward(ell: np.ndarray, b: np.ndarray) -> np.ndarray:
    y = np.array(b, dtype=np.float64)
    for i in range(ell.shape[0]):
        y[i] = (y[i] - ell[i, :i] @ y[:i]) / ell[i, i]
    return y


def _backward(u: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = np.array(b, dtype=np.float64)
    n = u.shape[0]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - u[i, i + 1 :] @ x[i + 1 :]) / u[i, i]
    return x


def solve_spd(m, b) -> np.ndarray:
    """Solve ``m @ x = b`` for symmetric positive-definite ``m``.

    ``b`` may be a vector or a matrix of right-hand sides (one per column).
    """
    ell = cholesky(m)
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.shape[0] != ell.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {ell.shape}, rhs {rhs.shape}")
    return _backward(ell.T, _forward(ell, rhs))
