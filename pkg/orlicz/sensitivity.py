# orlicz/sensitivity.py
"""Online L1 sensitivities via linear programming.

For a row a and matrix M with a in the row space of M, the sensitivity is

    max_x <a, x> / (||M x||_1 + |<a, x>|)

Writing x = B z for an orthonormal basis B of the row space and normalising
the denominator to 1 turns this into

    max c.z  s.t.  -t <= M B z <= t,  c.z + sum(t) <= 1

with c = B^T a. Flipping the sign of x gives the same value.
"""
from typing import Optional

import numpy as np
from scipy import optimize, sparse

from errors import InputError, NumericError
from orlicz.gfunctions import GFunction
from utils.normalize import RANK_TOL


def row_space(M: np.ndarray) -> np.ndarray:
    """Orthonormal basis (d x r) of the row space of M."""
    if M.size == 0:
        return np.zeros((M.shape[1] if M.ndim == 2 else 0, 0))
    _, s, vt = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s.size and s[0] > 0 else 0
    return vt[:rank].T


def in_span(a: np.ndarray, basis: np.ndarray) -> bool:
    if basis.shape[1] == 0:
        return False
    residual = a - basis @ (basis.T @ a)
    return np.linalg.norm(residual) <= RANK_TOL * max(np.linalg.norm(a), 1.0)


def sensitivity_ratio(a, M, index: Optional[int] = None) -> float:
    """Unscaled online L1 sensitivity of ``a`` against the rows of ``M``."""
    a = np.asarray(a, dtype=np.float64).ravel()
    if not np.all(np.isfinite(a)):
        raise InputError(f"row {index} has non-finite entries")
    if not np.any(a):
        return 0.0
    M = np.asarray(M, dtype=np.float64).reshape(-1, a.size)
    if M.shape[0] == 0:
        return 1.0
    basis = row_space(M)
    if not in_span(a, basis):
        return 1.0

    c = basis.T @ a
    MB = M @ basis
    k, r = MB.shape
    # variables: z (r, free), t (k, >= 0)
    objective = np.concatenate([-c, np.zeros(k)])
    eye = sparse.identity(k, format="csr")
    A_ub = sparse.vstack(
        [
            sparse.hstack([sparse.csr_matrix(MB), -eye]),
            sparse.hstack([sparse.csr_matrix(-MB), -eye]),
            sparse.csr_matrix(np.concatenate([c, np.ones(k)])[None, :]),
        ],
        format="csr",
    )
    b_ub = np.concatenate([np.zeros(2 * k), [1.0]])
    bounds = [(None, None)] * r + [(0, None)] * k
    result = optimize.linprog(objective, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if result.status != 0:
        raise NumericError(f"sensitivity LP failed for row {index}: {result.message}")
    return float(max(0.0, -result.fun))


def sensitivity_lower_bound(a, M, index: Optional[int] = None) -> float:
    """The LP objective at x = (M^T M)^+ a, a feasible point, so never above
    ``sensitivity_ratio``. Equal to it when d = 1."""
    a = np.asarray(a, dtype=np.float64).ravel()
    if not np.all(np.isfinite(a)):
        raise InputError(f"row {index} has non-finite entries")
    if not np.any(a):
        return 0.0
    M = np.asarray(M, dtype=np.float64).reshape(-1, a.size)
    if M.shape[0] == 0 or not in_span(a, row_space(M)):
        return 1.0
    x = np.linalg.pinv(M.T @ M) @ a
    ax = float(a @ x)
    if ax <= 0:
        return 0.0
    return ax / (float(np.abs(M @ x).sum()) + ax)


def online_sensitivity(a, M, delta: float = 1.0, index: Optional[int] = None) -> float:
    """tau = min(1, 2 * delta * ratio), or 1 when a leaves the span of M."""
    if delta < 1:
        raise InputError(f"delta must be at least 1, got {delta}")
    return min(1.0, 2 * delta * sensitivity_ratio(a, M, index))


def online_sensitivities(A) -> np.ndarray:
    """Unscaled online L1 sensitivity of every row against its full prefix."""
    A = np.asarray(A, dtype=np.float64)
    return np.array([sensitivity_ratio(A[i], A[:i], i) for i in range(A.shape[0])])


def sensitivity_sum(A) -> float:
    return float(online_sensitivities(A).sum())


def condition_number(A) -> float:
    """Largest ratio of extreme nonzero singular values over all prefixes."""
    A = np.asarray(A, dtype=np.float64)
    gram = np.zeros((A.shape[1], A.shape[1]))
    worst = 1.0
    for row in A:
        gram += np.outer(row, row)
        eig = np.linalg.eigvalsh(gram)
        top = eig[-1]
        if top <= 0:
            continue
        nonzero = eig[eig > RANK_TOL * top]
        worst = max(worst, float(np.sqrt(top / nonzero[0])))
    return worst


def delta_for(G: GFunction, lo: float, hi: float) -> float:
    """max(1, G(lo) hi / (G(hi) lo)) for inner products in [lo, hi]."""
    if not 0 < lo <= hi:
        raise InputError(f"need 0 < lo <= hi, got lo={lo} hi={hi}")
    return max(1.0, float(G(lo)) * hi / (float(G(hi)) * lo))
