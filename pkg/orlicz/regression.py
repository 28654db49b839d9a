# orlicz/regression.py
import logging
from typing import Optional, Sequence

import attrs
import numpy as np
from scipy import optimize

from errors import InputError
from orlicz.gfunctions import GFunction
from orlicz.norm import orlicz_norm
from orlicz.sampler import CoresetRow

logger = logging.getLogger(__name__)

EXACT_FIT_TOL = 1e-12


@attrs.frozen
class RegressionResult:
    x: np.ndarray = attrs.field(eq=False)
    objective: float
    converged: bool
    iterations: int = 0


def objective_and_gradient(x, A, b, w, G: GFunction):
    """||Ax - b||_G with weights and its gradient in x.

    With u = |r| / alpha at the root, implicit differentiation of
    sum w G(u) = 1 gives d alpha / d r_i = w_i G'(u_i) sign(r_i) / sum_j w_j G'(u_j) u_j.
    """
    r = A @ x - b
    alpha = orlicz_norm(r, G, weights=w)
    if alpha == 0:
        return 0.0, np.zeros_like(x)
    u = np.abs(r) / alpha
    slope = w * G.derivative(u)
    denom = float(np.dot(slope, u))
    if denom <= 0:
        return alpha, np.zeros_like(x)
    return alpha, A.T @ (slope * np.sign(r) / denom)


def solve_weighted(A, b, G: GFunction, weights=None, tol: float = 1e-8, max_iter: int = 500) -> RegressionResult:
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64).ravel()
    if A.shape[0] == 0:
        raise InputError("cannot solve regression on an empty coreset")
    if A.shape[0] != b.size:
        raise InputError(f"{A.shape[0]} rows but {b.size} responses")
    w = np.ones(A.shape[0]) if weights is None else np.asarray(weights, dtype=np.float64)

    root_w = np.sqrt(w)
    x0 = np.linalg.lstsq(A * root_w[:, None], b * root_w, rcond=None)[0]
    start = orlicz_norm(A @ x0 - b, G, weights=w)
    if start <= EXACT_FIT_TOL * (1 + np.linalg.norm(b)):
        return RegressionResult(x0, start, True, 0)

    result = optimize.minimize(
        objective_and_gradient,
        x0,
        args=(A, b, w, G),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "ftol": tol, "gtol": tol},
    )
    x = result.x
    objective = orlicz_norm(A @ x - b, G, weights=w)
    if objective > start:
        x, objective = x0, start
    if not result.success:
        logger.warning("regression stopped without converging: %s", result.message)
    return RegressionResult(x, objective, bool(result.success), int(result.nit))


def solve_regression(coreset: Sequence[CoresetRow], G: GFunction, tol: float = 1e-8, max_iter: int = 500) -> RegressionResult:
    """Minimise the weighted G-norm of the coreset residual."""
    if not coreset:
        raise InputError("cannot solve regression on an empty coreset")
    if any(row.response is None for row in coreset):
        raise InputError("coreset rows carry no responses")
    A = np.vstack([row.row for row in coreset])
    b = np.array([row.response for row in coreset])
    w = np.array([row.weight for row in coreset])
    return solve_weighted(A, b, G, w, tol, max_iter)
