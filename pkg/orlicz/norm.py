# orlicz/norm.py
from typing import Optional

import numpy as np
from scipy import optimize

from errors import InputError, NumericError
from orlicz.gfunctions import GFunction
from utils.normalize import MAX_BRACKET_STEPS

MIN_RTOL = 4 * np.finfo(float).eps


def orlicz_norm(x, G: GFunction, tol: float = 1e-10, weights: Optional[np.ndarray] = None) -> float:
    """The unique alpha with sum_i w_i G(|x_i| / alpha) = 1 (0 for x = 0)."""
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    x = np.abs(np.asarray(x, dtype=np.float64)).ravel()
    if not np.all(np.isfinite(x)):
        raise InputError("vector has non-finite entries")
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64).ravel()
    if w.shape != x.shape:
        raise InputError(f"weights shape {w.shape} does not match vector shape {x.shape}")
    live = (x > 0) & (w > 0)
    if not live.any():
        return 0.0
    x, w = x[live], w[live]

    def excess(alpha: float) -> float:
        return float(np.dot(w, G(x / alpha))) - 1.0

    lo = hi = float(x.max())
    for _ in range(MAX_BRACKET_STEPS):
        if excess(hi) <= 0:
            break
        hi *= 2
    else:
        raise NumericError(f"could not bracket the {G.name} norm from above")
    for _ in range(MAX_BRACKET_STEPS):
        if excess(lo) >= 0:
            break
        lo /= 2
    else:
        raise NumericError(f"could not bracket the {G.name} norm from below")
    if excess(hi) == 0:
        return hi
    if excess(lo) == 0:
        return lo
    return float(optimize.bisect(excess, lo, hi, xtol=lo * tol, rtol=max(tol, MIN_RTOL), maxiter=500))


def orlicz_objective(A, b, x, G: GFunction, weights: Optional[np.ndarray] = None) -> float:
    """||Ax - b||_G, optionally with per-row weights."""
    residual = np.asarray(A, dtype=np.float64) @ np.asarray(x, dtype=np.float64)
    if b is not None:
        residual = residual - np.asarray(b, dtype=np.float64)
    return orlicz_norm(residual, G, weights=weights)


def embedding_ratios(A, rows, weights, G: GFunction, directions) -> np.ndarray:
    """||M x||_G (weighted) over ||A x||_G for each direction x."""
    A = np.asarray(A, dtype=np.float64)
    M = np.asarray(rows, dtype=np.float64).reshape(-1, A.shape[1])
    ratios = []
    for x in np.atleast_2d(directions):
        full = orlicz_norm(A @ x, G)
        if full == 0:
            continue
        ratios.append(orlicz_norm(M @ x, G, weights=weights) / full)
    return np.asarray(ratios)


def random_directions(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((count, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)

