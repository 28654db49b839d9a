# norms/estimate.py
"""Level-set reconstruction of a symmetric norm from the layer grid."""
import logging
import math
from collections import defaultdict
from typing import Dict, List, Optional

import attrs
import numpy as np

from errors import CapacityError
from norms.grid import LayerGrid
from norms.registry import LevelVector, NormDescriptor, level_of
from sketches.hashing import seeded_rng

logger = logging.getLogger(__name__)

SURVIVOR_LOW = 4
SURVIVOR_HIGH = 64
CLEAN_FACTOR = 2


@attrs.frozen
class LevelEstimate:
    levels: LevelVector
    sampling_level: Dict[int, int]
    omitted: List[int]


def level_offset(grid: LayerGrid) -> float:
    """Per-run uniform shift of the bucket edges, fixed by the grid seed."""
    return float(seeded_rng(grid.seed, 11).random())


def estimate_level_sizes(
    grid: LayerGrid,
    window: Optional[int] = None,
    alpha: Optional[float] = None,
    eps_prime: Optional[float] = None,
    offset: Optional[float] = None,
) -> LevelEstimate:
    window = grid.window if window is None else window
    alpha = grid.params.alpha if alpha is None else alpha
    eps_prime = grid.params.eps_prime if eps_prime is None else eps_prime
    offset = level_offset(grid) if offset is None else offset
    n_levels, reps = grid.levels + 1, grid.reps

    counts: Dict[int, np.ndarray] = defaultdict(lambda: np.zeros((n_levels, reps), dtype=np.int64))
    window_l2 = np.zeros((n_levels, reps))
    for cell, keys in grid.distinct_cells().values():
        l2 = cell.window_l2(now=grid.position, window=min(window, grid.position)) if cell.position else 0.0
        for i, r in keys:
            for report in grid.report(i, r, window):
                counts[level_of(report.f_hat, alpha, offset)][i, r] += 1
            window_l2[i, r] = l2

    low, high = SURVIVOR_LOW / eps_prime**2, SURVIVOR_HIGH / eps_prime**2
    buckets, chosen, omitted = [], {}, []
    for j in sorted(counts):
        table = counts[j]
        lower_edge = alpha ** (j - 1 + offset)
        clean = lower_edge >= CLEAN_FACTOR * grid.params.eta * window_l2
        star = None
        for i in range(n_levels):
            median = float(np.median(table[i]))
            if clean[i].sum() * 2 > reps and median <= high:
                star = i
                break
        if star is None:
            omitted.append(j)
            continue
        median = float(np.median(table[star]))
        if star > 0 and median < low:
            omitted.append(j)
            continue
        size = int(median) if star == 0 else math.floor((1 - eps_prime / 2) * median * 2**star)
        if size > 0:
            buckets.append((j, min(size, grid.universe)))
            chosen[j] = star
    if omitted:
        logger.debug("levels without a valid sampling level: %s", omitted)
    total = sum(c for _, c in buckets)
    if total > grid.universe:
        # scale down uniformly so the multiset still fits the universe
        factor = grid.universe / total
        buckets = [(j, max(1, math.floor(c * factor))) for j, c in buckets]
    return LevelEstimate(LevelVector(alpha, buckets, grid.universe, offset), chosen, omitted)


def reconstruct_norm(levels: LevelVector, norm: NormDescriptor, beta: float) -> float:
    """Norm of the level vector after dropping buckets below beta of the whole."""
    if not len(levels):
        return 0.0
    whole = norm.evaluate(levels)
    weak = [j for j, _ in levels.buckets if norm.evaluate(levels.bucket(j)) < beta * whole]
    if not weak:
        return whole
    kept = levels.without(weak)
    return norm.evaluate(kept) if len(kept) else 0.0


def symnorm_estimate(grid: LayerGrid, norm: NormDescriptor, window: Optional[int] = None) -> float:
    """(1+eps) estimate of the window norm; many norms may share one grid."""
    bound = norm.mmc_bound(grid.universe)
    if bound > grid.params.mmc_cap:
        raise CapacityError(f"{norm.name} has mmc bound {bound:.3g} above the grid's capacity {grid.params.mmc_cap:.3g}")
    window = grid.window if window is None else window
    cached = grid.level_cache.get(window)
    if cached is None:
        cached = grid.level_cache[window] = estimate_level_sizes(grid, window)
    return reconstruct_norm(cached.levels, norm, grid.params.beta)
