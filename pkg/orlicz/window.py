# orlicz/window.py
"""Sliding-window coresets from staggered online samplers.

Each checkpoint runs an online sampler (accuracy eps / log2 n) from its start
index. A new checkpoint opens when the oldest live sampler has doubled its
kept rows since the newest checkpoint opened, or after ceil(W / log2 n)
arrivals. Checkpoints that start before the window are evicted except the
youngest of them, which brackets the window start.
"""
import logging
import math
from typing import List, Optional

import attrs
import numpy as np

from orlicz.sampler import CoresetRow, OnlineSensitivitySampler
from utils.normalize import check_positive_int, log2n

logger = logging.getLogger(__name__)


@attrs.define
class Checkpoint:
    start: int
    sampler: OnlineSensitivitySampler
    baseline: int


class WindowCoresetState:
    def __init__(
        self,
        d: int,
        window: int,
        eps: float,
        delta: float = 1.0,
        n: int = 1024,
        oversample: float = 1.0,
        seed: int = 0,
    ):
        self.d = d
        self.window = check_positive_int("window", window)
        self.eps = eps
        self.delta = delta
        self.n = n
        self.oversample = oversample
        self.seed = seed
        self.instance_eps = eps / log2n(n)
        self.spacing = max(1, math.ceil(window / log2n(n)))
        self.checkpoints: List[Checkpoint] = []
        self.position = 0

    def _open(self, start: int) -> None:
        baseline = max(1, len(self.checkpoints[0].sampler)) if self.checkpoints else 1
        sampler = OnlineSensitivitySampler(
            self.d, self.instance_eps, self.delta, self.n, self.oversample, self.seed, start
        )
        self.checkpoints.append(Checkpoint(start, sampler, baseline))

    def push(self, row, response: Optional[float] = None) -> None:
        self.position += 1
        i = self.position
        if not self.checkpoints:
            self._open(i)
        else:
            newest = self.checkpoints[-1]
            oldest = self.checkpoints[0]
            if len(oldest.sampler) >= 2 * newest.baseline or i - newest.start >= self.spacing:
                self._open(i)
        for checkpoint in self.checkpoints:
            checkpoint.sampler.push(row, i, response)
        self._evict()

    def _evict(self) -> None:
        window_start = self.position - self.window + 1
        before = [k for k, c in enumerate(self.checkpoints) if c.start <= window_start]
        if len(before) > 1:
            del self.checkpoints[: before[-1]]

    def query(self) -> List[CoresetRow]:
        """Coreset of the bracketing checkpoint restricted to the window."""
        if not self.checkpoints:
            return []
        window_start = max(1, self.position - self.window + 1)
        chosen = self.checkpoints[0]
        for checkpoint in self.checkpoints:
            if checkpoint.start <= window_start:
                chosen = checkpoint
        return [row for row in chosen.sampler.rows if row.index >= window_start]

    @property
    def stored_rows(self) -> int:
        return sum(len(c.sampler) for c in self.checkpoints)

    def __len__(self) -> int:
        return len(self.checkpoints)


def window_coreset(
    rows,
    window: int,
    eps: float,
    delta: float = 1.0,
    oversample: float = 1.0,
    n: Optional[int] = None,
    seed: int = 0,
    responses=None,
) -> List[CoresetRow]:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    n = rows.shape[0] if n is None else n
    state = WindowCoresetState(rows.shape[1], window, eps, delta, n, oversample, seed)
    responses = [None] * rows.shape[0] if responses is None else list(responses)
    for row, response in zip(rows, responses):
        state.push(row, response)
    logger.info("window coreset: %d checkpoints, %d stored rows", len(state), state.stored_rows)
    return state.query()
