# sketches/suffix.py
"""Smooth-histogram estimator of suffix L2 norms.

A single running AMS sketch is kept together with a snapshot of its
accumulators taken just before each retained timestamp's update. By
linearity the suffix sketch from timestamp ``a`` is ``running - snapshot[a]``,
so a new timestamp costs one vector copy instead of a fresh sketch that has to
be fed every later update.
"""
import logging
import math
import os
from typing import Dict, List, Optional

import numpy as np
from sortedcontainers import SortedDict

from errors import ParameterError
from sketches.ams import AMS_GROUPS, AMS_REPS, AmsSketch

logger = logging.getLogger(__name__)

COMPACTION_RATIO = 17 / 16
DEBUG = os.getenv("SLIDENORM_DEBUG", "0") == "1"


class SnapshotPool:
    """Fixed-shape arrays stored in a growable block with slot reuse."""

    def __init__(self, shape, dtype=np.int64, capacity: int = 4):
        self.shape = tuple(shape)
        self.data = np.zeros((capacity,) + self.shape, dtype=dtype)
        self._free: List[int] = list(range(capacity - 1, -1, -1))

    def put(self, array: np.ndarray) -> int:
        if not self._free:
            old = self.data.shape[0]
            self.data = np.concatenate([self.data, np.zeros_like(self.data)])
            self._free = list(range(2 * old - 1, old - 1, -1))
        slot = self._free.pop()
        self.data[slot] = array
        return slot

    def release(self, slot: int) -> None:
        self._free.append(slot)

    def gather(self, slots) -> np.ndarray:
        return self.data[np.asarray(slots, dtype=np.intp)]

    def __len__(self) -> int:
        return self.data.shape[0] - len(self._free)


def chain_keep(x: np.ndarray, ratio: float = COMPACTION_RATIO) -> np.ndarray:
    """Indices kept by compaction of suffix estimates ``x`` (oldest first).

    From each kept index i the next kept index is the furthest j > i with
    x[i] <= ratio * x[j], or i + 1 when there is none. Afterwards no kept
    triple a < b < c has x[a] <= ratio * x[c].
    """
    k = len(x)
    if k <= 2:
        return np.arange(k)
    # max over x[j:] is non-increasing in j, so the furthest j with
    # ratio * x[j] >= x[i] is a binary search on it
    reach = np.maximum.accumulate(x[::-1])[::-1] * ratio
    last = np.searchsorted(-reach, -x, side="right") - 1
    nxt = np.maximum(last, np.arange(1, k + 1)).tolist()
    kept = [0]
    while kept[-1] < k - 1:
        kept.append(nxt[kept[-1]])
    return np.asarray(kept)


class SuffixL2Estimator:
    """Suffix L2 estimates for every retained timestamp.

    Timestamps are stream positions (1-based). Adjacent retained timestamps
    keep their suffix norms within a factor 1 + sqrt(C^2 - 1) of each other,
    which is what ``query`` relies on.
    """

    def __init__(self, seed: int = 0, reps: int = AMS_REPS, groups: int = AMS_GROUPS, spawn_key=()):
        self.ams = AmsSketch(reps, seed, groups, spawn_key)
        self.pool = SnapshotPool((reps,))
        self.timestamps: SortedDict = SortedDict()  # position -> pool slot
        self.position = 0
        self.updates = 0

    # --- updates ---

    def update(self, item: int, position: Optional[int] = None) -> List[int]:
        """Feed one item; returns the timestamps removed by compaction."""
        position = self._advance(position)
        self.timestamps[position] = self.pool.put(self.ams.accumulators)
        self.ams.update(item)
        self.updates += 1
        removed = self.compact()
        if DEBUG:
            self.check_invariants()
        return removed

    def _advance(self, position: Optional[int]) -> int:
        position = self.position + 1 if position is None else int(position)
        if position <= self.position:
            raise ParameterError(f"positions must increase: {position} after {self.position}")
        self.position = position
        return position

    def compact(self) -> List[int]:
        if len(self.timestamps) <= 2:
            return []
        keys = list(self.timestamps.keys())
        kept = chain_keep(self.suffix_l2())
        keep = np.zeros(len(keys), dtype=bool)
        keep[kept] = True
        return [self._drop(keys[i]) for i in np.flatnonzero(~keep)]

    def expire(self, window_start: int) -> List[int]:
        """Among timestamps before ``window_start`` keep only the latest."""
        idx = self.timestamps.bisect_left(window_start)
        if idx <= 1:
            return []
        return [self._drop(key) for key in list(self.timestamps.islice(0, idx - 1))]

    def _drop(self, key: int) -> int:
        self.pool.release(self.timestamps.pop(key))
        return key

    # --- queries ---

    def suffix_l2(self) -> np.ndarray:
        """X_a for every retained timestamp, oldest first."""
        if not self.timestamps:
            return np.zeros(0)
        snaps = self.pool.gather(list(self.timestamps.values()))
        return self.ams.l2(self.ams.accumulators[None, :] - snaps)

    def suffix_l2_at(self, timestamp: int) -> float:
        snap = self.pool.data[self.timestamps[timestamp]]
        return float(self.ams.l2(self.ams.accumulators - snap))

    def query(self, window: int, now: Optional[int] = None) -> float:
        """F with F <= ||f||_2 <= 2F for the last ``window`` positions.

        The window norm lies between the suffixes of the two retained
        timestamps around the window start; F is their geometric mean over
        sqrt(2). A timestamp exactly at the start pins the norm by itself.
        """
        now = self.position if now is None else now
        if window < 1 or window > now:
            raise ParameterError(f"window must lie in [1, {now}], got {window}")
        start = now - window + 1
        idx = self.timestamps.bisect_left(start)
        if idx >= len(self.timestamps):
            return 0.0
        inner = self.timestamps.keys()[idx]
        inside = self.suffix_l2_at(inner)
        if inner == start or idx == 0:
            return inside / math.sqrt(2)
        outside = self.suffix_l2_at(self.timestamps.keys()[idx - 1])
        return math.sqrt(max(inside, 0.0) * max(outside, inside) / 2)

    def cardinality_bound(self) -> int:
        """ceil(log_C(U^2)) + 2 for U updates so far."""
        if self.updates <= 1:
            return 2 + self.updates
        return math.ceil(math.log(self.updates**2, COMPACTION_RATIO)) + 2

    def check_invariants(self) -> None:
        keys = list(self.timestamps.keys())
        assert all(a < b for a, b in zip(keys, keys[1:])), "timestamps out of order"
        x = self.suffix_l2()
        for a in range(len(x) - 2):
            assert not np.any(x[a] <= COMPACTION_RATIO * x[a + 2 :]), f"compaction invariant broken at {keys[a]}"
        assert len(keys) <= self.cardinality_bound(), "too many timestamps"

    def __len__(self) -> int:
        return len(self.timestamps)
