# sketches/countsketch.py
import math
from typing import List, Optional

import numpy as np
from sortedcontainers import SortedList

from errors import ParameterError
from sketches.hashing import PolyHashFamily
from utils.normalize import check_item, check_open_unit, check_positive_int


class CountSketch:
    """Signed-counter table with 2-wise bucket hashes and 4-wise sign hashes.

    Two sketches built with the same ``(rows, width, universe, seed, spawn_key)``
    are mergeable by entrywise addition.
    """

    def __init__(
        self,
        rows: int,
        width: int,
        universe: int,
        seed: int = 0,
        nu: Optional[float] = None,
        spawn_key=(),
    ):
        self.rows = check_positive_int("rows", rows)
        if rows % 2 == 0:
            raise ParameterError(f"rows must be odd so the median is a row estimate, got {rows}")
        self.width = check_positive_int("width", width)
        self.universe = check_positive_int("universe", universe)
        self.seed = seed
        self.spawn_key = tuple(spawn_key)
        self.bucket_hash = PolyHashFamily(2, rows, seed, (*self.spawn_key, 0))
        self.sign_hash = PolyHashFamily(4, rows, seed, (*self.spawn_key, 1))
        self.table = np.zeros((rows, width), dtype=np.int64)
        self._row_index = np.arange(rows)

        # Candidate tracking for heavy_hitters(); only active with a threshold.
        self.nu = check_open_unit("nu", nu) if nu is not None else None
        self.candidate_cap = math.ceil(2 / self.nu**2) if self.nu is not None else 0
        self._candidates = SortedList()
        self._candidate_keys = {}

    # --- updates ---

    def locate(self, item: int):
        """Bucket and sign per row for one item."""
        return self.bucket_hash.buckets(item, self.width), self.sign_hash.signs(item)

    def update(self, item: int, delta: int = 1) -> None:
        check_item(item, self.universe)
        buckets, signs = self.locate(item)
        self.table[self._row_index, buckets] += signs * delta
        if self.nu is not None:
            self._track(item)

    def merge(self, other: "CountSketch") -> "CountSketch":
        if (
            other.rows != self.rows
            or other.width != self.width
            or other.seed != self.seed
            or other.spawn_key != self.spawn_key
        ):
            raise ParameterError("count sketches built with different seeds or shapes cannot merge")
        merged = CountSketch(self.rows, self.width, self.universe, self.seed, self.nu, self.spawn_key)
        merged.table = self.table + other.table
        for item in set(self._candidate_keys) | set(other._candidate_keys):
            merged._track(item)
        return merged

    # --- queries ---

    def estimate(self, item: int) -> int:
        check_item(item, self.universe)
        buckets, signs = self.locate(item)
        return int(np.median(signs * self.table[self._row_index, buckets]))

    def estimate_against(self, item: int, snapshots: np.ndarray, slots=None) -> np.ndarray:
        """Point estimates of ``item`` on ``table - snapshot`` for a stack of
        snapshots of shape ``(k, rows, width)``, or for the ``slots`` of a
        larger stack. Returns shape ``(k,)``."""
        buckets, signs = self.locate(item)
        current = self.table[self._row_index, buckets]
        if slots is None:
            past = snapshots[:, self._row_index, buckets]
        else:
            past = snapshots[np.asarray(slots, dtype=np.intp)[:, None], self._row_index, buckets]
        return np.median(signs * (current - past), axis=1)

    def heavy_hitters(self, l2_estimate: float) -> List[int]:
        """Tracked candidates whose estimate reaches (nu/2) * l2_estimate."""
        if self.nu is None:
            raise ParameterError("heavy_hitters needs a sketch built with a threshold nu")
        if l2_estimate <= 0:
            raise ParameterError(f"l2 estimate must be positive, got {l2_estimate}")
        cut = self.nu / 2 * l2_estimate
        return sorted(item for item in self._candidate_keys if self.estimate(item) >= cut)

    # --- candidate set ---

    def _track(self, item: int) -> None:
        old = self._candidate_keys.pop(item, None)
        if old is not None:
            self._candidates.remove((old, item))
        key = self.estimate(item)
        self._candidates.add((key, item))
        self._candidate_keys[item] = key
        while len(self._candidates) > self.candidate_cap:
            _, dropped = self._candidates.pop(0)
            del self._candidate_keys[dropped]

    @property
    def candidates(self) -> List[int]:
        return [item for _, item in self._candidates]
