# sketches/counter.py
import math
from typing import List, Tuple

from sortedcontainers import SortedList

from errors import ParameterError
from utils.normalize import check_open_unit


class ApproxCounter:
    """Deterministic counter of one item's occurrences since ``start``.

    Every count below ceil(4/eta) is snapshotted; after that a snapshot is
    taken when the count reaches ceil(previous * (1 + eta/4)). Queries between
    snapshots return the last snapshot count, which is never more than a
    (1 + eta/4) factor below the truth.
    """

    def __init__(self, start: int, eta: float):
        self.start = int(start)
        self.eta = check_open_unit("eta", eta)
        self.count = 0
        self.last = None  # position of the latest occurrence
        self.exact_below = math.ceil(4 / self.eta)
        self.snapshots: SortedList = SortedList()  # (position, count)
        self._next_snapshot = 1

    def add(self, position: int) -> None:
        if position < self.start:
            raise ParameterError(f"occurrence at {position} precedes counter start {self.start}")
        if self.last is not None and position <= self.last:
            raise ParameterError(f"occurrences must arrive in order: {position} after {self.last}")
        self.count += 1
        self.last = position
        if self.count >= self._next_snapshot:
            self.snapshots.add((position, self.count))
            if self.count < self.exact_below:
                self._next_snapshot = self.count + 1
            else:
                self._next_snapshot = max(self.count + 1, math.ceil(self.count * (1 + self.eta / 4)))

    def _check(self, u: int) -> None:
        if u < self.start:
            raise ParameterError(f"query position {u} precedes counter start {self.start}")

    def query(self, u: int) -> int:
        """Lower estimate of occurrences in [start, u]."""
        self._check(u)
        if self.last is None:
            return 0
        if u >= self.last:
            return self.count
        idx = self.snapshots.bisect_right((u, math.inf))
        return self.snapshots[idx - 1][1] if idx else 0

    def upper(self, u: int) -> int:
        """Upper estimate of occurrences in [start, u]."""
        if u < self.start or self.last is None:
            return 0
        if u >= self.last:
            return self.count
        idx = self.snapshots.bisect_right((u, math.inf))
        if idx == len(self.snapshots):
            return self.count - 1
        return self.snapshots[idx][1] - 1

    def windowed(self, window_start: int) -> int:
        """Underestimate of occurrences at or after ``window_start``."""
        if window_start <= self.start:
            return self.count
        return max(0, self.count - self.upper(window_start - 1))

    def snapshot_list(self) -> List[Tuple[int, int]]:
        return list(self.snapshots)

    def __len__(self) -> int:
        return len(self.snapshots)

