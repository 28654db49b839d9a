# heavy/sliding.py
"""Sliding-window heavy hitters over the last W stream positions.

A single CountSketch runs over the whole stream; each retained timestamp owns
a snapshot of its table taken just before that position's update, so the
suffix sketch of timestamp ``a`` is ``running - snapshot[a]``. Timestamps are
shared with the suffix L2 estimator and die with it.

Per-item counters are keyed by start position. A counter started at ``s``
belongs to the live timestamps in ``(s_prev, s]``. It survives while one of
them reports the item as heavy; a counter no live timestamp owns is pruned.
A sketch whose width is capped below its threshold cannot tell heavy from
light, so it is not kept at all and ownership alone decides.
"""
import logging
import math
import os
from typing import Dict, List, Optional

import attrs
import numpy as np
from sortedcontainers import SortedDict

from errors import ParameterError
from sketches.ams import AMS_GROUPS, AMS_REPS
from sketches.countsketch import CountSketch
from sketches.counter import ApproxCounter
from sketches.suffix import DEBUG, SnapshotPool, SuffixL2Estimator
from utils.normalize import check_item, check_open_unit, check_positive_int
from utils.text import format_key_values

logger = logging.getLogger(__name__)

SKETCH_FRACTION = 1 / 32
REPORT_FRACTION = 1 / 2
SILENCE_FRACTION = 1 / 8

CS_ROWS = int(os.getenv("SLIDENORM_CS_ROWS", "7"))
CS_WIDTH_CAP = int(os.getenv("SLIDENORM_CS_WIDTH", "256"))


@attrs.frozen
class HHConfig:
    window: int = attrs.field(validator=lambda _, a, v: check_positive_int(a.name, v))
    eta: float = attrs.field(validator=lambda _, a, v: check_open_unit(a.name, v))
    nu: float = attrs.field(validator=lambda _, a, v: check_open_unit(a.name, v, 0.25))
    universe: int = attrs.field(validator=lambda _, a, v: check_positive_int(a.name, v))
    seed: int = 0
    cs_rows: int = CS_ROWS
    cs_width_cap: int = CS_WIDTH_CAP
    ams_reps: int = AMS_REPS
    ams_groups: int = AMS_GROUPS

    @property
    def sketch_threshold(self) -> float:
        return self.nu * self.eta * SKETCH_FRACTION

    @property
    def cs_width_needed(self) -> int:
        return math.ceil(4 / self.sketch_threshold**2)

    @property
    def cs_width(self) -> int:
        return min(self.cs_width_needed, self.cs_width_cap)

    @property
    def candidate_cap(self) -> int:
        return math.ceil(2 / self.sketch_threshold**2)

    @property
    def nonconforming(self) -> bool:
        return self.cs_width < self.cs_width_needed

    @property
    def sketch_active(self) -> bool:
        return not self.nonconforming


@attrs.frozen
class HeavyHitterReport:
    item: int
    f_hat: int
    F: float

    @property
    def heaviness(self) -> float:
        return self.f_hat / self.F if self.F > 0 else math.inf


class SlidingHeavyHitters:
    """Heavy hitters of the window frequency vector with underestimated counts."""

    def __init__(self, config: HHConfig, spawn_key=()):
        self.config = config
        spawn_key = tuple(spawn_key)
        self.estimator = SuffixL2Estimator(config.seed, config.ams_reps, config.ams_groups, (*spawn_key, 2))
        self.sketch: Optional[CountSketch] = None
        self.snapshots: Optional[SnapshotPool] = None
        if config.sketch_active:
            self.sketch = CountSketch(config.cs_rows, config.cs_width, config.universe, config.seed, spawn_key=spawn_key)
            self.snapshots = SnapshotPool((config.cs_rows, config.cs_width))
        else:
            logger.debug("CountSketch width %d below %d; counters decide alone", config.cs_width, config.cs_width_needed)
        self.sketch_slots: Dict[int, int] = {}  # timestamp -> CountSketch snapshot slot
        self.counters: Dict[int, SortedDict] = {}  # item -> start -> ApproxCounter
        self.position = 0
        self._since_sweep = 0

    @property
    def timestamps(self):
        return self.estimator.timestamps

    # --- updates ---

    def update(self, item: int, position: Optional[int] = None) -> None:
        check_item(item, self.config.universe)
        position = self.position + 1 if position is None else int(position)
        if position <= self.position:
            raise ParameterError(f"positions must increase: {position} after {self.position}")
        self.position = position

        if self.sketch is not None:
            self.sketch_slots[position] = self.snapshots.put(self.sketch.table)
            self.sketch.update(item)
        removed = self.estimator.update(item, position)
        removed += self.estimator.expire(position - self.config.window + 1)
        if self.sketch is not None:
            for timestamp in removed:
                self.snapshots.release(self.sketch_slots.pop(timestamp))

        starts = self.counters.setdefault(item, SortedDict())
        for counter in starts.values():
            counter.add(position)
        # the newest timestamp's suffix is exactly {item}, so item is in its heavy set
        fresh = ApproxCounter(position, self.config.nu)
        fresh.add(position)
        starts[position] = fresh
        self._prune(item, self.heavy_mask(item))

        self._since_sweep += 1
        if self._since_sweep >= self.config.window:
            self._sweep(position - self.config.window + 1)
        if DEBUG:
            self.check_invariants()

    def _prune(self, item: int, heavy: Optional[np.ndarray] = None) -> None:
        """Drop counters with no live owner, or whose owners all call item light."""
        starts = self.counters.get(item)
        if not starts:
            return
        timestamps = self.timestamps
        previous = 0
        for start in list(starts.keys()):
            lo, hi = timestamps.bisect_right(previous), timestamps.bisect_right(start)
            if hi > lo and (heavy is None or heavy[lo:hi].any()):
                previous = start
            else:
                del starts[start]
        if not starts:
            del self.counters[item]

    def _sweep(self, window_start: int) -> None:
        """Prune every item and forget items with no occurrence in the window."""
        self._since_sweep = 0
        suffix_l2 = self.estimator.suffix_l2() if self.sketch is not None else None
        for item in list(self.counters):
            starts = self.counters[item]
            if starts.peekitem(-1)[1].last < window_start:
                del self.counters[item]
            else:
                self._prune(item, self.heavy_mask(item, suffix_l2))

    # --- queries ---

    def _window(self, now: Optional[int], window: Optional[int]):
        now = self.position if now is None else int(now)
        window = self.config.window if window is None else int(window)
        if window < 1 or window > self.config.window:
            raise ParameterError(f"window must lie in [1, {self.config.window}], got {window}")
        window = min(window, now)
        return now, window, now - window + 1

    def window_l2(self, now: Optional[int] = None, window: Optional[int] = None) -> float:
        now, window, _ = self._window(now, window)
        if now < 1:
            return 0.0
        return self.estimator.query(window, now)

    def frequency(self, item: int, window_start: int) -> int:
        """Largest counter underestimate of occurrences at or after window_start."""
        starts = self.counters.get(item)
        if not starts:
            return 0
        return max(counter.windowed(window_start) for counter in starts.values())

    def heavy_mask(self, item: int, suffix_l2: Optional[np.ndarray] = None) -> Optional[np.ndarray]:
        """Per live timestamp, whether its suffix CountSketch reports item; None without a sketch."""
        if self.sketch is None:
            return None
        slots = [self.sketch_slots[t] for t in self.timestamps.keys()]
        estimates = self.sketch.estimate_against(item, self.snapshots.data, slots)
        l2 = self.estimator.suffix_l2() if suffix_l2 is None else suffix_l2
        return estimates >= self.config.sketch_threshold / 2 * l2

    def in_heavy_set(self, item: int) -> bool:
        heavy = self.heavy_mask(item)
        if heavy is None:
            raise ParameterError("a capped CountSketch is not kept; no heavy set to consult")
        return bool(heavy.any())

    def report(self, now: Optional[int] = None, window: Optional[int] = None) -> List[HeavyHitterReport]:
        if self.position == 0:
            return []
        now, window, start = self._window(now, window)
        # the sweep drops counters no live timestamp owns (or, with a sketch, calls heavy)
        self._sweep(now - self.config.window + 1)
        F = self.estimator.query(window, now)
        if F <= 0:
            return []
        cut = self.config.eta * REPORT_FRACTION * F
        reports = []
        for item in self.counters:
            f_hat = self.frequency(item, start)
            if f_hat > 0 and f_hat >= cut:
                reports.append(HeavyHitterReport(item, f_hat, F))
        reports.sort(key=lambda r: (-r.f_hat, r.item))
        return reports

    # --- diagnostics ---

    def space_report(self) -> Dict[str, int]:
        timestamps = list(self.timestamps.keys())
        per_timestamp = np.zeros(len(timestamps) + 1, dtype=np.int64)
        counters = snapshot_entries = 0
        for starts in self.counters.values():
            previous = 0
            for start, counter in starts.items():
                counters += 1
                snapshot_entries += len(counter)
                lo = np.searchsorted(timestamps, previous, side="right")
                hi = np.searchsorted(timestamps, start, side="right")
                per_timestamp[lo] += 1
                per_timestamp[hi] -= 1
                previous = start
        running = np.cumsum(per_timestamp[:-1])
        sketches = len(self.sketch_slots) + 1 if self.sketch is not None and timestamps else 0
        return {
            "timestamps": len(timestamps),
            "sketch_cells": sketches * self.config.cs_rows * self.config.cs_width,
            "counters": counters,
            "snapshot_entries": snapshot_entries,
            "max_candidates_per_timestamp": int(running.max()) if len(running) else 0,
        }

    def check_invariants(self) -> None:
        self.estimator.check_invariants()
        keys = list(self.timestamps.keys())
        stale = [k for k in keys if k < self.position - self.config.window + 1]
        assert len(stale) <= 1, f"two timestamps before the window start: {stale}"
        if self.sketch is not None:
            assert set(keys) == set(self.sketch_slots), "sketch snapshots out of sync with timestamps"


def hh_space_report(state: SlidingHeavyHitters) -> str:
    return format_key_values(state.space_report())


def hh_space_bounds_ok(state: SlidingHeavyHitters) -> bool:
    report = state.space_report()
    return (
        report["timestamps"] <= state.estimator.cardinality_bound()
        and report["max_candidates_per_timestamp"] <= state.config.candidate_cap
    )
