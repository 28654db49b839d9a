# norms/grid.py
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import ParameterError
from heavy.sliding import HHConfig, SlidingHeavyHitters
from norms.params import MAX_REPS, GridParams
from sketches.hashing import PolyHashFamily
from utils.normalize import ceil_log2, check_item

logger = logging.getLogger(__name__)


class LayerGrid:
    """R repetitions x (L+1) sampling levels of sliding-window heavy hitters.

    Cell (i, r) keeps coordinate j iff its hash falls below 2**-i, and runs a
    heavy-hitter instance on the induced substream. Level 0 keeps everything,
    so its repetitions would see identical substreams; one instance serves the
    whole row. With ``nested=True`` all levels of a repetition share one hash,
    so the sampled sets shrink monotonically with i.
    """

    def __init__(self, params: GridParams, window: int, seed: int = 0, nested: bool = False, **hh_overrides):
        if params.reps > MAX_REPS:
            raise ParameterError(
                f"R={params.reps} repetitions exceed SLIDENORM_MAX_REPS={MAX_REPS}; use practical mode or override reps"
            )
        self.params = params
        self.window = window
        self.seed = seed
        self.nested = nested
        self.universe = params.universe
        self.levels = ceil_log2(params.universe)
        self.reps = int(params.reps)
        self.position = 0

        shape = (self.levels + 1, self.reps)
        self.rates = 2.0 ** -np.arange(self.levels + 1)
        self.sampler = PolyHashFamily(2, self.reps if nested else shape[0] * shape[1], seed, (7,))
        config = HHConfig(window=window, eta=params.eta, nu=params.nu, universe=params.universe, seed=seed, **hh_overrides)
        self.cells: Dict[Tuple[int, int], SlidingHeavyHitters] = {}
        for i in range(shape[0]):
            for r in range(shape[1]):
                if i == 0 and r > 0:
                    self.cells[i, r] = self.cells[0, 0]
                else:
                    self.cells[i, r] = SlidingHeavyHitters(config, spawn_key=(i, r))
        self.level_cache: Dict[int, object] = {}
        self._reports: Dict[Tuple[int, int], list] = {}
        logger.info(
            "layer grid with %d distinct cells (levels=%d reps=%d)", len(self.distinct_cells()), shape[0], shape[1]
        )

    @property
    def nonconforming(self) -> bool:
        return self.params.nonconforming or any(cell.config.nonconforming for cell in self.cells.values())

    def distinct_cells(self) -> Dict[int, Tuple[SlidingHeavyHitters, List[Tuple[int, int]]]]:
        """Each instance once, with every (i, r) it serves."""
        groups: Dict[int, Tuple[SlidingHeavyHitters, List[Tuple[int, int]]]] = {}
        for key, cell in self.cells.items():
            groups.setdefault(id(cell), (cell, []))[1].append(key)
        return groups

    def admits(self, item: int) -> np.ndarray:
        """Boolean mask of shape (levels+1, reps)."""
        unit = self.sampler.unit(item)
        if self.nested:
            unit = np.broadcast_to(unit, (self.levels + 1, self.reps))
        else:
            unit = unit.reshape(self.levels + 1, self.reps)
        mask = unit < self.rates[:, None]
        mask[0, :] = True
        return mask

    def update(self, item: int) -> None:
        check_item(item, self.universe)
        self.position += 1
        self.level_cache.clear()
        self._reports.clear()
        mask = self.admits(item)
        self.cells[0, 0].update(item, self.position)
        for i, r in zip(*np.nonzero(mask[1:])):
            self.cells[int(i) + 1, int(r)].update(item, self.position)

    def extend(self, items) -> None:
        for item in items:
            self.update(int(item))

    def report(self, i: int, r: int, window: Optional[int] = None):
        window = window or self.window
        cell = self.cells[i, r]
        key = (id(cell), window)
        if key not in self._reports:
            self._reports[key] = cell.report(now=self.position, window=window)
        return self._reports[key]


def grid_update(grid: LayerGrid, item: int) -> LayerGrid:
    grid.update(item)
    return grid
