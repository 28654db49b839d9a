# sketches/ams.py
import os

import numpy as np

from errors import ParameterError
from sketches.hashing import PolyHashFamily

AMS_REPS = int(os.getenv("SLIDENORM_AMS_REPS", "192"))
AMS_GROUPS = 6


def median_of_means(squares: np.ndarray, groups: int = AMS_GROUPS) -> np.ndarray:
    """Median over ``groups`` means of the last axis."""
    reps = squares.shape[-1]
    usable = reps - reps % groups
    means = squares[..., :usable].reshape(squares.shape[:-1] + (groups, usable // groups)).mean(axis=-1)
    return np.median(means, axis=-1)


class AmsSketch:
    """F2 sketch: ``reps`` signed accumulators Z_j = sum_i sigma_j(i) f_i.

    The F2 estimate is a median of group means of Z_j^2, so it is nonnegative
    and exact on 1-sparse vectors.
    """

    def __init__(self, reps: int = AMS_REPS, seed: int = 0, groups: int = AMS_GROUPS, spawn_key=()):
        if reps < groups or groups < 1:
            raise ParameterError(f"need reps >= groups >= 1, got reps={reps} groups={groups}")
        self.reps = reps
        self.groups = groups
        self.sign_hash = PolyHashFamily(4, reps, seed, tuple(spawn_key))
        self.accumulators = np.zeros(reps, dtype=np.int64)

    def update(self, item: int, delta: int = 1) -> None:
        self.accumulators += self.sign_hash.signs(item) * delta

    def f2(self, accumulators: np.ndarray = None) -> np.ndarray:
        z = self.accumulators if accumulators is None else accumulators
        return median_of_means(z.astype(np.float64) ** 2, self.groups)

    def l2(self, accumulators: np.ndarray = None) -> np.ndarray:
        return np.sqrt(self.f2(accumulators))
