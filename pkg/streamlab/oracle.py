# streamlab/oracle.py
from collections import Counter, deque
from typing import Iterable, Union

import numpy as np

from norms.registry import NormDescriptor
from orlicz.gfunctions import GFunction
from orlicz.norm import orlicz_norm
from utils.normalize import check_positive_int


class ExactWindowOracle:
    """Ring buffer of the last W updates and their exact frequencies."""

    def __init__(self, window: int):
        self.window = check_positive_int("window", window)
        self.buffer = deque(maxlen=self.window)
        self.counts = Counter()

    def push(self, item: int) -> None:
        if len(self.buffer) == self.window:
            old = self.buffer[0]
            self.counts[old] -= 1
            if not self.counts[old]:
                del self.counts[old]
        self.buffer.append(item)
        self.counts[item] += 1

    def extend(self, items: Iterable[int]) -> None:
        for item in items:
            self.push(int(item))

    def frequency(self, item: int) -> int:
        return self.counts.get(item, 0)

    def frequencies(self) -> np.ndarray:
        return np.array(sorted(self.counts.values(), reverse=True), dtype=np.float64)

    def recount(self) -> Counter:
        return Counter(self.buffer)

    def l2(self) -> float:
        return float(np.sqrt(np.sum(self.frequencies() ** 2)))

    def heavy(self, eta: float):
        """Items with f_i >= eta * ||f||_2."""
        cut = eta * self.l2()
        return {item for item, count in self.counts.items() if count >= cut}

    def __len__(self) -> int:
        return len(self.buffer)


def window_oracle(stream, window: int) -> ExactWindowOracle:
    oracle = ExactWindowOracle(window)
    oracle.extend(stream)
    return oracle


def oracle_norm(oracle: ExactWindowOracle, norm: Union[NormDescriptor, GFunction]) -> float:
    freqs = oracle.frequencies()
    if len(freqs) == 0:
        return 0.0
    if isinstance(norm, GFunction):
        return orlicz_norm(freqs, norm)
    return norm.of(freqs)
