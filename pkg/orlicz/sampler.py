# orlicz/sampler.py
import logging
import math
from typing import Iterable, List, Optional

import attrs
import numpy as np

from errors import InputError
from orlicz.sensitivity import online_sensitivity, sensitivity_lower_bound
from sketches.hashing import seeded_rng
from utils.normalize import check_open_unit, log2n

logger = logging.getLogger(__name__)


@attrs.frozen
class CoresetRow:
    row: np.ndarray = attrs.field(eq=False)
    index: int
    tau: float
    p: float
    response: Optional[float] = None

    @property
    def weight(self) -> float:
        return 1.0 / self.p

    def as_record(self) -> list:
        record = [self.index, self.p, self.weight, *self.row.tolist()]
        if self.response is not None:
            record.append(self.response)
        return record


class OnlineSensitivitySampler:
    """One-pass online sensitivity sampling.

    Row i is kept with probability p_i = min(1, alpha * tau_i) where
    alpha = C d / eps^2 * log2(n). Kept rows carry weight 1/p_i; the
    sensitivity LP runs against the reweighted rows a_i / p_i. When responses
    are present they join the row as an extra column for the LP only.
    """

    def __init__(
        self,
        d: int,
        eps: float,
        delta: float = 1.0,
        n: int = 1024,
        oversample: float = 1.0,
        seed: int = 0,
        start: int = 1,
    ):
        self.d = d
        self.eps = check_open_unit("eps", eps)
        if delta < 1:
            raise InputError(f"delta must be at least 1, got {delta}")
        self.delta = delta
        self.n = n
        self.start = start
        self.alpha = oversample * d / self.eps**2 * log2n(n)
        self.rng = seeded_rng(seed, start)
        self.rows: List[CoresetRow] = []
        self._lp_rows: List[np.ndarray] = []
        self.seen = 0

    def push(self, row, index: Optional[int] = None, response: Optional[float] = None) -> Optional[CoresetRow]:
        row = np.asarray(row, dtype=np.float64).ravel()
        if row.size != self.d:
            raise InputError(f"row {index} has dimension {row.size}, expected {self.d}")
        index = self.start + self.seen if index is None else index
        self.seen += 1
        full = row if response is None else np.append(row, response)
        M = np.asarray(self._lp_rows).reshape(-1, full.size)
        # a lower bound that already forces p = 1 settles the row without the LP
        floor = min(1.0, 2 * self.delta * sensitivity_lower_bound(full, M, index))
        tau = floor if self.alpha * floor >= 1 else online_sensitivity(full, M, self.delta, index)
        p = min(1.0, self.alpha * tau)
        if p <= 0 or self.rng.random() >= p:
            return None
        kept = CoresetRow(row, index, tau, p, response)
        self.rows.append(kept)
        self._lp_rows.append(full / p)
        return kept

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self):
        """Sampled rows, weights and responses (None when absent)."""
        if not self.rows:
            return np.zeros((0, self.d)), np.zeros(0), None
        A = np.vstack([r.row for r in self.rows])
        w = np.array([r.weight for r in self.rows])
        b = np.array([r.response for r in self.rows]) if self.rows[0].response is not None else None
        return A, w, b


def stream_sample(
    rows: Iterable,
    eps: float,
    delta: float = 1.0,
    oversample: float = 1.0,
    n: Optional[int] = None,
    seed: int = 0,
    responses: Optional[Iterable[float]] = None,
) -> List[CoresetRow]:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    n = rows.shape[0] if n is None else n
    responses = [None] * rows.shape[0] if responses is None else list(responses)
    sampler = OnlineSensitivitySampler(rows.shape[1], eps, delta, n, oversample, seed)
    for i, (row, response) in enumerate(zip(rows, responses), start=1):
        sampler.push(row, i, response)
    logger.info("sampled %d of %d rows (alpha=%.3g)", len(sampler), rows.shape[0], sampler.alpha)
    return sampler.rows


def sample_size_bound(d: int, eps: float, delta: float, n: int, kappa: float, oversample: float = 1.0) -> float:
    """d^2 delta / eps^2 * log^2 n * log kappa, times the oversampling constant."""
    L = log2n(n)
    return oversample * d**2 * delta / eps**2 * L**2 * max(1.0, math.log2(max(kappa, 2.0)))
