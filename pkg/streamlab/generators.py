# streamlab/generators.py
"""Synthetic item streams and row streams."""
import logging
from typing import Optional, Tuple

import attrs
import numpy as np

from errors import ParameterError
from sketches.hashing import seeded_rng
from utils.normalize import is_power_of_two

logger = logging.getLogger(__name__)

VARIANTS = ("appendix-c", "zipf", "uniform")


def _check_spec(spec: "SyntheticSpec") -> None:
    if spec.m < 1 or spec.n < 1:
        raise ParameterError(f"m and n must be positive, got m={spec.m} n={spec.n}")
    if spec.variant not in VARIANTS:
        raise ParameterError(f"unknown variant {spec.variant!r}; known: {', '.join(VARIANTS)}")
    if spec.variant == "appendix-c":
        if not is_power_of_two(spec.m) or spec.m < 4:
            raise ParameterError(f"appendix-c needs m a power of two >= 4, got {spec.m}")
        if not is_power_of_two(spec.n):
            raise ParameterError(f"appendix-c needs n a power of two, got {spec.n}")
        if spec.n <= spec.m // 2 + 1:
            raise ParameterError(f"appendix-c needs n > m/2 + 1, got n={spec.n} m={spec.m}")


@attrs.frozen
class SyntheticSpec:
    m: int
    n: int
    seed: int = 0
    variant: str = "appendix-c"
    zipf_s: float = 1.1

    def __attrs_post_init__(self):
        _check_spec(self)


def gen_appendix_c(spec: SyntheticSpec) -> np.ndarray:
    """s1 . s1 . s2 followed by floor(m/1000) copies of item 1.

    s1 = 2..m/4+1 in order; s2 is uniform over m/2+2..n with length
    m - 2|s1| - tail so the stream has exactly m updates.
    """
    m, n = spec.m, spec.n
    s1 = np.arange(2, m // 4 + 2, dtype=np.int64)
    tail = m // 1000
    s2_len = m - 2 * len(s1) - tail
    rng = seeded_rng(spec.seed, 0)
    s2 = rng.integers(m // 2 + 2, n + 1, size=s2_len, dtype=np.int64)
    return np.concatenate([s1, s1, s2, np.ones(tail, dtype=np.int64)])


def gen_zipf(spec: SyntheticSpec) -> np.ndarray:
    ranks = np.arange(1, spec.n + 1, dtype=np.float64)
    probs = ranks ** -spec.zipf_s
    probs /= probs.sum()
    rng = seeded_rng(spec.seed, 1)
    return rng.choice(np.arange(1, spec.n + 1, dtype=np.int64), size=spec.m, p=probs)


def gen_uniform(spec: SyntheticSpec) -> np.ndarray:
    return seeded_rng(spec.seed, 2).integers(1, spec.n + 1, size=spec.m, dtype=np.int64)


def generate(spec: SyntheticSpec) -> np.ndarray:
    stream = {"appendix-c": gen_appendix_c, "zipf": gen_zipf, "uniform": gen_uniform}[spec.variant](spec)
    logger.info("generated %s stream m=%d n=%d seed=%d", spec.variant, spec.m, spec.n, spec.seed)
    return stream


# --- row streams ---

def gaussian_rows(
    rows: int, d: int, seed: int = 0, response: bool = False, noise: float = 0.1
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Gaussian design; responses follow a planted model with heavy-tailed noise."""
    rng = seeded_rng(seed, 3)
    A = rng.standard_normal((rows, d))
    if not response:
        return A, None
    x_true = rng.standard_normal(d)
    return A, A @ x_true + noise * rng.standard_t(3, size=rows)


def rotating_basis(rows: int, d: int, seed: int = 0) -> np.ndarray:
    """Row i is a random positive multiple of e_{i mod d}."""
    rng = seeded_rng(seed, 4)
    A = np.zeros((rows, d))
    A[np.arange(rows), np.arange(rows) % d] = rng.uniform(1.0, 2.0, size=rows)
    return A
