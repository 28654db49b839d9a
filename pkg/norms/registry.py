# norms/registry.py
"""Symmetric norms evaluated on level vectors, plus their mmc presets."""
import math
from typing import Callable, Dict, Optional, Sequence, Tuple

import attrs
import numpy as np

from errors import ParameterError
from utils.normalize import log2n


@attrs.frozen
class LevelVector:
    """Multiset of magnitudes: ``count`` entries equal to alpha**(level + offset)."""

    base: float
    buckets: Tuple[Tuple[int, int], ...] = attrs.field(converter=lambda b: tuple((int(j), int(c)) for j, c in b))
    universe: int
    offset: float = 0.0

    def __attrs_post_init__(self):
        if self.base <= 1:
            raise ParameterError(f"level base must exceed 1, got {self.base}")
        levels = [j for j, _ in self.buckets]
        if any(c <= 0 for _, c in self.buckets):
            raise ParameterError("level counts must be positive")
        if any(a >= b for a, b in zip(levels, levels[1:])):
            raise ParameterError("levels must be strictly increasing")
        if sum(c for _, c in self.buckets) > self.universe:
            raise ParameterError("level counts exceed the universe")

    def value(self, level: int) -> float:
        return self.base ** (level + self.offset)

    @property
    def values(self) -> np.ndarray:
        return np.array([self.value(j) for j, _ in self.buckets])

    @property
    def counts(self) -> np.ndarray:
        return np.array([c for _, c in self.buckets], dtype=np.int64)

    def expand(self) -> np.ndarray:
        """Entries in non-increasing order."""
        return np.repeat(self.values, self.counts)[::-1].copy()

    def bucket(self, level: int) -> "LevelVector":
        return LevelVector(self.base, [(j, c) for j, c in self.buckets if j == level], self.universe, self.offset)

    def without(self, levels) -> "LevelVector":
        drop = set(levels)
        return LevelVector(self.base, [(j, c) for j, c in self.buckets if j not in drop], self.universe, self.offset)

    def __len__(self) -> int:
        return len(self.buckets)


def level_of(value: float, base: float, offset: float = 0.0) -> int:
    """Level j with base**(j-1+offset) <= value < base**(j+offset)."""
    return math.floor(math.log(value, base) - offset) + 1


def level_vector_exact(x, base: float, offset: float = 0.0, universe: Optional[int] = None) -> LevelVector:
    """Level vector V(x) of an exact vector: each nonzero entry rounded up to its level value."""
    mags = np.abs(np.asarray(x, dtype=np.float64))
    mags = mags[mags > 0]
    levels, counts = np.unique([level_of(v, base, offset) for v in mags], return_counts=True) if len(mags) else ([], [])
    return LevelVector(base, list(zip(levels, counts)), universe or max(len(np.asarray(x)), 1), offset)


# --- vector evaluators (entries sorted non-increasing, nonnegative) ---

def lp_vector(p: float) -> Callable[[np.ndarray], float]:
    def evaluate(v: np.ndarray) -> float:
        if len(v) == 0:
            return 0.0
        top = v.max()
        if top == 0:
            return 0.0
        return float(top * np.sum((v / top) ** p) ** (1 / p))

    return evaluate


def topk_vector(k: int) -> Callable[[np.ndarray], float]:
    def evaluate(v: np.ndarray) -> float:
        return float(np.sort(v)[::-1][:k].sum())

    return evaluate


def ksupport_vector(k: int) -> Callable[[np.ndarray], float]:
    """k-support norm: split index r with z_{k-r-1} > tail/(r+1) >= z_{k-r}."""

    def evaluate(v: np.ndarray) -> float:
        z = np.sort(v)[::-1]
        n = len(z)
        if n == 0:
            return 0.0
        if k >= n:
            return float(np.sqrt(np.sum(z**2)))
        suffix = np.concatenate([np.cumsum(z[::-1])[::-1], [0.0]])
        for r in range(k):
            tail = suffix[k - r - 1] / (r + 1)
            head = math.inf if k - r - 2 < 0 else z[k - r - 2]
            if head > tail >= z[k - r - 1]:
                return float(math.sqrt(np.sum(z[: k - r - 1] ** 2) + (r + 1) * tail**2))
        return float(suffix[0] / math.sqrt(k))

    return evaluate


# --- level-vector closed forms ---

def lp_levels(p: float) -> Callable[[LevelVector], float]:
    def evaluate(levels: LevelVector) -> float:
        if not len(levels):
            return 0.0
        values, counts = levels.values, levels.counts
        top = values.max()
        return float(top * np.sum(counts * (values / top) ** p) ** (1 / p))

    return evaluate


def topk_levels(k: int) -> Callable[[LevelVector], float]:
    def evaluate(levels: LevelVector) -> float:
        total, remaining = 0.0, k
        for (j, c) in reversed(levels.buckets):
            take = min(c, remaining)
            total += take * levels.value(j)
            remaining -= take
            if remaining == 0:
                break
        return total

    return evaluate


@attrs.frozen
class NormDescriptor:
    name: str
    evaluate_vector: Callable[[np.ndarray], float]
    mmc: Callable[[int], float]
    params: Dict[str, float] = attrs.field(factory=dict)
    evaluate_levels: Optional[Callable[[LevelVector], float]] = None

    def evaluate(self, levels: LevelVector) -> float:
        if self.evaluate_levels is not None:
            return self.evaluate_levels(levels)
        return self.evaluate_vector(levels.expand())

    def of(self, x) -> float:
        """Norm of an exact vector."""
        return self.evaluate_vector(np.sort(np.abs(np.asarray(x, dtype=np.float64)))[::-1])

    def mmc_bound(self, n: int) -> float:
        return max(1.0, float(self.mmc(n)))


def _box_vector(v: np.ndarray) -> float:
    raise ParameterError("box norm evaluation is not supported; only its mmc preset is")


# --- constructors ---

def lp_norm(p: float) -> NormDescriptor:
    if p < 1:
        raise ParameterError(f"L_p needs p >= 1, got {p}")
    if p <= 2:
        mmc = log2n
    else:
        mmc = lambda n: n ** (0.5 - 1 / p)
    return NormDescriptor(f"l{p:g}", lp_vector(p), mmc, {"p": p}, lp_levels(p))


def topk_norm(k: int) -> NormDescriptor:
    if k < 1:
        raise ParameterError(f"top-k needs k >= 1, got {k}")
    return NormDescriptor(f"top{k}", topk_vector(k), lambda n: math.sqrt(n / min(k, n)), {"k": k}, topk_levels(k))


def ksupport_norm(k: int) -> NormDescriptor:
    if k < 1:
        raise ParameterError(f"k-support needs k >= 1, got {k}")
    return NormDescriptor(f"ksupport{k}", ksupport_vector(k), log2n, {"k": k})


def box_norm(lower: float, upper: float) -> NormDescriptor:
    return NormDescriptor("box", _box_vector, log2n, {"lower": lower, "upper": upper})


_FACTORIES: Dict[str, Callable[..., NormDescriptor]] = {}


def register_norm(name: str, factory: Callable[..., NormDescriptor]) -> None:
    _FACTORIES[name] = factory


register_norm("l1", lambda **_: lp_norm(1))
register_norm("l2", lambda **_: lp_norm(2))
register_norm("lp", lambda p=2.0, **_: lp_norm(float(p)))
register_norm("topk", lambda k=1, **_: topk_norm(int(k)))
register_norm("ksupport", lambda k=1, **_: ksupport_norm(int(k)))
register_norm("box", lambda lower=0.0, upper=1.0, **_: box_norm(lower, upper))


def get_norm(name: str, **params) -> NormDescriptor:
    try:
        factory = _FACTORIES[name.lower()]
    except KeyError:
        raise ParameterError(f"unknown norm {name!r}; known: {', '.join(sorted(_FACTORIES))}") from None
    return factory(**params)


def parse_norms(names: Sequence[str], p: Optional[float] = None, k: Optional[int] = None) -> Tuple[NormDescriptor, ...]:
    params = {}
    if p is not None:
        params["p"] = p
    if k is not None:
        params["k"] = k
    return tuple(get_norm(name.strip(), **params) for name in names if name.strip())
