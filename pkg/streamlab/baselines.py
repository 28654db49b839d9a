# streamlab/baselines.py
"""Uniform-sampling baselines: sample the stream or sample the universe."""
from collections import Counter
from typing import Dict, Sequence

import attrs
import numpy as np

from errors import ParameterError
from norms.registry import NormDescriptor
from sketches.hashing import PolyHashFamily, seeded_rng
from utils.normalize import check_rate


@attrs.frozen
class BaselineEstimate:
    algo: str
    norm: str
    estimate: float
    rescaled: bool = True


def _window(stream, window: int) -> np.ndarray:
    stream = np.asarray(stream, dtype=np.int64)
    return stream[-window:] if window < len(stream) else stream


def baseline_uniform(
    stream,
    rate: float,
    mode: str,
    window: int,
    norms: Sequence[NormDescriptor],
    seed: int = 0,
) -> Dict[str, BaselineEstimate]:
    rate = check_rate(rate)
    items = _window(stream, window)
    if mode == "stream":
        kept = items[seeded_rng(seed, 5).random(len(items)) < rate]
        freqs = np.array(sorted(Counter(kept.tolist()).values(), reverse=True), dtype=np.float64) / rate
        return {
            norm.name: BaselineEstimate("uniform-stream", norm.name, norm.of(freqs) if len(freqs) else 0.0)
            for norm in norms
        }
    if mode == "universe":
        hashed = PolyHashFamily(2, 1, seed, (6,)).unit(items)[0]
        kept = items[hashed < rate]
        freqs = np.array(sorted(Counter(kept.tolist()).values(), reverse=True), dtype=np.float64)
        out = {}
        for norm in norms:
            raw = norm.of(freqs) if len(freqs) else 0.0
            p = norm.params.get("p")
            if p is not None:
                out[norm.name] = BaselineEstimate("uniform-universe", norm.name, raw * rate ** (-1 / p))
            else:
                # no unbiased rescale for this norm; report the raw subsampled value
                out[norm.name] = BaselineEstimate("uniform-universe", norm.name, raw, rescaled=False)
        return out
    raise ParameterError(f"mode must be stream or universe, got {mode!r}")
