# orlicz/gfunctions.py
from typing import Callable, Dict

import attrs
import numpy as np
from scipy import special

from errors import ParameterError


@attrs.frozen
class GFunction:
    """Increasing convex G with G(0) = 0 and G(y)/G(x) <= C_G (y/x)^2 for x < y."""

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    growth: float = 1.0

    def __call__(self, t):
        return self.value(np.asarray(t, dtype=np.float64))

    def check(self, grid=None) -> bool:
        """Sampled check of monotonicity, convexity and the growth bound."""
        t = np.linspace(0.0, 10.0, 401) if grid is None else np.asarray(grid, dtype=np.float64)
        g = self(t)
        if g[0] != 0 or np.any(np.diff(g) <= 0):
            return False
        if np.any(np.diff(g, 2) < -1e-12):
            return False
        x, y = np.meshgrid(t[1:], t[1:], indexing="ij")
        upper = x < y
        ratio = self(y[upper]) / self(x[upper])
        return bool(np.all(ratio <= self.growth * (y[upper] / x[upper]) ** 2 * (1 + 1e-9)))


def _huber(delta: float) -> GFunction:
    return GFunction(
        f"huber{delta:g}" if delta != 1 else "huber",
        lambda t: special.huber(delta, t) / delta,
        lambda t: np.minimum(t, delta) / delta,
    )


def _power(p: float) -> GFunction:
    if not 1 <= p <= 2:
        raise ParameterError(f"power G needs p in [1, 2], got {p}")
    return GFunction(f"power{p:g}", lambda t: t**p, lambda t: p * t ** (p - 1))


G_FUNCTIONS: Dict[str, Callable[[], GFunction]] = {
    "square": lambda: GFunction("square", lambda t: t**2, lambda t: 2 * t),
    "identity": lambda: GFunction("identity", lambda t: t, np.ones_like),
    "huber": lambda: _huber(1.0),
}


def get_g(name: str, **params) -> GFunction:
    name = name.lower()
    if name == "power":
        return _power(float(params.get("p", 1.5)))
    if name == "huber" and "delta" in params:
        return _huber(float(params["delta"]))
    try:
        return G_FUNCTIONS[name]()
    except KeyError:
        raise ParameterError(f"unknown G function {name!r}; known: {', '.join(sorted(G_FUNCTIONS))}, power") from None
