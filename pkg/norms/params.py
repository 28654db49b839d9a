# norms/params.py
"""Parameter selection for the symmetric-norm grid.

Provable mode instantiates the asymptotic formulas with unit constants.
Practical mode clips them to desk-scale values and marks the run nonconforming.
"""
import logging
import math
import os
from typing import Literal, Mapping, Optional

import attrs

from errors import ParameterError
from utils.normalize import check_open_unit, log2n

logger = logging.getLogger(__name__)

MAX_REPS = int(os.getenv("SLIDENORM_MAX_REPS", "64"))
NU_FLOOR = 1e-3
ETA_FLOOR = 1e-3
EPS_PRIME_FLOOR = 0.05
ALPHA_SCALE = 0.25

Mode = Literal["provable", "practical"]


@attrs.frozen
class GridParams:
    eps: float
    mmc_cap: float
    universe: int
    mode: str
    nu: float
    eta: float
    reps: int
    alpha: float
    beta: float
    eps_prime: float
    nonconforming: bool = False

    def as_dict(self) -> dict:
        return attrs.asdict(self)


def theory_params(eps: float, mmc_cap: float, n: int) -> dict:
    L = log2n(n)
    return {
        "nu": eps**2 / L,
        "eta": eps**2.5 / (mmc_cap * L**2.5),
        # R can exceed any float for tiny eps; keep it an int
        "reps": math.ceil(L**10 / eps**5),
        "alpha": 1 + eps,
        "beta": eps**5 / (mmc_cap**2 * L**5),
        "eps_prime": eps**2 / L,
    }


def param_select(
    eps: float,
    mmc_cap: float,
    n: int,
    mode: Mode = "practical",
    overrides: Optional[Mapping[str, float]] = None,
) -> GridParams:
    check_open_unit("eps", eps, 0.5)
    if mmc_cap < 1:
        raise ParameterError(f"mmc cap must be at least 1, got {mmc_cap}")
    if mode not in ("provable", "practical"):
        raise ParameterError(f"mode must be provable or practical, got {mode!r}")

    values = theory_params(eps, mmc_cap, n)
    logger.info("theory parameters eps=%s mmc=%s n=%s: %s", eps, mmc_cap, n, values)
    nonconforming = False
    if mode == "practical":
        practical = {
            "nu": max(values["nu"], NU_FLOOR),
            "eta": max(values["eta"], ETA_FLOOR),
            "reps": min(values["reps"], MAX_REPS),
            "alpha": 1 + ALPHA_SCALE * eps,
            "beta": values["beta"],
            "eps_prime": max(values["eps_prime"], EPS_PRIME_FLOOR),
        }
        nonconforming = practical != values
        values = practical
    if overrides:
        unknown = set(overrides) - set(values)
        if unknown:
            raise ParameterError(f"unknown parameter overrides: {sorted(unknown)}")
        values.update(overrides)
        nonconforming = True
    if nonconforming:
        logger.warning("grid parameters clipped for desk scale (nonconforming): %s", values)
    return GridParams(eps=eps, mmc_cap=mmc_cap, universe=n, mode=mode, nonconforming=nonconforming, **values)
