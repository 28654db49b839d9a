# commands/run.py
"""Experiment runs: estimator, exact oracle and baselines over several seeds."""
import asyncio
import logging
from typing import List

import numpy as np

from commands.config import RunConfig
from errors import CapacityError, ParameterError
from heavy.sliding import HHConfig, SlidingHeavyHitters
from norms.estimate import symnorm_estimate
from norms.grid import LayerGrid
from norms.params import param_select
from norms.registry import parse_norms
from orlicz.gfunctions import get_g
from orlicz.norm import embedding_ratios, orlicz_objective, random_directions
from orlicz.regression import solve_regression, solve_weighted
from orlicz.sampler import stream_sample
from orlicz.window import window_coreset
from sketches.hashing import seeded_rng
from storage import RESULTS_FILE, read_rows, read_stream, write_coreset, write_results
from streamlab.baselines import baseline_uniform
from streamlab.oracle import oracle_norm, window_oracle

logger = logging.getLogger(__name__)

EMBEDDING_DIRECTIONS = 1000


def rel_error(estimate: float, exact: float) -> float:
    if exact == 0:
        return 0.0 if estimate == 0 else float("inf")
    return abs(estimate - exact) / exact


def _row(config: RunConfig, algo: str, norm: str, m: int, n: int, window: int, seed: int,
         estimate: float, exact: float, space: int, nonconforming: bool) -> dict:
    return {
        "algo": algo, "norm": norm, "m": m, "n": n, "W": window, "eps": config.eps, "seed": seed,
        "estimate": estimate, "exact": exact, "rel_error": rel_error(estimate, exact),
        "space_entries": space, "nonconforming": int(nonconforming),
    }


# ---------- heavy hitters ----------

def run_hh_once(config: RunConfig, stream: np.ndarray, n: int, seed: int) -> List[dict]:
    window = config.window or len(stream)
    hh = SlidingHeavyHitters(HHConfig(window=window, eta=config.eta, nu=config.nu, universe=n, seed=seed))
    for item in stream:
        hh.update(int(item))
    oracle = window_oracle(stream, window)
    reported = {r.item: r.f_hat for r in hh.report()}
    space = sum(hh.space_report().values())
    items = sorted(set(reported) | oracle.heavy(config.eta))
    return [
        _row(config, "sliding-hh", f"item={item}", len(stream), n, window, seed,
             reported.get(item, 0), oracle.frequency(item), space, hh.config.nonconforming)
        for item in items
    ]


# ---------- symmetric norms ----------

def run_norm_once(config: RunConfig, stream: np.ndarray, n: int, seed: int) -> List[dict]:
    window = config.window or len(stream)
    norms = parse_norms(config.norms, config.p, config.k)
    if not norms:
        raise ParameterError("run norm needs at least one --norm")
    mmc_cap = config.mmc or max(norm.mmc_bound(n) for norm in norms)
    for norm in norms:
        if norm.mmc_bound(n) > mmc_cap:
            raise CapacityError(f"{norm.name} has mmc bound {norm.mmc_bound(n):.3g} above the grid capacity {mmc_cap:.3g}")
    params = param_select(config.eps, mmc_cap, n, config.mode)
    grid = LayerGrid(params, window, seed)
    grid.extend(stream)
    oracle = window_oracle(stream, window)
    space = sum(sum(cell.space_report().values()) for cell, _ in grid.distinct_cells().values())

    rows = []
    for norm in norms:
        exact = oracle_norm(oracle, norm)
        rows.append(_row(config, "symnorm", norm.name, len(stream), n, window, seed,
                         symnorm_estimate(grid, norm, window), exact, space, grid.nonconforming))
    for rate in config.rates:
        for mode in ("stream", "universe"):
            for name, est in baseline_uniform(stream, rate, mode, window, norms, seed).items():
                exact = oracle_norm(oracle, next(n_ for n_ in norms if n_.name == name))
                rows.append(_row(config, f"{est.algo}@{rate:g}", name, len(stream), n, window, seed,
                                 est.estimate, exact, int(rate * window), not est.rescaled))
    return rows


# ---------- Orlicz coresets ----------

def run_orlicz_once(config: RunConfig, A: np.ndarray, b, seed: int) -> List[dict]:
    G = get_g(config.g)
    rows_total = A.shape[0]
    window = config.window or rows_total
    if window >= rows_total:
        coreset = stream_sample(A, config.eps, n=rows_total, seed=seed, responses=b)
        target, target_b = A, b
    else:
        coreset = window_coreset(A, window, config.eps, n=rows_total, seed=seed, responses=b)
        target, target_b = A[-window:], (b[-window:] if b is not None else None)
    logger.info("coreset keeps %d of %d rows", len(coreset), target.shape[0])
    if config.coreset_out and seed == config.seed:
        write_coreset(config.coreset_out, coreset)

    kept = np.vstack([r.row for r in coreset]) if coreset else np.zeros((0, A.shape[1]))
    weights = np.array([r.weight for r in coreset])
    directions = random_directions(A.shape[1], EMBEDDING_DIRECTIONS, seeded_rng(seed, 9))
    ratios = embedding_ratios(target, kept, weights, G, directions)
    worst = float(np.max(np.abs(ratios - 1))) if len(ratios) else 0.0
    out = [_row(config, "orlicz-embedding", G.name, rows_total, rows_total, window, seed,
                1 + worst, 1.0, len(coreset), False)]
    if target_b is not None and coreset:
        fit = solve_regression(coreset, G)
        best = solve_weighted(target, target_b, G)
        out.append(_row(config, "orlicz-regression", G.name, rows_total, rows_total, window, seed,
                        orlicz_objective(target, target_b, fit.x, G), best.objective,
                        len(coreset), not fit.converged))
    return out


# ---------- entry ----------

async def _sweep(job, config: RunConfig, *args) -> List[dict]:
    tasks = [asyncio.to_thread(job, config, *args, config.seed + rep) for rep in range(config.reps)]
    batches = await asyncio.gather(*tasks)
    return [row for batch in batches for row in batch]


def cmd_run(config: RunConfig) -> str:
    if not config.input:
        raise ParameterError("run needs an input file")
    output = config.output or RESULTS_FILE
    if config.subcommand == "orlicz":
        A, b = read_rows(config.input)
        rows = asyncio.run(_sweep(run_orlicz_once, config, A, b))
    else:
        header, stream = read_stream(config.input)
        job = run_hh_once if config.subcommand == "hh" else run_norm_once
        rows = asyncio.run(_sweep(job, config, stream, header["n"]))
    write_results(output, rows)
    logger.info("wrote %d result rows to %s", len(rows), output)
    return output


def setup(registry: dict) -> None:
    for name in ("hh", "norm", "orlicz"):
        registry[name] = cmd_run
