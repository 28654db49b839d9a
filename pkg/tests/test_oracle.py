import math

import numpy as np

from norms.registry import lp_norm, topk_norm
from orlicz.gfunctions import get_g
from streamlab.oracle import ExactWindowOracle, oracle_norm, window_oracle


def test_window_slides():
    oracle = ExactWindowOracle(3)
    for item in [1, 2, 1, 3]:
        oracle.push(item)
    assert len(oracle) == 3
    assert oracle.frequency(1) == 1
    assert oracle.frequency(2) == 1
    assert oracle.frequency(4) == 0
    assert oracle.recount() == oracle.counts


def test_frequencies_and_heavy():
    oracle = window_oracle([5, 5, 5, 6, 7, 5], window=10)
    assert oracle.frequencies().tolist() == [4.0, 1.0, 1.0]
    assert math.isclose(oracle.l2(), math.sqrt(18))
    assert oracle.heavy(0.5) == {5}
    assert oracle.heavy(0.2) == {5, 6, 7}


def test_counts_match_recount_on_long_stream(rng):
    stream = rng.integers(1, 50, size=5000)
    oracle = window_oracle(stream, window=300)
    assert oracle.recount() == oracle.counts
    tail = np.bincount(stream[-300:], minlength=50)
    assert all(oracle.frequency(i) == tail[i] for i in range(1, 50))


def test_oracle_norms():
    oracle = window_oracle([1, 1, 1, 2, 2, 3], window=6)
    assert math.isclose(oracle_norm(oracle, lp_norm(1)), 6.0)
    assert math.isclose(oracle_norm(oracle, topk_norm(2)), 5.0)
    assert math.isclose(oracle_norm(oracle, get_g("square")), math.sqrt(14), rel_tol=1e-8)
    assert oracle_norm(ExactWindowOracle(4), lp_norm(2)) == 0.0
