import math

import numpy as np
import pytest

from errors import ParameterError
from norms.registry import (
    LevelVector,
    box_norm,
    get_norm,
    ksupport_norm,
    level_of,
    level_vector_exact,
    lp_norm,
    parse_norms,
    topk_norm,
)

NORMS = [lp_norm(1), lp_norm(2), lp_norm(3), topk_norm(5), ksupport_norm(3)]


@pytest.fixture
def vector(rng):
    return rng.integers(1, 200, size=60).astype(np.float64)


@pytest.mark.parametrize("norm", [lp_norm(1), lp_norm(2), lp_norm(3.5), topk_norm(1), topk_norm(7)])
def test_closed_forms_match_expansion(norm, vector):
    levels = level_vector_exact(vector, 1.1, offset=0.3)
    closed = norm.evaluate(levels)
    expanded = norm.evaluate_vector(levels.expand())
    assert math.isclose(closed, expanded, rel_tol=1e-10)


@pytest.mark.parametrize("norm", NORMS, ids=lambda n: n.name)
def test_level_vector_sandwiches_the_norm(norm, vector):
    alpha = 1.05
    levels = level_vector_exact(vector, alpha, offset=0.37)
    exact = norm.of(vector)
    rounded = norm.evaluate(levels)
    assert exact <= rounded * (1 + 1e-12)
    assert rounded <= alpha * exact * (1 + 1e-12)


@pytest.mark.parametrize("norm", NORMS, ids=lambda n: n.name)
def test_homogeneity_and_triangle(norm, rng):
    x = rng.normal(size=40)
    y = rng.normal(size=40)
    assert math.isclose(norm.of(3.5 * x), 3.5 * norm.of(x), rel_tol=1e-9)
    assert norm.of(x + y) <= norm.of(x) + norm.of(y) + 1e-9


def test_ksupport_extremes(vector):
    assert math.isclose(ksupport_norm(1).of(vector), lp_norm(1).of(vector), rel_tol=1e-12)
    assert math.isclose(ksupport_norm(len(vector)).of(vector), lp_norm(2).of(vector), rel_tol=1e-12)
    middle = ksupport_norm(10).of(vector)
    assert lp_norm(2).of(vector) <= middle + 1e-9
    assert middle <= lp_norm(1).of(vector) + 1e-9


def test_topk_single_bucket():
    levels = LevelVector(2.0, [(3, 5)], universe=100)
    assert topk_norm(2).evaluate(levels) == 16.0
    assert topk_norm(9).evaluate(levels) == 40.0


def test_empty_level_vector_has_zero_norm():
    empty = LevelVector(2.0, [], universe=10)
    for norm in NORMS:
        assert norm.evaluate(empty) == 0.0


def test_box_norm_only_carries_its_preset():
    norm = box_norm(0.5, 2.0)
    assert norm.mmc_bound(2**16) == 16
    with pytest.raises(ParameterError):
        norm.of([1.0, 2.0])


def test_mmc_presets():
    n = 2**16
    assert lp_norm(2).mmc_bound(n) == 16
    assert lp_norm(1).mmc_bound(n) == 16
    assert math.isclose(lp_norm(4).mmc_bound(n), 16)
    assert math.isclose(topk_norm(n // 2).mmc_bound(n), math.sqrt(2))
    assert topk_norm(n).mmc_bound(n) == 1.0


def test_level_of_edges():
    assert level_of(1.0, 2.0) == 1
    assert level_of(1.5, 2.0) == 1
    assert level_of(2.0, 2.0) == 2
    assert level_of(8.0, 2.0, offset=0.5) == 3


@pytest.mark.parametrize(
    "buckets,universe",
    [([(1, 0)], 10), ([(2, 1), (1, 1)], 10), ([(1, 5), (2, 6)], 10)],
)
def test_level_vector_validation(buckets, universe):
    with pytest.raises(ParameterError):
        LevelVector(2.0, buckets, universe)


def test_level_vector_base_must_exceed_one():
    with pytest.raises(ParameterError):
        LevelVector(1.0, [(1, 1)], 10)


def test_registry_lookup():
    assert get_norm("L2").name == "l2"
    assert get_norm("topk", k=4).name == "top4"
    names = [n.name for n in parse_norms(["l1", " lp", "topk", ""], p=3, k=4)]
    assert names == ["l1", "l3", "top4"]
    with pytest.raises(ParameterError):
        get_norm("nuclear")
    with pytest.raises(ParameterError):
        lp_norm(0.5)
