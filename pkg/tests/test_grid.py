import numpy as np
import pytest

from errors import ParameterError, RangeError
from norms.grid import LayerGrid, grid_update
from norms.params import param_select


def small_grid(n=1024, reps=2, seed=0, nested=False):
    params = param_select(0.2, 2.0, n, overrides={"reps": reps})
    return LayerGrid(params, window=64, seed=seed, nested=nested, cs_width_cap=16)


def test_level_zero_admits_everything(rng):
    grid = small_grid()
    for item in rng.integers(1, 1025, size=200):
        assert grid.admits(int(item))[0].all()


def test_admission_rate_matches_sampling_rates(rng):
    grid = small_grid(reps=3)
    items = rng.integers(1, 1025, size=10_000)
    admitted = np.mean([grid.admits(int(item)).sum() for item in items])
    expected = grid.reps * (1 + grid.rates[1:].sum())
    assert abs(admitted - expected) <= 0.05 * expected


def test_same_seed_same_routing():
    a, b = small_grid(seed=4), small_grid(seed=4)
    c = small_grid(seed=5)
    items = range(1, 200)
    assert all(np.array_equal(a.admits(i), b.admits(i)) for i in items)
    assert not all(np.array_equal(a.admits(i), c.admits(i)) for i in items)


def test_nested_levels_shrink():
    grid = small_grid(nested=True, reps=3)
    for item in range(1, 300):
        mask = grid.admits(item)
        assert np.all(mask[1:] <= mask[:-1])


def test_updates_reach_admitted_cells_only(rng):
    grid = small_grid()
    stream = rng.integers(1, 1025, size=300)
    expected = np.zeros((grid.levels + 1, grid.reps), dtype=np.int64)
    for item in stream:
        expected += grid.admits(int(item))
        grid_update(grid, int(item))
    for (i, r), cell in grid.cells.items():
        assert cell.estimator.updates == expected[i, r]
    assert grid.position == 300
    assert all(cell.position <= grid.position for cell in grid.cells.values())


def test_item_outside_universe():
    grid = small_grid()
    with pytest.raises(RangeError):
        grid.update(1025)


def test_provable_repetitions_are_refused():
    params = param_select(0.1, 1.0, 1024, mode="provable")
    with pytest.raises(ParameterError):
        LayerGrid(params, window=8)


def test_grid_is_nonconforming_in_practical_mode():
    assert small_grid().nonconforming


def test_level_zero_row_is_one_instance(rng):
    grid = small_grid(reps=3)
    groups = grid.distinct_cells()
    assert len(groups) == grid.levels * grid.reps + 1
    assert grid.cells[0, 1] is grid.cells[0, 0] is grid.cells[0, 2]
    grid.extend(rng.integers(1, 1025, size=100))
    assert grid.cells[0, 0].position == 100
    assert grid.report(0, 2) is grid.report(0, 0)
    grid.update(3)
    assert grid.report(0, 0) == grid.cells[0, 0].report(now=grid.position, window=grid.window)
