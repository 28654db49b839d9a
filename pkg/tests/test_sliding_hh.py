import numpy as np
import pytest

from errors import ParameterError, RangeError
from heavy.sliding import SILENCE_FRACTION, HHConfig, SlidingHeavyHitters, hh_space_bounds_ok, hh_space_report
from streamlab.generators import SyntheticSpec, generate
from tests.helpers import window_frequencies, window_l2


def make_state(window, eta=0.15, nu=0.2, universe=65536, seed=0, **kwargs):
    return SlidingHeavyHitters(HHConfig(window=window, eta=eta, nu=nu, universe=universe, seed=seed, **kwargs))


def feed(state, stream):
    for item in stream:
        state.update(int(item))
    return state


def test_fresh_state_is_empty():
    state = make_state(window=8)
    assert state.report() == []
    assert set(state.space_report().values()) == {0}


def test_first_update_keeps_one_timestamp_and_one_counter():
    state = make_state(window=8)
    state.update(5)
    space = state.space_report()
    assert space["timestamps"] == 1
    assert space["counters"] == 1
    assert state.frequency(5, 1) == 1


def test_at_most_one_timestamp_before_the_window():
    state = make_state(window=2)
    for item in [1, 2, 3, 1, 2, 3, 4, 4, 4, 5]:
        state.update(item)
        keys = list(state.timestamps.keys())
        assert sum(k < state.position - 1 for k in keys) <= 1
        state.check_invariants()


def test_planted_item_reported_in_small_window(appendix_c_small):
    window = 512
    state = feed(make_state(window=window), appendix_c_small)
    truth = window_frequencies(appendix_c_small, window)
    F = window_l2(appendix_c_small, window)
    reports = state.report()
    by_item = {r.item: r for r in reports}

    assert 1 in by_item
    assert by_item[1].f_hat == truth[1] == 4

    for r in reports:
        # sandwich: counters never overcount and reported items are not light
        assert r.f_hat <= truth.get(r.item, 0)
        assert truth[r.item] >= state.config.eta / 8 * F
    for item, f in truth.items():
        if f >= state.config.eta * F:
            assert item in by_item


def test_uniform_distinct_stream_reports_nothing():
    state = feed(make_state(window=1000, eta=0.5, universe=1000), np.arange(1, 1001))
    assert state.report() == []


def test_replay_is_deterministic(zipf_stream):
    stream = zipf_stream[:1500]
    a = feed(make_state(window=256, eta=0.2, universe=1024, seed=9), stream)
    b = feed(make_state(window=256, eta=0.2, universe=1024, seed=9), stream)
    assert a.report() == b.report()
    assert list(a.timestamps.keys()) == list(b.timestamps.keys())


def test_zipf_reports_are_sound(zipf_stream):
    window = 1024
    state = feed(make_state(window=window, eta=0.2, universe=1024, seed=1), zipf_stream)
    truth = window_frequencies(zipf_stream, window)
    F = window_l2(zipf_stream, window)
    reported = {r.item for r in state.report()}
    for item in reported:
        assert truth[item] >= 0.2 / 8 * F
    heavy = {item for item, f in truth.items() if f >= 0.2 * F}
    assert heavy and heavy <= reported


def test_smaller_query_window(zipf_stream):
    window = 1024
    state = feed(make_state(window=window, eta=0.2, universe=1024, seed=1), zipf_stream)
    truth = window_frequencies(zipf_stream, 256)
    for r in state.report(window=256):
        assert r.f_hat <= truth[r.item]


def test_item_outside_universe_is_rejected():
    state = make_state(window=4, universe=10)
    with pytest.raises(RangeError):
        state.update(11)
    with pytest.raises(RangeError):
        state.update(0)


def test_report_window_larger_than_config_is_rejected():
    state = feed(make_state(window=4, universe=10), [1, 2, 3])
    with pytest.raises(ParameterError):
        state.report(window=5)


def test_space_report_bounds(zipf_stream):
    state = feed(make_state(window=512, eta=0.2, universe=1024), zipf_stream[:2048])
    assert hh_space_bounds_ok(state)
    text = hh_space_report(state)
    keys = [line.split("=")[0] for line in text.splitlines()]
    assert keys == ["timestamps", "sketch_cells", "counters", "snapshot_entries", "max_candidates_per_timestamp"]


def test_conforming_sketch_verifies_heavy_items():
    config = HHConfig(window=32, eta=0.99, nu=0.24, universe=100, cs_rows=3, cs_width_cap=80_000)
    assert not config.nonconforming
    state = SlidingHeavyHitters(config)
    feed(state, [7] * 10)
    assert state.in_heavy_set(7)
    assert not state.in_heavy_set(8)
    reports = state.report()
    assert [(r.item, r.f_hat) for r in reports] == [(7, 10)]


def test_sketch_drops_counter_of_light_item():
    stream = [5] + [7] * 400
    conforming = feed(
        make_state(window=1000, eta=0.99, nu=0.24, universe=100, cs_rows=3, cs_width_cap=80_000), stream
    )
    capped = feed(make_state(window=1000, eta=0.99, nu=0.24, universe=100), stream)
    assert [(r.item, r.f_hat) for r in conforming.report()] == [(7, 400)]
    assert [(r.item, r.f_hat) for r in capped.report()] == [(7, 400)]
    # item 5 is still in the window, so only the sketch can have removed it
    assert 5 not in conforming.counters
    assert capped.frequency(5, 1) == 1


def test_capped_sketch_is_not_kept(zipf_stream):
    state = make_state(window=8)
    assert state.config.nonconforming
    assert state.sketch is None
    feed(state, zipf_stream[:64])
    assert state.space_report()["sketch_cells"] == 0
    with pytest.raises(ParameterError):
        state.in_heavy_set(1)


def check_contract(stream, window, eta, nu, seed):
    state = make_state(window=window, eta=eta, nu=nu, seed=seed)
    for item in stream:
        state.update(int(item))
        assert len(state.timestamps) <= state.estimator.cardinality_bound()
    assert hh_space_bounds_ok(state)
    truth = window_frequencies(stream, window)
    F = window_l2(stream, window)
    reports = state.report()
    for r in reports:
        f = truth[r.item]
        assert r.f_hat <= f <= (1 + nu) * r.f_hat
        assert f > SILENCE_FRACTION * eta * F
    reported = {r.item for r in reports}
    assert {item for item, f in truth.items() if f >= eta * F} <= reported


@pytest.mark.slow
@pytest.mark.parametrize("log_m, seeds", [(10, 50), (11, 50), (12, 50), (13, 50), (14, 10), (15, 10)])
@pytest.mark.parametrize("divisor", [1, 2])
def test_appendix_c_contract_over_seeds(log_m, seeds, divisor):
    m = 2**log_m
    for seed in range(seeds):
        stream = generate(SyntheticSpec(m=m, n=2**16, seed=seed))
        check_contract(stream, m // divisor, eta=0.1, nu=0.2, seed=seed)


@pytest.mark.slow
@pytest.mark.parametrize("window", [4096, 1000, 300])
def test_zipf_contract_over_seeds(window):
    for seed in range(5):
        stream = generate(SyntheticSpec(m=8192, n=2**16, seed=seed, variant="zipf", zipf_s=1.1))
        check_contract(stream, window, eta=0.1, nu=0.2, seed=seed)
