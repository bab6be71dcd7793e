"""PU/SU 전이 커널과 상한 테스트"""

import math

import pytest
from hypothesis import given, strategies as st

from conftest import IDEAL, scenario
from core.exceptions import InputShapeError, UndefinedOccupancyError
from core.kernels import (
    alarm_prob,
    all_occupancies,
    architecture_throughput_bound,
    offered_throughput,
    pu_transition_prob,
    stationary_vector,
    steady_state_occupancy,
    su_traffic_transition_prob,
    throughput_upper_bound,
)
from core.params import Algorithm, TrafficParams

probabilities = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@given(probabilities, probabilities, st.integers(min_value=1, max_value=4), st.data())
def test_pu_transition_rows_sum_to_one(p_pa, p_pd, n, data):
    t = TrafficParams(p_pa=p_pa, p_pd=p_pd, p_sa=0.5, p_sd=0.5)
    I1 = data.draw(st.tuples(*[st.integers(0, 1)] * n))
    total = sum(pu_transition_prob(I1, I2, t) for I2 in all_occupancies(n))
    assert total == pytest.approx(1.0, abs=1e-12)


@given(probabilities, probabilities)
def test_su_traffic_rows_sum_to_one(p_sa, p_sd):
    t = TrafficParams(p_pa=0.5, p_pd=0.5, p_sa=p_sa, p_sd=p_sd)
    for f1 in (0, 1):
        assert su_traffic_transition_prob(f1, 0, t) + su_traffic_transition_prob(f1, 1, t) == pytest.approx(1.0)


def test_pu_transition_counts_each_channel_kind():
    t = TrafficParams(p_pa=0.1, p_pd=0.2, p_sa=1.0, p_sd=0.0)
    # 채널별: 도착, 이탈, 유지(점유), 유지(비점유)
    p = pu_transition_prob((0, 1, 1, 0), (1, 0, 1, 0), t)
    assert p == pytest.approx(0.1 * 0.2 * 0.8 * 0.9)


def test_pu_transition_rejects_mismatched_lengths():
    t = TrafficParams(p_pa=0.1, p_pd=0.2, p_sa=1.0, p_sd=0.0)
    with pytest.raises(InputShapeError):
        pu_transition_prob((0, 1), (0, 1, 0), t)


def test_all_occupancies_lists_every_vector_once():
    vectors = all_occupancies(3)
    assert len(vectors) == 8
    assert len(set(vectors)) == 8
    assert vectors[0] == (0, 0, 0)


def test_upper_bound_for_six_channels_and_slow_pu():
    t = TrafficParams(p_pa=0.01, p_pd=0.01, p_sa=1.0, p_sd=0.0)
    cfg = scenario(Algorithm.P0Q1, N=6, traffic=t)
    assert throughput_upper_bound(cfg) == pytest.approx(984375.0)
    assert abs(throughput_upper_bound(cfg) - 984.3e3) <= 100.0


def test_upper_bound_for_three_channels():
    t = TrafficParams(p_pa=0.01, p_pd=0.01, p_sa=1.0, p_sd=0.0)
    assert throughput_upper_bound(scenario(N=3, traffic=t)) == pytest.approx(875000.0)


@given(st.floats(min_value=1e-3, max_value=1.0), st.floats(min_value=1e-3, max_value=1.0),
       st.integers(min_value=1, max_value=7))
def test_upper_bound_increases_with_channels(p_pa, p_pd, n):
    t = TrafficParams(p_pa=p_pa, p_pd=p_pd, p_sa=1.0, p_sd=0.0)
    fewer = throughput_upper_bound(scenario(N=n, traffic=t))
    more = throughput_upper_bound(scenario(N=n + 1, traffic=t))
    assert more >= fewer
    assert more <= IDEAL.W


def test_occupancy_undefined_without_pu_dynamics():
    t = TrafficParams(p_pa=0.0, p_pd=0.0, p_sa=1.0, p_sd=0.0)
    with pytest.raises(UndefinedOccupancyError):
        steady_state_occupancy(t)


def test_parallel_bound_counts_every_vacant_channel():
    t = TrafficParams(p_pa=0.01, p_pd=0.01, p_sa=1.0, p_sd=0.0)
    cfg = scenario(Algorithm.PARALLEL, N=3, traffic=t)
    assert architecture_throughput_bound(cfg) == pytest.approx(1.5e6)


def test_offered_throughput_scales_with_radios_and_frame_rate():
    t = TrafficParams(p_pa=0.5, p_pd=0.5, p_sa=0.1, p_sd=0.3)
    single = offered_throughput(scenario(Algorithm.P0Q1, N=3, traffic=t))
    parallel = offered_throughput(scenario(Algorithm.PARALLEL, N=3, traffic=t))
    assert single == pytest.approx(1e6 * 0.25)
    assert parallel == pytest.approx(3 * single)
    assert not math.isnan(single)


def test_alarm_prob_depends_on_channel_state():
    assert alarm_prob(0.2, 0.15, 0) == 0.2
    assert alarm_prob(0.2, 0.15, 1) == pytest.approx(0.85)
    assert alarm_prob(0.0, 1.0, 1) == 0.0


def test_stationary_vector_accepts_solution_objects():
    class Solution:
        pi = [0.25, 0.75]

    assert list(stationary_vector(Solution(), 2)) == [0.25, 0.75]
    assert list(stationary_vector([1.0, 0.0, 0.0], 3)) == [1.0, 0.0, 0.0]
    with pytest.raises(InputShapeError):
        stationary_vector([0.5, 0.5], 3)
