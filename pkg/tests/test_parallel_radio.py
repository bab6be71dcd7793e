"""병렬 라디오 모델 테스트"""

import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import BURSTY, NOISY, scenario
from analyzers.parallel_radio import (
    ACTIVE,
    IDLE,
    QUIET,
    ParallelRadioModelBuilder,
    ParallelRadioState,
    accounting_from_modes,
    active_radio_factor,
    analyze_parallel,
    build_kernel_parallel,
    frame_accounting,
    idle_radio_factor,
    mode_occupancy_parallel,
    quiet_radio_factor,
    su_traffic_prob_parallel,
)
from core.exceptions import InputShapeError, InvalidModeError
from core.kernels import architecture_throughput_bound
from core.params import Algorithm, TrafficParams
from stationary import solve_stationary, verify_stochastic


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)))
def test_frame_chain_rows_sum_to_one(p_sa, p_sd, F1):
    t = TrafficParams(p_pa=0.5, p_pd=0.5, p_sa=p_sa, p_sd=p_sd)
    total = sum(su_traffic_prob_parallel(F1, F2, t) for F2 in itertools.product((0, 1), repeat=3))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_frame_chain_conditions_on_previous_radio():
    t = TrafficParams(p_pa=0.5, p_pd=0.5, p_sa=0.2, p_sd=0.3)
    # F2(1) | F1(3)=1 -> 0, F2(2) | F2(1)=0 -> 1, F2(3) | F2(2)=1 -> 1
    assert su_traffic_prob_parallel((0, 0, 1), (0, 1, 1), t) == pytest.approx(0.3 * 0.2 * 0.7)
    with pytest.raises(InputShapeError):
        su_traffic_prob_parallel((0, 1), (0, 1, 1), t)


def test_frame_accounting_assigns_lowest_non_quiet_radios():
    cfg = scenario(Algorithm.PARALLEL, S=2, N=3, B=1)
    state = ParallelRadioState(I=(0, 0, 0), F=(1, 0, 1), J=(0, 3, 0), b=0)
    acct = frame_accounting(state, 1, cfg)
    assert (acct.F_N, acct.F_T, acct.M_F, acct.M_A) == (2, 3, 2, 2)
    assert acct.omega_A == (1, 3)
    assert acct.omega_I == ()
    assert acct.omega_Q == (2,)
    assert acct.b_next == 1
    assert [acct.role(m) for m in (1, 2, 3)] == [ACTIVE, QUIET, ACTIVE]


def test_frame_accounting_checks_vector_lengths():
    cfg = scenario(Algorithm.PARALLEL, S=2, N=3)
    with pytest.raises(InputShapeError):
        frame_accounting(ParallelRadioState(I=(0, 0, 0), F=(1, 0), J=(0, 0, 0), b=0), 0, cfg)


def test_roles_follow_modes():
    cfg = scenario(Algorithm.PARALLEL, S=2, N=3, B=2)
    acct = accounting_from_modes(ParallelRadioState(I=(0, 1, 0), F=(1, 1, 0), J=(2, 0, 3), b=1), cfg)
    assert [acct.role(m) for m in (1, 2, 3)] == [ACTIVE, IDLE, QUIET]
    assert acct.F_T == 2


def test_radio_factors():
    p, S = NOISY, 2
    assert active_radio_factor(1, 2, 0, p, S) == pytest.approx(p.p_fs)
    assert active_radio_factor(1, 1, 1, p, S) == pytest.approx(p.p_ms)
    assert active_radio_factor(2, 3, 1, p, S) == pytest.approx(1 - p.p_ms)
    assert active_radio_factor(2, 0, 0, p, S) == pytest.approx(1 - p.p_fs)
    assert active_radio_factor(1, 0, 1, p, S) == 1.0
    with pytest.raises(InvalidModeError):
        active_radio_factor(0, 1, 0, p, S)
    assert quiet_radio_factor(3, 1, p, S) == pytest.approx(1 - p.p_mt)
    assert quiet_radio_factor(0, 0, p, S) == pytest.approx(1 - p.p_ft)
    assert quiet_radio_factor(2, 0, p, S) == 0.0
    assert idle_radio_factor(1) == 1.0
    assert idle_radio_factor(3) == 0.0


@pytest.mark.parametrize('N', [1, 2, 3])
@pytest.mark.parametrize('S', [1, 2])
@pytest.mark.parametrize('B', [0, 2])
def test_kernel_is_stochastic(N, S, B):
    model = build_kernel_parallel(scenario(Algorithm.PARALLEL, S=S, N=N, B=B, traffic=BURSTY, sensing=NOISY))
    assert verify_stochastic(model).ok
    assert all(len(s.J) == N and 0 <= s.b <= B for s in model.states)


def test_constructive_kernel_matches_product_formula():
    cfg = scenario(Algorithm.PARALLEL, S=1, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    builder = ParallelRadioModelBuilder(cfg)
    model = builder.build()
    dense = model.kernel.toarray()
    for k, state1 in enumerate(model.states):
        for l, state2 in enumerate(model.states):
            assert dense[k, l] == pytest.approx(builder.transition_prob(state1, state2), abs=1e-14)


@pytest.mark.parametrize('N', [1, 2, 3])
def test_closed_form_with_ideal_sensing(N):
    cfg = scenario(Algorithm.PARALLEL, S=1, N=N)
    report = analyze_parallel(cfg)
    assert report.R == pytest.approx(0.25 * N * 1e6, rel=1e-9)
    assert report.G == pytest.approx(0.25 * N, rel=1e-9)
    assert report.delivery_rate == pytest.approx(0.25, rel=1e-9)
    assert report.R == pytest.approx(0.5 * architecture_throughput_bound(cfg), rel=1e-9)


def test_throughput_respects_parallel_bound():
    cfg = scenario(Algorithm.PARALLEL, S=2, N=3, B=1, traffic=BURSTY, sensing=NOISY)
    report = analyze_parallel(cfg)
    assert report.R <= architecture_throughput_bound(cfg) + 1e-9
    assert 0.0 <= report.G <= cfg.N


def test_mode_occupancy_averages_over_radios():
    cfg = scenario(Algorithm.PARALLEL, S=2, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    model = build_kernel_parallel(cfg)
    occupancy = mode_occupancy_parallel(model, solve_stationary(model))
    assert set(occupancy) == {'idle', 'stage_1', 'stage_2', 'quiet'}
    assert sum(occupancy.values()) == pytest.approx(1.0)


def test_builder_rejects_single_radio_scenario():
    with pytest.raises(InvalidModeError):
        ParallelRadioModelBuilder(scenario(Algorithm.P0Q1, N=2))
