"""단일 라디오 모델 테스트"""

import pytest

from conftest import BURSTY, NOISY, scenario
from analyzers.single_radio import (
    NEXT,
    SAME,
    SingleRadioState,
    analyze,
    build_kernel,
    enumerate_states,
    feasibility,
    mode_occupancy,
    mode_sets,
    next_channel,
    sensing_outcome_prob,
    transition_feasible,
)
from core.exceptions import CapacityError, InvalidModeError
from core.kernels import throughput_upper_bound
from core.params import SINGLE_RADIO_ALGORITHMS, Algorithm, SensingParams, TrafficParams
from stationary import solve_stationary, verify_stochastic


def test_mode_sets_per_variant():
    assert mode_sets(Algorithm.P0Q0, 2).gamma == {0, 1, 2}
    assert mode_sets(Algorithm.P0Q1, 2).gamma == {0, 1, 2, 3}
    assert mode_sets(Algorithm.P1Q0, 2).gamma == {0, 1, 2, 4}
    p1q1 = mode_sets(Algorithm.P1Q1, 2)
    assert p1q1.gamma == {0, 1, 2, 3, 4}
    assert p1q1.gamma_s == {1, 2}
    assert p1q1.long_sensing == {3, 4}
    with pytest.raises(InvalidModeError):
        mode_sets(Algorithm.PARALLEL, 2)


def test_next_channel_wraps_around():
    assert next_channel(1, 3) == 2
    assert next_channel(3, 3) == 1
    assert next_channel(1, 1) == 1


def test_stage_outcomes_use_stage_error_rates():
    p = NOISY
    assert sensing_outcome_prob(Algorithm.P0Q1, 1, 2, 1, True, p, 2) == pytest.approx(1 - p.p_ms)
    assert sensing_outcome_prob(Algorithm.P0Q1, 1, 1, 0, True, p, 2) == pytest.approx(1 - p.p_fs)
    assert sensing_outcome_prob(Algorithm.P0Q1, 2, 3, 0, True, p, 2) == pytest.approx(p.p_fs)
    assert sensing_outcome_prob(Algorithm.P0Q0, 2, 1, 1, False, p, 2) == pytest.approx(1 - p.p_ms)


def test_long_sensing_outcomes_use_slot_error_rates():
    p = NOISY
    assert sensing_outcome_prob(Algorithm.P0Q1, 3, 1, 0, True, p, 2) == pytest.approx(1 - p.p_ft)
    assert sensing_outcome_prob(Algorithm.P0Q1, 3, 1, 1, False, p, 2) == pytest.approx(1 - p.p_mt)
    assert sensing_outcome_prob(Algorithm.P1Q1, 3, 4, 0, False, p, 2) == pytest.approx(p.p_ft)
    assert sensing_outcome_prob(Algorithm.P1Q1, 4, 1, 1, True, p, 2) == pytest.approx(p.p_mt)


def test_p1q0_switch_from_last_stage_uses_stage_rates():
    p = NOISY
    assert sensing_outcome_prob(Algorithm.P1Q0, 2, 4, 0, False, p, 2) == pytest.approx(p.p_fs)
    assert sensing_outcome_prob(Algorithm.P1Q0, 4, 4, 1, False, p, 2) == pytest.approx(1 - p.p_mt)
    assert sensing_outcome_prob(Algorithm.P1Q0, 1, 2, 0, True, p, 2) == pytest.approx(p.p_fs)
    assert sensing_outcome_prob(Algorithm.P1Q0, 2, 1, 0, True, p, 2) == pytest.approx(1 - p.p_fs)


def test_idle_transitions_need_no_sensing():
    assert sensing_outcome_prob(Algorithm.P1Q1, 0, 4, 1, True, NOISY, 2) == 1.0
    assert sensing_outcome_prob(Algorithm.P1Q1, 1, 0, 1, True, NOISY, 2) == 1.0
    assert sensing_outcome_prob(Algorithm.P1Q1, 1, 0, 1, False, NOISY, 2) == 0.0


def test_unknown_mode_is_rejected():
    with pytest.raises(InvalidModeError):
        sensing_outcome_prob(Algorithm.P0Q0, 3, 1, 0, True, NOISY, 2)
    with pytest.raises(InvalidModeError):
        transition_feasible(Algorithm.P0Q1, 0, 4, 1, 0, 0, SAME, 2, 0)


def test_p0q0_switches_channel_after_last_alarm():
    s1 = SingleRadioState(I=(0, 0, 0), f=1, j=2, b=0, c=3)
    s2 = SingleRadioState(I=(1, 0, 0), f=1, j=1, b=0, c=1)
    assert feasibility(Algorithm.P0Q0, s1, s2, S=2, B=0) == 1
    assert feasibility(Algorithm.P0Q0, s1._replace(j=1), s2, S=2, B=0) == 0


def test_quiet_mode_buffers_new_frame():
    assert transition_feasible(Algorithm.P0Q1, 2, 3, 1, 0, 1, SAME, 2, 2)
    assert transition_feasible(Algorithm.P0Q1, 2, 3, 1, 2, 2, SAME, 2, 2)
    assert not transition_feasible(Algorithm.P0Q1, 2, 3, 1, 0, 0, SAME, 2, 2)


def test_idle_entry_requires_empty_buffer():
    assert not transition_feasible(Algorithm.P0Q1, 1, 0, 0, 1, 0, SAME, 2, 2)
    assert transition_feasible(Algorithm.P0Q1, 1, 0, 0, 0, 0, SAME, 2, 2)
    # 버퍼 프레임 하나를 꺼내 전송
    assert transition_feasible(Algorithm.P0Q1, 1, 1, 0, 1, 0, SAME, 2, 2)


def test_presensing_variants_enter_presensing_from_idle():
    assert transition_feasible(Algorithm.P1Q0, 0, 4, 1, 0, 1, SAME, 2, 3)
    assert not transition_feasible(Algorithm.P1Q0, 0, 1, 1, 0, 0, SAME, 2, 3)
    assert transition_feasible(Algorithm.P0Q1, 0, 1, 1, 0, 0, SAME, 2, 3)


def test_move_constants_select_rule_set():
    assert transition_feasible(Algorithm.P0Q1, 3, 1, 1, 0, 0, NEXT, 2, 0)
    assert not transition_feasible(Algorithm.P0Q1, 2, 1, 1, 0, 0, NEXT, 2, 0)


@pytest.mark.parametrize('algorithm', SINGLE_RADIO_ALGORITHMS)
@pytest.mark.parametrize('N', [1, 2, 3])
@pytest.mark.parametrize('S', [1, 3])
def test_kernel_is_stochastic(algorithm, N, S):
    B = 0 if algorithm is Algorithm.P0Q0 else 2
    model = build_kernel(scenario(algorithm, S=S, N=N, B=B, traffic=BURSTY, sensing=NOISY))
    report = verify_stochastic(model)
    assert report.ok
    assert report.max_deviation <= 1e-12
    assert all(1 <= s.c <= N and 0 <= s.b <= B for s in model.states)


def test_state_order_is_deterministic():
    cfg = scenario(Algorithm.P1Q1, S=2, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    first = enumerate_states(cfg)
    assert first == enumerate_states(cfg)
    assert first == sorted(first, key=lambda s: (s.c, s.j, s.b, s.f, s.I))
    assert SingleRadioState(I=(0, 0), f=0, j=0, b=0, c=1) in first


def test_state_cap_is_enforced():
    cfg = scenario(Algorithm.P1Q1, S=3, N=3, B=2, traffic=BURSTY, sensing=NOISY)
    with pytest.raises(CapacityError):
        build_kernel(cfg, state_cap=10)


def test_p0q0_single_channel_closed_form():
    report = analyze(scenario(Algorithm.P0Q0, S=1, N=1))
    assert report.R == pytest.approx(0.5e6, rel=1e-9)
    assert report.G == pytest.approx(0.5, rel=1e-9)


def test_p0q1_single_channel_closed_form():
    report = analyze(scenario(Algorithm.P0Q1, S=1, N=1))
    assert report.R == pytest.approx(1e6 / 3, rel=1e-9)
    assert report.G == pytest.approx(1 / 3, rel=1e-9)


@pytest.mark.parametrize('algorithm', SINGLE_RADIO_ALGORITHMS)
def test_throughput_never_exceeds_bound(algorithm):
    B = 0 if algorithm is Algorithm.P0Q0 else 1
    cfg = scenario(algorithm, S=2, N=3, B=B, traffic=BURSTY, sensing=NOISY)
    report = analyze(cfg)
    assert 0.0 <= report.R <= throughput_upper_bound(cfg) + 1e-9
    assert 0.0 <= report.G <= 1.0
    assert report.solve_residual <= 1e-10


def test_mode_occupancy_is_a_distribution():
    cfg = scenario(Algorithm.P1Q1, S=2, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    model = build_kernel(cfg)
    occupancy = mode_occupancy(model, solve_stationary(model))
    assert set(occupancy) == {'idle', 'stage_1', 'stage_2', 'quiet', 'presensing'}
    assert sum(occupancy.values()) == pytest.approx(1.0)


@pytest.mark.parametrize('algorithm', SINGLE_RADIO_ALGORITHMS)
@pytest.mark.parametrize('S', [1, 2, 3])
@pytest.mark.parametrize('pu_present', [0, 1])
def test_sensing_outcomes_are_exhaustive(algorithm, S, pu_present):
    modes = mode_sets(algorithm, S)
    for j1 in sorted(modes.gamma - {0}):
        total = sum(
            sensing_outcome_prob(algorithm, j1, j2, pu_present, same_channel, NOISY, S)
            for j2 in sorted(modes.gamma - {0})
            for same_channel in (True, False)
        )
        assert total == pytest.approx(1.0), (algorithm, j1)


def test_blind_sensing_matches_always_transmit_baseline():
    # 경보가 절대 나지 않는 센싱: SU 는 첫 채널에서 매 슬롯 전송
    blind = SensingParams(p_fs=0.0, p_ms=1.0, p_ft=0.0, p_mt=1.0, T=1e-3, T_s=0.1e-3, W=1e6)
    traffic = TrafficParams(p_pa=0.2, p_pd=0.3, p_sa=1.0, p_sd=0.0)
    cfg = scenario(Algorithm.P0Q1, S=2, N=3, traffic=traffic, sensing=blind)
    report = analyze(cfg)
    occupancy = 0.2 / (0.2 + 0.3)
    assert report.G == pytest.approx(occupancy, rel=1e-9)
    assert report.R == pytest.approx(1e6 * 0.9 * (1.0 - occupancy), rel=1e-9)

    model = build_kernel(cfg)
    modes = mode_occupancy(model, solve_stationary(model))
    assert modes['stage_1'] == pytest.approx(1.0)
    assert modes['quiet'] == pytest.approx(0.0, abs=1e-12)
