"""몬테카를로 시뮬레이터 테스트"""

import math

import numpy as np
import pytest

from conftest import BURSTY, NOISY, scenario
from analyzers import MarkovAnalyzer
from core.exceptions import ComparisonError, OsaModelError, ParameterError, SimulationError
from core.params import SINGLE_RADIO_ALGORITHMS, Algorithm
from simulator import (
    SimConfig,
    compare,
    parallel_radio_step,
    replication_rng,
    simulate,
    single_radio_step,
    summarize,
)
from simulator import monte_carlo
from simulator.monte_carlo import run_replication


def test_sim_config_validation():
    cfg = scenario()
    with pytest.raises(ParameterError):
        SimConfig(cfg, slots=0)
    with pytest.raises(ParameterError):
        SimConfig(cfg, slots=100, warmup_slots=100)
    with pytest.raises(ParameterError):
        SimConfig(cfg, slots=100, warmup_slots=0, replications=0)
    assert SimConfig(cfg, slots=100, warmup_slots=10).measured_slots == 90


def test_replication_streams_are_reproducible_and_distinct():
    a = replication_rng(42, 0).random(5)
    assert np.array_equal(a, replication_rng(42, 0).random(5))
    assert not np.array_equal(a, replication_rng(42, 1).random(5))


def test_single_radio_step_rules():
    P0Q0, P0Q1, P1Q0, P1Q1 = SINGLE_RADIO_ALGORITHMS
    # 유휴: 프레임이 없으면 유휴 유지, 있으면 단계 1 또는 사전 센싱
    assert single_radio_step(P0Q1, 2, 0, 3, 0, 0, 0, False, 0) == (0, 0, 0, 0)
    assert single_radio_step(P0Q1, 2, 0, 3, 0, 0, 0, False, 1) == (1, 0, 0, 0)
    assert single_radio_step(P1Q0, 2, 1, 3, 0, 0, 0, False, 1) == (4, 1, 0, 0)
    # 단계 전진과 초기화
    assert single_radio_step(P0Q1, 2, 0, 3, 1, 0, 0, True, 1) == (2, 0, 0, 0)
    assert single_radio_step(P0Q1, 2, 0, 3, 2, 0, 0, False, 1) == (1, 0, 0, 0)
    # 마지막 단계 경보
    assert single_radio_step(P0Q0, 2, 0, 3, 2, 0, 2, True, 1) == (1, 0, 0, 0)
    assert single_radio_step(P0Q1, 2, 0, 3, 2, 0, 0, True, 1) == (3, 0, 0, 1)
    assert single_radio_step(P0Q1, 2, 2, 3, 2, 1, 0, True, 1) == (3, 2, 0, 0)
    assert single_radio_step(P1Q0, 2, 2, 3, 2, 0, 1, True, 1) == (4, 1, 2, 0)
    # 정숙 모드 이후
    assert single_radio_step(P0Q1, 2, 2, 3, 3, 1, 0, True, 0) == (1, 0, 1, 0)
    assert single_radio_step(P1Q1, 2, 2, 3, 3, 2, 0, True, 1) == (4, 2, 1, 1)
    assert single_radio_step(P1Q1, 2, 2, 3, 4, 1, 0, False, 0) == (1, 0, 0, 0)


def test_parallel_radio_step_rules():
    # S=2: 라디오 1 은 마지막 단계 경보로 정숙, 라디오 2 는 단계 전진, 라디오 3 은 프레임 없음
    J, b, dropped = parallel_radio_step(2, 1, [2, 1, 0], 0, [True, True, False], [1, 0, 0])
    assert J == [3, 2, 0]
    assert (b, dropped) == (0, 0)
    # 프레임이 라디오보다 많으면 버퍼, 넘치면 폐기
    J, b, dropped = parallel_radio_step(1, 1, [2, 0], 0, [True, False], [1, 1])
    assert J == [2, 1]
    assert (b, dropped) == (1, 0)
    J, b, dropped = parallel_radio_step(1, 0, [2, 0], 0, [True, False], [1, 1])
    assert (b, dropped) == (0, 1)


@pytest.mark.parametrize('algorithm, B', [(Algorithm.P0Q0, 0), (Algorithm.P0Q1, 2),
                                          (Algorithm.P1Q0, 1), (Algorithm.P1Q1, 2), (Algorithm.PARALLEL, 1)])
def test_frames_are_conserved(algorithm, B):
    cfg = scenario(algorithm, S=2, N=3, B=B, traffic=BURSTY, sensing=NOISY)
    tally = run_replication(SimConfig(cfg, slots=3000, warmup_slots=500, seed=3, replications=1), 0)
    assert tally.conservation_gap() == 0
    assert tally.measured_slots == 2500


def test_same_seed_gives_identical_results():
    cfg = scenario(Algorithm.P1Q1, S=2, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    sim = SimConfig(cfg, slots=2000, warmup_slots=100, seed=11, replications=3)
    first = simulate(sim, workers=1)
    second = simulate(sim, workers=1)
    assert first.to_dict() == second.to_dict()


def test_single_replication_has_no_standard_error():
    sim = SimConfig(scenario(), slots=1000, warmup_slots=100, replications=1)
    metrics = simulate(sim, workers=1)
    assert math.isnan(metrics.R_se)
    assert metrics.to_dict()['replication_count'] == 1


def test_summary_counts_match_replications():
    cfg = scenario(Algorithm.P0Q1, S=1, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    sim = SimConfig(cfg, slots=2000, warmup_slots=200, seed=5, replications=2)
    tallies = [run_replication(sim, r) for r in range(2)]
    metrics = summarize(cfg, tallies)
    assert metrics.frames_generated == sum(t.frames_generated for t in tallies)
    assert metrics.frames_in_system_start + metrics.frames_generated == (
        metrics.frames_delivered + metrics.frames_collided + metrics.frames_dropped + metrics.frames_in_system_end)
    assert 0.0 <= metrics.pu_busy_fraction <= 1.0


def test_summary_rejects_unbalanced_frame_counts():
    cfg = scenario(Algorithm.P0Q1, S=1, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    sim = SimConfig(cfg, slots=2000, warmup_slots=200, seed=5, replications=2)
    tallies = [run_replication(sim, r) for r in range(2)]
    tallies[1].frames_generated += 1
    with pytest.raises(SimulationError) as excinfo:
        summarize(cfg, tallies)
    assert excinfo.value.replication == 1
    assert excinfo.value.gap == 1
    assert isinstance(excinfo.value, OsaModelError)


def test_simulate_raises_when_a_replication_loses_frames(monkeypatch):
    original = monte_carlo.run_replication

    def leaky_replication(sim, replication):
        tally = original(sim, replication)
        tally.frames_dropped += 2
        return tally

    monkeypatch.setattr(monte_carlo, 'run_replication', leaky_replication)
    sim = SimConfig(scenario(), slots=1000, warmup_slots=100, replications=2)
    with pytest.raises(SimulationError) as excinfo:
        simulate(sim, workers=1)
    assert excinfo.value.gap == -2


@pytest.mark.slow
def test_closed_form_single_channel_estimate():
    sim = SimConfig(scenario(Algorithm.P0Q0, S=1, N=1), slots=40000, warmup_slots=1000, seed=1, replications=4)
    metrics = simulate(sim, workers=1)
    assert metrics.R_hat == pytest.approx(0.5e6, rel=0.02)
    assert metrics.G_hat == pytest.approx(0.5, rel=0.02)
    assert metrics.pu_busy_fraction == pytest.approx(0.5, abs=0.01)


@pytest.mark.slow
def test_parallel_workers_do_not_change_results():
    cfg = scenario(Algorithm.PARALLEL, S=1, N=2, B=1, traffic=BURSTY, sensing=NOISY)
    sim = SimConfig(cfg, slots=3000, warmup_slots=300, seed=9, replications=3)
    assert simulate(sim, workers=1).to_dict() == simulate(sim, workers=2).to_dict()


@pytest.mark.slow
@pytest.mark.parametrize('algorithm, B', [(Algorithm.P0Q0, 0), (Algorithm.P0Q1, 1),
                                          (Algorithm.P1Q0, 1), (Algorithm.P1Q1, 1), (Algorithm.PARALLEL, 1)])
def test_simulation_agrees_with_analysis(algorithm, B):
    cfg = scenario(algorithm, S=2, N=2, B=B, traffic=BURSTY, sensing=NOISY)
    analytic = MarkovAnalyzer().analyze(cfg)
    simulated = simulate(SimConfig(cfg, slots=100000, warmup_slots=2000, seed=20110403, replications=8), workers=1)
    comparison = compare(analytic, simulated)
    assert comparison.R.rel_deviation < 0.03
    assert comparison.G.rel_deviation < 0.03
    assert comparison.R.sigmas < 5.0
    assert comparison.G.sigmas < 5.0


def test_compare_rejects_different_scenarios():
    a = scenario(Algorithm.P0Q0, S=1, N=1)
    analytic = MarkovAnalyzer().analyze(a)
    simulated = simulate(SimConfig(scenario(Algorithm.P0Q1, S=1, N=1), slots=500, warmup_slots=50,
                                   replications=2), workers=1)
    with pytest.raises(ComparisonError):
        compare(analytic, simulated)


def test_compare_flags_deviation_in_standard_errors():
    cfg = scenario(Algorithm.P0Q0, S=1, N=1)
    analytic = MarkovAnalyzer().analyze(cfg)
    simulated = simulate(SimConfig(cfg, slots=4000, warmup_slots=100, seed=2, replications=4), workers=1)
    report = compare(analytic, simulated, max_relative=1e-12)
    assert report.R.metric == 'R'
    assert report.R.margin == pytest.approx(3.0 - report.R.sigmas)
    # 상대 오차 기준이 극단적으로 작으면 실패로 보고
    assert not report.passed
    assert 'R' in report.failures or 'G' in report.failures
