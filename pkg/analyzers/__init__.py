"""
분석 모듈
단일/병렬 라디오 구조의 전이 모델 구성과 성능 지표 계산 클래스들을 포함합니다.
"""

from .markov_analyzer import MarkovAnalyzer
from .parallel_radio import (
    FrameAccounting,
    ParallelRadioModelBuilder,
    ParallelRadioState,
    accounting_from_modes,
    analyze_parallel,
    build_kernel_parallel,
    collision_rate_parallel,
    enumerate_states_parallel,
    feasibility_parallel,
    frame_accounting,
    mode_occupancy_parallel,
    sensing_outcome_prob_parallel,
    su_traffic_prob_parallel,
    throughput_parallel,
)
from .single_radio import (
    ModeSets,
    SingleRadioModelBuilder,
    SingleRadioState,
    analyze,
    build_kernel,
    collision_rate,
    enumerate_states,
    feasibility,
    mode_occupancy,
    mode_sets,
    sensing_outcome_prob,
    throughput,
)
from .transition_model import TransitionModel, build_reachable_model

__all__ = [
    'MarkovAnalyzer', 'TransitionModel', 'build_reachable_model',
    'SingleRadioState', 'ModeSets', 'SingleRadioModelBuilder', 'mode_sets',
    'sensing_outcome_prob', 'feasibility', 'enumerate_states', 'build_kernel',
    'throughput', 'collision_rate', 'mode_occupancy', 'analyze',
    'ParallelRadioState', 'FrameAccounting', 'ParallelRadioModelBuilder', 'frame_accounting',
    'accounting_from_modes', 'su_traffic_prob_parallel', 'sensing_outcome_prob_parallel',
    'feasibility_parallel', 'enumerate_states_parallel', 'build_kernel_parallel',
    'throughput_parallel', 'collision_rate_parallel', 'mode_occupancy_parallel', 'analyze_parallel',
]
