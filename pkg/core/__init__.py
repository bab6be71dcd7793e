"""
공통 모듈
파라미터 타입, 알고리즘 독립 확률 커널, 지표 보고서, 예외를 포함합니다.
"""

from .exceptions import (
    CalibrationError,
    CapacityError,
    ComparisonError,
    ConfigError,
    ConvergenceError,
    InputShapeError,
    InvalidModeError,
    ModelConsistencyError,
    MultipleClassesError,
    OsaModelError,
    ParameterError,
    SimulationError,
    UndefinedOccupancyError,
)
from .kernels import (
    alarm_prob,
    all_occupancies,
    architecture_throughput_bound,
    offered_throughput,
    pu_transition_prob,
    pu_transition_table,
    steady_state_occupancy,
    stationary_vector,
    su_traffic_transition_prob,
    throughput_upper_bound,
)
from .metrics import ANALYTIC, SIMULATED, MetricsReport
from .params import (
    SINGLE_RADIO_ALGORITHMS,
    Algorithm,
    Architecture,
    ChannelOccupancy,
    ScenarioConfig,
    SensingParams,
    TrafficParams,
    as_occupancy,
)

__all__ = [
    'Algorithm', 'Architecture', 'ChannelOccupancy', 'ScenarioConfig', 'SensingParams',
    'TrafficParams', 'SINGLE_RADIO_ALGORITHMS', 'as_occupancy',
    'all_occupancies', 'pu_transition_prob', 'pu_transition_table', 'su_traffic_transition_prob',
    'steady_state_occupancy', 'throughput_upper_bound', 'offered_throughput',
    'architecture_throughput_bound', 'alarm_prob', 'stationary_vector',
    'MetricsReport', 'ANALYTIC', 'SIMULATED',
    'OsaModelError', 'ParameterError', 'InputShapeError', 'UndefinedOccupancyError',
    'InvalidModeError', 'CapacityError', 'ModelConsistencyError', 'ConvergenceError',
    'MultipleClassesError', 'CalibrationError', 'ComparisonError', 'ConfigError', 'SimulationError',
]
