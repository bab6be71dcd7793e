"""
벤치 모듈
설정 파일 해석, 파라미터 스윕, 결과 저장, 정량 주장 검증을 포함합니다.
"""

from .claims import ClaimResult, ClaimsReport, ClaimVerifier, reproduce_claims
from .config_loader import BenchConfig, load_config, parse_bool, parse_config, parse_time
from .result_writer import ResultWriter, rows_to_frame
from .scenarios import (
    PU_TRAFFIC,
    SENSING,
    SU_TRAFFIC,
    parallel_radio_scenario,
    sensing_preset,
    single_radio_scenario,
    traffic_preset,
)
from .sweep import (
    AXES,
    COLUMNS,
    FAILED,
    INFEASIBLE,
    OK,
    DerivedRules,
    ResultRow,
    SimulationOptions,
    SweepPoint,
    SweepSpec,
    evaluate_point,
    expand_points,
    run_points,
    run_sweep,
    single_point,
    solve_p_sd,
)

__all__ = [
    'BenchConfig', 'load_config', 'parse_config', 'parse_time', 'parse_bool',
    'SweepSpec', 'DerivedRules', 'SimulationOptions', 'SweepPoint', 'ResultRow', 'COLUMNS', 'AXES',
    'OK', 'INFEASIBLE', 'FAILED', 'expand_points', 'single_point', 'evaluate_point', 'run_points',
    'run_sweep', 'solve_p_sd',
    'ResultWriter', 'rows_to_frame',
    'ClaimResult', 'ClaimsReport', 'ClaimVerifier', 'reproduce_claims',
    'PU_TRAFFIC', 'SU_TRAFFIC', 'SENSING', 'traffic_preset', 'sensing_preset',
    'single_radio_scenario', 'parallel_radio_scenario',
]
