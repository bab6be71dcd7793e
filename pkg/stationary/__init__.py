"""
정상분포 모듈
전이 행렬의 확률성 검증과 정상분포 풀이 함수들을 포함합니다.
"""

from .solver import (
    DIRECT,
    POWER,
    StationaryDistribution,
    StochasticityReport,
    closed_class_count,
    solve_stationary,
    verify_stochastic,
)

__all__ = [
    'StationaryDistribution', 'StochasticityReport', 'solve_stationary', 'verify_stochastic',
    'closed_class_count', 'DIRECT', 'POWER',
]
