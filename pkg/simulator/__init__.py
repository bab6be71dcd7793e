"""
시뮬레이션 모듈
몬테카를로 시뮬레이터와 분석 결과 비교 도구를 포함합니다.
"""

from .comparison import ComparisonReport, MetricComparison, compare
from .monte_carlo import (
    ReplicationTally,
    SimConfig,
    SimMetrics,
    parallel_radio_step,
    replication_rng,
    simulate,
    single_radio_step,
    summarize,
)

__all__ = [
    'SimConfig', 'SimMetrics', 'ReplicationTally', 'simulate', 'summarize', 'replication_rng',
    'single_radio_step', 'parallel_radio_step', 'compare', 'ComparisonReport', 'MetricComparison',
]
