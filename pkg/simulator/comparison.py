"""
분석/시뮬레이션 비교
같은 시나리오의 분석 지표와 시뮬레이션 추정치의 편차를 표준오차 단위로 평가합니다.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional

from core.exceptions import ComparisonError
from core.metrics import MetricsReport

from .monte_carlo import SimMetrics

SIGMA_LIMIT = 3.0


@dataclass(frozen=True)
class MetricComparison:
    """지표 하나의 편차"""

    metric: str
    analytic: float
    simulated: float
    standard_error: float
    abs_deviation: float
    rel_deviation: float
    sigmas: float
    within_limit: bool
    margin: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ComparisonReport:
    """R, G 비교 결과"""

    R: MetricComparison
    G: MetricComparison
    max_relative: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(self._metric_ok(item) for item in (self.R, self.G))

    def _metric_ok(self, item: MetricComparison) -> bool:
        if not item.within_limit:
            return False
        if self.max_relative is not None and item.analytic != 0.0:
            return item.rel_deviation < self.max_relative
        return True

    @property
    def failures(self) -> Dict[str, MetricComparison]:
        return {item.metric: item for item in (self.R, self.G) if not self._metric_ok(item)}


def _compare_metric(metric: str, analytic: float, simulated: float, se: float) -> MetricComparison:
    deviation = abs(simulated - analytic)
    relative = deviation / abs(analytic) if analytic != 0.0 else (0.0 if deviation == 0.0 else math.inf)
    if se is None or math.isnan(se):
        sigmas = math.nan
        within = False
    elif se == 0.0:
        sigmas = 0.0 if deviation <= 1e-12 * max(1.0, abs(analytic)) else math.inf
        within = sigmas == 0.0
    else:
        sigmas = deviation / se
        within = sigmas <= SIGMA_LIMIT
    margin = SIGMA_LIMIT - sigmas if not math.isnan(sigmas) else math.nan
    return MetricComparison(
        metric=metric,
        analytic=analytic,
        simulated=simulated,
        standard_error=se,
        abs_deviation=deviation,
        rel_deviation=relative,
        sigmas=sigmas,
        within_limit=within,
        margin=margin,
    )


def compare(analytic: MetricsReport, simulated: SimMetrics, max_relative: Optional[float] = None) -> ComparisonReport:
    """
    분석 결과와 시뮬레이션 결과 비교

    Args:
        analytic: 분석 지표
        simulated: 시뮬레이션 지표
        max_relative: 추가로 요구할 최대 상대 편차 (없으면 표준오차 기준만 사용)

    Returns:
        ComparisonReport

    Raises:
        ComparisonError: 두 결과의 시나리오가 다른 경우
    """
    if analytic.scenario != simulated.scenario:
        raise ComparisonError("서로 다른 시나리오의 결과는 비교할 수 없습니다.")
    return ComparisonReport(
        R=_compare_metric('R', analytic.R, simulated.R_hat, simulated.R_se),
        G=_compare_metric('G', analytic.G, simulated.G_hat, simulated.G_se),
        max_relative=max_relative,
    )
