"""
성능 지표 보고서
처리량 R, 충돌률 G 와 파생 지표를 출처(분석/시뮬레이션)와 함께 담습니다.
"""

from dataclasses import asdict, dataclass
from typing import Optional

from .kernels import offered_throughput
from .params import ScenarioConfig

ANALYTIC = 'analytic'
SIMULATED = 'simulated'


@dataclass(frozen=True)
class MetricsReport:
    """시나리오 하나에 대한 R, G 와 파생 지표"""

    scenario: ScenarioConfig
    R: float
    G: float
    delivery_rate: float
    loss_rate: float
    collisions_per_channel: float
    provenance: str = ANALYTIC
    R_se: Optional[float] = None
    G_se: Optional[float] = None
    state_count: Optional[int] = None
    solve_residual: Optional[float] = None

    @classmethod
    def from_rates(cls, scenario: ScenarioConfig, R: float, G: float, **extra) -> 'MetricsReport':
        """R, G 로부터 전달률/손실률을 계산해 보고서 생성"""
        channels = scenario.N if scenario.is_parallel else 1
        W = scenario.sensing.W
        delivery_rate = R / (channels * W) if W > 0 else 0.0
        offered = offered_throughput(scenario)
        loss_rate = max(0.0, 1.0 - R / offered) if offered > 0 else 0.0
        return cls(
            scenario=scenario,
            R=R,
            G=G,
            delivery_rate=delivery_rate,
            loss_rate=loss_rate,
            collisions_per_channel=G / channels,
            **extra,
        )

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop('scenario')
        return data
