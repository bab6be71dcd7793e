"""
시나리오 프리셋
실험에서 공통으로 쓰는 PU/SU 트래픽, 센싱 설정과 그림별 기본 시나리오를 제공합니다.
"""

from typing import Dict, Tuple

import config
from core.exceptions import ConfigError
from core.params import Algorithm, ScenarioConfig, SensingParams, TrafficParams
from detector import long_sensing_errors

# (p_pa, p_pd)
PU_TRAFFIC: Dict[str, Tuple[float, float]] = {
    'slow': (0.01, 0.01),
    'fast': (0.5, 0.1),
}

# (p_sa, p_sd)
SU_TRAFFIC: Dict[str, Tuple[float, float]] = {
    'saturated': (1.0, 0.0),
    'slow': (0.01, 0.01),
    'fast': (0.5, 0.1),
}

# (T_s / T, p_fs, p_ms)
SENSING: Dict[str, Tuple[float, float, float]] = {
    'long': (0.24, 0.1, 0.1),
    'short': (0.1, 0.36, 0.1),
    'ideal': (0.0, 0.0, 0.0),
}


def traffic_preset(pu: str = 'slow', su: str = 'saturated') -> TrafficParams:
    """이름으로 트래픽 파라미터 생성"""
    if pu not in PU_TRAFFIC:
        raise ConfigError(f"알 수 없는 PU 트래픽 프리셋: {pu}", key='traffic.pu')
    if su not in SU_TRAFFIC:
        raise ConfigError(f"알 수 없는 SU 트래픽 프리셋: {su}", key='traffic.su')
    p_pa, p_pd = PU_TRAFFIC[pu]
    p_sa, p_sd = SU_TRAFFIC[su]
    return TrafficParams(p_pa=p_pa, p_pd=p_pd, p_sa=p_sa, p_sd=p_sd)


def sensing_preset(
    name: str = 'long',
    T: float = config.SLOT_LENGTH,
    W: float = config.CHANNEL_THROUGHPUT,
    derive_long_sensing: bool = True,
) -> SensingParams:
    """
    이름으로 센싱 파라미터 생성

    Args:
        name: long / short / ideal
        T: 슬롯 길이
        W: 채널 처리량
        derive_long_sensing: True 이면 정숙/사전 센싱 오류 확률을 같은 임계값의 검출기 모델에서 도출,
            False 이면 단계 센싱 값과 같게 둠

    Returns:
        SensingParams
    """
    if name not in SENSING:
        raise ConfigError(f"알 수 없는 센싱 프리셋: {name}", key='sensing.preset')
    ratio, p_fs, p_ms = SENSING[name]
    if name == 'ideal':
        return SensingParams(p_fs=0.0, p_ms=0.0, p_ft=0.0, p_mt=0.0, T=T, T_s=0.0, W=W)
    T_s = ratio * T
    if derive_long_sensing:
        p_ft, p_mt = long_sensing_errors(T_s, T=T, p_m_target=p_ms)
    else:
        p_ft, p_mt = p_fs, p_ms
    return SensingParams(p_fs=p_fs, p_ms=p_ms, p_ft=p_ft, p_mt=p_mt, T=T, T_s=T_s, W=W)


def single_radio_scenario(
    algorithm: Algorithm,
    S: int,
    pu: str = 'slow',
    sensing: str = 'long',
    N: int = 6,
    B: int = 0,
    su: str = 'saturated',
) -> ScenarioConfig:
    """단일 라디오 기본 시나리오 (N=6, 포화 트래픽, B=0)"""
    return ScenarioConfig(
        traffic=traffic_preset(pu, su),
        sensing=sensing_preset(sensing),
        S=S,
        N=N,
        B=B,
        algorithm=algorithm,
        name=f"{Algorithm(algorithm).value}-{pu}-{sensing}-S{S}-N{N}-B{B}",
    )


def parallel_radio_scenario(
    S: int,
    pu: str = 'slow',
    sensing: str = 'long',
    N: int = 3,
    B: int = 0,
    su: str = 'saturated',
) -> ScenarioConfig:
    """병렬 라디오 기본 시나리오 (N=M=3, 포화 트래픽, B=0)"""
    return ScenarioConfig(
        traffic=traffic_preset(pu, su),
        sensing=sensing_preset(sensing),
        S=S,
        N=N,
        B=B,
        algorithm=Algorithm.PARALLEL,
        name=f"PARALLEL-{pu}-{sensing}-S{S}-N{N}-B{B}",
    )
