"""
공통 확률 커널
알고리즘과 무관한 PU 채널 점유 전이, SU 프레임 트래픽 전이, 정상 점유율과 처리량 상한을 계산합니다.
"""

from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .exceptions import InputShapeError, UndefinedOccupancyError
from .params import ChannelOccupancy, ScenarioConfig, TrafficParams


def all_occupancies(n: int) -> List[ChannelOccupancy]:
    """길이 n 의 모든 이진 벡터 (2^n 개, 채널 1 이 첫 원소)"""
    return list(product((0, 1), repeat=n))


def pu_transition_prob(I1: Sequence[int], I2: Sequence[int], t: TrafficParams) -> float:
    """
    PU 채널 상태 전이 확률

    채널들은 서로 독립인 2-상태 마르코프 체인을 따릅니다.

    Args:
        I1: 이전 슬롯의 점유 벡터
        I2: 다음 슬롯의 점유 벡터
        t: 트래픽 파라미터

    Returns:
        p_pa^n_a (1-p_pa)^n_ā p_pd^n_d (1-p_pd)^n_d̄
    """
    if len(I1) != len(I2):
        raise InputShapeError(f"점유 벡터 길이가 다릅니다: {len(I1)} != {len(I2)}")
    n_a = n_abar = n_d = n_dbar = 0
    for before, after in zip(I1, I2):
        if before:
            if after:
                n_dbar += 1
            else:
                n_d += 1
        elif after:
            n_a += 1
        else:
            n_abar += 1
    return (t.p_pa ** n_a * (1.0 - t.p_pa) ** n_abar
            * t.p_pd ** n_d * (1.0 - t.p_pd) ** n_dbar)


def pu_transition_table(n: int, t: TrafficParams) -> Dict[ChannelOccupancy, List[Tuple[ChannelOccupancy, float]]]:
    """모든 I1 에 대해 확률이 0 이 아닌 (I2, 확률) 목록"""
    return _pu_transition_table(n, t)


@lru_cache(maxsize=32)
def _pu_transition_table(n, t):
    occupancies = all_occupancies(n)
    table = {}
    for I1 in occupancies:
        row = []
        for I2 in occupancies:
            p = pu_transition_prob(I1, I2, t)
            if p > 0.0:
                row.append((I2, p))
        table[I1] = row
    return table


def su_traffic_transition_prob(f1: int, f2: int, t: TrafficParams) -> float:
    """SU 프레임 발생 상태 전이 확률 (4-케이스 표)"""
    if f1 == 0:
        return t.p_sa if f2 == 1 else 1.0 - t.p_sa
    return t.p_sd if f2 == 0 else 1.0 - t.p_sd


def steady_state_occupancy(t: TrafficParams) -> float:
    """채널 하나가 PU 에 점유될 정상 확률 p_pa / (p_pa + p_pd)"""
    total = t.p_pa + t.p_pd
    if total <= 0.0:
        raise UndefinedOccupancyError("p_pa = p_pd = 0 이면 정상 점유율이 정의되지 않습니다.")
    return t.p_pa / total


def throughput_upper_bound(cfg: ScenarioConfig) -> float:
    """단일 라디오 SU 처리량 상한 (1 - occupancy^N) W [bps]"""
    occupancy = steady_state_occupancy(cfg.traffic)
    return (1.0 - occupancy ** cfg.N) * cfg.sensing.W


def offered_throughput(cfg: ScenarioConfig) -> float:
    """SU 가 생성하는 평균 트래픽 W (T-T_s)/T K p_sa/(p_sa+p_sd) [bps]"""
    return cfg.sensing.W * cfg.sensing.transmit_fraction * cfg.radio_count * cfg.traffic.frame_rate


def architecture_throughput_bound(cfg: ScenarioConfig) -> float:
    """
    구조별 처리량 상한 [bps]

    단일 라디오는 throughput_upper_bound, 병렬 라디오는 빈 채널마다 한 라디오가 전송하는 N (1 - occupancy) W 입니다.
    포화 트래픽, 이상적 센싱, S=1, p_pa=p_pd=0.5 의 병렬 구조는 검출 다음 슬롯을 정숙 모드로 보내므로
    빈 슬롯 다음에만 전송하여 R = 0.25 N W (상한 0.5 N W 의 절반) 입니다.
    """
    if not cfg.is_parallel:
        return throughput_upper_bound(cfg)
    occupancy = steady_state_occupancy(cfg.traffic)
    return cfg.N * (1.0 - occupancy) * cfg.sensing.W


def alarm_prob(false_alarm: float, misdetection: float, pu_present: int) -> float:
    """
    센싱이 PU 가 있다고 판단할 확률

    Args:
        false_alarm: 빈 채널에서의 오경보 확률
        misdetection: 점유 채널에서의 오검출 확률
        pu_present: 센싱한 채널의 점유 여부 (0/1)

    Returns:
        점유 채널이면 1 - misdetection, 빈 채널이면 false_alarm
    """
    return 1.0 - misdetection if pu_present else false_alarm


def stationary_vector(pi, size: int) -> np.ndarray:
    """
    정상분포 (또는 .pi 속성을 가진 풀이 결과) 를 길이 size 의 벡터로 변환

    Raises:
        InputShapeError: 길이가 상태 수와 다른 경우
    """
    vector = np.asarray(getattr(pi, 'pi', pi), dtype=float)
    if vector.shape != (size,):
        raise InputShapeError(f"정상분포 길이 {vector.shape} 가 상태 수 {size} 와 다릅니다.")
    return vector
