"""
에너지 검출기 모델
가우시안 근사 에너지 검출기의 오경보/오검출 확률과 임계값 보정, 센싱 파라미터 도출을 담당합니다.

임계값은 샘플당 정규화된 에너지 수준입니다.
빈 채널에서 정규화 통계량은 평균 1, 분산 2/u, 점유 채널에서는 평균 1+snr, 분산 2(1+2snr)/u 를 따릅니다.
(u = 대역폭 x 센싱 시간)
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from scipy import optimize, stats

import config
from core.exceptions import CalibrationError, ParameterError
from core.params import SensingParams

logger = logging.getLogger(__name__)

_BRACKET_EXPANSIONS = 60


def db_to_linear(snr_db: float) -> float:
    """dB 를 선형 비율로 변환"""
    return 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class DetectorParams:
    """에너지 검출기 파라미터"""

    snr: float
    bandwidth: float
    sense_time: float
    threshold: float

    def __post_init__(self):
        if self.snr <= 0:
            raise ParameterError(f"선형 SNR={self.snr} 은 양수여야 합니다.")
        if self.bandwidth <= 0 or self.sense_time <= 0:
            raise ParameterError("대역폭과 센싱 시간은 양수여야 합니다.")
        if self.samples < 1:
            raise ParameterError(f"샘플 수 u={self.samples:g} 가 1 보다 작습니다.")

    @property
    def samples(self) -> float:
        """샘플 수 u = 대역폭 x 센싱 시간"""
        return self.bandwidth * self.sense_time


def roc_point(d: DetectorParams) -> Tuple[float, float]:
    """
    오경보/오검출 확률

    Args:
        d: 검출기 파라미터

    Returns:
        (p_f, p_m)
    """
    u = d.samples
    p_f = stats.norm.sf((d.threshold - 1.0) * math.sqrt(u / 2.0))
    p_m = stats.norm.cdf((d.threshold - (1.0 + d.snr)) * math.sqrt(u / (2.0 * (1.0 + 2.0 * d.snr))))
    return float(p_f), float(p_m)


def _misdetection(threshold: float, snr: float, bandwidth: float, sense_time: float) -> float:
    return roc_point(DetectorParams(snr, bandwidth, sense_time, threshold))[1]


def calibrate_threshold(snr: float, bandwidth: float, sense_time: float, p_m_target: float) -> Tuple[float, float]:
    """
    목표 오검출 확률을 만족하는 임계값 탐색

    p_m 은 임계값에 대해 단조 증가하므로 구간을 넓혀 가며 부호 변화를 찾은 뒤 이분법으로 풉니다.

    Args:
        snr: 선형 SNR
        bandwidth: 대역폭 [Hz]
        sense_time: 센싱 시간 [s]
        p_m_target: 목표 오검출 확률

    Returns:
        (임계값, 해당 임계값의 p_f)

    Raises:
        CalibrationError: 목표가 (0, 1) 밖이거나 구간 안에서 도달할 수 없는 경우
    """
    if not 0.0 < p_m_target < 1.0:
        raise CalibrationError(f"목표 오검출 확률 {p_m_target} 은 (0, 1) 안에 있어야 합니다.")
    # 파라미터 검증
    DetectorParams(snr, bandwidth, sense_time, 1.0)

    def gap(threshold):
        return _misdetection(threshold, snr, bandwidth, sense_time) - p_m_target

    center = 1.0 + snr
    width = max(snr, 1.0)
    low, high = center - width, center + width
    for _ in range(_BRACKET_EXPANSIONS):
        if gap(low) < 0.0 < gap(high):
            break
        width *= 2.0
        low, high = center - width, center + width
    else:
        raise CalibrationError(f"임계값 구간 [{low:g}, {high:g}] 에서 p_m={p_m_target} 에 도달할 수 없습니다.")

    try:
        threshold = optimize.bisect(gap, low, high, xtol=1e-14, maxiter=400)
    except (ValueError, RuntimeError) as e:
        raise CalibrationError(f"임계값 이분 탐색 실패 (T_s={sense_time:g}s): {e}") from e
    p_f, p_m = roc_point(DetectorParams(snr, bandwidth, sense_time, threshold))
    if abs(p_m - p_m_target) > 1e-9:
        raise CalibrationError(f"보정 후 p_m={p_m:.12g} 가 목표 {p_m_target} 와 다릅니다.")
    logger.debug(f"임계값 보정: T_s={sense_time:g}s, 임계값={threshold:.9g}, p_f={p_f:.6g}")
    return float(threshold), p_f


def sensing_from_detector(
    T_s: float,
    T: float = config.SLOT_LENGTH,
    W: float = config.CHANNEL_THROUGHPUT,
    snr_db: float = config.SNR_DB,
    bandwidth: float = config.CHANNEL_BANDWIDTH,
    p_m_target: float = config.TARGET_MISDETECTION,
) -> SensingParams:
    """
    검출기 모델로부터 센싱 파라미터 도출

    단계 센싱(T_s) 에서 목표 p_ms 를 맞추도록 임계값을 정하고,
    같은 임계값으로 슬롯 전체(T) 를 센싱할 때의 p_ft, p_mt 를 계산합니다.

    Args:
        T_s: 단계 센싱 시간 [s]
        T: 슬롯 길이 [s]
        W: 채널 처리량 [bps]
        snr_db: SNR [dB]
        bandwidth: 센싱 대역폭 [Hz]
        p_m_target: 목표 오검출 확률

    Returns:
        SensingParams
    """
    snr = db_to_linear(snr_db)
    threshold, p_fs = calibrate_threshold(snr, bandwidth, T_s, p_m_target)
    p_ft, p_mt = roc_point(DetectorParams(snr, bandwidth, T, threshold))
    return SensingParams(p_fs=p_fs, p_ms=p_m_target, p_ft=p_ft, p_mt=p_mt, T=T, T_s=T_s, W=W)


def long_sensing_errors(
    T_s: float,
    T: float = config.SLOT_LENGTH,
    snr_db: float = config.SNR_DB,
    bandwidth: float = config.CHANNEL_BANDWIDTH,
    p_m_target: float = config.TARGET_MISDETECTION,
) -> Tuple[float, float]:
    """단계 센싱 임계값으로 슬롯 전체를 센싱할 때의 (p_ft, p_mt)"""
    snr = db_to_linear(snr_db)
    threshold, _ = calibrate_threshold(snr, bandwidth, T_s, p_m_target)
    return roc_point(DetectorParams(snr, bandwidth, T, threshold))
