"""
검출기 모듈
에너지 검출기 모델과 센싱 파라미터 도출 함수들을 포함합니다.
"""

from .energy_detector import (
    DetectorParams,
    calibrate_threshold,
    db_to_linear,
    long_sensing_errors,
    roc_point,
    sensing_from_detector,
)

__all__ = [
    'DetectorParams', 'roc_point', 'calibrate_threshold', 'sensing_from_detector',
    'long_sensing_errors', 'db_to_linear',
]
