"""
모델 파라미터
트래픽, 센싱, 시나리오 설정을 표현하는 불변 데이터 타입입니다.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

from .exceptions import InputShapeError, ParameterError


class Algorithm(str, Enum):
    """센싱 알고리즘 (P: 사전 센싱, Q: 정숙 모드 유무)"""

    P0Q0 = 'P0Q0'
    P0Q1 = 'P0Q1'
    P1Q0 = 'P1Q0'
    P1Q1 = 'P1Q1'
    PARALLEL = 'PARALLEL'

    @property
    def has_presensing(self) -> bool:
        return self in (Algorithm.P1Q0, Algorithm.P1Q1)

    @property
    def has_quiet(self) -> bool:
        return self in (Algorithm.P0Q1, Algorithm.P1Q1, Algorithm.PARALLEL)


SINGLE_RADIO_ALGORITHMS = (Algorithm.P0Q0, Algorithm.P0Q1, Algorithm.P1Q0, Algorithm.P1Q1)


class Architecture(str, Enum):
    """라디오 구조"""

    SINGLE = 'SINGLE'
    PARALLEL = 'PARALLEL'


# I(x) = 1 이면 이전 슬롯에 채널 x 를 PU 가 점유 (인덱스 0 이 채널 1)
ChannelOccupancy = Tuple[int, ...]


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name}={value} 는 [0, 1] 범위의 확률이어야 합니다.")


def as_occupancy(values: Sequence[int], n: Optional[int] = None) -> ChannelOccupancy:
    """이진 리스트를 ChannelOccupancy 튜플로 변환"""
    occupancy = tuple(int(v) for v in values)
    if n is not None and len(occupancy) != n:
        raise InputShapeError(f"길이 {n} 의 점유 벡터가 필요하지만 {len(occupancy)} 이 주어졌습니다.")
    if any(v not in (0, 1) for v in occupancy):
        raise InputShapeError(f"점유 벡터는 0/1 로만 구성되어야 합니다: {occupancy}")
    return occupancy


@dataclass(frozen=True)
class TrafficParams:
    """PU/SU 트래픽 파라미터 (슬롯당 도착/이탈 확률)"""

    p_pa: float
    p_pd: float
    p_sa: float
    p_sd: float

    def __post_init__(self):
        for name in ('p_pa', 'p_pd', 'p_sa', 'p_sd'):
            _check_probability(name, getattr(self, name))

    @property
    def frame_rate(self) -> float:
        """SU 프레임 정상 발생 확률 p_sa / (p_sa + p_sd)"""
        total = self.p_sa + self.p_sd
        return self.p_sa / total if total > 0 else 0.0


@dataclass(frozen=True)
class SensingParams:
    """센싱 오류 확률과 시간 파라미터"""

    p_fs: float
    p_ms: float
    p_ft: float
    p_mt: float
    T: float = 1e-3
    T_s: float = 0.0
    W: float = 1e6
    T_t: Optional[float] = None

    def __post_init__(self):
        for name in ('p_fs', 'p_ms', 'p_ft', 'p_mt'):
            _check_probability(name, getattr(self, name))
        if self.T <= 0:
            raise ParameterError(f"슬롯 길이 T={self.T} 는 양수여야 합니다.")
        if not 0.0 <= self.T_s < self.T:
            raise ParameterError(f"센싱 시간 T_s={self.T_s} 는 0 <= T_s < T 여야 합니다.")
        if self.W < 0:
            raise ParameterError(f"채널 처리량 W={self.W} 는 음수일 수 없습니다.")
        if self.T_t is None:
            object.__setattr__(self, 'T_t', self.T)
        elif self.T_t != self.T:
            raise ParameterError("정숙/사전 센싱 시간 T_t 는 슬롯 길이 T 와 같아야 합니다.")

    @property
    def transmit_fraction(self) -> float:
        """슬롯 중 전송에 쓰이는 비율 (T - T_s) / T"""
        return (self.T - self.T_s) / self.T

    @classmethod
    def from_detector(cls, T_s: float, **kwargs) -> 'SensingParams':
        """에너지 검출기 모델에서 도출한 센싱 파라미터 (detector.sensing_from_detector 참고)"""
        from detector import sensing_from_detector

        return sensing_from_detector(T_s, **kwargs)


@dataclass(frozen=True)
class ScenarioConfig:
    """실험 한 건의 전체 파라미터"""

    traffic: TrafficParams
    sensing: SensingParams
    S: int = 1
    N: int = 1
    B: int = 0
    algorithm: Algorithm = Algorithm.P0Q1
    architecture: Optional[Architecture] = None
    M: Optional[int] = None
    name: str = field(default='', compare=False)

    def __post_init__(self):
        algorithm = Algorithm(self.algorithm)
        object.__setattr__(self, 'algorithm', algorithm)
        architecture = self.architecture
        if architecture is None:
            architecture = Architecture.PARALLEL if algorithm is Algorithm.PARALLEL else Architecture.SINGLE
        architecture = Architecture(architecture)
        object.__setattr__(self, 'architecture', architecture)

        if self.S < 1:
            raise ParameterError(f"센싱 단계 수 S={self.S} 는 1 이상이어야 합니다.")
        if self.N < 1:
            raise ParameterError(f"채널 수 N={self.N} 는 1 이상이어야 합니다.")
        if self.B < 0:
            raise ParameterError(f"버퍼 크기 B={self.B} 는 음수일 수 없습니다.")

        if architecture is Architecture.PARALLEL:
            if algorithm is not Algorithm.PARALLEL:
                raise ParameterError("병렬 구조는 PARALLEL 알고리즘만 지원합니다.")
            radios = self.N if self.M is None else self.M
            if radios != self.N:
                raise ParameterError(f"병렬 구조에서는 라디오 수 M={radios} 가 채널 수 N={self.N} 과 같아야 합니다.")
            object.__setattr__(self, 'M', radios)
        else:
            if algorithm is Algorithm.PARALLEL:
                raise ParameterError("PARALLEL 알고리즘은 병렬 구조에서만 사용할 수 있습니다.")
            if self.M not in (None, 1):
                raise ParameterError("단일 라디오 구조에서는 M=1 입니다.")
            object.__setattr__(self, 'M', 1)
            if algorithm is Algorithm.P0Q0 and self.B != 0:
                raise ParameterError("P0Q0 알고리즘은 버퍼를 사용하지 않으므로 B=0 이어야 합니다.")

    @property
    def is_parallel(self) -> bool:
        return self.architecture is Architecture.PARALLEL

    @property
    def radio_count(self) -> int:
        """동시에 전송 가능한 라디오 수 (단일 구조는 1)"""
        return self.M

    def with_changes(self, **changes) -> 'ScenarioConfig':
        """일부 필드를 바꾼 새 설정"""
        if 'algorithm' in changes and 'architecture' not in changes:
            changes['architecture'] = None
            changes.setdefault('M', None)
        if 'N' in changes and 'M' not in changes:
            changes['M'] = None
        return replace(self, **changes)
