"""
단일 라디오 분석 모델
P0Q0, P0Q1, P1Q0, P1Q1 알고리즘의 SU 상태 전이(실현 가능성 U, 센싱 결과 확률 Pr3)와
상태 공간 열거, 전이 행렬, 처리량/충돌률 계산을 담당합니다.

상태 θ = (I, f, j, b, c)
    I: 이전 슬롯의 PU 점유 벡터, f: 이번 슬롯 프레임 발생 여부, j: 모드,
    b: 버퍼에 쌓인 프레임 수, c: 현재 채널 (1..N)

모드 j: 0 = 유휴, 1..S = 센싱 단계, S+1 = 정숙(Q), S+2 = 사전 센싱(P)
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple

import numpy as np

import config
from core.exceptions import InputShapeError, InvalidModeError
from core.kernels import alarm_prob, pu_transition_table, stationary_vector, su_traffic_transition_prob
from core.metrics import MetricsReport
from core.params import (
    SINGLE_RADIO_ALGORITHMS,
    Algorithm,
    ChannelOccupancy,
    ScenarioConfig,
    SensingParams,
)

from .transition_model import TransitionModel, build_reachable_model

logger = logging.getLogger(__name__)

SAME = 'same'
NEXT = 'next'


class SingleRadioState(NamedTuple):
    """단일 라디오 시스템 상태 θ"""

    I: ChannelOccupancy
    f: int
    j: int
    b: int
    c: int


@dataclass(frozen=True)
class ModeSets:
    """알고리즘별 모드 집합 Γ, Γ_S, Γ_A"""

    S: int
    gamma: FrozenSet[int]
    gamma_s: FrozenSet[int]
    gamma_a: FrozenSet[int]
    quiet: Optional[int]
    presensing: Optional[int]

    @property
    def long_sensing(self) -> FrozenSet[int]:
        """슬롯 전체를 센싱에 쓰는 모드 (Q, P)"""
        return frozenset(m for m in (self.quiet, self.presensing) if m is not None)


def mode_sets(variant: Algorithm, S: int) -> ModeSets:
    """
    알고리즘의 모드 집합

    Args:
        variant: 단일 라디오 알고리즘
        S: 센싱 단계 수

    Returns:
        ModeSets
    """
    variant = Algorithm(variant)
    if variant not in SINGLE_RADIO_ALGORITHMS:
        raise InvalidModeError(f"{variant.value} 는 단일 라디오 알고리즘이 아닙니다.")
    stages = frozenset(range(1, S + 1))
    quiet = S + 1 if variant.has_quiet else None
    presensing = S + 2 if variant.has_presensing else None
    extra = frozenset(m for m in (quiet, presensing) if m is not None)
    return ModeSets(
        S=S,
        gamma=frozenset({0}) | stages | extra,
        gamma_s=stages,
        gamma_a=stages | extra,
        quiet=quiet,
        presensing=presensing,
    )


def sensing_outcome_prob(
    variant: Algorithm,
    j1: int,
    j2: int,
    pu_present: int,
    same_channel: bool,
    p: SensingParams,
    S: int,
) -> float:
    """
    센싱 결과 확률 Pr3

    현재 채널의 다음 슬롯 점유 여부 x 에서 모드 j1 -> j2 로 가는 센싱 결과가 나올 확률입니다.
    유휴 모드가 관련된 같은 채널 전이는 센싱이 없으므로 1 입니다.

    Args:
        variant: 알고리즘
        j1: 현재 모드
        j2: 다음 모드
        pu_present: x = I2(c1)
        same_channel: 같은 채널에 머무는지 여부
        p: 센싱 파라미터
        S: 센싱 단계 수

    Returns:
        확률 (0 이면 해당 전이가 센싱으로 설명되지 않음)
    """
    modes = mode_sets(variant, S)
    if j1 not in modes.gamma or j2 not in modes.gamma:
        raise InvalidModeError(f"{variant.value} 에서 허용되지 않는 모드 전이 {j1} -> {j2} (S={S})")
    if j1 == 0 or j2 == 0:
        return 1.0 if same_channel else 0.0

    stage_alarm = alarm_prob(p.p_fs, p.p_ms, pu_present)
    long_alarm = alarm_prob(p.p_ft, p.p_mt, pu_present)
    quiet_variant = variant in (Algorithm.P0Q1, Algorithm.P1Q1)

    if same_channel:
        advancing = modes.gamma_s if quiet_variant else modes.gamma_s - {S}
        if j1 in advancing and j2 == j1 + 1:
            return stage_alarm
        if j1 in modes.gamma_s and j2 == 1:
            return 1.0 - stage_alarm
        if j1 in modes.long_sensing and j2 == 1:
            return 1.0 - long_alarm
        return 0.0

    if variant is Algorithm.P0Q0:
        return stage_alarm if (j1 == S and j2 == 1) else 0.0
    if variant is Algorithm.P0Q1:
        return long_alarm if (j1 == modes.quiet and j2 == 1) else 0.0
    if j2 != modes.presensing:
        return 0.0
    if j1 in modes.long_sensing:
        return long_alarm
    if variant is Algorithm.P1Q0 and j1 == S:
        return stage_alarm
    return 0.0


def _keeps_buffer(f2: int, b1: int, b2: int) -> bool:
    """C3: 새 프레임을 전송하고 버퍼 유지, C4: 버퍼 프레임 하나를 전송"""
    return (b2 == b1 and f2 == 1) or (b2 == b1 - 1 and b1 > 0 and f2 == 0)


def _buffers_frame(f2: int, b1: int, b2: int, B: int) -> bool:
    """버퍼 모드로 들어가며 새 프레임을 저장(가득 차면 폐기)하거나 기존 버퍼를 유지"""
    return (f2 == 1 and b2 == min(b1 + 1, B)) or (f2 == 0 and b2 == b1 and b1 > 0)


def _same_channel_feasible(variant, modes: ModeSets, j1, j2, f2, b1, b2, B) -> bool:
    S = modes.S
    if variant is Algorithm.P0Q0:
        if b1 != 0 or b2 != 0:
            return False
        if j2 == 0:
            return f2 == 0
        if j2 == 1:
            return f2 == 1
        return 1 <= j1 <= S - 1 and j2 == j1 + 1 and f2 == 1

    if j2 == 0:
        if f2 != 0:
            return False
        if 0 <= j1 <= S:
            return b1 == 0 and b2 == 0
        if variant is Algorithm.P0Q1:
            return j1 == modes.quiet and B == 0
        if variant is Algorithm.P1Q1:
            return j1 in modes.long_sensing and B == 0
        return j1 == modes.presensing and B == 0

    if j1 == 0:
        if modes.presensing is not None:
            return j2 == modes.presensing and f2 == 1 and b2 == min(b1 + 1, B)
        return j2 == 1 and f2 == 1 and b2 == 0

    if 1 <= j1 <= S - 1 and j2 == j1 + 1:
        return _keeps_buffer(f2, b1, b2)
    if j1 == S and modes.quiet is not None and j2 == modes.quiet:
        return _buffers_frame(f2, b1, b2, B)
    if j1 in modes.gamma_a and j2 == 1:
        return _keeps_buffer(f2, b1, b2)
    return False


def _next_channel_feasible(variant, modes: ModeSets, j1, j2, f2, b1, b2, B) -> bool:
    S = modes.S
    if variant is Algorithm.P0Q0:
        return j1 == S and j2 == 1 and f2 == 1 and b1 == 0 and b2 == 0
    if variant is Algorithm.P0Q1:
        return j1 == modes.quiet and j2 == 1 and _keeps_buffer(f2, b1, b2)
    if variant is Algorithm.P1Q1:
        switching = modes.long_sensing
    else:
        switching = frozenset({S, modes.presensing})
    return j1 in switching and j2 == modes.presensing and _buffers_frame(f2, b1, b2, B)


def transition_feasible(
    variant: Algorithm,
    j1: int,
    j2: int,
    f2: int,
    b1: int,
    b2: int,
    move: str,
    S: int,
    B: int,
) -> bool:
    """SU 하위 상태 전이 (j1, b1) -> (f2, j2, b2) 가 채널 이동 move 로 허용되는지"""
    modes = mode_sets(variant, S)
    if j1 not in modes.gamma or j2 not in modes.gamma:
        raise InvalidModeError(f"{variant.value} 에서 허용되지 않는 모드 전이 {j1} -> {j2} (S={S})")
    if move == SAME:
        return _same_channel_feasible(variant, modes, j1, j2, f2, b1, b2, B)
    return _next_channel_feasible(variant, modes, j1, j2, f2, b1, b2, B)


def next_channel(c: int, N: int) -> int:
    """순환 채널 순서에서 다음 채널 (1-기반)"""
    return c % N + 1


def feasibility(variant: Algorithm, s1: SingleRadioState, s2: SingleRadioState, S: int, B: int) -> int:
    """
    실현 가능성 U(θ1, θ2) ∈ {0, 1}

    채널이 유지되면 같은 채널 규칙, 다음 채널로 이동하면 이동 규칙을 적용합니다.
    N=1 이면 두 규칙 모두 같은 채널에 해당합니다.
    """
    N = len(s1.I)
    if len(s2.I) != N:
        raise InputShapeError(f"점유 벡터 길이가 다릅니다: {N} != {len(s2.I)}")
    if s2.c == s1.c and transition_feasible(variant, s1.j, s2.j, s2.f, s1.b, s2.b, SAME, S, B):
        return 1
    if s2.c == next_channel(s1.c, N) and transition_feasible(variant, s1.j, s2.j, s2.f, s1.b, s2.b, NEXT, S, B):
        return 1
    return 0


class SingleRadioModelBuilder:
    """단일 라디오 시나리오의 상태 공간과 전이 행렬 구성기"""

    def __init__(self, cfg: ScenarioConfig):
        if cfg.is_parallel:
            raise InvalidModeError("SingleRadioModelBuilder 는 단일 라디오 시나리오만 처리합니다.")
        self.cfg = cfg
        self.variant = cfg.algorithm
        self.modes = mode_sets(cfg.algorithm, cfg.S)
        self.pu_table = pu_transition_table(cfg.N, cfg.traffic)
        self._move_cache: Dict[Tuple[int, int, int, int], List[Tuple[int, int, int, str, float]]] = {}

    def initial_state(self) -> SingleRadioState:
        return SingleRadioState(I=(0,) * self.cfg.N, f=0, j=0, b=0, c=1)

    def su_moves(self, f1: int, j1: int, b1: int, pu_present: int) -> List[Tuple[int, int, int, str, float]]:
        """
        SU 하위 상태에서 가능한 (f2, j2, b2, 이동, U·Pr2·Pr3) 목록

        Args:
            f1, j1, b1: 현재 SU 하위 상태
            pu_present: 현재 채널의 다음 슬롯 점유 여부

        Returns:
            확률이 양수인 이동 목록
        """
        key = (f1, j1, b1, pu_present)
        cached = self._move_cache.get(key)
        if cached is not None:
            return cached

        cfg = self.cfg
        moves = []
        buffer_levels = sorted({0, max(b1 - 1, 0), b1, min(b1 + 1, cfg.B)})
        for f2 in (0, 1):
            p2 = su_traffic_transition_prob(f1, f2, cfg.traffic)
            if p2 <= 0.0:
                continue
            for j2 in sorted(self.modes.gamma):
                for b2 in buffer_levels:
                    for move in (SAME, NEXT):
                        if not transition_feasible(self.variant, j1, j2, f2, b1, b2, move, cfg.S, cfg.B):
                            continue
                        p3 = sensing_outcome_prob(
                            self.variant, j1, j2, pu_present, move == SAME, cfg.sensing, cfg.S)
                        if p3 > 0.0:
                            moves.append((f2, j2, b2, move, p2 * p3))
        self._move_cache[key] = moves
        return moves

    def successors(self, state: SingleRadioState) -> Dict[SingleRadioState, float]:
        """상태 θ1 에서 확률이 양수인 모든 θ2 와 Λ(θ1, θ2)"""
        out: Dict[SingleRadioState, float] = {}
        N = self.cfg.N
        moved = next_channel(state.c, N)
        for I2, p1 in self.pu_table[state.I]:
            x = I2[state.c - 1]
            for f2, j2, b2, move, p in self.su_moves(state.f, state.j, state.b, x):
                target = SingleRadioState(I2, f2, j2, b2, state.c if move == SAME else moved)
                out[target] = out.get(target, 0.0) + p1 * p
        return out

    def build(self, state_cap: Optional[int] = None) -> TransitionModel:
        logger.info(f"단일 라디오 모델 구성: {self.variant.value}, N={self.cfg.N}, S={self.cfg.S}, B={self.cfg.B}")
        return build_reachable_model(
            self.initial_state(),
            self.successors,
            sort_key=lambda s: (s.c, s.j, s.b, s.f, s.I),
            scenario=self.cfg,
            state_cap=state_cap,
        )


def enumerate_states(cfg: ScenarioConfig, state_cap: Optional[int] = None) -> List[SingleRadioState]:
    """초기 상태에서 도달 가능한 상태 집합 Θ (결정적 순서)"""
    return build_kernel(cfg, state_cap).states


def build_kernel(cfg: ScenarioConfig, state_cap: Optional[int] = None) -> TransitionModel:
    """
    전이 행렬 Λ(θ1, θ2) = U · Pr1 · Pr2 · Pr3

    Args:
        cfg: 단일 라디오 시나리오
        state_cap: 상태 수 상한 (기본값: config.STATE_CAP)

    Returns:
        TransitionModel (행 합이 1 임이 검증됨)
    """
    return SingleRadioModelBuilder(cfg).build(state_cap or config.STATE_CAP)


def _transmission_weights(model: TransitionModel, cfg: ScenarioConfig) -> Tuple[np.ndarray, np.ndarray]:
    """전송 모드 상태별 (다음 슬롯 빈 채널 확률, 점유 확률)"""
    t = cfg.traffic
    gamma_s = mode_sets(cfg.algorithm, cfg.S).gamma_s
    success = np.zeros(model.size)
    collision = np.zeros(model.size)
    for k, state in enumerate(model.states):
        if state.j not in gamma_s:
            continue
        if state.I[state.c - 1]:
            success[k] = t.p_pd
            collision[k] = 1.0 - t.p_pd
        else:
            success[k] = 1.0 - t.p_pa
            collision[k] = t.p_pa
    return success, collision


def throughput(model: TransitionModel, pi, cfg: Optional[ScenarioConfig] = None) -> float:
    """
    SU 처리량 R [bps]

    전송 모드 상태에서 다음 슬롯에 현재 채널이 비어 있을 확률을 정상분포로 가중 합산합니다.
    """
    cfg = cfg or model.scenario
    vector = stationary_vector(pi, model.size)
    success, _ = _transmission_weights(model, cfg)
    return cfg.sensing.W * cfg.sensing.transmit_fraction * float(vector @ success)


def collision_rate(model: TransitionModel, pi, cfg: Optional[ScenarioConfig] = None) -> float:
    """SU-PU 충돌률 G (슬롯당 충돌 수)"""
    cfg = cfg or model.scenario
    vector = stationary_vector(pi, model.size)
    _, collision = _transmission_weights(model, cfg)
    return float(vector @ collision)


def mode_occupancy(model: TransitionModel, pi) -> Dict[str, float]:
    """정상 상태에서 각 모드에 머무는 비율 (idle, stage_k, quiet, presensing)"""
    cfg = model.scenario
    vector = stationary_vector(pi, model.size)
    modes = mode_sets(cfg.algorithm, cfg.S)
    names = {0: 'idle'}
    names.update({k: f'stage_{k}' for k in modes.gamma_s})
    if modes.quiet is not None:
        names[modes.quiet] = 'quiet'
    if modes.presensing is not None:
        names[modes.presensing] = 'presensing'
    occupancy = {name: 0.0 for name in names.values()}
    for k, state in enumerate(model.states):
        occupancy[names[state.j]] += float(vector[k])
    return occupancy


def analyze(cfg: ScenarioConfig, solver=None) -> MetricsReport:
    """전이 행렬 구성부터 R, G 계산까지 한 번에 수행"""
    from stationary import solve_stationary

    model = build_kernel(cfg)
    stationary = (solver or solve_stationary)(model)
    R = throughput(model, stationary, cfg)
    G = collision_rate(model, stationary, cfg)
    return MetricsReport.from_rates(
        cfg, R, G, state_count=model.size, solve_residual=stationary.residual)
