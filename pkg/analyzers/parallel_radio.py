"""
병렬 라디오 분석 모델
M = N 개의 라디오가 각자 채널 하나씩을 맡는 구조의 상태 전이와 지표를 계산합니다.

상태 ψ = (I, F, J, b)
    I: 이전 슬롯의 PU 점유 벡터, F: 라디오별 프레임 발생 벡터, J: 라디오별 모드, b: 버퍼 프레임 수

모드 J(m): 0 = 유휴, 1..S = 센싱 단계, S+1 = 정숙
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

import config
from core.exceptions import InputShapeError, InvalidModeError
from core.kernels import (
    all_occupancies,
    alarm_prob,
    pu_transition_prob,
    stationary_vector,
    su_traffic_transition_prob,
)
from core.metrics import MetricsReport
from core.params import ChannelOccupancy, ScenarioConfig, SensingParams, TrafficParams

from .transition_model import TransitionModel, build_reachable_model

logger = logging.getLogger(__name__)

# 라디오 역할
ACTIVE = 'active'
IDLE = 'idle'
QUIET = 'quiet'


class ParallelRadioState(NamedTuple):
    """병렬 라디오 시스템 상태 ψ"""

    I: ChannelOccupancy
    F: Tuple[int, ...]
    J: Tuple[int, ...]
    b: int


@dataclass(frozen=True)
class FrameAccounting:
    """
    슬롯 하나의 프레임 분배 결과

    Attributes:
        F_N: 이번 슬롯에 새로 발생한 프레임 수
        F_T: 전송 대기 프레임 총수 (이전 버퍼 + F_N)
        M_F: 정숙 모드가 아닌 라디오 수
        M_A: 전송에 배정된 라디오 수 min(F_T, M_F)
        omega_A: 배정된 라디오 (1-기반, 오름차순)
        omega_I: 배정되지 않은 비정숙 라디오
        omega_Q: 정숙 모드 라디오
        b_next: 분배 후 버퍼 프레임 수
    """

    F_N: int
    F_T: int
    M_F: int
    M_A: int
    omega_A: Tuple[int, ...]
    omega_I: Tuple[int, ...]
    omega_Q: Tuple[int, ...]
    b_next: int

    def role(self, m: int) -> str:
        if m in self.omega_A:
            return ACTIVE
        if m in self.omega_Q:
            return QUIET
        return IDLE


def frame_accounting(state: ParallelRadioState, b_prev: int, cfg: ScenarioConfig) -> FrameAccounting:
    """
    상태의 프레임 발생 벡터와 모드로부터 라디오 배정을 계산

    비정숙 라디오 중 인덱스가 낮은 순서로 프레임을 배정하고, 남는 프레임은 버퍼(최대 B)에 저장합니다.

    Args:
        state: 현재 상태 (F, J 사용)
        b_prev: 이전 슬롯의 버퍼 프레임 수
        cfg: 병렬 시나리오

    Returns:
        FrameAccounting
    """
    M = cfg.M
    if len(state.F) != M or len(state.J) != M:
        raise InputShapeError(f"F, J 길이는 M={M} 이어야 합니다: F={state.F}, J={state.J}")
    quiet = cfg.S + 1
    F_N = sum(state.F)
    F_T = b_prev + F_N
    non_quiet = tuple(m for m in range(1, M + 1) if state.J[m - 1] != quiet)
    omega_Q = tuple(m for m in range(1, M + 1) if state.J[m - 1] == quiet)
    M_F = len(non_quiet)
    M_A = min(F_T, M_F)
    b_next = 0 if M_F >= F_T else min(cfg.B, F_T - M_A)
    return FrameAccounting(
        F_N=F_N,
        F_T=F_T,
        M_F=M_F,
        M_A=M_A,
        omega_A=non_quiet[:M_A],
        omega_I=non_quiet[M_A:],
        omega_Q=omega_Q,
        b_next=b_next,
    )


def accounting_from_modes(state: ParallelRadioState, cfg: ScenarioConfig) -> FrameAccounting:
    """
    도달 가능한 상태의 모드 벡터에서 라디오 배정을 복원

    배정된 라디오는 센싱 단계, 배정되지 않은 비정숙 라디오는 유휴 모드이므로 J 만으로 역할이 정해집니다.
    F_T 는 폐기된 프레임을 제외한 M_A + b 입니다.
    """
    S = cfg.S
    omega_A = tuple(m for m, j in enumerate(state.J, start=1) if 1 <= j <= S)
    omega_I = tuple(m for m, j in enumerate(state.J, start=1) if j == 0)
    omega_Q = tuple(m for m, j in enumerate(state.J, start=1) if j == S + 1)
    M_A = len(omega_A)
    return FrameAccounting(
        F_N=sum(state.F),
        F_T=M_A + state.b,
        M_F=M_A + len(omega_I),
        M_A=M_A,
        omega_A=omega_A,
        omega_I=omega_I,
        omega_Q=omega_Q,
        b_next=state.b,
    )


def su_traffic_prob_parallel(F1: Sequence[int], F2: Sequence[int], t: TrafficParams) -> float:
    """
    라디오 간에 이어지는 SU 프레임 체인 전이 확률

    F2(1) 은 F1(M) 에, F2(m+1) 은 F2(m) 에 조건부입니다.
    """
    if len(F1) != len(F2):
        raise InputShapeError(f"프레임 벡터 길이가 다릅니다: {len(F1)} != {len(F2)}")
    probability = su_traffic_transition_prob(F1[-1], F2[0], t)
    for previous, current in zip(F2, F2[1:]):
        probability *= su_traffic_transition_prob(previous, current, t)
    return probability


def active_radio_factor(j1: int, j2: int, pu_present: int, p: SensingParams, S: int) -> float:
    """전송 라디오의 센싱 결과 확률"""
    if not 1 <= j1 <= S:
        raise InvalidModeError(f"전송 라디오의 모드는 1..{S} 이어야 합니다: {j1}")
    if j2 == 0 and j1 <= S - 1:
        return 1.0
    alarm = alarm_prob(p.p_fs, p.p_ms, pu_present)
    if j2 == j1 + 1:
        return alarm
    if j2 == 1 or (j2 == 0 and j1 == S):
        return 1.0 - alarm
    return 0.0


def quiet_radio_factor(j2: int, pu_present: int, p: SensingParams, S: int) -> float:
    """정숙 라디오의 센싱 결과 확률"""
    alarm = alarm_prob(p.p_ft, p.p_mt, pu_present)
    if j2 == S + 1:
        return alarm
    if j2 in (0, 1):
        return 1.0 - alarm
    return 0.0


def idle_radio_factor(j2: int) -> float:
    """유휴 라디오는 센싱하지 않음"""
    return 1.0 if j2 in (0, 1) else 0.0


def sensing_outcome_prob_parallel(
    state1: ParallelRadioState,
    state2: ParallelRadioState,
    acct1: FrameAccounting,
    p: SensingParams,
    S: int,
) -> float:
    """
    라디오별 센싱 결과 확률의 곱

    Args:
        state1: 현재 상태
        state2: 다음 상태 (I2 가 각 라디오 채널의 점유 여부)
        acct1: 현재 상태의 프레임 분배 (라디오 역할 결정)
        p: 센싱 파라미터
        S: 센싱 단계 수
    """
    probability = 1.0
    for m in range(1, len(state1.J) + 1):
        j1, j2, x = state1.J[m - 1], state2.J[m - 1], state2.I[m - 1]
        role = acct1.role(m)
        if role == ACTIVE:
            probability *= active_radio_factor(j1, j2, x, p, S)
        elif role == QUIET:
            probability *= quiet_radio_factor(j2, x, p, S)
        else:
            probability *= idle_radio_factor(j2)
        if probability == 0.0:
            return 0.0
    return probability


def feasibility_parallel(state1: ParallelRadioState, state2: ParallelRadioState, cfg: ScenarioConfig) -> int:
    """
    병렬 구조의 실현 가능성 U(ψ1, ψ2) ∈ {0, 1}

    ψ2 의 프레임 분배가 버퍼 규칙과 맞고, 배정된 라디오는 센싱 단계, 나머지 비정숙 라디오는 유휴 모드여야 합니다.
    """
    acct2 = frame_accounting(state2, state1.b, cfg)
    if acct2.F_T < acct2.M_A:
        return 0
    if state2.b != min(acct2.F_T - acct2.M_A, cfg.B):
        return 0
    for m in acct2.omega_A:
        if not 1 <= state2.J[m - 1] <= cfg.S:
            return 0
    for m in acct2.omega_I:
        if state2.J[m - 1] != 0:
            return 0
    return 1


class ParallelRadioModelBuilder:
    """병렬 라디오 시나리오의 상태 공간과 전이 행렬 구성기"""

    def __init__(self, cfg: ScenarioConfig):
        if not cfg.is_parallel:
            raise InvalidModeError("ParallelRadioModelBuilder 는 병렬 시나리오만 처리합니다.")
        self.cfg = cfg
        t = cfg.traffic
        self._pu_branches = {
            0: [(x, p) for x, p in ((0, 1.0 - t.p_pa), (1, t.p_pa)) if p > 0.0],
            1: [(x, p) for x, p in ((0, t.p_pd), (1, 1.0 - t.p_pd)) if p > 0.0],
        }
        self._frame_table = self._build_frame_table()

    def _build_frame_table(self) -> Dict[Tuple[int, ...], List[Tuple[Tuple[int, ...], float]]]:
        table = {}
        vectors = all_occupancies(self.cfg.M)
        for F1 in vectors:
            row = []
            for F2 in vectors:
                p = su_traffic_prob_parallel(F1, F2, self.cfg.traffic)
                if p > 0.0:
                    row.append((F2, p))
            table[F1] = row
        return table

    def initial_state(self) -> ParallelRadioState:
        M = self.cfg.M
        return ParallelRadioState(I=(0,) * self.cfg.N, F=(0,) * M, J=(0,) * M, b=0)

    def _radio_branches(self, m: int, state: ParallelRadioState, acct: FrameAccounting):
        """라디오 m 의 (다음 점유, 경보 여부, 확률) 분기"""
        p = self.cfg.sensing
        role = acct.role(m)
        branches = []
        for x, p1 in self._pu_branches[state.I[m - 1]]:
            if role == IDLE:
                branches.append((x, False, p1))
                continue
            if role == ACTIVE:
                alarm = alarm_prob(p.p_fs, p.p_ms, x)
            else:
                alarm = alarm_prob(p.p_ft, p.p_mt, x)
            if alarm > 0.0:
                branches.append((x, True, p1 * alarm))
            if alarm < 1.0:
                branches.append((x, False, p1 * (1.0 - alarm)))
        return branches

    def successors(self, state: ParallelRadioState) -> Dict[ParallelRadioState, float]:
        """
        상태 ψ1 의 다음 상태 분포

        라디오별 (점유, 경보) 분기와 프레임 체인을 조합해 ψ2 를 구성하고,
        각 조합의 Pr1·Pr2·Pr3 곱을 누적합니다.
        """
        cfg = self.cfg
        S, M, B = cfg.S, cfg.M, cfg.B
        quiet = S + 1
        acct = accounting_from_modes(state, cfg)

        roles = [acct.role(m) for m in range(1, M + 1)]
        branch_lists = [self._radio_branches(m, state, acct) for m in range(1, M + 1)]
        out: Dict[ParallelRadioState, float] = {}

        for combo in product(*branch_lists):
            I2 = tuple(branch[0] for branch in combo)
            p_radios = 1.0
            quiet_next = []
            for m, (x, alarm, p) in enumerate(combo, start=1):
                p_radios *= p
                role = roles[m - 1]
                j1 = state.J[m - 1]
                if alarm and ((role == ACTIVE and j1 == S) or role == QUIET):
                    quiet_next.append(m)
            non_quiet = [m for m in range(1, M + 1) if m not in quiet_next]

            for F2, p2 in self._frame_table[state.F]:
                F_T = state.b + sum(F2)
                M_A = min(F_T, len(non_quiet))
                needed = non_quiet[:M_A]
                J2 = [quiet] * M
                for m in non_quiet:
                    J2[m - 1] = 0
                for m in needed:
                    x, alarm, _ = combo[m - 1]
                    j1 = state.J[m - 1]
                    if roles[m - 1] == ACTIVE and alarm and j1 <= S - 1:
                        J2[m - 1] = j1 + 1
                    else:
                        J2[m - 1] = 1
                b2 = min(B, F_T - M_A)
                target = ParallelRadioState(I2, F2, tuple(J2), b2)
                out[target] = out.get(target, 0.0) + p_radios * p2
        return out

    def transition_prob(self, state1: ParallelRadioState, state2: ParallelRadioState) -> float:
        """곱 형태 Λ(ψ1, ψ2) = U · Pr1 · Pr2 · Pr3"""
        acct1 = accounting_from_modes(state1, self.cfg)
        if not feasibility_parallel(state1, state2, self.cfg):
            return 0.0
        return (pu_transition_prob(state1.I, state2.I, self.cfg.traffic)
                * su_traffic_prob_parallel(state1.F, state2.F, self.cfg.traffic)
                * sensing_outcome_prob_parallel(state1, state2, acct1, self.cfg.sensing, self.cfg.S))

    def build(self, state_cap: Optional[int] = None) -> TransitionModel:
        cfg = self.cfg
        logger.info(f"병렬 라디오 모델 구성: N=M={cfg.N}, S={cfg.S}, B={cfg.B}")
        return build_reachable_model(
            self.initial_state(),
            self.successors,
            sort_key=lambda s: (s.b, s.J, s.F, s.I),
            scenario=cfg,
            state_cap=state_cap,
        )


def enumerate_states_parallel(cfg: ScenarioConfig, state_cap: Optional[int] = None) -> List[ParallelRadioState]:
    """초기 상태에서 도달 가능한 상태 집합 Ψ"""
    return build_kernel_parallel(cfg, state_cap).states


def build_kernel_parallel(cfg: ScenarioConfig, state_cap: Optional[int] = None) -> TransitionModel:
    """병렬 구조 전이 행렬 (행 합이 1 임이 검증됨)"""
    return ParallelRadioModelBuilder(cfg).build(state_cap or config.STATE_CAP)


def _transmission_weights(model: TransitionModel, cfg: ScenarioConfig) -> Tuple[np.ndarray, np.ndarray]:
    """상태별 라디오 합산 (다음 슬롯 빈 채널 확률, 점유 확률)"""
    t = cfg.traffic
    S = cfg.S
    success = np.zeros(model.size)
    collision = np.zeros(model.size)
    for k, state in enumerate(model.states):
        for m, j in enumerate(state.J):
            if not 1 <= j <= S:
                continue
            if state.I[m]:
                success[k] += t.p_pd
                collision[k] += 1.0 - t.p_pd
            else:
                success[k] += 1.0 - t.p_pa
                collision[k] += t.p_pa
    return success, collision


def throughput_parallel(model: TransitionModel, pi, cfg: Optional[ScenarioConfig] = None) -> float:
    """병렬 구조 SU 처리량 R [bps] (모든 라디오 합)"""
    cfg = cfg or model.scenario
    success, _ = _transmission_weights(model, cfg)
    return cfg.sensing.W * cfg.sensing.transmit_fraction * float(stationary_vector(pi, model.size) @ success)


def collision_rate_parallel(model: TransitionModel, pi, cfg: Optional[ScenarioConfig] = None) -> float:
    """병렬 구조 충돌률 G (모든 채널 합)"""
    cfg = cfg or model.scenario
    _, collision = _transmission_weights(model, cfg)
    return float(stationary_vector(pi, model.size) @ collision)


def mode_occupancy_parallel(model: TransitionModel, pi) -> Dict[str, float]:
    """라디오 평균 모드 점유 비율 (idle, stage_k, quiet)"""
    cfg = model.scenario
    vector = stationary_vector(pi, model.size)
    names = {0: 'idle', cfg.S + 1: 'quiet'}
    names.update({k: f'stage_{k}' for k in range(1, cfg.S + 1)})
    occupancy = {name: 0.0 for name in names.values()}
    for k, state in enumerate(model.states):
        for j in state.J:
            occupancy[names[j]] += float(vector[k]) / cfg.M
    return occupancy


def analyze_parallel(cfg: ScenarioConfig, solver=None) -> MetricsReport:
    """병렬 구조 전이 행렬 구성부터 R, G 계산까지 한 번에 수행"""
    from stationary import solve_stationary

    model = build_kernel_parallel(cfg)
    stationary = (solver or solve_stationary)(model)
    R = throughput_parallel(model, stationary, cfg)
    G = collision_rate_parallel(model, stationary, cfg)
    return MetricsReport.from_rates(
        cfg, R, G, state_count=model.size, solve_residual=stationary.residual)
