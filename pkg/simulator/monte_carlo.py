"""
몬테카를로 시뮬레이터
슬롯 단위로 PU 채널, SU 프레임 발생, 센싱 결과를 직접 샘플링하여 R, G 를 추정합니다.
분석 모델의 전이 행렬 코드와는 독립적으로 알고리즘 규칙을 구현합니다.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

import config
from core.exceptions import ParameterError, SimulationError
from core.params import Algorithm, ScenarioConfig

logger = logging.getLogger(__name__)

# 한 번에 미리 뽑아 두는 슬롯 수
_BLOCK_SLOTS = 65536


@dataclass(frozen=True)
class SimConfig:
    """시뮬레이션 설정 (slots 는 워밍업 포함 전체 슬롯 수)"""

    scenario: ScenarioConfig
    slots: int = config.DEFAULT_SLOTS
    warmup_slots: int = config.DEFAULT_WARMUP_SLOTS
    seed: int = config.DEFAULT_SEED
    replications: int = config.DEFAULT_REPLICATIONS

    def __post_init__(self):
        if self.slots <= 0:
            raise ParameterError(f"slots={self.slots} 는 양수여야 합니다.")
        if not 0 <= self.warmup_slots < self.slots:
            raise ParameterError(f"warmup_slots={self.warmup_slots} 는 0 이상 slots 미만이어야 합니다.")
        if self.replications < 1:
            raise ParameterError(f"replications={self.replications} 는 1 이상이어야 합니다.")
        if self.seed < 0:
            raise ParameterError(f"seed={self.seed} 는 음수일 수 없습니다.")

    @property
    def measured_slots(self) -> int:
        return self.slots - self.warmup_slots


@dataclass
class ReplicationTally:
    """복제 한 번의 측정 구간 집계"""

    measured_slots: int = 0
    successes: int = 0
    collisions: int = 0
    frames_generated: int = 0
    frames_dropped: int = 0
    frames_in_system_start: int = 0
    frames_in_system_end: int = 0
    busy_channel_slots: int = 0
    channels: int = 1

    @property
    def frames_delivered(self) -> int:
        return self.successes

    @property
    def frames_collided(self) -> int:
        return self.collisions

    def conservation_gap(self) -> int:
        """시작 + 생성 - (전달 + 충돌 + 폐기 + 종료) (항상 0)"""
        return (self.frames_in_system_start + self.frames_generated
                - self.successes - self.collisions - self.frames_dropped - self.frames_in_system_end)


@dataclass
class SimMetrics:
    """복제 평균 지표와 표준오차"""

    scenario: ScenarioConfig
    R_hat: float
    R_se: float
    G_hat: float
    G_se: float
    delivery_rate: float
    delivery_rate_se: float
    loss_rate: float
    loss_rate_se: float
    pu_busy_fraction: float
    frames_generated: int
    frames_delivered: int
    frames_collided: int
    frames_dropped: int
    frames_in_system_start: int
    frames_in_system_end: int
    replications: List[ReplicationTally] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'R_hat': self.R_hat, 'R_se': self.R_se, 'G_hat': self.G_hat, 'G_se': self.G_se,
            'delivery_rate': self.delivery_rate, 'delivery_rate_se': self.delivery_rate_se,
            'loss_rate': self.loss_rate, 'loss_rate_se': self.loss_rate_se,
            'pu_busy_fraction': self.pu_busy_fraction,
            'frames_generated': self.frames_generated, 'frames_delivered': self.frames_delivered,
            'frames_collided': self.frames_collided, 'frames_dropped': self.frames_dropped,
            'frames_in_system_start': self.frames_in_system_start,
            'frames_in_system_end': self.frames_in_system_end,
            'replication_count': len(self.replications),
        }


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """(seed, 복제 번호) 로부터 독립 스트림 생성"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replication,))))


def _uniform_blocks(rng: np.random.Generator, slots: int, width: int):
    """슬롯마다 width 개의 균등 난수 (블록 단위로 미리 생성)"""
    remaining = slots
    while remaining > 0:
        size = min(_BLOCK_SLOTS, remaining)
        block = rng.random((size, width)).tolist()
        remaining -= size
        yield from block


def _buffer_frame(b: int, frame: int, B: int) -> Tuple[int, int]:
    """버퍼 모드 진입 시 새 프레임 저장. (새 버퍼 수, 폐기 수)"""
    if not frame:
        return b, 0
    if b < B:
        return b + 1, 0
    return b, 1


def single_radio_step(algorithm: Algorithm, S: int, B: int, N: int,
                      j: int, b: int, c: int, alarm: bool, frame: int) -> Tuple[int, int, int, int]:
    """
    단일 라디오 SU 한 슬롯의 모드 결정

    Args:
        algorithm: 단일 라디오 알고리즘
        S, B, N: 단계 수, 버퍼 크기, 채널 수
        j, b, c: 현재 모드, 버퍼 프레임 수, 채널 (0-기반)
        alarm: 이번 슬롯 센싱이 PU 를 보고했는지
        frame: 다음 슬롯 프레임 발생 여부

    Returns:
        (다음 모드, 다음 버퍼, 다음 채널, 폐기 프레임 수)
    """
    quiet, presensing = S + 1, S + 2
    following = (c + 1) % N
    has_work = frame or b > 0
    consumed = b if frame else b - 1

    if j == 0:
        if not frame:
            return 0, 0, c, 0
        if algorithm.has_presensing:
            b_next, dropped = _buffer_frame(b, frame, B)
            return presensing, b_next, c, dropped
        return 1, 0, c, 0

    if j <= S:
        if not has_work:
            return 0, 0, c, 0
        if not alarm:
            return 1, consumed, c, 0
        if j < S:
            return j + 1, consumed, c, 0
        if algorithm is Algorithm.P0Q0:
            return 1, 0, following, 0
        b_next, dropped = _buffer_frame(b, frame, B)
        if algorithm is Algorithm.P1Q0:
            return presensing, b_next, following, dropped
        return quiet, b_next, c, dropped

    # 정숙 또는 사전 센싱 모드
    if not has_work:
        return 0, 0, c, 0
    if not alarm:
        return 1, consumed, c, 0
    if algorithm is Algorithm.P0Q1:
        return 1, consumed, following, 0
    b_next, dropped = _buffer_frame(b, frame, B)
    return presensing, b_next, following, dropped


def _run_single_radio(scenario: ScenarioConfig, slots: int, warmup: int, rng: np.random.Generator) -> ReplicationTally:
    t, p = scenario.traffic, scenario.sensing
    S, N, B, algorithm = scenario.S, scenario.N, scenario.B, scenario.algorithm
    tally = ReplicationTally(measured_slots=slots - warmup, channels=N)
    occupied = [0] * N
    frame = j = b = c = 0

    for slot, draws in enumerate(_uniform_blocks(rng, slots, N + 2)):
        measuring = slot >= warmup
        if slot == warmup:
            tally.frames_in_system_start = b + (1 if 1 <= j <= S else 0)

        for x in range(N):
            if occupied[x]:
                occupied[x] = 0 if draws[x] < t.p_pd else 1
            else:
                occupied[x] = 1 if draws[x] < t.p_pa else 0
        busy = occupied[c]
        if measuring:
            tally.busy_channel_slots += sum(occupied)

        alarm = False
        if 1 <= j <= S:
            if measuring:
                if busy:
                    tally.collisions += 1
                else:
                    tally.successes += 1
            alarm = draws[N] < (1.0 - p.p_ms if busy else p.p_fs)
        elif j > S:
            alarm = draws[N] < (1.0 - p.p_mt if busy else p.p_ft)

        if frame:
            frame = 0 if draws[N + 1] < t.p_sd else 1
        else:
            frame = 1 if draws[N + 1] < t.p_sa else 0

        j, b, c, dropped = single_radio_step(algorithm, S, B, N, j, b, c, alarm, frame)
        if measuring:
            tally.frames_generated += frame
            tally.frames_dropped += dropped

    tally.frames_in_system_end = b + (1 if 1 <= j <= S else 0)
    return tally


def parallel_radio_step(S: int, B: int, J: List[int], b: int, alarms: List[bool],
                        frames: List[int]) -> Tuple[List[int], int, int]:
    """
    병렬 라디오 한 슬롯의 모드 결정

    Args:
        S, B: 단계 수, 버퍼 크기
        J: 라디오별 현재 모드
        b: 버퍼 프레임 수
        alarms: 라디오별 이번 슬롯 센싱 경보 (센싱하지 않은 라디오는 False)
        frames: 라디오별 다음 슬롯 프레임 발생 여부

    Returns:
        (다음 모드 목록, 다음 버퍼, 폐기 프레임 수)
    """
    quiet = S + 1
    M = len(J)
    goes_quiet = [alarms[m] and (J[m] == S or J[m] == quiet) for m in range(M)]
    available = [m for m in range(M) if not goes_quiet[m]]
    pending = b + sum(frames)
    assigned = min(pending, len(available))

    J_next = [quiet if goes_quiet[m] else 0 for m in range(M)]
    for m in available[:assigned]:
        if alarms[m] and 1 <= J[m] <= S - 1:
            J_next[m] = J[m] + 1
        else:
            J_next[m] = 1
    b_next = min(B, pending - assigned)
    return J_next, b_next, pending - assigned - b_next


def _run_parallel_radio(scenario: ScenarioConfig, slots: int, warmup: int, rng: np.random.Generator) -> ReplicationTally:
    t, p = scenario.traffic, scenario.sensing
    S, N, M, B = scenario.S, scenario.N, scenario.M, scenario.B
    quiet = S + 1
    tally = ReplicationTally(measured_slots=slots - warmup, channels=N)
    occupied = [0] * N
    frames = [0] * M
    J = [0] * M
    b = 0

    for slot, draws in enumerate(_uniform_blocks(rng, slots, N + 2 * M)):
        measuring = slot >= warmup
        if slot == warmup:
            tally.frames_in_system_start = b + sum(1 for j in J if 1 <= j <= S)

        for x in range(N):
            if occupied[x]:
                occupied[x] = 0 if draws[x] < t.p_pd else 1
            else:
                occupied[x] = 1 if draws[x] < t.p_pa else 0
        if measuring:
            tally.busy_channel_slots += sum(occupied)

        alarms = [False] * M
        for m in range(M):
            busy = occupied[m]
            u = draws[N + m]
            if 1 <= J[m] <= S:
                if measuring:
                    if busy:
                        tally.collisions += 1
                    else:
                        tally.successes += 1
                alarms[m] = u < (1.0 - p.p_ms if busy else p.p_fs)
            elif J[m] == quiet:
                alarms[m] = u < (1.0 - p.p_mt if busy else p.p_ft)

        previous = frames[-1]
        next_frames = []
        for m in range(M):
            u = draws[N + M + m]
            if previous:
                previous = 0 if u < t.p_sd else 1
            else:
                previous = 1 if u < t.p_sa else 0
            next_frames.append(previous)
        frames = next_frames

        J, b, dropped = parallel_radio_step(S, B, J, b, alarms, frames)
        if measuring:
            tally.frames_generated += sum(frames)
            tally.frames_dropped += dropped

    tally.frames_in_system_end = b + sum(1 for j in J if 1 <= j <= S)
    return tally


def run_replication(sim: SimConfig, replication: int) -> ReplicationTally:
    """복제 한 번 실행 (프로세스 풀에서 호출)"""
    rng = replication_rng(sim.seed, replication)
    runner = _run_parallel_radio if sim.scenario.is_parallel else _run_single_radio
    return runner(sim.scenario, sim.slots, sim.warmup_slots, rng)


def _mean_and_se(values: List[float]) -> Tuple[float, float]:
    array = np.asarray(values, dtype=float)
    if array.size < 2:
        return float(array.mean()), float('nan')
    return float(array.mean()), float(array.std(ddof=1) / math.sqrt(array.size))


def summarize(scenario: ScenarioConfig, tallies: List[ReplicationTally]) -> SimMetrics:
    """
    복제 집계를 평균과 표준오차로 요약

    Raises:
        SimulationError: 프레임 보존 식이 맞지 않는 복제가 있는 경우
    """
    for r, tally in enumerate(tallies):
        gap = tally.conservation_gap()
        if gap != 0:
            logger.error(f"복제 {r}: 프레임 보존 불일치 {gap}")
            raise SimulationError(r, gap)

    W = scenario.sensing.W
    fraction = scenario.sensing.transmit_fraction
    channels = scenario.N if scenario.is_parallel else 1

    R_values = [W * fraction * tally.successes / tally.measured_slots for tally in tallies]
    G_values = [tally.collisions / tally.measured_slots for tally in tallies]
    delivery = [R / (channels * W) if W > 0 else 0.0 for R in R_values]
    loss = [1.0 - tally.successes / tally.frames_generated if tally.frames_generated else 0.0
            for tally in tallies]

    R_hat, R_se = _mean_and_se(R_values)
    G_hat, G_se = _mean_and_se(G_values)
    delivery_rate, delivery_rate_se = _mean_and_se(delivery)
    loss_rate, loss_rate_se = _mean_and_se(loss)
    busy = sum(t.busy_channel_slots for t in tallies) / sum(t.measured_slots * t.channels for t in tallies)

    return SimMetrics(
        scenario=scenario,
        R_hat=R_hat, R_se=R_se, G_hat=G_hat, G_se=G_se,
        delivery_rate=delivery_rate, delivery_rate_se=delivery_rate_se,
        loss_rate=loss_rate, loss_rate_se=loss_rate_se,
        pu_busy_fraction=busy,
        frames_generated=sum(t.frames_generated for t in tallies),
        frames_delivered=sum(t.frames_delivered for t in tallies),
        frames_collided=sum(t.frames_collided for t in tallies),
        frames_dropped=sum(t.frames_dropped for t in tallies),
        frames_in_system_start=sum(t.frames_in_system_start for t in tallies),
        frames_in_system_end=sum(t.frames_in_system_end for t in tallies),
        replications=list(tallies),
    )


def simulate(sim: SimConfig, workers: Optional[int] = None) -> SimMetrics:
    """
    몬테카를로 시뮬레이션 실행

    복제 r 은 (seed, r) 에서 파생된 독립 난수 스트림을 사용하므로 실행 순서와 무관하게 결과가 같습니다.

    Args:
        sim: 시뮬레이션 설정
        workers: 프로세스 수 (1 이면 현재 프로세스에서 순차 실행, None 이면 config.MAX_WORKERS)

    Returns:
        SimMetrics

    Raises:
        SimulationError: 프레임 보존 식이 맞지 않는 복제가 있는 경우
    """
    scenario = sim.scenario
    label = scenario.name or scenario.algorithm.value
    logger.info(f"시뮬레이션 시작: {label}, 슬롯 {sim.slots}, 복제 {sim.replications}회, seed={sim.seed}")

    if workers is None:
        workers = config.MAX_WORKERS
    indices = list(range(sim.replications))
    if workers == 1 or sim.replications == 1:
        tallies = [run_replication(sim, r) for r in indices]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            tallies = list(executor.map(run_replication, [sim] * len(indices), indices))

    metrics = summarize(scenario, tallies)
    logger.info(f"시뮬레이션 완료: R={metrics.R_hat:.6g}±{metrics.R_se:.3g} bps, G={metrics.G_hat:.6g}±{metrics.G_se:.3g}")
    return metrics
