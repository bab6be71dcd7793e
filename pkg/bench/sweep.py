"""
파라미터 스윕
기본 시나리오에서 한 축(S, T_s, B, N, algorithm)을 바꿔 가며 분석/시뮬레이션 결과 행을 만듭니다.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, List, Optional, Tuple

import config
from analyzers import MarkovAnalyzer
from core.exceptions import ConfigError, OsaModelError, UndefinedOccupancyError
from core.kernels import architecture_throughput_bound
from core.params import Algorithm, ScenarioConfig, SensingParams
from detector import sensing_from_detector
from simulator import SimConfig, compare, simulate

logger = logging.getLogger(__name__)

AXES = ('S', 'T_s', 'B', 'N', 'algorithm')

OK = 'ok'
INFEASIBLE = 'infeasible'
FAILED = 'failed'


@dataclass(frozen=True)
class DerivedRules:
    """
    스윕 지점마다 적용하는 파생 규칙

    Attributes:
        recalibrate_p_f: p_ms 를 고정하고 각 T_s 에서 검출기 모델로 p_fs 를 다시 계산
        generated_throughput: 평균 SU 생성 트래픽 [bps] 을 고정하도록 p_sd 를 계산
        derive_long_sensing: 재보정 시 정숙/사전 센싱 오류 확률도 같은 임계값으로 도출
    """

    recalibrate_p_f: bool = False
    generated_throughput: Optional[float] = None
    derive_long_sensing: bool = True
    snr_db: float = config.SNR_DB
    bandwidth: float = config.CHANNEL_BANDWIDTH
    p_m_target: float = config.TARGET_MISDETECTION


@dataclass(frozen=True)
class SweepSpec:
    """스윕 정의"""

    base: ScenarioConfig
    axis: str
    values: Tuple[Any, ...]
    algorithms: Tuple[Algorithm, ...] = ()
    rules: DerivedRules = field(default_factory=DerivedRules)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"스윕 축은 {', '.join(AXES)} 중 하나여야 합니다: {self.axis}", key='axis')
        if not self.values:
            raise ConfigError("스윕 값 목록이 비어 있습니다.", key='values')
        if self.axis == 'algorithm' and self.algorithms:
            raise ConfigError("algorithm 축 스윕에는 algorithms 목록을 함께 쓸 수 없습니다.", key='algorithms')
        if self.rules.generated_throughput is not None and self.rules.generated_throughput <= 0:
            raise ConfigError("generated_throughput 은 양수여야 합니다.", key='generated_throughput')


@dataclass(frozen=True)
class SimulationOptions:
    """분석/시뮬레이션 실행 옵션"""

    analytic: bool = True
    simulate: bool = True
    slots: int = config.DEFAULT_SLOTS
    warmup_slots: int = config.DEFAULT_WARMUP_SLOTS
    replications: int = config.DEFAULT_REPLICATIONS
    seed: int = config.DEFAULT_SEED
    qos_max_loss_rate: float = config.QOS_MAX_LOSS_RATE
    workers: Optional[int] = None


@dataclass(frozen=True)
class SweepPoint:
    """스윕 지점 하나"""

    index: int
    scenario: ScenarioConfig
    axis: str
    axis_value: Any
    status: str = OK
    note: str = ''


@dataclass
class ResultRow:
    """CSV 한 행 (시나리오 파라미터 + 지표)"""

    name: str
    architecture: str
    algorithm: str
    N: int
    M: int
    S: int
    B: int
    p_pa: float
    p_pd: float
    p_sa: float
    p_sd: float
    p_fs: float
    p_ms: float
    p_ft: float
    p_mt: float
    T: float
    T_s: float
    W: float
    axis: str = ''
    axis_value: Any = ''
    status: str = OK
    note: str = ''
    R_analytic: float = math.nan
    G_analytic: float = math.nan
    delivery_rate: float = math.nan
    loss_rate: float = math.nan
    collisions_per_channel: float = math.nan
    throughput_bound: float = math.nan
    state_count: Optional[int] = None
    solve_residual: float = math.nan
    R_sim: float = math.nan
    R_sim_se: float = math.nan
    G_sim: float = math.nan
    G_sim_se: float = math.nan
    sim_delivery_rate: float = math.nan
    sim_loss_rate: float = math.nan
    R_within_3se: Optional[bool] = None
    G_within_3se: Optional[bool] = None
    qos_violation: bool = False
    invariant_ok: bool = True

    @classmethod
    def for_scenario(cls, cfg: ScenarioConfig, axis: str = '', axis_value: Any = '', **extra) -> 'ResultRow':
        t, p = cfg.traffic, cfg.sensing
        return cls(
            name=cfg.name, architecture=cfg.architecture.value, algorithm=cfg.algorithm.value,
            N=cfg.N, M=cfg.M, S=cfg.S, B=cfg.B,
            p_pa=t.p_pa, p_pd=t.p_pd, p_sa=t.p_sa, p_sd=t.p_sd,
            p_fs=p.p_fs, p_ms=p.p_ms, p_ft=p.p_ft, p_mt=p.p_mt, T=p.T, T_s=p.T_s, W=p.W,
            axis=axis, axis_value=axis_value, **extra,
        )

    @property
    def comparison_failed(self) -> bool:
        return self.R_within_3se is False or self.G_within_3se is False

    def to_dict(self) -> dict:
        return asdict(self)


COLUMNS = [f for f in ResultRow.__dataclass_fields__]


def solve_p_sd(p_sa: float, sensing: SensingParams, target: float) -> float:
    """
    평균 생성 트래픽 W (1 - T_s/T) p_sa/(p_sa+p_sd) = target 을 만족하는 p_sd

    Raises:
        ValueError: 해가 [0, 1] 밖인 경우
    """
    if p_sa <= 0:
        raise ValueError("p_sa = 0 이면 생성 트래픽을 맞출 수 없습니다.")
    capacity = sensing.W * sensing.transmit_fraction
    p_sd = p_sa * (capacity / target - 1.0)
    if not 0.0 <= p_sd <= 1.0:
        raise ValueError(f"생성 트래픽 {target:g} bps 를 위한 p_sd={p_sd:.6g} 가 [0, 1] 밖입니다.")
    return p_sd


def _recalibrated_sensing(sensing: SensingParams, T_s: float, rules: DerivedRules) -> SensingParams:
    derived = sensing_from_detector(
        T_s, T=sensing.T, W=sensing.W, snr_db=rules.snr_db,
        bandwidth=rules.bandwidth, p_m_target=rules.p_m_target)
    if not rules.derive_long_sensing:
        derived = replace(derived, p_ft=sensing.p_ft, p_mt=sensing.p_mt)
    return derived


def _point_scenario(base: ScenarioConfig, algorithm: Algorithm, axis: str, value, rules: DerivedRules):
    """(시나리오, 메모) 생성. 메모는 실효값 조정 내용"""
    notes = []
    if axis == 'algorithm':
        algorithm = Algorithm(value)
    changes = {}
    if algorithm is not base.algorithm:
        changes['algorithm'] = algorithm
    if axis == 'S':
        changes['S'] = int(value)
    elif axis == 'N':
        changes['N'] = int(value)
    elif axis == 'B':
        changes['B'] = int(value)
    if algorithm is Algorithm.P0Q0 and changes.get('B', base.B) != 0:
        notes.append(f"P0Q0 는 버퍼가 없으므로 B={changes.get('B', base.B)} 대신 B=0 으로 평가")
        changes['B'] = 0

    sensing = base.sensing
    if axis == 'T_s':
        sensing = replace(sensing, T_s=float(value))
    if rules.recalibrate_p_f and sensing.T_s > 0:
        sensing = _recalibrated_sensing(sensing, sensing.T_s, rules)
    changes['sensing'] = sensing

    traffic = base.traffic
    if rules.generated_throughput is not None:
        traffic = replace(traffic, p_sd=solve_p_sd(traffic.p_sa, sensing, rules.generated_throughput))
    changes['traffic'] = traffic

    label = base.name or 'sweep'
    changes['name'] = f"{label}:{algorithm.value}:{axis}={value}"
    return base.with_changes(**changes), '; '.join(notes)


def _fallback_scenario(spec: SweepSpec, algorithm, value) -> ScenarioConfig:
    """평가할 수 없는 지점의 행에 기록할 시나리오"""
    name = f"{spec.base.name or 'sweep'}:{Algorithm(algorithm).value}:{spec.axis}={value}"
    try:
        return spec.base.with_changes(
            algorithm=Algorithm(algorithm),
            B=0 if Algorithm(algorithm) is Algorithm.P0Q0 else spec.base.B,
            name=name,
        )
    except OsaModelError:
        return spec.base.with_changes(name=name)


def expand_points(spec: SweepSpec) -> List[SweepPoint]:
    """
    스윕 지점 목록 (알고리즘 순서 x 값 순서)

    제약을 만족할 수 없는 지점은 기본 시나리오와 함께 INFEASIBLE 상태로 남깁니다.
    """
    algorithms = spec.algorithms or (spec.base.algorithm,)
    points = []
    for algorithm in algorithms:
        for value in spec.values:
            index = len(points)
            try:
                scenario, note = _point_scenario(spec.base, Algorithm(algorithm), spec.axis, value, spec.rules)
                points.append(SweepPoint(index, scenario, spec.axis, value, OK, note))
            except (ValueError, OsaModelError) as e:
                logger.warning(f"스윕 지점 {spec.axis}={value} ({Algorithm(algorithm).value}) 제외: {e}")
                points.append(SweepPoint(index, _fallback_scenario(spec, algorithm, value), spec.axis, value, INFEASIBLE, str(e)))
    return points


def single_point(cfg: ScenarioConfig) -> List[SweepPoint]:
    """스윕 없이 기본 시나리오 하나"""
    return [SweepPoint(0, cfg, '', '')]


def evaluate_point(point: SweepPoint, options: SimulationOptions, sim_workers: Optional[int] = 1,
                   analyzer: Optional[MarkovAnalyzer] = None) -> ResultRow:
    """
    스윕 지점 하나를 분석/시뮬레이션하여 결과 행 생성

    Args:
        point: 스윕 지점
        options: 실행 옵션
        sim_workers: 시뮬레이션 복제에 쓸 프로세스 수
        analyzer: 분석에 사용할 MarkovAnalyzer (없으면 새로 생성)

    Returns:
        ResultRow
    """
    cfg = point.scenario
    row = ResultRow.for_scenario(cfg, point.axis, point.axis_value, status=point.status, note=point.note)
    if point.status != OK:
        return row

    try:
        row.throughput_bound = architecture_throughput_bound(cfg)
    except UndefinedOccupancyError:
        row.throughput_bound = math.nan

    report = None
    try:
        if options.analytic:
            report = (analyzer or MarkovAnalyzer()).analyze(cfg)
            row.R_analytic = report.R
            row.G_analytic = report.G
            row.delivery_rate = report.delivery_rate
            row.loss_rate = report.loss_rate
            row.collisions_per_channel = report.collisions_per_channel
            row.state_count = report.state_count
            row.solve_residual = report.solve_residual

        if options.simulate:
            sim = SimConfig(
                scenario=cfg, slots=options.slots, warmup_slots=options.warmup_slots,
                seed=options.seed, replications=options.replications)
            metrics = simulate(sim, workers=sim_workers)
            row.R_sim, row.R_sim_se = metrics.R_hat, metrics.R_se
            row.G_sim, row.G_sim_se = metrics.G_hat, metrics.G_se
            row.sim_delivery_rate = metrics.delivery_rate
            row.sim_loss_rate = metrics.loss_rate
            if report is not None:
                comparison = compare(report, metrics)
                row.R_within_3se = comparison.R.within_limit
                row.G_within_3se = comparison.G.within_limit
    except OsaModelError as e:
        logger.error(f"{cfg.name} 평가 실패: {e}")
        row.status = FAILED
        row.note = '; '.join(filter(None, [row.note, str(e)]))
        row.invariant_ok = False
        return row

    loss = row.loss_rate if options.analytic else row.sim_loss_rate
    row.qos_violation = bool(loss > options.qos_max_loss_rate)
    row.invariant_ok = check_row_invariants(row, cfg)
    if row.qos_violation:
        logger.warning(f"{cfg.name}: 프레임 전달 실패율 {loss:.4f} > {options.qos_max_loss_rate}")
    return row


def check_row_invariants(row: ResultRow, cfg: ScenarioConfig) -> bool:
    """R 상한, G 범위, 정상분포 잔차 검사"""
    ok = True
    channels = cfg.N if cfg.is_parallel else 1
    if not math.isnan(row.R_analytic):
        if not math.isnan(row.throughput_bound) and row.R_analytic > row.throughput_bound + 1e-9:
            logger.warning(f"{cfg.name}: R={row.R_analytic} 가 상한 {row.throughput_bound} 를 넘습니다.")
            ok = False
        if not -1e-12 <= row.G_analytic <= channels + 1e-12:
            ok = False
        if row.solve_residual > config.RESIDUAL_TOLERANCE:
            ok = False
    return ok


def _evaluate_in_worker(point: SweepPoint, options: SimulationOptions) -> ResultRow:
    return evaluate_point(point, options, sim_workers=1)


def run_points(points: List[SweepPoint], options: SimulationOptions, progress=None) -> List[ResultRow]:
    """
    지점들을 평가하여 스윕 순서대로 결과 행 반환

    workers 가 1 이 아니고 지점이 여럿이면 지점 단위로 병렬 실행합니다.
    """
    workers = options.workers if options.workers is not None else config.MAX_WORKERS
    if workers != 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_evaluate_in_worker, points, [options] * len(points)))
        if progress:
            for row in rows:
                progress(row)
        return rows

    rows = []
    for point in points:
        row = evaluate_point(point, options, sim_workers=workers)
        if progress:
            progress(row)
        rows.append(row)
    return rows


def run_sweep(spec: SweepSpec, options: SimulationOptions, progress=None) -> List[ResultRow]:
    """스윕 정의 전체 실행"""
    points = expand_points(spec)
    logger.info(f"스윕 시작: 축 {spec.axis}, 지점 {len(points)}개")
    return run_points(points, options, progress)
