"""
실험 설정 파일 로더
`key = value` 형식의 평문 설정 파일을 읽어 시나리오, 스윕, 실행 옵션을 만듭니다.

형식:
    # 주석
    algorithm = P0Q1
    N = 6
    traffic.pu = slow
    sensing.preset = long
    simulation.slots = 200000

    [sweep]
    axis = S
    values = 1, 2, 3, 4
    algorithms = P0Q0, P0Q1, P1Q0, P1Q1

시간 값은 초 단위 숫자 또는 us / ms / s 접미사를 사용할 수 있습니다.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional

import config
from core.exceptions import ConfigError, OsaModelError
from core.params import Algorithm, Architecture, ScenarioConfig, SensingParams, TrafficParams
from detector import sensing_from_detector

from .scenarios import sensing_preset, traffic_preset
from .sweep import AXES, DerivedRules, SimulationOptions, SweepSpec

logger = logging.getLogger(__name__)

_SECTION = re.compile(r'^\[(?P<name>[A-Za-z_]+)\]$')
_TIME = re.compile(r'^(?P<number>[-+0-9.eE]+)\s*(?P<unit>us|µs|ms|s)?$')
_TIME_UNITS = {None: 1.0, 's': 1.0, 'ms': 1e-3, 'us': 1e-6, 'µs': 1e-6}
_BOOLEANS = {'true': True, 'yes': True, 'on': True, '1': True,
             'false': False, 'no': False, 'off': False, '0': False}

_MAIN_KEYS = {
    'name', 'algorithm', 'architecture', 'S', 'N', 'B', 'M',
    'traffic.pu', 'traffic.su', 'traffic.p_pa', 'traffic.p_pd', 'traffic.p_sa', 'traffic.p_sd',
    'sensing.preset', 'sensing.from_detector', 'sensing.derive_long',
    'sensing.p_fs', 'sensing.p_ms', 'sensing.p_ft', 'sensing.p_mt', 'sensing.T', 'sensing.T_s', 'sensing.W',
    'detector.snr_db', 'detector.bandwidth', 'detector.p_m_target',
    'simulation.enabled', 'simulation.slots', 'simulation.warmup_slots',
    'simulation.replications', 'simulation.seed', 'simulation.workers',
    'qos.max_loss_rate',
}
_SWEEP_KEYS = {'axis', 'values', 'algorithms', 'recalibrate_p_f', 'generated_throughput'}


@dataclass
class _Entry:
    value: str
    line: int


@dataclass(frozen=True)
class BenchConfig:
    """설정 파일 한 개의 해석 결과"""

    scenario: ScenarioConfig
    sweep: Optional[SweepSpec] = None
    options: SimulationOptions = field(default_factory=SimulationOptions)
    source: str = '<string>'


def _parse_lines(text: str) -> Dict[str, Dict[str, _Entry]]:
    sections: Dict[str, Dict[str, _Entry]] = {'main': {}}
    current = 'main'
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        match = _SECTION.match(line)
        if match:
            current = match.group('name')
            if current != 'sweep':
                raise ConfigError(f"알 수 없는 섹션 [{current}]", line=number)
            if current in sections:
                raise ConfigError(f"섹션 [{current}] 이 중복되었습니다.", line=number)
            sections[current] = {}
            continue
        if '=' not in line:
            raise ConfigError(f"'key = value' 형식이 아닙니다: {raw.strip()}", line=number)
        key, value = (part.strip() for part in line.split('=', 1))
        allowed = _MAIN_KEYS if current == 'main' else _SWEEP_KEYS
        if key not in allowed:
            raise ConfigError("알 수 없는 키입니다.", line=number, key=key)
        if key in sections[current]:
            raise ConfigError("키가 중복되었습니다.", line=number, key=key)
        if value == '':
            raise ConfigError("값이 비어 있습니다.", line=number, key=key)
        sections[current][key] = _Entry(value, number)
    return sections


class _Reader:
    """타입 변환과 오류 위치 보고를 담당"""

    def __init__(self, entries: Dict[str, _Entry]):
        self.entries = entries

    def has(self, key):
        return key in self.entries

    def line(self, key):
        entry = self.entries.get(key)
        return entry.line if entry else None

    def _convert(self, key, converter, kind, default):
        entry = self.entries.get(key)
        if entry is None:
            return default
        try:
            return converter(entry.value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{kind} 값이 필요합니다: {entry.value!r} ({e})", line=entry.line, key=key)

    def text(self, key, default=None):
        return self._convert(key, str, '문자열', default)

    def integer(self, key, default=None):
        return self._convert(key, int, '정수', default)

    def number(self, key, default=None):
        return self._convert(key, float, '실수', default)

    def time(self, key, default=None):
        return self._convert(key, parse_time, '시간', default)

    def boolean(self, key, default=None):
        return self._convert(key, parse_bool, '참/거짓', default)

    def algorithm(self, key, default=None):
        return self._convert(key, lambda v: Algorithm(v.upper()), '알고리즘 이름', default)

    def items(self, key, converter, kind):
        entry = self.entries.get(key)
        if entry is None:
            return ()
        parts = [part.strip() for part in entry.value.split(',') if part.strip()]
        try:
            return tuple(converter(part) for part in parts)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{kind} 목록이 필요합니다: {entry.value!r} ({e})", line=entry.line, key=key)


def parse_time(value: str) -> float:
    """'50us', '0.24ms', '1e-3' 등을 초 단위로 변환"""
    match = _TIME.match(value.strip())
    if not match:
        raise ValueError(f"시간 형식이 아닙니다: {value}")
    return float(match.group('number')) * _TIME_UNITS[match.group('unit')]


def parse_bool(value: str) -> bool:
    try:
        return _BOOLEANS[value.strip().lower()]
    except KeyError:
        raise ValueError(f"참/거짓 값이 아닙니다: {value}")


def _build_traffic(reader: _Reader) -> TrafficParams:
    try:
        base = traffic_preset(reader.text('traffic.pu', 'slow'), reader.text('traffic.su', 'saturated'))
    except ConfigError as e:
        raise ConfigError(e.message, line=reader.line(e.key), key=e.key)
    overrides = {}
    for name in ('p_pa', 'p_pd', 'p_sa', 'p_sd'):
        key = f'traffic.{name}'
        if reader.has(key):
            overrides[name] = reader.number(key)
    try:
        return replace(base, **overrides)
    except OsaModelError as e:
        key = next(iter(overrides), None)
        raise ConfigError(str(e), line=reader.line(f'traffic.{key}') if key else None,
                          key=f'traffic.{key}' if key else None)


def _detector_rules(reader: _Reader) -> DerivedRules:
    return DerivedRules(
        snr_db=reader.number('detector.snr_db', config.SNR_DB),
        bandwidth=reader.number('detector.bandwidth', config.CHANNEL_BANDWIDTH),
        p_m_target=reader.number('detector.p_m_target', config.TARGET_MISDETECTION),
        derive_long_sensing=reader.boolean('sensing.derive_long', True),
    )


def _build_sensing(reader: _Reader, rules: DerivedRules) -> SensingParams:
    T = reader.time('sensing.T', config.SLOT_LENGTH)
    W = reader.number('sensing.W', config.CHANNEL_THROUGHPUT)
    try:
        if reader.boolean('sensing.from_detector', False):
            T_s = reader.time('sensing.T_s')
            if T_s is None:
                raise ConfigError("sensing.from_detector 에는 sensing.T_s 가 필요합니다.",
                                  line=reader.line('sensing.from_detector'), key='sensing.T_s')
            base = sensing_from_detector(T_s, T=T, W=W, snr_db=rules.snr_db,
                                         bandwidth=rules.bandwidth, p_m_target=rules.p_m_target)
        else:
            base = sensing_preset(reader.text('sensing.preset', 'long'), T=T, W=W,
                                  derive_long_sensing=rules.derive_long_sensing)
        overrides = {}
        for name in ('p_fs', 'p_ms', 'p_ft', 'p_mt'):
            if reader.has(f'sensing.{name}'):
                overrides[name] = reader.number(f'sensing.{name}')
        if reader.has('sensing.T_s') and not reader.boolean('sensing.from_detector', False):
            overrides['T_s'] = reader.time('sensing.T_s')
        return replace(base, **overrides)
    except ConfigError as e:
        if e.line is None and e.key:
            raise ConfigError(e.message, line=reader.line(e.key), key=e.key)
        raise
    except OsaModelError as e:
        raise ConfigError(str(e), line=reader.line('sensing.preset') or reader.line('sensing.T_s'), key='sensing')


def _build_scenario(reader: _Reader, traffic: TrafficParams, sensing: SensingParams) -> ScenarioConfig:
    algorithm = reader.algorithm('algorithm', Algorithm.P0Q1)
    B = reader.integer('B', 0)
    if algorithm is Algorithm.P0Q0 and B > 0:
        raise ConfigError("P0Q0 알고리즘은 버퍼가 없으므로 B > 0 과 함께 사용할 수 없습니다.",
                          line=reader.line('B'), key='B')
    architecture = reader._convert('architecture', lambda v: Architecture(v.upper()), '구조 이름', None)
    S = reader.integer('S', 1)
    N = reader.integer('N', 1)
    M = reader.integer('M', None)
    name = reader.text('name', '')
    for key, value, minimum in (('S', S, 1), ('N', N, 1), ('B', B, 0)):
        if value < minimum:
            raise ConfigError(f"{key} 는 {minimum} 이상이어야 합니다.", line=reader.line(key), key=key)
    try:
        return ScenarioConfig(
            traffic=traffic, sensing=sensing, S=S, N=N, B=B,
            algorithm=algorithm, architecture=architecture, M=M, name=name,
        )
    except OsaModelError as e:
        raise ConfigError(str(e), line=reader.line('algorithm') or reader.line('architecture'), key='algorithm')


def _build_options(reader: _Reader) -> SimulationOptions:
    workers = reader.integer('simulation.workers', None)
    options = SimulationOptions(
        simulate=reader.boolean('simulation.enabled', True),
        slots=reader.integer('simulation.slots', config.DEFAULT_SLOTS),
        warmup_slots=reader.integer('simulation.warmup_slots', config.DEFAULT_WARMUP_SLOTS),
        replications=reader.integer('simulation.replications', config.DEFAULT_REPLICATIONS),
        seed=reader.integer('simulation.seed', config.DEFAULT_SEED),
        qos_max_loss_rate=reader.number('qos.max_loss_rate', config.QOS_MAX_LOSS_RATE),
        workers=workers if workers else None,
    )
    if options.slots <= options.warmup_slots:
        raise ConfigError("simulation.slots 는 simulation.warmup_slots 보다 커야 합니다.",
                          line=reader.line('simulation.slots'), key='simulation.slots')
    return options


_AXIS_CONVERTERS = {
    'S': (int, '정수'),
    'N': (int, '정수'),
    'B': (int, '정수'),
    'T_s': (parse_time, '시간'),
    'algorithm': (lambda v: Algorithm(v.upper()), '알고리즘 이름'),
}


def _build_sweep(reader: _Reader, base: ScenarioConfig, rules: DerivedRules) -> SweepSpec:
    axis = reader.text('axis')
    if axis is None:
        raise ConfigError("[sweep] 섹션에는 axis 가 필요합니다.", key='axis')
    if axis not in AXES:
        raise ConfigError(f"스윕 축은 {', '.join(AXES)} 중 하나여야 합니다.", line=reader.line('axis'), key='axis')
    converter, kind = _AXIS_CONVERTERS[axis]
    values = reader.items('values', converter, kind)
    if not values:
        raise ConfigError("스윕 값 목록이 비어 있습니다.", line=reader.line('values'), key='values')
    algorithms = reader.items('algorithms', lambda v: Algorithm(v.upper()), '알고리즘 이름')
    recalibrate = reader.boolean('recalibrate_p_f', False)
    target = reader.number('generated_throughput', None)
    if recalibrate and axis != 'T_s' and base.sensing.T_s == 0:
        raise ConfigError("recalibrate_p_f 는 T_s > 0 인 센싱에만 적용할 수 있습니다.",
                          line=reader.line('recalibrate_p_f'), key='recalibrate_p_f')
    if target is not None and target <= 0:
        raise ConfigError("generated_throughput 은 양수여야 합니다.",
                          line=reader.line('generated_throughput'), key='generated_throughput')
    try:
        return SweepSpec(
            base=base,
            axis=axis,
            values=values,
            algorithms=algorithms,
            rules=replace(rules, recalibrate_p_f=recalibrate, generated_throughput=target),
        )
    except ConfigError as e:
        raise ConfigError(e.message, line=reader.line(e.key) if e.key else None, key=e.key)


def parse_config(text: str, source: str = '<string>') -> BenchConfig:
    """
    설정 문자열 해석

    Args:
        text: 설정 파일 내용
        source: 로그에 표시할 출처

    Returns:
        BenchConfig

    Raises:
        ConfigError: 형식 오류, 알 수 없는 키, 잘못된 값, 허용되지 않는 조합 (행 번호와 키 포함)
    """
    sections = _parse_lines(text)
    reader = _Reader(sections['main'])
    rules = _detector_rules(reader)
    traffic = _build_traffic(reader)
    sensing = _build_sensing(reader, rules)
    scenario = _build_scenario(reader, traffic, sensing)
    options = _build_options(reader)
    sweep = _build_sweep(_Reader(sections['sweep']), scenario, rules) if 'sweep' in sections else None
    logger.info(f"설정 로드 완료: {source} ({scenario.algorithm.value}, 스윕 {'있음' if sweep else '없음'})")
    return BenchConfig(scenario=scenario, sweep=sweep, options=options, source=source)


def load_config(path) -> BenchConfig:
    """설정 파일 읽기"""
    filepath = Path(path)
    try:
        text = filepath.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"설정 파일을 읽을 수 없습니다: {filepath} ({e})")
    return parse_config(text, source=str(filepath))
