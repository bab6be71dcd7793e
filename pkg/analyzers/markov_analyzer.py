"""
마르코프 분석기
시나리오 구조에 맞는 전이 모델을 구성하고 정상분포로부터 성능 지표를 계산합니다.
"""

import json
import logging
from datetime import datetime
from pathlib import Path

import config
from core.kernels import architecture_throughput_bound
from core.exceptions import UndefinedOccupancyError
from core.metrics import MetricsReport
from core.params import ScenarioConfig
from stationary import solve_stationary

from . import parallel_radio, single_radio

logger = logging.getLogger(__name__)


class MarkovAnalyzer:
    """정확한 마르코프 체인 분석을 수행하는 클래스"""

    def __init__(self, state_cap=None):
        self.state_cap = state_cap or config.STATE_CAP
        self.results = {}
        self.last_model = None
        self.last_stationary = None

    def analyze(self, cfg: ScenarioConfig) -> MetricsReport:
        """
        시나리오 분석 수행

        Args:
            cfg: 분석할 시나리오

        Returns:
            MetricsReport (provenance = analytic)
        """
        label = cfg.name or cfg.algorithm.value
        logger.info(f"분석 시작: {label} ({cfg.architecture.value}, N={cfg.N}, S={cfg.S}, B={cfg.B})")

        if cfg.is_parallel:
            model = parallel_radio.build_kernel_parallel(cfg, self.state_cap)
            stationary = solve_stationary(model)
            R = parallel_radio.throughput_parallel(model, stationary, cfg)
            G = parallel_radio.collision_rate_parallel(model, stationary, cfg)
            occupancy = parallel_radio.mode_occupancy_parallel(model, stationary)
        else:
            model = single_radio.build_kernel(cfg, self.state_cap)
            stationary = solve_stationary(model)
            R = single_radio.throughput(model, stationary, cfg)
            G = single_radio.collision_rate(model, stationary, cfg)
            occupancy = single_radio.mode_occupancy(model, stationary)

        report = MetricsReport.from_rates(
            cfg, R, G, state_count=model.size, solve_residual=stationary.residual)
        self.last_model = model
        self.last_stationary = stationary

        try:
            bound = architecture_throughput_bound(cfg)
        except UndefinedOccupancyError:
            bound = None
        self.results = {
            'scenario': label,
            'algorithm': cfg.algorithm.value,
            'architecture': cfg.architecture.value,
            'metrics': report.to_dict(),
            'throughput_bound': bound,
            'mode_occupancy': occupancy,
            'solver': stationary.method,
            'timestamp': datetime.now().isoformat(),
        }
        logger.info(f"분석 완료: R={R:.6g} bps, G={G:.6g}, 상태 {model.size}개")
        return report

    def save_results(self, results=None, filename=None):
        """분석 결과를 JSON 파일로 저장"""
        if results is None:
            results = self.results

        if filename is None:
            timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
            label = results.get('scenario', 'scenario')
            filename = f"analysis_{label}_{timestamp}.json"

        filepath = Path(config.OUTPUT_DIR) / filename
        filepath.parent.mkdir(parents=True, exist_ok=True)

        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(results, f, ensure_ascii=False, indent=2)

        print(f"💾 분석 결과 저장: {filepath}")
        return filepath
