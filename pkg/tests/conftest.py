"""
공통 테스트 설정
프로젝트 루트를 경로에 추가하고 자주 쓰는 시나리오를 제공합니다.
"""

import sys
from pathlib import Path

import pytest

# 프로젝트 루트를 경로에 추가
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.params import Algorithm, ScenarioConfig, SensingParams, TrafficParams  # noqa: E402

IDEAL = SensingParams(p_fs=0.0, p_ms=0.0, p_ft=0.0, p_mt=0.0, T=1e-3, T_s=0.0, W=1e6)
NOISY = SensingParams(p_fs=0.2, p_ms=0.15, p_ft=0.05, p_mt=0.05, T=1e-3, T_s=0.1e-3, W=1e6)
COIN_FLIP_PU_SATURATED = TrafficParams(p_pa=0.5, p_pd=0.5, p_sa=1.0, p_sd=0.0)
BURSTY = TrafficParams(p_pa=0.2, p_pd=0.3, p_sa=0.4, p_sd=0.3)


def scenario(algorithm=Algorithm.P0Q1, S=1, N=1, B=0, traffic=COIN_FLIP_PU_SATURATED, sensing=IDEAL, name='test'):
    return ScenarioConfig(traffic=traffic, sensing=sensing, S=S, N=N, B=B, algorithm=algorithm, name=name)


@pytest.fixture
def ideal_sensing():
    return IDEAL


@pytest.fixture
def noisy_sensing():
    return NOISY


@pytest.fixture
def bursty_traffic():
    return BURSTY


@pytest.fixture(autouse=True)
def isolated_output(tmp_path, monkeypatch):
    """결과 파일과 로그가 작업 디렉터리를 오염시키지 않도록 출력 경로를 임시 디렉터리로 변경"""
    import config

    monkeypatch.setattr(config, 'OUTPUT_DIR', str(tmp_path / 'outputs'))
    monkeypatch.setattr(config, 'LOG_FILE', str(tmp_path / 'osa_bench.log'))
    return tmp_path
