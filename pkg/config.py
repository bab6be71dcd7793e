"""
설정 파일
분석 엔진, 정상상태 솔버, 몬테카를로 시뮬레이터의 기본 설정을 관리합니다.
"""

import os
from dotenv import load_dotenv

load_dotenv()


def _env_int(name, default):
    value = os.getenv(name)
    return int(value) if value not in (None, '') else default


def _env_float(name, default):
    value = os.getenv(name)
    return float(value) if value not in (None, '') else default


# 결과 저장 경로
OUTPUT_DIR = os.getenv('OSA_OUTPUT_DIR', 'outputs')
LOG_FILE = os.getenv('OSA_LOG_FILE', 'osa_bench.log')

# 마르코프 체인 설정
STATE_CAP = _env_int('OSA_STATE_CAP', 500_000)  # 열거 가능한 최대 상태 수
ROW_SUM_TOLERANCE = 1e-12  # 전이 행렬 행 합 허용 오차
RESIDUAL_TOLERANCE = 1e-10  # 정상분포 잔차 허용치
DIRECT_SOLVE_LIMIT = _env_int('OSA_DIRECT_SOLVE_LIMIT', 20_000)  # 직접 풀이 상한
POWER_ITERATION_BUDGET = _env_int('OSA_POWER_ITERATION_BUDGET', 1_000_000)

# 몬테카를로 시뮬레이션 설정
DEFAULT_SLOTS = _env_int('OSA_SLOTS', 1_000_000)
DEFAULT_WARMUP_SLOTS = _env_int('OSA_WARMUP_SLOTS', 10_000)
DEFAULT_REPLICATIONS = _env_int('OSA_REPLICATIONS', 10)
DEFAULT_SEED = _env_int('OSA_SEED', 20110403)
MAX_WORKERS = _env_int('OSA_MAX_WORKERS', 0) or None  # None = CPU 개수

# 물리 계층 기본값
SLOT_LENGTH = _env_float('OSA_SLOT_LENGTH', 1e-3)  # 초
CHANNEL_THROUGHPUT = _env_float('OSA_CHANNEL_THROUGHPUT', 1e6)  # bps
CHANNEL_BANDWIDTH = _env_float('OSA_CHANNEL_BANDWIDTH', 6e6)  # Hz
SNR_DB = _env_float('OSA_SNR_DB', -10.0)
TARGET_MISDETECTION = _env_float('OSA_TARGET_MISDETECTION', 0.1)

# 결과 파일 설정
CSV_SIGNIFICANT_DIGITS = 12
QOS_MAX_LOSS_RATE = 0.1  # 허용되는 최대 프레임 전달 실패율
