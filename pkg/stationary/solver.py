"""
정상분포 계산기
희소 전이 행렬의 확률성 검증, 닫힌 통신 클래스 검사, 정상분포 풀이를 담당합니다.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

import config
from core.exceptions import ConvergenceError, ModelConsistencyError, MultipleClassesError

logger = logging.getLogger(__name__)

DIRECT = 'direct'
POWER = 'power'

# 진동이 감지된 뒤 게으른 체인 (π + πΛ)/2 로 전환
_STALL_LIMIT = 50


@dataclass(frozen=True)
class StationaryDistribution:
    """정상분포 π 와 풀이 정보"""

    pi: np.ndarray
    residual: float
    method: str
    iterations: int = 0

    def __len__(self):
        return len(self.pi)


@dataclass
class StochasticityReport:
    """행 합 오차와 음수 원소 목록"""

    max_deviation: float = 0.0
    bad_rows: List[Tuple[int, float]] = field(default_factory=list)
    negative_entries: List[Tuple[int, int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.bad_rows and not self.negative_entries


def _kernel_of(model) -> sparse.csr_matrix:
    kernel = getattr(model, 'kernel', model)
    return sparse.csr_matrix(kernel)


def verify_stochastic(model, tolerance: float = config.ROW_SUM_TOLERANCE) -> StochasticityReport:
    """
    전이 행렬이 확률 행렬인지 검사

    Args:
        model: TransitionModel 또는 행렬
        tolerance: 행 합 허용 오차

    Returns:
        StochasticityReport (행 합이 1 에서 벗어난 행, 음수 원소)
    """
    kernel = _kernel_of(model)
    row_sums = np.asarray(kernel.sum(axis=1)).ravel()
    deviation = np.abs(row_sums - 1.0)
    report = StochasticityReport(max_deviation=float(deviation.max()) if deviation.size else 0.0)
    for k in np.flatnonzero(deviation > tolerance):
        report.bad_rows.append((int(k), float(row_sums[k])))
    coo = kernel.tocoo()
    for k in np.flatnonzero(coo.data < 0):
        report.negative_entries.append((int(coo.row[k]), int(coo.col[k]), float(coo.data[k])))
    return report


def closed_class_count(model) -> int:
    """닫힌(재귀) 통신 클래스 수"""
    kernel = _kernel_of(model)
    n_classes, labels = connected_components(kernel, directed=True, connection='strong')
    coo = kernel.tocoo()
    positive = coo.data > 0
    rows, cols = coo.row[positive], coo.col[positive]
    leaving = labels[rows] != labels[cols]
    open_classes = np.unique(labels[rows[leaving]])
    return int(n_classes - open_classes.size)


def _residual(kernel_T: sparse.csr_matrix, pi: np.ndarray) -> float:
    return float(np.abs(kernel_T @ pi - pi).max())


def _solve_direct(kernel: sparse.csr_matrix) -> np.ndarray:
    """(Λᵀ - I) π = 0 의 마지막 식을 정규화 조건으로 바꿔 희소 직접 풀이"""
    n = kernel.shape[0]
    system = (kernel.T - sparse.identity(n, format='csr')).tolil()
    system[n - 1, :] = np.ones(n)
    rhs = np.zeros(n)
    rhs[n - 1] = 1.0
    return np.asarray(spsolve(system.tocsc(), rhs), dtype=float).ravel()


def _solve_power(kernel_T: sparse.csr_matrix, budget: int, tolerance: float,
                 start: np.ndarray = None, lazy: bool = False) -> Tuple[np.ndarray, int]:
    """거듭제곱 반복 (진동하면 게으른 체인으로 전환)"""
    n = kernel_T.shape[0]
    pi = np.full(n, 1.0 / n) if start is None else start.copy()
    best = np.inf
    stalled = 0
    residual = np.inf
    for iteration in range(1, budget + 1):
        stepped = kernel_T @ pi
        residual = float(np.abs(stepped - pi).max())
        if residual <= tolerance:
            return pi, iteration
        if not lazy:
            if residual < best * (1.0 - 1e-3):
                best = residual
                stalled = 0
            else:
                stalled += 1
                if stalled >= _STALL_LIMIT:
                    lazy = True
                    logger.warning(f"거듭제곱 반복이 진동합니다 ({iteration}회). 게으른 체인으로 전환합니다.")
        pi = 0.5 * (stepped + pi) if lazy else stepped
        pi /= pi.sum()
    raise ConvergenceError(residual, budget)


def solve_stationary(
    model,
    direct_limit: int = config.DIRECT_SOLVE_LIMIT,
    iteration_budget: int = config.POWER_ITERATION_BUDGET,
    tolerance: float = config.RESIDUAL_TOLERANCE,
) -> StationaryDistribution:
    """
    정상분포 π = π Λ, Σπ = 1 풀이

    상태 수가 direct_limit 이하이면 희소 직접 풀이, 그보다 크면 거듭제곱 반복을 사용합니다.

    Args:
        model: TransitionModel 또는 확률 행렬
        direct_limit: 직접 풀이를 사용할 최대 상태 수
        iteration_budget: 거듭제곱 반복 최대 횟수
        tolerance: 잔차 max|πΛ - π| 허용치

    Returns:
        StationaryDistribution

    Raises:
        ModelConsistencyError: 행 합이 1 이 아니거나 음수 원소가 있는 경우
        MultipleClassesError: 닫힌 통신 클래스가 둘 이상인 경우
        ConvergenceError: 반복 예산 안에 잔차가 허용치 이하가 되지 않는 경우
    """
    kernel = _kernel_of(model)
    states = getattr(model, 'states', None)

    report = verify_stochastic(kernel)
    if not report.ok:
        if report.bad_rows:
            k, row_sum = report.bad_rows[0]
        else:
            k = report.negative_entries[0][0]
            row_sum = float(np.asarray(kernel.sum(axis=1)).ravel()[k])
        raise ModelConsistencyError(states[k] if states is not None else k, row_sum)

    classes = closed_class_count(kernel)
    if classes != 1:
        raise MultipleClassesError(classes)

    n = kernel.shape[0]
    kernel_T = kernel.T.tocsr()
    if n <= direct_limit:
        pi = _solve_direct(kernel)
        method, iterations = DIRECT, 0
    else:
        pi, iterations = _solve_power(kernel_T, iteration_budget, tolerance)
        method = POWER

    pi = np.where(pi < 0.0, 0.0, pi)
    pi /= pi.sum()
    residual = _residual(kernel_T, pi)
    if residual > tolerance:
        if method == DIRECT:
            logger.warning(f"직접 풀이 잔차 {residual:.3e}. 거듭제곱 반복으로 보정합니다.")
            pi, extra = _solve_power(kernel_T, iteration_budget, tolerance, start=pi, lazy=True)
            iterations += extra
            residual = _residual(kernel_T, pi)
        if residual > tolerance:
            raise ConvergenceError(residual, iterations)

    logger.debug(f"정상분포 계산 완료: 상태 {n}개, 방법 {method}, 잔차 {residual:.3e}")
    return StationaryDistribution(pi=pi, residual=residual, method=method, iterations=iterations)
