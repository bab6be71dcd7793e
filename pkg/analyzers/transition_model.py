"""
전이 모델
도달 가능 상태 집합과 행 확률 행렬(희소)을 함께 보관하고, 초기 상태에서 너비 우선으로 상태 공간을 구성합니다.
"""

import logging
from array import array
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Optional, Sequence

import numpy as np
from scipy import sparse

import config
from core.exceptions import CapacityError, ModelConsistencyError
from core.params import ScenarioConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransitionModel:
    """열거된 상태 집합(Θ 또는 Ψ)과 전이 행렬 Λ"""

    states: List[Hashable]
    kernel: sparse.csr_matrix
    index_of: Dict[Hashable, int]
    scenario: Optional[ScenarioConfig] = None

    @property
    def size(self) -> int:
        return len(self.states)

    @classmethod
    def from_matrix(cls, matrix, states: Optional[Sequence[Hashable]] = None) -> 'TransitionModel':
        """임의의 행렬로 모델 생성 (상태 이름이 없으면 0..n-1)"""
        kernel = sparse.csr_matrix(np.asarray(matrix, dtype=float) if not sparse.issparse(matrix) else matrix)
        if states is None:
            states = list(range(kernel.shape[0]))
        states = list(states)
        return cls(states=states, kernel=kernel, index_of={s: i for i, s in enumerate(states)})

    def permuted(self, order: Sequence[int]) -> 'TransitionModel':
        """상태 순서를 바꾼 동일 모델 (order[k] = 새 k 번째 상태의 기존 인덱스)"""
        order = np.asarray(order)
        kernel = self.kernel[order][:, order].tocsr()
        states = [self.states[i] for i in order]
        return TransitionModel(states, kernel, {s: i for i, s in enumerate(states)}, self.scenario)


def check_row_sums(model: TransitionModel, tolerance: float = config.ROW_SUM_TOLERANCE):
    """행 합이 1 에서 벗어나면 ModelConsistencyError"""
    row_sums = np.asarray(model.kernel.sum(axis=1)).ravel()
    bad = np.flatnonzero(np.abs(row_sums - 1.0) > tolerance)
    if bad.size:
        k = int(bad[0])
        raise ModelConsistencyError(model.states[k], float(row_sums[k]))


def build_reachable_model(
    initial: Hashable,
    successors: Callable[[Hashable], Dict[Hashable, float]],
    sort_key: Callable[[Hashable], tuple],
    scenario: Optional[ScenarioConfig] = None,
    state_cap: Optional[int] = None,
    tolerance: float = config.ROW_SUM_TOLERANCE,
) -> TransitionModel:
    """
    초기 상태에서 확률이 양수인 전이만 따라가며 상태 공간을 닫고 전이 행렬을 구성

    Args:
        initial: 초기 상태
        successors: 상태 -> {다음 상태: 확률}
        sort_key: 최종 상태 순서를 정하는 키
        scenario: 모델에 첨부할 시나리오
        state_cap: 최대 상태 수 (기본값: config.STATE_CAP)
        tolerance: 행 합 허용 오차

    Returns:
        TransitionModel
    """
    cap = state_cap or config.STATE_CAP
    discovered = {initial: 0}
    order = [initial]
    queue = deque([initial])
    rows, cols, values = array('q'), array('q'), array('d')

    while queue:
        state = queue.popleft()
        k = discovered[state]
        for target, probability in successors(state).items():
            if probability <= 0.0:
                continue
            l = discovered.get(target)
            if l is None:
                if len(order) >= cap:
                    raise CapacityError(cap, f"상태 수가 상한 STATE_CAP={cap} 을 초과했습니다.")
                l = len(order)
                discovered[target] = l
                order.append(target)
                queue.append(target)
            rows.append(k)
            cols.append(l)
            values.append(probability)

    ordered = sorted(order, key=sort_key)
    new_index = {s: i for i, s in enumerate(ordered)}
    remap = np.fromiter((new_index[s] for s in order), dtype=np.int64, count=len(order))
    n = len(ordered)
    kernel = sparse.csr_matrix(
        (np.frombuffer(values, dtype=float),
         (remap[np.frombuffer(rows, dtype=np.int64)], remap[np.frombuffer(cols, dtype=np.int64)])),
        shape=(n, n),
    )
    kernel.sum_duplicates()
    model = TransitionModel(states=ordered, kernel=kernel, index_of=new_index, scenario=scenario)
    check_row_sums(model, tolerance)
    logger.info(f"전이 모델 구성 완료: 상태 {n}개, 0이 아닌 원소 {kernel.nnz}개")
    return model
