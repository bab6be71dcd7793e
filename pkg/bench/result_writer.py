"""
결과 저장
스윕 결과 행을 CSV 로, 주장 검증 보고서를 JSON 으로 저장합니다.
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd

import config

from .sweep import COLUMNS, ResultRow

logger = logging.getLogger(__name__)


def rows_to_frame(rows: Iterable[ResultRow], qos_only: bool = False) -> pd.DataFrame:
    """
    결과 행을 DataFrame 으로 변환

    Args:
        rows: 결과 행
        qos_only: True 이면 QoS 위반 행 제외

    Returns:
        열 순서가 고정된 DataFrame
    """
    df = pd.DataFrame([row.to_dict() for row in rows], columns=COLUMNS)
    if qos_only and not df.empty:
        df = df[~df['qos_violation'].astype(bool)].reset_index(drop=True)
    return df


class ResultWriter:
    """결과 파일 저장을 담당하는 클래스"""

    def __init__(self, output_dir=None):
        self.output_dir = Path(output_dir or config.OUTPUT_DIR)

    def _resolve(self, path: Optional[str], prefix: str, suffix: str) -> Path:
        if path is None:
            timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
            return self.output_dir / f"{prefix}_{timestamp}{suffix}"
        return Path(path)

    def save_csv(self, rows: Iterable[ResultRow], path: Optional[str] = None, qos_only: bool = False) -> Path:
        """
        결과 행을 CSV 로 저장 (쉼표 구분, LF 줄바꿈, 유효숫자 12자리)

        Args:
            rows: 결과 행
            path: 저장 경로 (없으면 output_dir/sweep_<시각>.csv)
            qos_only: QoS 위반 행 제외 여부

        Returns:
            저장된 파일 경로
        """
        filepath = self._resolve(path, 'sweep', '.csv')
        filepath.parent.mkdir(parents=True, exist_ok=True)
        df = rows_to_frame(rows, qos_only)
        df.to_csv(
            filepath,
            index=False,
            float_format=f'%.{config.CSV_SIGNIFICANT_DIGITS}g',
            lineterminator='\n',
            encoding='utf-8',
        )
        logger.info(f"CSV 저장: {filepath} ({len(df)}행)")
        return filepath

    def save_json(self, payload: dict, path: Optional[str] = None, prefix: str = 'claims') -> Path:
        """보고서를 JSON 파일로 저장"""
        filepath = self._resolve(path, prefix, '.json')
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(payload, f, ensure_ascii=False, indent=2, default=str)
        logger.info(f"JSON 저장: {filepath}")
        return filepath
