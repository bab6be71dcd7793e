"""
예외 정의
분석 엔진과 벤치 하네스에서 사용하는 예외 클래스들입니다.
"""


class OsaModelError(Exception):
    """모든 모델 관련 예외의 기반 클래스"""


class ParameterError(OsaModelError, ValueError):
    """파라미터 값이 허용 범위를 벗어난 경우"""


class InputShapeError(OsaModelError, ValueError):
    """채널/라디오 벡터 길이가 맞지 않는 경우"""


class UndefinedOccupancyError(OsaModelError, ValueError):
    """p_pa = p_pd = 0 이라 정상 점유율이 정의되지 않는 경우"""


class InvalidModeError(OsaModelError, ValueError):
    """알고리즘이 허용하지 않는 모드 인덱스"""


class CapacityError(OsaModelError, RuntimeError):
    """상태 수가 설정된 상한을 넘은 경우"""

    def __init__(self, cap, message=None):
        self.cap = cap
        super().__init__(message or f"상태 수가 상한({cap})을 초과했습니다.")


class ModelConsistencyError(OsaModelError, RuntimeError):
    """전이 행렬의 행 합이 1이 아닌 경우"""

    def __init__(self, state, row_sum):
        self.state = state
        self.row_sum = row_sum
        super().__init__(f"상태 {state}의 전이 확률 합이 {row_sum!r} 입니다.")


class ConvergenceError(OsaModelError, RuntimeError):
    """반복 예산 안에 정상분포가 수렴하지 않은 경우"""

    def __init__(self, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"{iterations}회 반복 후에도 수렴하지 않음 (잔차 {residual:.3e})")


class MultipleClassesError(OsaModelError, RuntimeError):
    """닫힌 통신 클래스가 둘 이상이라 정상분포가 유일하지 않은 경우"""

    def __init__(self, class_count):
        self.class_count = class_count
        super().__init__(f"닫힌 통신 클래스가 {class_count}개입니다. 정상분포가 유일하지 않습니다.")


class CalibrationError(OsaModelError, RuntimeError):
    """목표 오검출 확률에 맞는 임계값을 찾지 못한 경우"""


class SimulationError(OsaModelError, RuntimeError):
    """시뮬레이션 복제의 프레임 보존 식이 맞지 않는 경우"""

    def __init__(self, replication, gap):
        self.replication = replication
        self.gap = gap
        super().__init__(f"복제 {replication}: 프레임 보존 불일치 {gap}")


class ComparisonError(OsaModelError, ValueError):
    """서로 다른 시나리오의 결과를 비교하려는 경우"""


class ConfigError(OsaModelError, ValueError):
    """설정 파일 파싱/검증 오류"""

    def __init__(self, message, line=None, key=None):
        self.message = message
        self.line = line
        self.key = key
        location = []
        if line is not None:
            location.append(f"{line}행")
        if key is not None:
            location.append(f"키 '{key}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(prefix + message)
