"""에너지 검출기 모델 테스트"""

import pytest

from core.exceptions import CalibrationError, ParameterError
from detector import (
    DetectorParams,
    calibrate_threshold,
    db_to_linear,
    long_sensing_errors,
    roc_point,
    sensing_from_detector,
)

SNR = db_to_linear(-10.0)
BANDWIDTH = 6e6


def test_db_conversion():
    assert db_to_linear(-10.0) == pytest.approx(0.1)
    assert db_to_linear(0.0) == 1.0


@pytest.mark.parametrize('sense_time, expected', [
    (0.24e-3, 0.100),
    (0.1e-3, 0.37),
    (500e-6, 0.007),
    (50e-6, 0.57),
])
def test_calibrated_false_alarm_anchors(sense_time, expected):
    threshold, p_f = calibrate_threshold(SNR, BANDWIDTH, sense_time, 0.1)
    assert p_f == pytest.approx(expected, abs=0.01)
    assert roc_point(DetectorParams(SNR, BANDWIDTH, sense_time, threshold))[1] == pytest.approx(0.1, abs=1e-9)


def test_published_operating_points_within_tolerance():
    assert abs(calibrate_threshold(SNR, BANDWIDTH, 0.24e-3, 0.1)[1] - 0.1) <= 0.05
    assert abs(calibrate_threshold(SNR, BANDWIDTH, 0.1e-3, 0.1)[1] - 0.36) <= 0.05
    assert abs(calibrate_threshold(SNR, BANDWIDTH, 500e-6, 0.1)[1] - 0.013) <= 0.05


def test_false_alarm_falls_with_longer_sensing():
    values = [calibrate_threshold(SNR, BANDWIDTH, t, 0.1)[1] for t in (50e-6, 100e-6, 240e-6, 500e-6)]
    assert values == sorted(values, reverse=True)


def test_roc_moves_in_opposite_directions_with_threshold():
    low = roc_point(DetectorParams(SNR, BANDWIDTH, 0.1e-3, 1.0))
    high = roc_point(DetectorParams(SNR, BANDWIDTH, 0.1e-3, 1.1))
    assert low[0] > high[0]
    assert low[1] < high[1]
    assert low[0] == pytest.approx(0.5)


def test_long_sensing_errors_for_long_stage_sensing():
    p_ft, p_mt = long_sensing_errors(0.24e-3)
    assert p_ft == pytest.approx(0.0045, abs=5e-4)
    assert p_mt == pytest.approx(0.0044, abs=5e-4)


def test_long_sensing_errors_for_short_stage_sensing():
    p_ft, p_mt = long_sensing_errors(0.1e-3)
    assert p_ft == pytest.approx(0.15, abs=0.01)
    assert p_mt < 1e-4


def test_sensing_from_detector_keeps_target_misdetection():
    p = sensing_from_detector(0.1e-3)
    assert p.p_ms == pytest.approx(0.1)
    assert p.T_s == 0.1e-3
    assert p.p_ft < p.p_fs


@pytest.mark.parametrize('target', [0.0, 1.0, -0.1])
def test_unreachable_targets_raise(target):
    with pytest.raises(CalibrationError):
        calibrate_threshold(SNR, BANDWIDTH, 0.1e-3, target)


def test_invalid_detector_parameters():
    with pytest.raises(ParameterError):
        DetectorParams(0.0, BANDWIDTH, 1e-4, 1.0)
    with pytest.raises(ParameterError):
        DetectorParams(SNR, BANDWIDTH, 1e-8, 1.0)


@pytest.mark.parametrize('sense_time', [50e-6, 0.1e-3, 0.24e-3, 1e-3])
def test_calibration_converges_at_default_tolerances(sense_time):
    threshold, p_f = calibrate_threshold(SNR, BANDWIDTH, sense_time, 0.1)
    assert 0.0 < p_f < 1.0
    assert threshold > 1.0


def test_scenario_presets_calibrate_without_error():
    from bench.scenarios import sensing_preset

    long = sensing_preset('long')
    short = sensing_preset('short')
    assert long.p_ft == pytest.approx(0.0045, abs=5e-4)
    assert short.p_ft == pytest.approx(0.15, abs=0.01)


def test_bisection_failure_becomes_calibration_error(monkeypatch):
    from detector import energy_detector

    def failing_bisect(*args, **kwargs):
        raise ValueError('rtol too small')

    monkeypatch.setattr(energy_detector.optimize, 'bisect', failing_bisect)
    with pytest.raises(CalibrationError):
        calibrate_threshold(SNR, BANDWIDTH, 0.1e-3, 0.1)
