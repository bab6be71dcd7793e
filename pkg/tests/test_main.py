"""명령행 진입점 테스트"""

import pandas as pd
import pytest

from main import EXIT_OK, EXIT_USAGE, build_parser, main

SMALL = """
name = small
algorithm = P0Q1
S = 1
N = 2
B = 1
traffic.pu = slow
sensing.preset = short
simulation.slots = 3000
simulation.warmup_slots = 300
simulation.replications = 2
simulation.workers = 1
"""


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / 'small.conf'
    path.write_text(SMALL, encoding='utf-8')
    return path


def test_subcommand_is_required():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 2


def test_analyze_writes_single_row(small_config, tmp_path):
    out = tmp_path / 'result.csv'
    assert main(['analyze', '--config', str(small_config), '--quiet', '--out', str(out)]) == EXIT_OK
    df = pd.read_csv(out)
    assert len(df) == 1
    assert df.loc[0, 'algorithm'] == 'P0Q1'
    assert df.loc[0, 'R_analytic'] > 0
    assert pd.isna(df.loc[0, 'R_sim'])


def test_simulate_skips_analysis(small_config, tmp_path):
    out = tmp_path / 'sim.csv'
    assert main(['simulate', '--config', str(small_config), '--quiet', '--out', str(out), '--seed', '7']) == EXIT_OK
    df = pd.read_csv(out)
    assert pd.isna(df.loc[0, 'R_analytic'])
    assert df.loc[0, 'R_sim'] > 0


def test_sweep_with_no_sim(small_config, tmp_path):
    small_config.write_text(SMALL + '\n[sweep]\naxis = S\nvalues = 1, 2\n', encoding='utf-8')
    out = tmp_path / 'sweep.csv'
    assert main(['sweep', '--config', str(small_config), '--quiet', '--no-sim', '--out', str(out)]) == EXIT_OK
    assert list(pd.read_csv(out)['S']) == [1, 2]


def test_missing_config_is_usage_error():
    assert main(['analyze', '--quiet']) == EXIT_USAGE


def test_bad_config_is_usage_error(tmp_path):
    path = tmp_path / 'bad.conf'
    path.write_text('algorithm = P9Q9\n', encoding='utf-8')
    assert main(['analyze', '--config', str(path), '--quiet']) == EXIT_USAGE


def test_seed_out_of_range_is_usage_error(small_config):
    assert main(['simulate', '--config', str(small_config), '--quiet', '--seed', '-1']) == EXIT_USAGE
