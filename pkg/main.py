"""
OSA MAC Benchmark
메인 실행 스크립트
"""

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

# 프로젝트 루트를 경로에 추가
sys.path.insert(0, str(Path(__file__).parent))

import config
from analyzers import MarkovAnalyzer
from bench import (
    FAILED,
    OK,
    ResultWriter,
    SimulationOptions,
    evaluate_point,
    expand_points,
    load_config,
    reproduce_claims,
    run_points,
    single_point,
)
from core.exceptions import ConfigError, OsaModelError, ParameterError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


def setup_logging(quiet=False):
    """파일과 표준 출력으로 로그 설정"""
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(config.LOG_FILE, encoding='utf-8'),
            logging.StreamHandler(sys.stdout),
        ],
        force=True,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        description='OSA MAC Benchmark: 다단계 스펙트럼 센싱 MAC 분석/시뮬레이션',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
예시:
  python main.py analyze --config configs/stages.conf         # 정확한 마르코프 분석만
  python main.py simulate --config configs/stages.conf        # 몬테카를로 시뮬레이션만
  python main.py sweep --config configs/sensing_time.conf --qos-only   # 분석 + 시뮬레이션 + CSV
  python main.py verify --no-sim --quick                    # 정량 주장 검증
        """
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='PATH', help='설정 파일 경로')
    common.add_argument('--out', metavar='PATH', help=f'결과 파일 경로 (기본값: {config.OUTPUT_DIR}/ 아래 자동 생성)')
    common.add_argument('--seed', type=int, metavar='U64', help='시뮬레이션 시드')
    common.add_argument('--slots', type=int, metavar='N', help='복제당 시뮬레이션 슬롯 수 (워밍업 포함)')
    common.add_argument('--no-sim', action='store_true', help='몬테카를로 시뮬레이션 생략')
    common.add_argument('--quiet', action='store_true', help='경고 이상의 로그만 출력')

    subparsers = parser.add_subparsers(dest='command', required=True)
    subparsers.add_parser('analyze', parents=[common], help='정확한 마르코프 분석만 수행')
    subparsers.add_parser('simulate', parents=[common], help='몬테카를로 시뮬레이션만 수행')
    sweep = subparsers.add_parser('sweep', parents=[common], help='분석과 시뮬레이션 후 CSV 저장')
    sweep.add_argument('--qos-only', action='store_true', help='QoS 위반 행을 CSV 에서 제외')
    verify = subparsers.add_parser('verify', parents=[common], help='정량 주장 재현 검증')
    verify.add_argument('--quick', action='store_true', help='S <= 2, N <= 4 로 축소한 격자 사용')
    return parser


def apply_overrides(options: SimulationOptions, args) -> SimulationOptions:
    """명령행 인자로 시뮬레이션 옵션 덮어쓰기"""
    changes = {}
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 2 ** 64:
            raise ParameterError(f"--seed={args.seed} 는 0 이상 2^64 미만이어야 합니다.")
        changes['seed'] = args.seed
    if args.slots is not None:
        if args.slots <= 0:
            raise ParameterError(f"--slots={args.slots} 는 양수여야 합니다.")
        changes['slots'] = args.slots
        if options.warmup_slots >= args.slots:
            changes['warmup_slots'] = args.slots // 10
    if args.no_sim:
        changes['simulate'] = False
    if args.command == 'analyze':
        changes.update(analytic=True, simulate=False)
    elif args.command == 'simulate':
        changes.update(analytic=False, simulate=True)
    return replace(options, **changes)


def _format(value, digits=6):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return '-'
    return f"{value:.{digits}g}"


def print_row(row):
    """결과 행 한 줄 출력"""
    status = '✅' if row.status == OK and row.invariant_ok and not row.comparison_failed else '⚠️ '
    if row.status == FAILED:
        status = '❌'
    axis = f" {row.axis}={row.axis_value}" if row.axis else ''
    line = (f"  {status} {row.algorithm}{axis}: R={_format(row.R_analytic)} G={_format(row.G_analytic)}"
            f" | sim R={_format(row.R_sim)}±{_format(row.R_sim_se, 3)} G={_format(row.G_sim)}±{_format(row.G_sim_se, 3)}")
    if row.qos_violation:
        line += ' [QoS 위반]'
    if row.note:
        line += f" ({row.note})"
    print(line)


def run_config(args) -> int:
    """analyze / simulate / sweep 실행"""
    if not args.config:
        raise ConfigError("--config 경로가 필요합니다.")
    bench = load_config(args.config)
    options = apply_overrides(bench.options, args)
    points = expand_points(bench.sweep) if bench.sweep else single_point(bench.scenario)

    if not args.quiet:
        print(f"📄 설정: {bench.source}")
        print(f"   시나리오: {bench.scenario.name or bench.scenario.algorithm.value} "
              f"({bench.scenario.architecture.value}, N={bench.scenario.N}, S={bench.scenario.S}, B={bench.scenario.B})")
        if bench.sweep:
            print(f"   스윕: {bench.sweep.axis} = {list(bench.sweep.values)}")
        print(f"   분석: {'예' if options.analytic else '아니오'}, 시뮬레이션: {'예' if options.simulate else '아니오'}")
        print()

    progress = None if args.quiet else print_row
    analyzer = None
    if args.command == 'analyze' and bench.sweep is None:
        analyzer = MarkovAnalyzer()
        row = evaluate_point(points[0], options, analyzer=analyzer)
        if progress:
            progress(row)
        rows = [row]
        if analyzer.results:
            analyzer.save_results()
    else:
        rows = run_points(points, options, progress=progress)

    writer = ResultWriter()
    path = writer.save_csv(rows, args.out, qos_only=getattr(args, 'qos_only', False))

    failed = [r for r in rows if r.status == FAILED or not r.invariant_ok or r.comparison_failed]
    flagged = sum(1 for r in rows if r.qos_violation)
    if not args.quiet:
        print(f"\n{'=' * 60}")
        print("✅ 작업 완료 요약")
        print(f"{'=' * 60}")
        print(f"  지점 수: {len(rows)}개 (QoS 위반 {flagged}개, 실패 {len(failed)}개)")
        print(f"  💾 CSV 저장: {path}")
    for row in failed:
        logger.warning(f"검사 실패: {row.name} {row.axis}={row.axis_value} ({row.note or '불변식/비교 실패'})")
    return EXIT_FAILURE if failed else EXIT_OK


def run_verify(args) -> int:
    """정량 주장 검증 실행"""
    options = SimulationOptions()
    if args.config:
        options = load_config(args.config).options
    options = apply_overrides(options, args)

    def show(result):
        if args.quiet:
            return
        mark = '✅' if result.passed else ('ℹ️ ' if result.informational else '❌')
        print(f"  {mark} {result.claim}: {result.computed} (기대 {result.expected}, 허용 {result.tolerance})")

    if not args.quiet:
        print(f"🔬 정량 주장 검증 ({'축소' if args.quick else '전체'} 격자, "
              f"시뮬레이션 {'포함' if options.simulate else '생략'})\n")
    report = reproduce_claims(options if options.simulate else None, quick=args.quick, progress=show)
    path = ResultWriter().save_json(report.to_dict(), args.out, prefix='claims')

    if not args.quiet:
        print(f"\n{'=' * 60}")
        print(f"{'✅ 모든 주장 통과' if report.passed else f'❌ {len(report.failures)}개 주장 실패'}")
        print(f"{'=' * 60}")
        print(f"  💾 보고서 저장: {path}")
    return EXIT_OK if report.passed else EXIT_FAILURE


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.quiet)

    if not args.quiet:
        print("=" * 60)
        print("📡 OSA MAC Benchmark")
        print("=" * 60)
        print()

    try:
        if args.command == 'verify':
            return run_verify(args)
        return run_config(args)
    except (ConfigError, ParameterError) as e:
        print(f"❌ 설정 오류: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OsaModelError as e:
        print(f"❌ 실행 오류: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except KeyboardInterrupt:
        print("\n\n⚠️  사용자에 의해 중단되었습니다.")
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
