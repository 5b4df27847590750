"""
命令行入口

    python cmd/main.py run --config cfg/run.json --out runs/demo --seed 1
    python cmd/main.py validate --config cfg/run.json
    python cmd/main.py emit-pattern --config cfg/run.json --target 5 --mode tiled-beamspace
    python cmd/main.py scenario-list
    python cmd/main.py sweep --scenario A1-like --inr 60,90,120
    python cmd/main.py sweep --scenario A1-like --inr 120 --loading-values 1e-3,1e-6,1e-9
    python cmd/main.py serve

退出码：0 成功，2 配置错误，3 数值失败（未加载时协方差奇异）
"""

import argparse
import os
import sys

# 添加项目根目录到 Python 搜索路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from internal.config import get_config
from internal.pipeline import (
    RunConfig, SimulationEngine, BEAMSPACE_MODES, MODE_NAMES, parse_window, validate_file,
)
from internal.pipeline.schema import load_config_file
from internal.scene import scenario_names, scenario_description
from internal.utils import get_logger, set_run_id
from internal.utils.errors import RadarSimError, ConfigError

logger = get_logger('cli')

EXIT_OK = 0


def _float_list(text: str):
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"应为逗号分隔的数值: {text!r}")


def _add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument('--config', help='JSON 运行配置文件')
    parser.add_argument('--out', help='输出目录')
    parser.add_argument('--seed', type=int, help='随机种子')
    parser.add_argument('--modes', help=f"逗号分隔的模式: {', '.join(MODE_NAMES)}")
    parser.add_argument('--window', action='append', default=[],
                        help='波束域窗口 ZxX（所有波束域模式）或 mode:ZxX，可重复')
    parser.add_argument('--snapshots', type=int, help='训练快拍数 n_t')
    parser.add_argument('--loading', type=float, help='相对对角加载系数')
    parser.add_argument('--profile', choices=('desk', 'paper'), help='阵列配置档')
    parser.add_argument('--workers', type=int, help='并行线程数')
    parser.add_argument('--scenario', help='场景库名称，如 E2-like')
    parser.add_argument('--scale', type=int, help='场景规模放大倍数')


def build_config(args) -> RunConfig:
    """配置文件 + 命令行覆盖"""
    data = load_config_file(args.config) if args.config else {}
    if not isinstance(data, dict):
        raise ConfigError("配置必须是 JSON 对象", '$')
    base_dir = os.path.dirname(os.path.abspath(args.config)) if args.config else os.getcwd()

    if args.profile:
        data['profile'] = args.profile
    if args.out:
        data['output_dir'] = args.out
    if args.seed is not None:
        data['seed'] = args.seed
    if args.modes:
        data['modes'] = [m.strip() for m in args.modes.split(',') if m.strip()]
    if args.snapshots is not None:
        data['n_t'] = args.snapshots
    if args.loading is not None:
        data['loading_factor'] = args.loading
    if args.workers is not None:
        data['workers'] = args.workers
    if args.scenario:
        data['scenario'] = {'library': args.scenario, 'scale': args.scale or 1}
    elif args.scale is not None:
        scenario = dict(data.get('scenario') or {'library': 'E2-like'})
        scenario['scale'] = args.scale
        data['scenario'] = scenario
    inr = getattr(args, 'inr', None)
    if isinstance(inr, list):
        if getattr(args, 'loading_values', None) and len(inr) == 1:
            data['inr_db'] = inr[0]
    elif inr is not None:
        data['inr_db'] = inr

    windows = dict(data.get('windows') or {})
    for text in args.window:
        for mode, shape in parse_window(text):
            for target in ([mode] if mode else BEAMSPACE_MODES):
                windows[target] = list(shape)
    if windows:
        data['windows'] = windows
    for key in ('export_maps', 'export_snapshots'):
        if getattr(args, key, False):
            export = dict(data.get('export') or {})
            export[key.split('_', 1)[1]] = True
            data['export'] = export
    return RunConfig.from_dict(data, base_dir=base_dir)


def cmd_run(args) -> int:
    config = build_config(args)
    for item in args.pattern:
        target, _, mode = item.partition(':')
        try:
            pattern = (int(target), mode or 'tiled-beamspace')
        except ValueError:
            raise ConfigError(f"方向图格式应为 target:mode: {item!r}", 'patterns')
        config = config.with_overrides(patterns=config.patterns + (pattern,))
    result = SimulationEngine(config).run(write=True)
    print(result.summary.to_string(index=False))
    print(f"\n输出目录: {result.output_dir}")
    return EXIT_OK


def cmd_validate(args) -> int:
    diag = validate_file(args.config)
    for warning in diag.warnings:
        print(f"warning: {warning}")
    for error in diag.errors:
        print(f"error: {error}", file=sys.stderr)
    if diag.ok:
        print("OK")
        return EXIT_OK
    return ConfigError.exit_code


def cmd_emit_pattern(args) -> int:
    config = build_config(args)
    engine = SimulationEngine(config)
    result = engine.emit_pattern(args.target, args.mode, args.subband, output_dir=config.output_dir)
    width = result.mainlobe
    print(f"{result.path}: {len(result.frame)} 行, -3 dB 主瓣宽度 方位 {width['azimuth_deg']:.2f}°, "
          f"俯仰 {width['elevation_deg']:.2f}°")
    return EXIT_OK


def cmd_scenario_list(args) -> int:
    for name in scenario_names():
        print(f"{name:10s} {scenario_description(name)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = build_config(args)
    engine = SimulationEngine(config)
    if args.loading_values and args.inr and len(args.inr) > 1:
        raise ConfigError("加载扫描时 --inr 只能给一个取值", 'inr_db')
    if not args.loading_values and not args.inr:
        raise ConfigError("需要 --inr 或 --loading-values", 'sweep')
    if args.loading_values:
        frame, column = engine.loading_sweep(args.loading_values), 'loading_factor'
    else:
        frame, column = engine.sweep(args.inr), 'inr_db'
    summary = frame.groupby([column, 'mode'], sort=False).agg(
        n_detected=('detected', 'sum'), mean_sinr_db=('sinr_db', 'mean')).reset_index()
    print(summary.to_string(index=False))
    return EXIT_OK


def cmd_serve(args) -> int:
    from app import create_app

    config = get_config()()
    app = create_app()
    app.run(host=args.host or config.API_HOST, port=args.port or config.API_PORT)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='tbradar',
        description='分块窗口化波束空间 MVDR 宽带雷达仿真',
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('run', help='运行仿真并写出报告')
    _add_run_options(p)
    p.add_argument('--inr', type=float, help='所有干扰机的干噪比 (dB)')
    p.add_argument('--pattern', action='append', default=[], help='输出方向图 target:mode，可重复')
    p.add_argument('--export-maps', dest='export_maps', action='store_true', help='导出距离-多普勒图')
    p.add_argument('--export-snapshots', dest='export_snapshots', action='store_true', help='导出子带快拍')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('validate', help='校验配置文件')
    p.add_argument('--config', required=True, help='JSON 运行配置文件')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('emit-pattern', help='输出方向图网格 CSV')
    _add_run_options(p)
    p.add_argument('--target', type=int, required=True, help='目标编号')
    p.add_argument('--mode', required=True, choices=MODE_NAMES, help='模式')
    p.add_argument('--subband', type=int, default=0, help='子带下标，默认中心子带')
    p.set_defaults(func=cmd_emit_pattern)

    p = sub.add_parser('scenario-list', help='列出场景库')
    p.set_defaults(func=cmd_scenario_list)

    p = sub.add_parser('sweep', help='干噪比或对角加载扫描')
    _add_run_options(p)
    p.add_argument('--inr', type=_float_list, help='逗号分隔的干噪比 (dB)；与 --loading-values 同用时为固定干噪比')
    p.add_argument('--loading-values', dest='loading_values', type=_float_list,
                   help='逗号分隔的相对对角加载系数，按加载扫描')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('serve', help='启动 API 服务')
    p.add_argument('--host', help='监听地址')
    p.add_argument('--port', type=int, help='监听端口')
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    set_run_id()
    try:
        return args.func(args)
    except RadarSimError as e:
        logger.error(f"{args.command} 失败: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
