"""
运行配置

优先级从低到高：cfg/unios.toml 默认值 < 配置档(profile) < JSON 配置文件 < 命令行参数。
文件中角度用度，内部统一为弧度。
"""

import hashlib
import json
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from internal.array_model import ArrayLayout
from internal.beamformer import PatternGrid
from internal.config import TomlConfig
from internal.detector import CfarConfig
from internal.pipeline.schema import (
    Diagnostics, check_structure, check_physics, load_config_file, MODE_NAMES,
)
from internal.scene import Scenario, load_scenario, scenario_library
from internal.utils import get_logger
from internal.utils.errors import ConfigError, RadarSimError

logger = get_logger('pipeline')

DEFAULT_SCENARIO = {'library': 'E2-like', 'scale': 1}
DEFAULT_MODES = ('single-beamspace', 'tiled-beamspace')

# 不影响输出内容的字段，不参与配置哈希
_HASH_EXCLUDED = ('output_dir', 'workers')


def load_profile(name: str) -> Dict[str, Any]:
    """读取配置档"""
    profiles = TomlConfig().PROFILES
    if name not in profiles:
        raise ConfigError(f"未知配置档 {name!r}，可选: {', '.join(sorted(profiles))}", 'profile')
    return profiles[name]


@dataclass(frozen=True)
class RunConfig:
    """一次仿真运行的完整配置"""

    profile: str
    layout: Dict[str, int]
    single_array: Tuple[int, int]
    scenario: Dict[str, Any]
    modes: Tuple[str, ...]
    windows: Dict[str, Tuple[int, int]]
    n_t: Optional[int] = None
    snapshot_multiplier: int = 4
    loading_factor: float = 1e-9
    seed: int = 0
    workers: int = 4
    inr_db: Optional[float] = None
    n_subbands: Optional[int] = None
    jammer_model: Optional[str] = None
    cfar: CfarConfig = field(default_factory=CfarConfig)
    range_window: str = "none"
    doppler_taper: str = "none"
    patterns: Tuple[Tuple[int, str], ...] = ()
    pattern_grid: PatternGrid = field(default_factory=PatternGrid)
    export_maps: bool = False
    export_snapshots: bool = False
    output_dir: str = "runs"
    base_dir: str = "."

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]] = None, base_dir: str = ".") -> 'RunConfig':
        """
        从 JSON 字典构造，缺省字段取配置档和 cfg/unios.toml

        Raises:
            ConfigError: 结构错误，消息中带全部字段路径
        """
        data = dict(data or {})
        diag = check_structure(data)
        diag.raise_if_failed()

        config = TomlConfig()
        profile_name = data.get('profile') or config.DEFAULT_PROFILE
        profile = load_profile(profile_name)

        layout = {
            'tiles_z': profile.get('TILES_Z', 4),
            'tiles_x': profile.get('TILES_X', 2),
            'elems_z': profile.get('ELEMS_Z', 2),
            'elems_x': profile.get('ELEMS_X', 16),
        }
        layout.update(data.get('layout') or {})
        single = data.get('single_array') or {}
        single_array = (
            int(single.get('elems_z', profile.get('SINGLE_ELEMS_Z', 4))),
            int(single.get('elems_x', profile.get('SINGLE_ELEMS_X', 8))),
        )

        windows = {
            'single-beamspace': tuple(profile.get('SINGLE_WINDOW', [4, 4])),
            'tiled-beamspace': tuple(profile.get('TILED_WINDOW', [2, 2])),
        }
        for mode, shape in (data.get('windows') or {}).items():
            windows[mode] = (int(shape[0]), int(shape[1]))

        scenario = dict(data.get('scenario') or DEFAULT_SCENARIO)
        n_subbands = data.get('n_subbands')
        if n_subbands is None and 'library' in scenario:
            n_subbands = profile.get('N_SUBBANDS')

        cfar_data = data.get('cfar') or {}
        try:
            cfar = CfarConfig(
                threshold_db=float(cfar_data.get('threshold_db', config.CFAR_THRESHOLD_DB)),
                guard_cells=int(cfar_data.get('guard_cells', config.CFAR_GUARD_CELLS)),
                training_cells=int(cfar_data.get('training_cells', config.CFAR_TRAINING_CELLS)),
            )
        except ValueError as e:
            raise ConfigError(str(e), 'cfar')

        grid = PatternGrid.from_config()
        grid_data = data.get('pattern_grid') or {}
        if grid_data:
            try:
                grid = replace(grid, **{k: float(v) for k, v in grid_data.items()})
            except ValueError as e:
                raise ConfigError(str(e), 'pattern_grid')

        export = data.get('export') or {}
        return cls(
            profile=profile_name,
            layout={k: int(v) for k, v in layout.items()},
            single_array=single_array,
            scenario=scenario,
            modes=tuple(data.get('modes') or DEFAULT_MODES),
            windows=windows,
            n_t=data.get('n_t'),
            snapshot_multiplier=int(data.get('snapshot_multiplier') or config.SNAPSHOT_MULTIPLIER),
            loading_factor=float(config.LOADING_FACTOR if data.get('loading_factor') is None
                                 else data['loading_factor']),
            seed=int(data.get('seed', 0)),
            workers=int(data.get('workers') or config.WORKERS),
            inr_db=None if data.get('inr_db') is None else float(data['inr_db']),
            n_subbands=None if n_subbands is None else int(n_subbands),
            jammer_model=data.get('jammer_model'),
            cfar=cfar,
            range_window=data.get('range_window') or config.RANGE_WINDOW,
            doppler_taper=data.get('doppler_taper') or config.DOPPLER_TAPER,
            patterns=tuple((int(p['target_id']), str(p['mode'])) for p in data.get('patterns') or []),
            pattern_grid=grid,
            export_maps=bool(export.get('maps', False)),
            export_snapshots=bool(export.get('snapshots', False)),
            output_dir=data.get('output_dir') or config.OUTPUT_DIR,
            base_dir=base_dir,
        )

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> 'RunConfig':
        """读取 JSON 配置文件，overrides 为命令行覆盖项"""
        data = load_config_file(path)
        if not isinstance(data, dict):
            raise ConfigError("配置必须是 JSON 对象", '$')
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))

    def with_overrides(self, **changes) -> 'RunConfig':
        return replace(self, **changes)

    def window_for(self, mode: str) -> Tuple[int, int]:
        return self.windows[mode]

    def to_dict(self) -> Dict[str, Any]:
        """解析后的配置，可直接作为 JSON 配置重新读入"""
        return {
            'profile': self.profile,
            'layout': dict(self.layout),
            'single_array': {'elems_z': self.single_array[0], 'elems_x': self.single_array[1]},
            'scenario': dict(self.scenario),
            'modes': list(self.modes),
            'windows': {mode: list(shape) for mode, shape in sorted(self.windows.items())},
            'n_t': self.n_t,
            'snapshot_multiplier': self.snapshot_multiplier,
            'loading_factor': self.loading_factor,
            'seed': self.seed,
            'workers': self.workers,
            'inr_db': self.inr_db,
            'n_subbands': self.n_subbands,
            'jammer_model': self.jammer_model,
            'cfar': self.cfar.to_dict(),
            'range_window': self.range_window,
            'doppler_taper': self.doppler_taper,
            'patterns': [{'target_id': t, 'mode': m} for t, m in self.patterns],
            'pattern_grid': {
                'az_min_deg': self.pattern_grid.az_min_deg,
                'az_max_deg': self.pattern_grid.az_max_deg,
                'el_min_deg': self.pattern_grid.el_min_deg,
                'el_max_deg': self.pattern_grid.el_max_deg,
                'step_deg': self.pattern_grid.step_deg,
            },
            'export': {'maps': self.export_maps, 'snapshots': self.export_snapshots},
            'output_dir': self.output_dir,
        }


def resolve_scenario(config: RunConfig) -> Scenario:
    """按配置构造场景（场景库、文件或内联）"""
    source = config.scenario
    try:
        if 'library' in source:
            scenario = scenario_library(source['library'], scale=int(source.get('scale', 1)),
                                        n_subbands=config.n_subbands)
        elif 'file' in source:
            path = source['file']
            if not os.path.isabs(path):
                path = os.path.join(config.base_dir, path)
            scenario = load_scenario(path)
        elif 'inline' in source:
            scenario = Scenario.from_dict(source['inline'])
        else:
            raise ConfigError("必须指定 library、file 或 inline", 'scenario')
    except KeyError as e:
        if isinstance(e, RadarSimError):
            raise ConfigError(str(e), 'scenario.library')
        raise ConfigError(f"缺少字段 {e}", 'scenario.inline')
    except (ValueError, TypeError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e), 'scenario')

    if config.n_subbands is not None and 'library' not in source \
            and config.n_subbands != scenario.waveform.n_subbands:
        try:
            scenario = replace(scenario, waveform=replace(scenario.waveform, n_subbands=config.n_subbands))
        except ValueError as e:
            raise ConfigError(str(e), 'n_subbands')
    if config.inr_db is not None:
        scenario = scenario.with_inr(config.inr_db)
    if config.jammer_model is not None:
        try:
            scenario = replace(scenario, jammer_model=config.jammer_model)
        except ValueError as e:
            raise ConfigError(str(e), 'jammer_model')
    return scenario


def build_layout(config: RunConfig, scenario: Scenario) -> ArrayLayout:
    """阵列几何，设计频率取场景载频"""
    try:
        return ArrayLayout(design_freq_hz=scenario.waveform.carrier_hz, **config.layout)
    except ValueError as e:
        raise ConfigError(str(e), 'layout')


def validate_config(config: RunConfig) -> Tuple[Diagnostics, Optional[Scenario], Optional[ArrayLayout]]:
    """物理检查，返回诊断信息以及解析出的场景和阵列"""
    diag = Diagnostics()
    unknown = [m for m in config.modes if m not in MODE_NAMES]
    for mode in unknown:
        diag.error('modes', f"未知模式 {mode!r}")
    try:
        scenario = resolve_scenario(config)
        layout = build_layout(config, scenario)
    except ConfigError as e:
        diag.error(e.path or 'scenario', e.message)
        return diag, None, None
    check_physics(diag, config, scenario, layout)
    return diag, scenario, layout


def validate_file(path: str) -> Diagnostics:
    """
    校验配置文件，无副作用

    Raises:
        ConfigError: 文件不可读
    """
    data = load_config_file(path)
    diag = check_structure(data)
    if not diag.ok:
        return diag
    try:
        config = RunConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))
    except ConfigError as e:
        diag.error(e.path or '$', e.message)
        return diag
    physics, _, _ = validate_config(config)
    diag.errors.extend(physics.errors)
    diag.warnings.extend(physics.warnings)
    logger.info(f"配置校验 {path}: {len(diag.errors)} 个错误, {len(diag.warnings)} 个警告")
    return diag


def config_hash(config: RunConfig, scenario: Optional[Scenario] = None) -> str:
    """解析后配置（含场景内容）的 sha256"""
    payload = {k: v for k, v in config.to_dict().items() if k not in _HASH_EXCLUDED}
    if scenario is not None:
        payload['resolved_scenario'] = scenario.to_dict()
    text = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def parse_window(text: str) -> List[Tuple[Optional[str], Tuple[int, int]]]:
    """
    解析 --window 参数：ZxX 作用于所有波束域模式，mode:ZxX 只作用于指定模式，
    多个用逗号分隔
    """
    result = []
    for item in filter(None, (s.strip() for s in text.split(','))):
        mode, _, shape = item.rpartition(':')
        try:
            w_z, w_x = (int(v) for v in shape.lower().split('x'))
        except ValueError:
            raise ConfigError(f"窗口格式应为 ZxX 或 mode:ZxX: {item!r}", 'windows')
        if mode and mode not in MODE_NAMES:
            raise ConfigError(f"未知模式 {mode!r}", 'windows')
        result.append((mode or None, (w_z, w_x)))
    return result
