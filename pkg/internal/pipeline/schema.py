"""
运行配置校验

先做结构检查（字段、类型、取值），再做物理检查（窗口不超过块尺寸、子带数整除采样数、
速度不模糊等）。所有问题都带字段路径，如 windows.tiled-beamspace[1]。
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

from internal.detector import RANGE_WINDOWS, DOPPLER_TAPERS
from internal.scene import JAMMER_MODELS
from internal.utils.errors import ConfigError

MODE_NAMES = ("oracle-full", "single-beamspace", "tiled-beamspace")
BEAMSPACE_MODES = ("single-beamspace", "tiled-beamspace")

_NUMBER = (int, float)

TOP_LEVEL_FIELDS = {
    'profile': str,
    'layout': dict,
    'single_array': dict,
    'scenario': dict,
    'modes': list,
    'windows': dict,
    'n_t': int,
    'snapshot_multiplier': int,
    'loading_factor': _NUMBER,
    'seed': int,
    'workers': int,
    'inr_db': _NUMBER,
    'n_subbands': int,
    'jammer_model': str,
    'cfar': dict,
    'range_window': str,
    'doppler_taper': str,
    'patterns': list,
    'pattern_grid': dict,
    'export': dict,
    'output_dir': str,
}

LAYOUT_FIELDS = ('tiles_z', 'tiles_x', 'elems_z', 'elems_x')
CFAR_FIELDS = {'threshold_db': _NUMBER, 'guard_cells': int, 'training_cells': int}
GRID_FIELDS = {'az_min_deg': _NUMBER, 'az_max_deg': _NUMBER, 'el_min_deg': _NUMBER,
               'el_max_deg': _NUMBER, 'step_deg': _NUMBER}


@dataclass
class Diagnostics:
    """校验结果"""

    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, path: str, message: str):
        self.errors.append(f"{path}: {message}")

    def warn(self, path: str, message: str):
        self.warnings.append(f"{path}: {message}")

    def raise_if_failed(self):
        if self.errors:
            raise ConfigError("; ".join(self.errors))

    def to_dict(self) -> Dict[str, Any]:
        return {'ok': self.ok, 'errors': list(self.errors), 'warnings': list(self.warnings)}


def _is_type(value, expected) -> bool:
    if isinstance(value, bool) and expected is not bool:
        return False
    if expected is int:
        return isinstance(value, int)
    return isinstance(value, expected)


def _positive_int(diag: Diagnostics, path: str, value, minimum: int = 1):
    if not _is_type(value, int) or value < minimum:
        diag.error(path, f"必须是不小于 {minimum} 的整数，实际为 {value!r}")
        return False
    return True


def _check_fields(diag: Diagnostics, data: Dict[str, Any], allowed: Dict[str, Any], prefix: str):
    for key, value in data.items():
        path = f"{prefix}.{key}" if prefix else key
        if key not in allowed:
            diag.error(path, "未知字段")
        elif value is not None and not _is_type(value, allowed[key]):
            diag.error(path, f"类型错误，实际为 {type(value).__name__}")


def check_structure(data: Any) -> Diagnostics:
    """结构检查"""
    diag = Diagnostics()
    if not isinstance(data, dict):
        diag.error('$', "配置必须是 JSON 对象")
        return diag
    _check_fields(diag, data, TOP_LEVEL_FIELDS, '')

    modes = data.get('modes')
    if modes is not None and isinstance(modes, list):
        if not modes:
            diag.error('modes', "至少需要一个模式")
        for i, mode in enumerate(modes):
            if mode not in MODE_NAMES:
                diag.error(f'modes[{i}]', f"未知模式 {mode!r}，可选 {', '.join(MODE_NAMES)}")
        if len(set(map(str, modes))) != len(modes):
            diag.error('modes', "模式重复")

    windows = data.get('windows')
    if isinstance(windows, dict):
        for mode, shape in windows.items():
            path = f'windows.{mode}'
            if mode not in BEAMSPACE_MODES:
                diag.error(path, "只有波束域模式需要窗口")
            elif not (isinstance(shape, list) and len(shape) == 2):
                diag.error(path, "必须是 [W_z, W_x]")
            else:
                for i, w in enumerate(shape):
                    _positive_int(diag, f'{path}[{i}]', w)

    for block, keys in (('layout', LAYOUT_FIELDS), ('single_array', ('elems_z', 'elems_x'))):
        sub = data.get(block)
        if isinstance(sub, dict):
            _check_fields(diag, sub, {k: int for k in keys}, block)
            for key in keys:
                if key in sub:
                    _positive_int(diag, f'{block}.{key}', sub[key])

    scenario = data.get('scenario')
    if isinstance(scenario, dict):
        sources = [k for k in ('library', 'file', 'inline') if k in scenario]
        if len(sources) != 1:
            diag.error('scenario', "必须且只能指定 library、file、inline 之一")
        _check_fields(diag, scenario, {'library': str, 'file': str, 'inline': dict, 'scale': int}, 'scenario')
        if 'scale' in scenario:
            _positive_int(diag, 'scenario.scale', scenario['scale'])

    cfar = data.get('cfar')
    if isinstance(cfar, dict):
        _check_fields(diag, cfar, CFAR_FIELDS, 'cfar')
        if _is_type(cfar.get('threshold_db', 10.0), _NUMBER) and not cfar.get('threshold_db', 10.0) > 0:
            diag.error('cfar.threshold_db', "必须为正")
        if 'training_cells' in cfar:
            _positive_int(diag, 'cfar.training_cells', cfar['training_cells'])
        if 'guard_cells' in cfar:
            _positive_int(diag, 'cfar.guard_cells', cfar['guard_cells'], minimum=0)

    grid = data.get('pattern_grid')
    if isinstance(grid, dict):
        _check_fields(diag, grid, GRID_FIELDS, 'pattern_grid')

    patterns = data.get('patterns')
    if isinstance(patterns, list):
        for i, item in enumerate(patterns):
            if not (isinstance(item, dict) and _is_type(item.get('target_id'), int)
                    and item.get('mode') in MODE_NAMES):
                diag.error(f'patterns[{i}]', "必须是 {target_id: int, mode: 模式名}")

    for key in ('n_t', 'snapshot_multiplier', 'workers', 'n_subbands'):
        if data.get(key) is not None:
            _positive_int(diag, key, data[key])
    for key, allowed in (('range_window', RANGE_WINDOWS), ('doppler_taper', DOPPLER_TAPERS),
                         ('jammer_model', JAMMER_MODELS)):
        if data.get(key) is not None and data[key] not in allowed:
            diag.error(key, f"未知取值 {data[key]!r}，可选 {', '.join(allowed)}")
    loading = data.get('loading_factor')
    if _is_type(loading, _NUMBER) and (loading < 0 or not math.isfinite(loading)):
        diag.error('loading_factor', f"必须是非负有限值，实际为 {loading!r}")
    return diag


def check_physics(diag: Diagnostics, config, scenario, layout):
    """物理检查：需要已解析的场景与阵列"""
    wf = scenario.waveform
    for mode, (w_z, w_x) in config.windows.items():
        if mode not in config.modes:
            continue
        if mode == 'tiled-beamspace':
            n_z, n_x = layout.elems_z, layout.elems_x
            label = '块'
        else:
            n_z, n_x = config.single_array
            label = '单阵'
        if w_z > n_z:
            diag.error(f'windows.{mode}[0]', f"W_z={w_z} 超出{label}尺寸 elems_z={n_z}")
        if w_x > n_x:
            diag.error(f'windows.{mode}[1]', f"W_x={w_x} 超出{label}尺寸 elems_x={n_x}")
    if 'single-beamspace' in config.modes:
        s_z, s_x = config.single_array
        if s_z > layout.total_z or s_x > layout.total_x:
            diag.error('single_array', f"{s_z}x{s_x} 超出阵列 {layout.total_z}x{layout.total_x}")
    if wf.samples_per_pulse % wf.n_subbands:
        diag.error('n_subbands', f"{wf.n_subbands} 不能整除每脉冲采样数 {wf.samples_per_pulse}")
    for problem in scenario.check_physics():
        path, _, message = problem.partition(': ')
        diag.error(f'scenario.{path}', message)
    if scenario.tile_noise_db is not None and len(scenario.tile_noise_db) != layout.n_tiles:
        diag.error('scenario.noise.tile_power_db',
                   f"长度 {len(scenario.tile_noise_db)} 与块数 T={layout.n_tiles} 不符")
    if config.loading_factor == 0:
        diag.warn('loading_factor', "未加载，训练快拍不足时协方差奇异")


def load_config_file(path: str) -> Dict[str, Any]:
    """读取 JSON 配置文件"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"配置文件不存在: {path}", '$')
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}", '$')
