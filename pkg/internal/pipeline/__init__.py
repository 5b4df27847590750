"""
仿真流水线模块

运行配置、配置校验、波束形成模式、仿真引擎与运行清单
"""

from internal.pipeline.schema import Diagnostics, MODE_NAMES, BEAMSPACE_MODES, check_structure
from internal.pipeline.run_config import (
    RunConfig,
    resolve_scenario,
    build_layout,
    validate_config,
    validate_file,
    config_hash,
    parse_window,
    load_profile,
)
from internal.pipeline.modes import (
    BeamformerMode,
    ReducedProblem,
    OracleMode,
    TiledBeamspaceMode,
    SingleBeamspaceMode,
    ModeFactory,
)
from internal.pipeline.manifest import RunManifest, package_versions, file_sha256, json_safe
from internal.pipeline.engine import SimulationEngine, RunResult, PatternResult, TargetOutcome

__all__ = [
    'Diagnostics', 'MODE_NAMES', 'BEAMSPACE_MODES', 'check_structure',
    'RunConfig', 'resolve_scenario', 'build_layout', 'validate_config', 'validate_file',
    'config_hash', 'parse_window', 'load_profile',
    'BeamformerMode', 'ReducedProblem', 'OracleMode', 'TiledBeamspaceMode', 'SingleBeamspaceMode', 'ModeFactory',
    'RunManifest', 'package_versions', 'file_sha256', 'json_safe',
    'SimulationEngine', 'RunResult', 'PatternResult', 'TargetOutcome',
]
