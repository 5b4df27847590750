"""
工具模块初始化文件
"""

from .logging import get_logger, set_run_id, get_run_id, clear_run_id
from .errors import (
    RadarSimError,
    DomainError,
    DimensionError,
    DegenerateSceneError,
    UnknownScenarioError,
    ConfigError,
    InsufficientSnapshotsError,
    SingularCovarianceError,
)

__all__ = [
    "get_logger", "set_run_id", "get_run_id", "clear_run_id",
    "RadarSimError", "DomainError", "DimensionError", "DegenerateSceneError",
    "UnknownScenarioError", "ConfigError", "InsufficientSnapshotsError",
    "SingularCovarianceError",
]
