"""
API资源模块初始化文件
"""

from .health import health_ns
from .scenarios import scenarios_ns

__all__ = ["health_ns", "scenarios_ns"]
