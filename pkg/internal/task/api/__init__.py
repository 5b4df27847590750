"""仿真任务API"""

from internal.task.api.routes import runs_ns

__all__ = ["runs_ns"]
