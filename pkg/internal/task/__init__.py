"""任务管理模块"""

from internal.task.task_manager import TaskManager
from internal.task.tasks import Task, SimulationRunTask, PatternTask, SweepTask, TASK_TYPES, create_task

__all__ = [
    "TaskManager",
    "Task",
    "SimulationRunTask",
    "PatternTask",
    "SweepTask",
    "TASK_TYPES",
    "create_task",
]
