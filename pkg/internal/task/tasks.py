"""
任务类型定义
"""

import abc
import uuid
from datetime import datetime
from typing import Dict, Optional, Any

from internal.pipeline import RunConfig, SimulationEngine, json_safe
from internal.utils import get_logger

# 获取日志器
logger = get_logger('task')


class Task(abc.ABC):
    """任务基类"""

    def __init__(self, task_type: str, params: Dict[str, Any]):
        """初始化任务"""
        self.task_id = str(uuid.uuid4())
        self.task_type = task_type
        self.params = params
        self.status = "pending"  # pending, running, completed, failed
        self.progress = 0.0
        self.start_time: Optional[datetime] = None
        self.end_time: Optional[datetime] = None
        self.result: Optional[Any] = None
        self.error: Optional[str] = None

    @abc.abstractmethod
    def execute(self):
        """执行任务"""
        pass

    def run_config(self) -> RunConfig:
        """任务参数中的 config 字段即 JSON 运行配置"""
        config = dict(self.params.get("config") or {})
        if self.params.get("output_dir"):
            config["output_dir"] = self.params["output_dir"]
        config.setdefault("output_dir", f"runs/{self.task_id[:8]}")
        return RunConfig.from_dict(config)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "task_id": self.task_id,
            "task_type": self.task_type,
            "params": self.params,
            "status": self.status,
            "progress": self.progress,
            "start_time": self.start_time.isoformat() if self.start_time else None,
            "end_time": self.end_time.isoformat() if self.end_time else None,
            "result": self.result,
            "error": self.error
        }


class SimulationRunTask(Task):
    """完整仿真任务"""

    def __init__(self, params: Dict[str, Any]):
        super().__init__("simulation_run", params)
        self.logger = get_logger('task.simulation_run')

    def execute(self):
        """执行仿真并写出报告"""
        try:
            config = self.run_config()
            self.logger.info(f"开始执行仿真任务: 模式={list(config.modes)}, 输出={config.output_dir}")
            self.progress = 10.0
            engine = SimulationEngine(config)
            result = engine.run(write=True)
            self.progress = 100.0
            self.result = json_safe({
                "run_id": result.run_id,
                "scenario": result.scenario.name,
                "output_dir": result.output_dir,
                "config_hash": result.manifest.config_hash if result.manifest else None,
                "summary": result.summary.to_dict(orient="records"),
                "detections": result.table.to_dict(orient="records"),
            })
            self.logger.info("仿真任务执行完成")
        except Exception as e:
            self.error = str(e)
            self.logger.error(f"仿真任务执行失败: {str(e)}")
            raise


class PatternTask(Task):
    """方向图任务"""

    def __init__(self, params: Dict[str, Any]):
        super().__init__("pattern", params)
        self.logger = get_logger('task.pattern')

    def execute(self):
        """计算单个目标的方向图并写出 CSV"""
        try:
            config = self.run_config()
            target_id = int(self.params.get("target_id", 1))
            mode = self.params.get("mode", "tiled-beamspace")
            subband = int(self.params.get("subband", 0))
            self.logger.info(f"开始执行方向图任务: target={target_id}, mode={mode}, subband={subband}")
            self.progress = 10.0
            result = SimulationEngine(config).emit_pattern(target_id, mode, subband, output_dir=config.output_dir)
            self.progress = 100.0
            self.result = json_safe({
                "target_id": target_id,
                "mode": mode,
                "subband": subband,
                "path": result.path,
                "rows": len(result.frame),
                "mainlobe_width_deg": result.mainlobe,
            })
            self.logger.info("方向图任务执行完成")
        except Exception as e:
            self.error = str(e)
            self.logger.error(f"方向图任务执行失败: {str(e)}")
            raise


class SweepTask(Task):
    """干噪比扫描任务；给出 loading_values 时改为对角加载扫描"""

    def __init__(self, params: Dict[str, Any]):
        super().__init__("sweep", params)
        self.logger = get_logger('task.sweep')

    def execute(self):
        """对每个取值重新合成并运行"""
        try:
            config = self.run_config()
            loading_values = [float(v) for v in self.params.get("loading_values", [])]
            engine = SimulationEngine(config)
            self.progress = 10.0
            if loading_values:
                self.logger.info(f"开始执行对角加载扫描任务: loading_factor={loading_values}")
                frame, column = engine.loading_sweep(loading_values, write=True), "loading_factor"
            else:
                inr_values = [float(v) for v in self.params.get("inr_values", [])]
                self.logger.info(f"开始执行扫描任务: INR={inr_values}")
                frame, column = engine.sweep(inr_values, write=True), "inr_db"
            self.progress = 100.0
            summary = frame.groupby([column, "mode"], sort=False).agg(
                n_detected=("detected", "sum"), mean_sinr_db=("sinr_db", "mean")).reset_index()
            self.result = json_safe({
                "output_dir": config.output_dir,
                "summary": summary.to_dict(orient="records"),
            })
            self.logger.info("扫描任务执行完成")
        except Exception as e:
            self.error = str(e)
            self.logger.error(f"扫描任务执行失败: {str(e)}")
            raise


TASK_TYPES = {
    "simulation_run": SimulationRunTask,
    "pattern": PatternTask,
    "sweep": SweepTask,
}


def create_task(task_type: str, params: Dict[str, Any]) -> Task:
    """按类型创建任务"""
    if task_type not in TASK_TYPES:
        raise ValueError(f"Invalid task type: {task_type}")
    return TASK_TYPES[task_type](params or {})
