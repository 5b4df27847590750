"""
错误类型定义

所有仿真错误都继承自 RadarSimError，exit_code 对应命令行退出码
"""


class RadarSimError(Exception):
    """仿真错误基类"""

    exit_code = 2


class DomainError(RadarSimError, ValueError):
    """参数超出定义域（角度、频率、几何、波形）"""


class DimensionError(RadarSimError, ValueError):
    """向量或矩阵维度不匹配"""


class DegenerateSceneError(RadarSimError):
    """场景中既没有信号源也没有噪声"""


class UnknownScenarioError(RadarSimError, KeyError):
    """未知的场景名称"""

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class ConfigError(RadarSimError):
    """配置文件错误，带字段路径"""

    def __init__(self, message: str, path: str = None):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class InsufficientSnapshotsError(RadarSimError):
    """快拍数不足"""


class SingularCovarianceError(RadarSimError):
    """协方差矩阵不正定"""

    exit_code = 3
