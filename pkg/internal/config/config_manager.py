import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Dict, Any, Optional


class TomlConfig:
    """从toml文件读取配置的配置类"""

    _cache: Optional[Dict[str, Any]] = None

    @classmethod
    def config_path(cls) -> str:
        """配置文件路径，可用环境变量 TBRADAR_CONFIG 覆盖"""
        default_path = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), 'cfg', 'unios.toml')
        return os.getenv('TBRADAR_CONFIG', default_path)

    @classmethod
    def _load_toml_config(cls) -> Dict[str, Any]:
        """从toml文件加载配置，进程内只解析一次

        Returns:
            配置字典
        """
        if cls._cache is None:
            config_path = cls.config_path()
            if os.path.exists(config_path):
                with open(config_path, 'rb') as f:
                    cls._cache = tomllib.load(f)
            else:
                cls._cache = {}
        return cls._cache

    @classmethod
    def get(cls, key: str, default: Any = None) -> Any:
        """获取配置值

        Args:
            key: 以点分隔的配置键，如 processing.LOADING_FACTOR
            default: 默认值

        Returns:
            配置值
        """
        value = cls._load_toml_config()
        for k in key.split('.'):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    # 基础配置
    @property
    def DEBUG(self):
        return self.get('basic.DEBUG', False)

    @property
    def SECRET_KEY(self):
        return self.get('basic.SECRET_KEY', 'tbradar')

    # 日志配置
    @property
    def LOG_LEVEL(self):
        return self.get('logging.LOG_LEVEL', 'INFO')

    @property
    def LOG_FILE(self):
        return self.get('logging.LOG_FILE', 'logs/tbradar.log')

    @property
    def LOG_CONSOLE(self):
        return self.get('logging.LOG_CONSOLE', True)

    @property
    def LOG_CONSOLE_LEVEL(self):
        return self.get('logging.LOG_CONSOLE_LEVEL', 'WARNING')

    # 日志分割配置
    @property
    def LOG_ROTATION_TYPE(self):
        return self.get('logging.rotation.LOG_ROTATION_TYPE', 'size')

    @property
    def LOG_MAX_BYTES(self):
        return self.get('logging.rotation.LOG_MAX_BYTES', 10 * 1024 * 1024)

    @property
    def LOG_ROTATION_WHEN(self):
        return self.get('logging.rotation.LOG_ROTATION_WHEN', 'D')

    @property
    def LOG_ROTATION_INTERVAL(self):
        return self.get('logging.rotation.LOG_ROTATION_INTERVAL', 1)

    @property
    def LOG_BACKUP_COUNT(self):
        return self.get('logging.rotation.LOG_BACKUP_COUNT', 5)

    # 日志清理配置
    @property
    def LOG_CLEANUP_ENABLED(self):
        return self.get('logging.cleanup.LOG_CLEANUP_ENABLED', True)

    @property
    def LOG_DAYS_TO_KEEP(self):
        return self.get('logging.cleanup.LOG_DAYS_TO_KEEP', 7)

    # 信号处理配置
    @property
    def LOADING_FACTOR(self):
        return self.get('processing.LOADING_FACTOR', 1e-9)

    @property
    def SNAPSHOT_MULTIPLIER(self):
        return self.get('processing.SNAPSHOT_MULTIPLIER', 4)

    @property
    def ILL_CONDITION_THRESHOLD(self):
        return self.get('processing.ILL_CONDITION_THRESHOLD', 1e12)

    @property
    def SPEEDUP_TARGET(self):
        return self.get('processing.SPEEDUP_TARGET', 20.0)

    @property
    def SOLVE_BENCHMARK_REPEATS(self):
        return self.get('processing.SOLVE_BENCHMARK_REPEATS', 5)

    @property
    def CFAR_THRESHOLD_DB(self):
        return self.get('processing.CFAR_THRESHOLD_DB', 10.0)

    @property
    def CFAR_GUARD_CELLS(self):
        return self.get('processing.CFAR_GUARD_CELLS', 2)

    @property
    def CFAR_TRAINING_CELLS(self):
        return self.get('processing.CFAR_TRAINING_CELLS', 8)

    @property
    def RANGE_WINDOW(self):
        return self.get('processing.RANGE_WINDOW', 'none')

    @property
    def DOPPLER_TAPER(self):
        return self.get('processing.DOPPLER_TAPER', 'none')

    @property
    def WORKERS(self):
        return self.get('processing.WORKERS', 4)

    @property
    def DEFAULT_PROFILE(self):
        return self.get('processing.DEFAULT_PROFILE', 'desk')

    @property
    def OUTPUT_DIR(self):
        return self.get('processing.OUTPUT_DIR', 'runs')

    # 阵列配置档
    @property
    def PROFILES(self):
        return self.get('profiles', {})

    # 方向图网格
    @property
    def PATTERN_GRID(self):
        return self.get('pattern', {
            'AZ_MIN_DEG': -60.0,
            'AZ_MAX_DEG': 60.0,
            'EL_MIN_DEG': -30.0,
            'EL_MAX_DEG': 30.0,
            'STEP_DEG': 1.0,
        })

    # API 配置
    @property
    def API_HOST(self):
        return self.get('api.API_HOST', '0.0.0.0')

    @property
    def API_PORT(self):
        return self.get('api.API_PORT', 5000)

    @property
    def API_PREFIX(self):
        return self.get('api.API_PREFIX', '/api')

    # 任务配置
    @property
    def TASK_TIMEOUT(self):
        return self.get('task.TASK_TIMEOUT', 3600)

    @property
    def TASK_MAX_WORKERS(self):
        return self.get('task.TASK_MAX_WORKERS', 2)


class ConfigManager:
    """配置管理器"""

    @classmethod
    def get_config(cls, env: str = None) -> Any:
        """获取配置类

        Args:
            env: 环境名称，保留参数

        Returns:
            TomlConfig 类，实例化后读取 cfg/unios.toml
        """
        return TomlConfig


def get_config(env: str = None) -> Any:
    """获取配置对象的便捷函数

    Args:
        env: 环境名称

    Returns:
        配置类
    """
    return ConfigManager.get_config(env)
