"""
日志工具模块
"""

import os
import logging
import uuid
import threading
from logging.handlers import RotatingFileHandler, TimedRotatingFileHandler
from datetime import datetime, timedelta
from internal.config import get_config

# 获取配置
config = get_config()()

# 确保日志目录存在
os.makedirs(os.path.dirname(config.LOG_FILE) or '.', exist_ok=True)

# 线程本地存储，用于存储 runId
_local = threading.local()


def set_run_id(run_id=None):
    """
    设置当前线程的 runId

    Args:
        run_id (str): 运行ID，如果为None则自动生成

    Returns:
        str: 实际使用的运行ID
    """
    if run_id is None:
        run_id = uuid.uuid4().hex[:12]
    _local.run_id = run_id
    return run_id


def get_run_id():
    """获取当前线程的 runId"""
    return getattr(_local, 'run_id', None)


def clear_run_id():
    """清除当前线程的 runId"""
    if hasattr(_local, 'run_id'):
        delattr(_local, 'run_id')


class RunIdFormatter(logging.Formatter):
    """
    支持 runId 的日志格式化器
    """

    def format(self, record):
        run_id = get_run_id()
        record.runId = f"[runId:{run_id}]" if run_id else ""
        return super().format(record)


logger = logging.getLogger('tbradar')
logger.setLevel(getattr(logging, config.LOG_LEVEL))

formatter = RunIdFormatter(
    '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(runId)s %(message)s'
)

if config.LOG_ROTATION_TYPE == 'time':
    log_handler = TimedRotatingFileHandler(
        config.LOG_FILE,
        when=config.LOG_ROTATION_WHEN,
        interval=config.LOG_ROTATION_INTERVAL,
        backupCount=config.LOG_BACKUP_COUNT
    )
else:
    log_handler = RotatingFileHandler(
        config.LOG_FILE,
        maxBytes=config.LOG_MAX_BYTES,
        backupCount=config.LOG_BACKUP_COUNT
    )

log_handler.setLevel(getattr(logging, config.LOG_LEVEL))
log_handler.setFormatter(formatter)
logger.addHandler(log_handler)

if config.LOG_CONSOLE:
    console_handler = logging.StreamHandler()
    console_handler.setLevel(getattr(logging, config.LOG_CONSOLE_LEVEL))
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)


def cleanup_old_logs(log_dir='logs', days_to_keep=7):
    """
    清理过期的日志文件

    Args:
        log_dir (str): 日志目录
        days_to_keep (int): 保留日志的天数
    """
    cutoff_date = datetime.now() - timedelta(days=days_to_keep)
    try:
        for root, _, files in os.walk(log_dir):
            for file in files:
                if '.log' not in file:
                    continue
                file_path = os.path.join(root, file)
                if datetime.fromtimestamp(os.path.getmtime(file_path)) < cutoff_date:
                    os.remove(file_path)
                    logger.info(f"删除过期日志文件: {file_path}")
    except OSError as e:
        logger.warning(f"清理日志失败: {e}")


if config.LOG_CLEANUP_ENABLED:
    cleanup_old_logs(
        log_dir=os.path.dirname(config.LOG_FILE) or '.',
        days_to_keep=config.LOG_DAYS_TO_KEEP
    )


def get_logger(name=None):
    """
    获取指定名称的日志器

    Args:
        name (str): 日志器名称

    Returns:
        logging.Logger: 日志器实例
    """
    if name:
        return logging.getLogger(f'tbradar.{name}')
    return logger
