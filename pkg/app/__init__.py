from flask import Flask
from flask_restx import Api
from internal.config import ConfigManager, get_config, TomlConfig
from app.api.resources import health_ns, scenarios_ns
from internal.utils import get_logger
from internal.task.api.routes import runs_ns


# 初始化日志
def initialize_logging():
    """初始化日志系统"""
    logger = get_logger('app')
    logger.info('Logging system initialized')


def create_app(config_name=None):
    """创建Flask应用实例"""
    app = Flask(__name__)

    # 加载配置
    config = TomlConfig()
    app.config.from_object(config)

    # 初始化日志系统
    initialize_logging()

    # 创建Flask-RESTX Api对象，用于生成Swagger文档
    api = Api(
        app,
        version='1.0',
        title='Tiled Beamspace Radar API',
        description='分块波束空间雷达仿真API文档',
        doc='/docs',  # Swagger文档的访问路径
        prefix=''  # 前缀设置为空字符串
    )

    prefix = config.API_PREFIX.rstrip('/')

    # 注册健康检查命名空间
    api.add_namespace(health_ns, path=f'{prefix}/health')

    # 注册场景库命名空间
    api.add_namespace(scenarios_ns, path=f'{prefix}/scenarios')

    # 注册仿真任务命名空间
    api.add_namespace(runs_ns, path=f'{prefix}/runs')

    return app


__all__ = [
    'ConfigManager',
    'get_config',
    'TomlConfig',
    'create_app',
]
