"""
仿真任务API路由
"""

from flask import request
from flask_restx import Namespace, Resource, fields

from internal.pipeline import RunConfig, check_structure, validate_config
from internal.task.task_manager import TaskManager
from internal.task.tasks import TASK_TYPES, create_task
from internal.utils import get_logger, set_run_id, clear_run_id
from internal.utils.errors import RadarSimError

logger = get_logger('task.api')

# 创建仿真任务命名空间
runs_ns = Namespace('runs', description='仿真任务相关操作')

# 定义请求/响应模型
create_task_request = runs_ns.model('CreateRunRequest', {
    'task_type': fields.String(description='任务类型: simulation_run, pattern, sweep', required=True),
    'params': fields.Raw(description='任务参数，config 字段为 JSON 运行配置', default={})
})

create_task_response = runs_ns.model('CreateRunResponse', {
    'task_id': fields.String(description='任务ID')
})

validate_request = runs_ns.model('ValidateRequest', {
    'config': fields.Raw(description='JSON 运行配置', required=True)
})

diagnostics_response = runs_ns.model('DiagnosticsResponse', {
    'ok': fields.Boolean(description='是否通过'),
    'errors': fields.List(fields.String, description='错误（带字段路径）'),
    'warnings': fields.List(fields.String, description='警告')
})

response_error = runs_ns.model('ResponseError', {
    'error': fields.String(description='错误消息')
})

# 全局任务管理器实例
task_manager = TaskManager()


def _check_params(task_type: str, params: dict):
    """创建任务前同步解析配置，配置错误直接返回 400"""
    if task_type not in TASK_TYPES:
        return f'Invalid task type: {task_type}'
    if not isinstance(params, dict):
        return 'params must be an object'
    try:
        RunConfig.from_dict(params.get('config') or {})
    except RadarSimError as e:
        return str(e)
    return None


@runs_ns.route('/create_and_start')
class CreateAndStartRun(Resource):
    """创建并启动任务"""

    @runs_ns.doc('create_and_start_run')
    @runs_ns.expect(create_task_request)
    @runs_ns.response(200, '任务已创建', create_task_response)
    @runs_ns.response(400, '请求错误', response_error)
    @runs_ns.response(503, '运行中的任务已满', response_error)
    def post(self):
        """创建并启动任务"""
        run_id = set_run_id()
        try:
            data = runs_ns.payload or {}
            task_type = data.get('task_type')
            params = data.get('params') or {}
            if not task_type:
                return {'error': 'Task type is required'}, 400
            error = _check_params(task_type, params)
            if error:
                return {'error': error}, 400

            task = create_task(task_type, params)
            task_id = task_manager.create_task(task)
            if not task_manager.start_task(task_id):
                task_manager.delete_task(task_id)
                return {'error': 'Too many running tasks'}, 503
            logger.info(f"请求 {run_id} 创建任务 {task_id}")
            return {'task_id': task_id}
        except Exception as e:
            logger.error(f"创建任务失败: {e}")
            return {'error': str(e)}, 500
        finally:
            clear_run_id()


@runs_ns.route('/validate')
class ValidateRun(Resource):
    """校验运行配置"""

    @runs_ns.doc('validate_run')
    @runs_ns.expect(validate_request)
    @runs_ns.response(200, '校验结果', diagnostics_response)
    def post(self):
        """结构检查与物理检查，无副作用"""
        data = (runs_ns.payload or {}).get('config')
        diag = check_structure(data)
        if diag.ok:
            try:
                physics, _, _ = validate_config(RunConfig.from_dict(data))
                diag.errors.extend(physics.errors)
                diag.warnings.extend(physics.warnings)
            except RadarSimError as e:
                diag.errors.append(str(e))
        return diag.to_dict()


@runs_ns.route('/list')
class ListRuns(Resource):
    """列出任务"""

    @runs_ns.doc('list_runs')
    @runs_ns.param('status', '任务状态')
    def get(self):
        """列出任务"""
        status = request.args.get('status')
        tasks = task_manager.list_tasks(status=status)
        return {'tasks': [task.to_dict() for task in tasks]}


@runs_ns.route('/get/<task_id>')
class GetRun(Resource):
    """获取任务"""

    @runs_ns.doc('get_run')
    @runs_ns.param('task_id', '任务ID')
    @runs_ns.response(404, '任务不存在', response_error)
    def get(self, task_id):
        """获取任务详情"""
        task = task_manager.get_task(task_id)
        if not task:
            return {'error': 'Task not found'}, 404
        return task.to_dict()


@runs_ns.route('/status/<task_id>')
class GetRunStatus(Resource):
    """获取任务状态"""

    @runs_ns.doc('get_run_status')
    @runs_ns.param('task_id', '任务ID')
    @runs_ns.response(404, '任务不存在', response_error)
    def get(self, task_id):
        """获取任务状态"""
        status = task_manager.get_task_status(task_id)
        if "error" in status:
            return {'error': status["error"]}, 404
        return status


@runs_ns.route('/delete/<task_id>')
class DeleteRun(Resource):
    """删除任务"""

    @runs_ns.doc('delete_run')
    @runs_ns.param('task_id', '任务ID')
    def delete(self, task_id):
        """删除任务（运行中的任务不能删除）"""
        return {'success': task_manager.delete_task(task_id)}
