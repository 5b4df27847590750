"""
服务接口测试

健康检查、场景库与仿真任务接口
"""

import os
import sys
import tempfile
import unittest

# 添加项目路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app import create_app
from internal.config import TomlConfig
from internal.task.api.routes import task_manager
from internal.task.tasks import create_task, SimulationRunTask


class ApiTestCase(unittest.TestCase):
    """接口测试基类"""

    def setUp(self):
        self.app = create_app()
        self.app.testing = True
        self.client = self.app.test_client()
        self.prefix = TomlConfig().API_PREFIX.rstrip('/')

    def url(self, path: str) -> str:
        return f'{self.prefix}{path}'


class TestHealthApi(ApiTestCase):
    """测试健康检查接口"""

    def test_health_check(self):
        """测试服务状态与版本"""
        response = self.client.get(self.url('/health/check'))
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data['status'], 'ok')
        self.assertTrue(data['version'])


class TestScenarioApi(ApiTestCase):
    """测试场景库接口"""

    def test_list(self):
        """测试场景列表"""
        data = self.client.get(self.url('/scenarios/list')).get_json()
        names = [item['name'] for item in data['scenarios']]
        self.assertEqual(len(names), 10)
        self.assertIn('E2-like', names)
        self.assertTrue(all(item['description'] for item in data['scenarios']))

    def test_get(self):
        """测试场景展开"""
        response = self.client.get(self.url('/scenarios/get/E2-like'))
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(len(data['interferers']), 8)
        self.assertEqual(len(data['targets']), 9)

    def test_unknown(self):
        response = self.client.get(self.url('/scenarios/get/F1-like'))
        self.assertEqual(response.status_code, 404)
        self.assertIn('error', response.get_json())


class TestRunApi(ApiTestCase):
    """测试仿真任务接口"""

    def test_validate_ok(self):
        """测试合法配置"""
        response = self.client.post(self.url('/runs/validate'), json={'config': {'seed': 1}})
        data = response.get_json()
        self.assertTrue(data['ok'])
        self.assertEqual(data['errors'], [])

    def test_validate_errors_carry_paths(self):
        """测试结构错误带字段路径"""
        config = {'windows': {'tiled-beamspace': [2, 32]}}
        data = self.client.post(self.url('/runs/validate'), json={'config': config}).get_json()
        self.assertFalse(data['ok'])
        self.assertTrue(any(e.startswith('windows.tiled-beamspace[1]') for e in data['errors']))

    def test_create_rejects_bad_requests(self):
        """测试无效任务类型与无效配置"""
        response = self.client.post(self.url('/runs/create_and_start'), json={'task_type': 'calibration'})
        self.assertEqual(response.status_code, 400)
        response = self.client.post(self.url('/runs/create_and_start'), json={})
        self.assertEqual(response.status_code, 400)
        response = self.client.post(self.url('/runs/create_and_start'), json={
            'task_type': 'simulation_run', 'params': {'config': {'modes': ['sparse']}}})
        self.assertEqual(response.status_code, 400)
        self.assertIn('error', response.get_json())

    def test_missing_task(self):
        self.assertEqual(self.client.get(self.url('/runs/get/nope')).status_code, 404)
        self.assertEqual(self.client.get(self.url('/runs/status/nope')).status_code, 404)
        self.assertFalse(self.client.delete(self.url('/runs/delete/nope')).get_json()['success'])

    def test_simulation_run_lifecycle(self):
        """测试仿真任务从创建到完成"""
        with tempfile.TemporaryDirectory() as tmp:
            params = {
                'config': {'scenario': {'library': 'A1-like'}, 'modes': ['tiled-beamspace'], 'seed': 2},
                'output_dir': tmp,
            }
            response = self.client.post(self.url('/runs/create_and_start'),
                                        json={'task_type': 'simulation_run', 'params': params})
            self.assertEqual(response.status_code, 200)
            task_id = response.get_json()['task_id']
            self.assertTrue(task_manager.wait_for_task(task_id, timeout=600))

            status = self.client.get(self.url(f'/runs/status/{task_id}')).get_json()
            self.assertEqual(status['status'], 'completed', status.get('error'))
            self.assertEqual(status['progress'], 100.0)
            result = status['result']
            self.assertEqual(result['scenario'], 'A1-like')
            self.assertEqual(len(result['detections']), 9)
            self.assertTrue(os.path.exists(os.path.join(tmp, 'report.csv')))

            listed = self.client.get(self.url('/runs/list?status=completed')).get_json()['tasks']
            self.assertIn(task_id, [t['task_id'] for t in listed])
            self.assertEqual(self.client.get(self.url(f'/runs/get/{task_id}')).get_json()['task_type'],
                             'simulation_run')
            self.assertTrue(self.client.delete(self.url(f'/runs/delete/{task_id}')).get_json()['success'])
            self.assertIsNone(task_manager.get_task(task_id))


class TestTaskTypes(unittest.TestCase):
    """测试任务类型"""

    def test_create_task(self):
        """测试按类型创建任务"""
        task = create_task('simulation_run', {'config': {'seed': 4}})
        self.assertIsInstance(task, SimulationRunTask)
        self.assertEqual(task.status, 'pending')
        self.assertTrue(task.run_config().output_dir.startswith('runs/'))
        with self.assertRaises(ValueError):
            create_task('calibration', {})

    def test_failed_task_records_error(self):
        """测试失败任务记录错误信息"""
        task = create_task('pattern', {'config': {'modes': ['tiled-beamspace']}, 'target_id': 99})
        task_id = task_manager.create_and_start_task(task)
        self.assertTrue(task_manager.wait_for_task(task_id, timeout=600))
        self.assertEqual(task.status, 'failed')
        self.assertTrue(task.error)
        task_manager.delete_task(task_id)


if __name__ == '__main__':
    unittest.main()
