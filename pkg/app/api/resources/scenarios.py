from flask import request
from flask_restx import Namespace, Resource, fields

from internal.scene import scenario_library, scenario_names, scenario_description
from internal.utils.errors import RadarSimError

# 创建场景库命名空间
scenarios_ns = Namespace('scenarios', description='场景库相关操作')

scenario_item = scenarios_ns.model('ScenarioItem', {
    'name': fields.String(description='场景名称'),
    'description': fields.String(description='场景说明')
})

scenario_list_response = scenarios_ns.model('ScenarioListResponse', {
    'scenarios': fields.List(fields.Nested(scenario_item), description='场景列表')
})


@scenarios_ns.route('/list')
class ListScenarios(Resource):
    """场景库列表"""

    @scenarios_ns.doc('list_scenarios')
    @scenarios_ns.marshal_with(scenario_list_response)
    def get(self):
        """列出场景库中的全部场景"""
        return {
            'scenarios': [{'name': name, 'description': scenario_description(name)} for name in scenario_names()]
        }


@scenarios_ns.route('/get/<name>')
class GetScenario(Resource):
    """场景详情"""

    @scenarios_ns.doc('get_scenario')
    @scenarios_ns.param('name', '场景名称，如 E2-like')
    @scenarios_ns.param('scale', '规模放大倍数')
    def get(self, name):
        """按名称展开场景（目标、干扰机、波形）"""
        try:
            scale = int(request.args.get('scale', 1))
            return scenario_library(name, scale=scale).to_dict()
        except (RadarSimError, ValueError) as e:
            return {'error': str(e)}, 404 if isinstance(e, KeyError) else 400
