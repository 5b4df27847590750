"""
场景库

A-E 五个系列，干扰机数量依次为 2、3、4、6、8；
序号 1 为简单模式（目标俯仰角 >= 10 度），序号 2 为困难模式（目标俯仰角 <= 3 度）。
目标与干扰机位置保存在 fixtures 目录的 JSON 文件中，为重新构造的几何。
"""

import json
import os
import re
from functools import lru_cache
from typing import Dict, Any, List, Optional

from internal.array_model import SourceAngle
from internal.scene.scenario import Scenario, Target, Interferer, Waveform
from internal.utils.errors import UnknownScenarioError, DomainError

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')

FAMILY_JAMMERS = {'A': 2, 'B': 3, 'C': 4, 'D': 6, 'E': 8}
FAMILY_INR_DB = {'A': 60.0, 'B': 65.0, 'C': 70.0, 'D': 75.0, 'E': 80.0}
MODE_FIXTURES = {'1': 'easy.json', '2': 'difficult.json'}
MODE_NAMES = {'1': '简单模式', '2': '困难模式'}

_NAME_PATTERN = re.compile(r'^([A-E])([12])-like$')


@lru_cache(maxsize=None)
def _load_fixture(filename: str) -> Dict[str, Any]:
    with open(os.path.join(FIXTURE_DIR, filename), 'r', encoding='utf-8') as f:
        return json.load(f)


def scenario_names() -> List[str]:
    """场景库中所有场景名称"""
    return [f"{family}{mode}-like" for family in FAMILY_JAMMERS for mode in MODE_FIXTURES]


def scenario_description(name: str) -> str:
    match = _NAME_PATTERN.match(name)
    if not match:
        raise UnknownScenarioError(f"未知场景: {name}")
    family, mode = match.groups()
    return (f"{MODE_NAMES[mode]}，{FAMILY_JAMMERS[family]} 个干扰机，"
            f"默认干噪比 {FAMILY_INR_DB[family]:.0f} dB，9 个目标")


def scenario_library(name: str, scale: int = 1, n_subbands: Optional[int] = None,
                     inr_db: Optional[float] = None) -> Scenario:
    """
    按名称构造场景

    Args:
        name: 场景名称，如 A1-like、E2-like
        scale: 桌面规模放大倍数，同时放大脉冲数和每脉冲采样数
        n_subbands: 覆盖子带数
        inr_db: 覆盖所有干扰机的干噪比

    Returns:
        Scenario
    """
    match = _NAME_PATTERN.match(name or '')
    if not match:
        raise UnknownScenarioError(f"未知场景: {name}，可选: {', '.join(scenario_names())}")
    if isinstance(scale, bool) or not isinstance(scale, int) or scale < 1:
        raise DomainError(f"scale 必须是不小于 1 的整数: {scale!r}")

    family, mode = match.groups()
    fixture = _load_fixture(MODE_FIXTURES[mode])

    waveform_data = dict(fixture['waveform'])
    if n_subbands is not None:
        waveform_data['n_subbands'] = n_subbands
    waveform = Waveform.from_dict(waveform_data).scaled(scale)

    jammer_inr = FAMILY_INR_DB[family] if inr_db is None else inr_db
    pool = fixture['jammer_pool'][:FAMILY_JAMMERS[family]]
    interferers = tuple(
        Interferer(SourceAngle.from_degrees(j['azimuth_deg'], j['elevation_deg']), jammer_inr)
        for j in pool
    )
    targets = tuple(Target.from_dict(t, i + 1) for i, t in enumerate(fixture['targets']))

    return Scenario(
        name=name,
        waveform=waveform,
        targets=targets,
        interferers=interferers,
        description=fixture.get('description', ''),
    )
