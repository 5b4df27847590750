"""
运行清单

记录配置哈希、依赖版本、各阶段耗时、输出文件（含 sha256）以及维度对比。
"""

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime
from importlib import metadata
from typing import Any, Dict, List, Optional

ARTIFACT_VERSION = "0.1.0"
TRACKED_PACKAGES = ("numpy", "scipy", "pandas", "flask")


def package_versions() -> Dict[str, str]:
    versions = {'tiled-beamspace-radar': ARTIFACT_VERSION}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = 'unknown'
    return versions


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


def json_safe(value: Any) -> Any:
    """JSON 不支持 inf/nan，写成字符串"""
    if isinstance(value, float):
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if math.isnan(value):
            return 'nan'
        return value
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if hasattr(value, 'item') and not isinstance(value, (str, bytes)):
        return json_safe(value.item())
    return value


def write_json(path: str, payload: Any):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(json_safe(payload), f, indent=2, ensure_ascii=False, sort_keys=True)
        f.write('\n')


@dataclass
class RunManifest:
    """运行清单"""

    config_hash: str
    run_id: str
    config: Dict[str, Any]
    versions: Dict[str, str] = field(default_factory=package_versions)
    stages: Dict[str, float] = field(default_factory=dict)
    outputs: List[Dict[str, Any]] = field(default_factory=list)
    complexity: List[Dict[str, Any]] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    loading: Dict[str, Any] = field(default_factory=dict)
    created_at: str = field(default_factory=lambda: datetime.now().isoformat(timespec='seconds'))

    def add_stage(self, name: str, seconds: float):
        self.stages[name] = self.stages.get(name, 0.0) + float(seconds)

    def add_output(self, path: str, root: Optional[str] = None):
        rel = os.path.relpath(path, root) if root else path
        self.outputs.append({
            'path': rel.replace(os.sep, '/'),
            'sha256': file_sha256(path),
            'bytes': os.path.getsize(path),
        })

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config_hash': self.config_hash,
            'run_id': self.run_id,
            'created_at': self.created_at,
            'versions': dict(self.versions),
            'stages_seconds': dict(self.stages),
            'outputs': sorted(self.outputs, key=lambda o: o['path']),
            'complexity': list(self.complexity),
            'warnings': list(self.warnings),
            'loading': dict(self.loading),
            'config': self.config,
        }

    def write(self, path: str):
        write_json(path, self.to_dict())
        return path
