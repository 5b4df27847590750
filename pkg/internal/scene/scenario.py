"""
场景定义：目标、干扰机、波形与噪声

场景文件为 JSON，角度以度为单位，增益与干噪比以 dB 为单位
"""

import json
import math
from dataclasses import dataclass, field, replace
from typing import Dict, Any, List, Optional, Tuple

import numpy as np
from scipy import constants

from internal.array_model import SourceAngle
from internal.utils.errors import DomainError, ConfigError

JAMMER_MODELS = ("point", "spatially_white")


@dataclass(frozen=True)
class Waveform:
    """脉冲波形与相干处理间隔参数，复基带采样率等于带宽"""

    carrier_hz: float
    bandwidth_hz: float
    n_subbands: int
    pulses_per_cpi: int
    samples_per_pulse: int
    prf_hz: float
    chirp: bool = True
    pulse_samples: int = 64
    range_offset_m: float = 0.0

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise DomainError(f"bandwidth_hz 必须为正: {self.bandwidth_hz!r}")
        if not self.carrier_hz > self.bandwidth_hz / 2:
            raise DomainError(f"carrier_hz 必须大于半带宽: {self.carrier_hz!r}")
        if not self.prf_hz > 0:
            raise DomainError(f"prf_hz 必须为正: {self.prf_hz!r}")
        if self.pulses_per_cpi < 1:
            raise DomainError(f"pulses_per_cpi 必须不小于 1: {self.pulses_per_cpi!r}")
        if self.n_subbands < 1 or self.samples_per_pulse % self.n_subbands:
            raise DomainError(
                f"子带数 {self.n_subbands} 必须整除每脉冲采样数 {self.samples_per_pulse}"
            )
        if not 1 <= self.pulse_samples <= self.samples_per_pulse:
            raise DomainError(f"pulse_samples 超出范围: {self.pulse_samples!r}")

    @property
    def wavelength_m(self) -> float:
        return constants.c / self.carrier_hz

    @property
    def range_resolution_m(self) -> float:
        return constants.c / (2 * self.bandwidth_hz)

    @property
    def velocity_resolution_mps(self) -> float:
        return self.wavelength_m * self.prf_hz / (2 * self.pulses_per_cpi)

    @property
    def max_unambiguous_velocity_mps(self) -> float:
        return self.wavelength_m * self.prf_hz / 4

    @property
    def max_unambiguous_range_m(self) -> float:
        return constants.c / (2 * self.prf_hz)

    @property
    def block_length(self) -> int:
        """每个脉冲在每个子带中的快拍数"""
        return self.samples_per_pulse // self.n_subbands

    @property
    def snapshots_per_subband(self) -> int:
        return self.pulses_per_cpi * self.block_length

    @property
    def subband_centers_hz(self) -> np.ndarray:
        """子带中心频率；下标 0 为载频所在子带"""
        return self.carrier_hz + np.fft.fftfreq(self.n_subbands, d=1.0 / self.bandwidth_hz)

    def range_gate(self, range_m: float) -> int:
        return int(math.floor((range_m - self.range_offset_m) / self.range_resolution_m + 0.5))

    def gate_range(self, gate: int) -> float:
        return self.range_offset_m + gate * self.range_resolution_m

    def scaled(self, scale: int) -> 'Waveform':
        """桌面规模放大：脉冲数与每脉冲采样数同时乘以 scale"""
        return replace(self, pulses_per_cpi=self.pulses_per_cpi * scale,
                       samples_per_pulse=self.samples_per_pulse * scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'carrier_hz': self.carrier_hz,
            'bandwidth_hz': self.bandwidth_hz,
            'n_subbands': self.n_subbands,
            'pulses_per_cpi': self.pulses_per_cpi,
            'samples_per_pulse': self.samples_per_pulse,
            'prf_hz': self.prf_hz,
            'chirp': self.chirp,
            'pulse_samples': self.pulse_samples,
            'range_offset_m': self.range_offset_m,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Waveform':
        return cls(
            carrier_hz=float(data['carrier_hz']),
            bandwidth_hz=float(data['bandwidth_hz']),
            n_subbands=int(data['n_subbands']),
            pulses_per_cpi=int(data['pulses_per_cpi']),
            samples_per_pulse=int(data['samples_per_pulse']),
            prf_hz=float(data['prf_hz']),
            chirp=bool(data.get('chirp', True)),
            pulse_samples=int(data.get('pulse_samples', 64)),
            range_offset_m=float(data.get('range_offset_m', 0.0)),
        )


@dataclass(frozen=True)
class Target:
    """点目标；gain_db 为相对 0 dB 参考的功率，复增益取实数"""

    target_id: int
    angle: SourceAngle
    range_m: float
    velocity_mps: float
    gain_db: float = 0.0

    @property
    def amplitude(self) -> float:
        return 10.0 ** (self.gain_db / 20.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.target_id,
            'azimuth_deg': self.angle.azimuth_deg,
            'elevation_deg': self.angle.elevation_deg,
            'range_m': self.range_m,
            'velocity_mps': self.velocity_mps,
            'gain_db': self.gain_db,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], default_id: int = 1) -> 'Target':
        return cls(
            target_id=int(data.get('id', default_id)),
            angle=SourceAngle.from_degrees(float(data['azimuth_deg']), float(data['elevation_deg'])),
            range_m=float(data['range_m']),
            velocity_mps=float(data['velocity_mps']),
            gain_db=float(data.get('gain_db', 0.0)),
        )


@dataclass(frozen=True)
class Interferer:
    """宽带噪声干扰机，inr_db 为相对单位目标功率的干扰功率"""

    angle: SourceAngle
    inr_db: float

    def __post_init__(self):
        if not math.isfinite(self.inr_db):
            raise DomainError(f"inr_db 必须是有限值: {self.inr_db!r}")

    @property
    def power(self) -> float:
        return 10.0 ** (self.inr_db / 10.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'azimuth_deg': self.angle.azimuth_deg,
            'elevation_deg': self.angle.elevation_deg,
            'inr_db': self.inr_db,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Interferer':
        return cls(
            angle=SourceAngle.from_degrees(float(data['azimuth_deg']), float(data['elevation_deg'])),
            inr_db=float(data['inr_db']),
        )


@dataclass(frozen=True)
class Scenario:
    """仿真场景"""

    name: str
    waveform: Waveform
    targets: Tuple[Target, ...] = ()
    interferers: Tuple[Interferer, ...] = ()
    noise_enabled: bool = True
    noise_power_db: float = 0.0
    jammer_model: str = "point"
    description: str = ""
    tile_noise_db: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.tile_noise_db is not None:
            if not self.tile_noise_db:
                raise DomainError("tile_power_db 不能为空")
            if not all(math.isfinite(v) for v in self.tile_noise_db):
                raise DomainError(f"tile_power_db 必须是有限值: {list(self.tile_noise_db)}")
        if self.jammer_model not in JAMMER_MODELS:
            raise DomainError(f"未知的干扰模型: {self.jammer_model!r}")
        ids = [t.target_id for t in self.targets]
        if len(set(ids)) != len(ids):
            raise DomainError(f"目标编号重复: {ids}")

    @property
    def tile_noise_powers(self) -> Optional[np.ndarray]:
        """各块的噪声功率 sigma_t^2；未单独指定时为 None"""
        if self.tile_noise_db is None:
            return None
        if not self.noise_enabled:
            return np.zeros(len(self.tile_noise_db))
        return 10.0 ** (np.asarray(self.tile_noise_db, dtype=float) / 10.0)

    @property
    def noise_power(self) -> float:
        """平均噪声功率"""
        if not self.noise_enabled:
            return 0.0
        if self.tile_noise_db is not None:
            return float(np.mean(self.tile_noise_powers))
        return 10.0 ** (self.noise_power_db / 10.0)

    def element_noise_powers(self, n_tiles: int, tile_elements: int) -> np.ndarray:
        """
        按全局阵元下标展开的噪声功率 [T*N]

        Raises:
            DomainError: tile_power_db 长度不等于块数
        """
        powers = self.tile_noise_powers
        if powers is None:
            return np.full(n_tiles * tile_elements, self.noise_power)
        if len(powers) != n_tiles:
            raise DomainError(f"tile_power_db 长度 {len(powers)} 与块数 {n_tiles} 不符")
        return np.repeat(powers, tile_elements)

    def target(self, target_id: int) -> Target:
        for t in self.targets:
            if t.target_id == target_id:
                return t
        raise KeyError(target_id)

    def check_physics(self) -> List[str]:
        """目标距离、速度是否在波形的不模糊范围内，返回问题列表"""
        problems = []
        wf = self.waveform
        last_gate = wf.samples_per_pulse - wf.pulse_samples
        for i, t in enumerate(self.targets):
            gate = wf.range_gate(t.range_m)
            if not 0 <= gate <= last_gate:
                problems.append(
                    f"targets[{i}].range_m: {t.range_m} 不在接收窗内 "
                    f"[{wf.gate_range(0):.1f}, {wf.gate_range(last_gate):.1f}]"
                )
            elif t.range_m >= wf.max_unambiguous_range_m:
                problems.append(f"targets[{i}].range_m: {t.range_m} 超出不模糊距离 {wf.max_unambiguous_range_m:.1f}")
            if abs(t.velocity_mps) >= wf.max_unambiguous_velocity_mps:
                problems.append(
                    f"targets[{i}].velocity_mps: {t.velocity_mps} 超出不模糊速度 "
                    f"±{wf.max_unambiguous_velocity_mps:.3f}"
                )
        return problems

    def with_inr(self, inr_db: float) -> 'Scenario':
        """所有干扰机使用同一干噪比"""
        return replace(self, interferers=tuple(Interferer(j.angle, inr_db) for j in self.interferers))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'description': self.description,
            'waveform': self.waveform.to_dict(),
            'targets': [t.to_dict() for t in self.targets],
            'interferers': [j.to_dict() for j in self.interferers],
            'noise': self._noise_dict(),
            'jammer_model': self.jammer_model,
        }

    def _noise_dict(self) -> Dict[str, Any]:
        noise = {'enabled': self.noise_enabled, 'power_db': self.noise_power_db}
        if self.tile_noise_db is not None:
            noise['tile_power_db'] = list(self.tile_noise_db)
        return noise

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Scenario':
        noise = data.get('noise', {})
        tile_db = noise.get('tile_power_db')
        return cls(
            name=str(data.get('name', 'custom')),
            description=str(data.get('description', '')),
            waveform=Waveform.from_dict(data['waveform']),
            targets=tuple(Target.from_dict(t, i + 1) for i, t in enumerate(data.get('targets', []))),
            interferers=tuple(Interferer.from_dict(j) for j in data.get('interferers', [])),
            noise_enabled=bool(noise.get('enabled', True)),
            noise_power_db=float(noise.get('power_db', 0.0)),
            jammer_model=str(data.get('jammer_model', 'point')),
            tile_noise_db=None if tile_db is None else tuple(float(v) for v in tile_db),
        )


def load_scenario(path: str) -> Scenario:
    """读取场景 JSON 文件"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"场景文件不存在: {path}", 'scenario.file')
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"无法读取场景文件 {path}: {e}", 'scenario.file')
    try:
        return Scenario.from_dict(data)
    except KeyError as e:
        raise ConfigError(f"缺少字段 {e}", 'scenario')
    except DomainError as e:
        raise ConfigError(str(e), 'scenario')


def dump_scenario(scenario: Scenario, path: str):
    """写出场景 JSON 文件"""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(scenario.to_dict(), f, indent=2, ensure_ascii=False)
