"""
一维单元平均 CFAR

每个速度单元沿距离维独立检测：底噪为两侧训练单元（不含保护单元）的均值，
地图边缘只平均落在图内的训练单元。通过门限的单元中取沿距离维的局部极大值作为峰值，
相等功率的平台只保留距离下标最小的单元。
"""

from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Union

import numpy as np
from scipy.ndimage import correlate1d, maximum_filter1d

from internal.detector.range_doppler import RangeDopplerMap
from internal.utils.errors import DomainError, DimensionError


@dataclass(frozen=True)
class CfarConfig:
    """CFAR 参数：门限（dB，高于底噪）、单侧保护单元数、单侧训练单元数"""

    threshold_db: float = 10.0
    guard_cells: int = 2
    training_cells: int = 8

    def __post_init__(self):
        if not self.threshold_db > 0:
            raise DomainError(f"threshold_db 必须为正: {self.threshold_db}")
        if self.training_cells < 1:
            raise DomainError(f"training_cells 必须不小于 1: {self.training_cells}")
        if self.guard_cells < 0:
            raise DomainError(f"guard_cells 不能为负: {self.guard_cells}")

    @property
    def stencil_length(self) -> int:
        return 2 * (self.guard_cells + self.training_cells) + 1

    @property
    def threshold_factor(self) -> float:
        return 10.0 ** (self.threshold_db / 10.0)

    def kernel(self) -> np.ndarray:
        train = np.ones(self.training_cells)
        return np.concatenate([train, np.zeros(2 * self.guard_cells + 1), train])

    def false_alarm_rate(self) -> float:
        """指数分布噪声下的理论虚警率 (1 + alpha/N)^-N，N 为两侧训练单元总数"""
        n = 2 * self.training_cells
        return float((1.0 + self.threshold_factor / n) ** (-n))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class CfarPeak:
    """CFAR 检测峰值"""

    range_index: int
    velocity_index: int
    power: float
    noise_floor: float

    @property
    def sinr_db(self) -> float:
        return float(10.0 * np.log10(self.power / self.noise_floor))


def _power(map_or_power: Union[RangeDopplerMap, np.ndarray]) -> np.ndarray:
    power = map_or_power.power if isinstance(map_or_power, RangeDopplerMap) else np.asarray(map_or_power, dtype=float)
    if power.ndim != 2:
        raise DimensionError(f"功率图必须是二维: {power.shape}")
    return power


def noise_floor(map_or_power, config: CfarConfig) -> np.ndarray:
    """每个单元的底噪估计"""
    power = _power(map_or_power)
    if power.shape[0] < config.stencil_length:
        raise DimensionError(f"距离单元数 {power.shape[0]} 小于 CFAR 模板长度 {config.stencil_length}")
    kernel = config.kernel()
    sums = correlate1d(power, kernel, axis=0, mode='constant', cval=0.0)
    counts = correlate1d(np.ones(power.shape[0]), kernel, mode='constant', cval=0.0)
    return sums / counts[:, None]


def cfar_mask(map_or_power, config: CfarConfig) -> np.ndarray:
    """超过门限的单元"""
    power = _power(map_or_power)
    return power > noise_floor(power, config) * config.threshold_factor


def cfar_detect(map_or_power, config: CfarConfig) -> List[CfarPeak]:
    """
    CFAR 检测

    Returns:
        按 (距离, 速度) 排序的峰值列表
    """
    power = _power(map_or_power)
    floor = noise_floor(power, config)
    mask = power > floor * config.threshold_factor
    local_max = power >= maximum_filter1d(power, size=3, axis=0, mode='constant', cval=0.0)
    plateau = np.zeros_like(local_max)
    plateau[1:] = local_max[:-1] & (power[1:] == power[:-1])
    local_max &= ~plateau
    rows, cols = np.nonzero(mask & local_max)
    return [
        CfarPeak(int(r), int(c), float(power[r, c]), float(floor[r, c]))
        for r, c in zip(rows, cols)
    ]
