"""
波束方向图

P(az, el) = |c^H a(az, el)| / (||c|| * ||a||)，取值 [0, 1]
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import pandas as pd

from internal.array_model import ArrayLayout, SourceAngle, SpatialFrequency, steering_matrix, angles_to_spatial_freq
from internal.beamformer.mvdr import LiftedCorrelator, Correlator
from internal.config import TomlConfig
from internal.utils.errors import DomainError, DimensionError

HALF_POWER = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class PatternGrid:
    """方位/俯仰角网格（度），端点包含在内"""

    az_min_deg: float = -60.0
    az_max_deg: float = 60.0
    el_min_deg: float = -30.0
    el_max_deg: float = 30.0
    step_deg: float = 1.0

    def __post_init__(self):
        if self.step_deg <= 0:
            raise DomainError(f"网格步长必须为正: {self.step_deg}")
        for value in (self.az_min_deg, self.az_max_deg, self.el_min_deg, self.el_max_deg):
            if not -90.0 < value < 90.0:
                raise DomainError(f"网格角度超出可见区: {value}")
        if self.az_min_deg > self.az_max_deg or self.el_min_deg > self.el_max_deg:
            raise DomainError("网格下限大于上限")

    @classmethod
    def from_config(cls) -> 'PatternGrid':
        grid = TomlConfig().PATTERN_GRID
        return cls(
            az_min_deg=float(grid.get('AZ_MIN_DEG', -60.0)),
            az_max_deg=float(grid.get('AZ_MAX_DEG', 60.0)),
            el_min_deg=float(grid.get('EL_MIN_DEG', -30.0)),
            el_max_deg=float(grid.get('EL_MAX_DEG', 30.0)),
            step_deg=float(grid.get('STEP_DEG', 1.0)),
        )

    @property
    def azimuths_deg(self) -> np.ndarray:
        n = int(round((self.az_max_deg - self.az_min_deg) / self.step_deg)) + 1
        return self.az_min_deg + self.step_deg * np.arange(n)

    @property
    def elevations_deg(self) -> np.ndarray:
        n = int(round((self.el_max_deg - self.el_min_deg) / self.step_deg)) + 1
        return self.el_min_deg + self.step_deg * np.arange(n)


def _weights(lifted: Union[LiftedCorrelator, Correlator, np.ndarray]) -> np.ndarray:
    if isinstance(lifted, (LiftedCorrelator, Correlator)):
        return lifted.weights
    return np.asarray(lifted, dtype=complex)


def response_at(lifted, layout: ArrayLayout, omega_x, omega_z) -> np.ndarray:
    """给定空间频率处的归一化响应"""
    c = _weights(lifted)
    if c.shape[0] != layout.total_elements:
        raise DimensionError(f"相关器长度 {c.shape[0]} 与阵元数 {layout.total_elements} 不符")
    norm = np.linalg.norm(c)
    if norm == 0:
        raise DomainError("相关器范数为零")
    a = steering_matrix(layout, omega_x, omega_z)
    return np.abs(a @ c.conj()) / (norm * math.sqrt(layout.total_elements))


def beam_pattern(lifted, layout: ArrayLayout, grid: PatternGrid,
                 freq_hz: Optional[float] = None) -> np.ndarray:
    """
    网格上的方向图

    Returns:
        [n_az, n_el] 实矩阵
    """
    freq_hz = layout.design_freq_hz if freq_hz is None else freq_hz
    az = np.radians(grid.azimuths_deg)
    el = np.radians(grid.elevations_deg)
    az_grid, el_grid = np.meshgrid(az, el, indexing='ij')
    omega_x, omega_z = angles_to_spatial_freq(az_grid, el_grid, freq_hz, layout.design_freq_hz)
    values = response_at(lifted, layout, omega_x.reshape(-1), omega_z.reshape(-1))
    return values.reshape(az_grid.shape)


def pattern_frame(pattern: np.ndarray, grid: PatternGrid) -> pd.DataFrame:
    """方向图转为 (azimuth_deg, elevation_deg, pattern, pattern_db) 表"""
    az, el = np.meshgrid(grid.azimuths_deg, grid.elevations_deg, indexing='ij')
    with np.errstate(divide='ignore'):
        db = 20.0 * np.log10(pattern)
    return pd.DataFrame({
        'azimuth_deg': az.reshape(-1),
        'elevation_deg': el.reshape(-1),
        'pattern': pattern.reshape(-1),
        'pattern_db': db.reshape(-1),
    })


def null_depth_db(lifted, layout: ArrayLayout, target: SpatialFrequency, null: SpatialFrequency) -> float:
    """零陷方向相对目标方向的响应（dB，越负越深）"""
    values = response_at(lifted, layout, [target.omega_x, null.omega_x], [target.omega_z, null.omega_z])
    with np.errstate(divide='ignore'):
        return float(20.0 * np.log10(values[1] / values[0]))


def _half_power_width(axis: np.ndarray, cut: np.ndarray, index: int) -> float:
    """从 index 向两侧找 -3 dB 交点，线性插值"""
    level = HALF_POWER * cut[index]
    lo = index
    while lo > 0 and cut[lo - 1] >= level:
        lo -= 1
    hi = index
    while hi < len(cut) - 1 and cut[hi + 1] >= level:
        hi += 1

    left = axis[lo]
    if lo > 0:
        frac = (cut[lo] - level) / (cut[lo] - cut[lo - 1])
        left = axis[lo] - frac * (axis[lo] - axis[lo - 1])
    right = axis[hi]
    if hi < len(cut) - 1:
        frac = (cut[hi] - level) / (cut[hi] - cut[hi + 1])
        right = axis[hi] + frac * (axis[hi + 1] - axis[hi])
    return float(right - left)


def mainlobe_width(pattern: np.ndarray, grid: PatternGrid, angle: SourceAngle) -> dict:
    """
    目标方向的 -3 dB 主瓣宽度（度），沿方位和俯仰两个切面

    电平以目标所在网格点的响应为基准。
    """
    az = grid.azimuths_deg
    el = grid.elevations_deg
    i = int(np.argmin(np.abs(az - angle.azimuth_deg)))
    j = int(np.argmin(np.abs(el - angle.elevation_deg)))
    return {
        'azimuth_deg': _half_power_width(az, pattern[:, j], i),
        'elevation_deg': _half_power_width(el, pattern[i, :], j),
    }
