"""
导向矢量

全阵列导向矢量 = kron(块间响应, 块内响应)，与整块面阵的相位斜坡完全一致
"""

import math
from typing import Sequence

import numpy as np

from internal.array_model.geometry import ArrayLayout, SourceAngle, SpatialFrequency
from internal.utils.errors import DomainError, DimensionError


def reference_spatial_freq(angle: SourceAngle) -> SpatialFrequency:
    """设计频率下的参考空间频率 pi*[cos(el)*sin(az), sin(el)]"""
    if not isinstance(angle, SourceAngle):
        raise DomainError(f"需要 SourceAngle: {angle!r}")
    return SpatialFrequency(
        math.pi * math.cos(angle.elevation_rad) * math.sin(angle.azimuth_rad),
        math.pi * math.sin(angle.elevation_rad),
    )


def spatial_freq_at(ref: SpatialFrequency, f_hz: float, f_d_hz: float) -> SpatialFrequency:
    """空间频率随频率线性缩放"""
    if not (f_hz > 0 and f_d_hz > 0):
        raise DomainError(f"频率必须为正: f={f_hz!r}, f_d={f_d_hz!r}")
    if f_hz == f_d_hz:
        return ref
    return ref.scaled(f_hz / f_d_hz)


def steering_1d(n: int, omega: float) -> np.ndarray:
    """一维导向矢量 exp(j*m*omega), m = 0..n-1"""
    if n < 1:
        raise DimensionError(f"阵元数必须不小于 1: {n}")
    return np.exp(1j * omega * np.arange(n))


def element_response(layout: ArrayLayout, omega: SpatialFrequency) -> np.ndarray:
    """块内响应 u_Nx(omega_x) ⊗ u_Nz(omega_z)"""
    return np.kron(steering_1d(layout.elems_x, omega.omega_x),
                   steering_1d(layout.elems_z, omega.omega_z))


def tile_response(layout: ArrayLayout, omega: SpatialFrequency) -> np.ndarray:
    """块间相位 u_Tx(N_x*omega_x) ⊗ u_Tz(N_z*omega_z)"""
    return np.kron(steering_1d(layout.tiles_x, layout.elems_x * omega.omega_x),
                   steering_1d(layout.tiles_z, layout.elems_z * omega.omega_z))


def per_tile_steering(layout: ArrayLayout, omega: SpatialFrequency, t: int) -> np.ndarray:
    """第 t 块（从 0 开始）观测到的导向矢量"""
    if not 0 <= t < layout.n_tiles:
        raise DimensionError(f"块下标越界: {t}（共 {layout.n_tiles} 块）")
    return tile_response(layout, omega)[t] * element_response(layout, omega)


def global_steering(layout: ArrayLayout, omega: SpatialFrequency) -> np.ndarray:
    """各块导向矢量按块下标拼接，长度 T*N"""
    return np.kron(tile_response(layout, omega), element_response(layout, omega))


def monolithic_steering(layout: ArrayLayout, omega: SpatialFrequency) -> np.ndarray:
    """按阵元绝对坐标直接计算的相位斜坡，顺序与 global_steering 相同"""
    x, z = layout.element_coordinates()
    return np.exp(1j * (x * omega.omega_x + z * omega.omega_z))


def steering_matrix(layout: ArrayLayout, omega_x: Sequence[float], omega_z: Sequence[float]) -> np.ndarray:
    """
    批量导向矢量

    Args:
        omega_x: G 个 x 方向空间频率
        omega_z: G 个 z 方向空间频率

    Returns:
        [G, T*N] 复矩阵，每行是一个导向矢量
    """
    omega_x = np.asarray(omega_x, dtype=float).reshape(-1)
    omega_z = np.asarray(omega_z, dtype=float).reshape(-1)
    if omega_x.shape != omega_z.shape:
        raise DimensionError(f"空间频率数组长度不一致: {omega_x.shape} vs {omega_z.shape}")
    x, z = layout.element_coordinates()
    return np.exp(1j * (np.outer(omega_x, x) + np.outer(omega_z, z)))


def angles_to_spatial_freq(azimuth_rad, elevation_rad, freq_hz: float, design_freq_hz: float):
    """角度网格转空间频率（数组版本，用于方向图）"""
    if not (freq_hz > 0 and design_freq_hz > 0):
        raise DomainError(f"频率必须为正: f={freq_hz!r}, f_d={design_freq_hz!r}")
    az = np.asarray(azimuth_rad, dtype=float)
    el = np.asarray(elevation_rad, dtype=float)
    scale = math.pi * freq_hz / design_freq_hz
    return scale * np.cos(el) * np.sin(az), scale * np.sin(el)
