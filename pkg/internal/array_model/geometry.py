"""
分块均匀面阵几何

阵元排列约定：块内 z 下标变化最快（块内下标 = x * N_z + z），
块之间同样 z 优先（块下标 = tx * T_z + tz），全阵列快拍按块依次拼接。
"""

import math
from dataclasses import dataclass, asdict
from typing import Dict, Any, Tuple

import numpy as np
from scipy import constants

from internal.utils.errors import DomainError, DimensionError

HALF_WAVELENGTH = 0.5


@dataclass(frozen=True)
class ArrayLayout:
    """分块均匀面阵：T_z x T_x 个块，每块 N_z x N_x 个阵元，阵元间距为设计频率下的半波长"""

    tiles_z: int
    tiles_x: int
    elems_z: int
    elems_x: int
    design_freq_hz: float
    spacing: float = HALF_WAVELENGTH

    def __post_init__(self):
        for name in ('tiles_z', 'tiles_x', 'elems_z', 'elems_x'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise DomainError(f"{name} 必须是不小于 1 的整数: {value!r}")
        if not (math.isfinite(self.design_freq_hz) and self.design_freq_hz > 0):
            raise DomainError(f"design_freq_hz 必须为正: {self.design_freq_hz!r}")
        if self.spacing != HALF_WAVELENGTH:
            raise DomainError(f"阵元间距固定为半波长: {self.spacing!r}")

    @property
    def n_tiles(self) -> int:
        return self.tiles_z * self.tiles_x

    @property
    def tile_elements(self) -> int:
        return self.elems_z * self.elems_x

    @property
    def total_elements(self) -> int:
        return self.n_tiles * self.tile_elements

    @property
    def total_z(self) -> int:
        return self.tiles_z * self.elems_z

    @property
    def total_x(self) -> int:
        return self.tiles_x * self.elems_x

    @property
    def wavelength_m(self) -> float:
        return constants.c / self.design_freq_hz

    def tile_index(self, tz: int, tx: int) -> int:
        return tx * self.tiles_z + tz

    def element_coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        全阵列阵元的整数坐标（以阵元间距为单位），按规范排列顺序

        Returns:
            (x, z) 两个长度为 T*N 的整型数组
        """
        tz, tx = np.arange(self.tiles_z), np.arange(self.tiles_x)
        ez, ex = np.arange(self.elems_z), np.arange(self.elems_x)
        # 维度顺序 [tx, tz, ex, ez]，展平后即规范顺序
        x = tx[:, None, None, None] * self.elems_x + ex[None, None, :, None]
        z = tz[None, :, None, None] * self.elems_z + ez[None, None, None, :]
        shape = (self.tiles_x, self.tiles_z, self.elems_x, self.elems_z)
        return np.broadcast_to(x, shape).reshape(-1), np.broadcast_to(z, shape).reshape(-1)

    def sub_layout(self, elems_z: int, elems_x: int) -> 'ArrayLayout':
        """以角点 (0, 0) 为起点的连续子阵，视为单块阵列"""
        if elems_z > self.total_z or elems_x > self.total_x:
            raise DimensionError(
                f"子阵 {elems_z}x{elems_x} 超出阵列 {self.total_z}x{self.total_x}"
            )
        return ArrayLayout(1, 1, elems_z, elems_x, self.design_freq_hz)

    def sub_aperture_indices(self, elems_z: int, elems_x: int) -> np.ndarray:
        """子阵阵元在全阵列快拍中的列下标，按子阵的规范顺序排列"""
        sub = self.sub_layout(elems_z, elems_x)
        x, z = self.element_coordinates()
        lookup = {(int(xi), int(zi)): i for i, (xi, zi) in enumerate(zip(x, z))}
        sx, sz = sub.element_coordinates()
        return np.array([lookup[(int(xi), int(zi))] for xi, zi in zip(sx, sz)], dtype=np.intp)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ArrayLayout':
        return cls(
            tiles_z=int(data['tiles_z']),
            tiles_x=int(data['tiles_x']),
            elems_z=int(data['elems_z']),
            elems_x=int(data['elems_x']),
            design_freq_hz=float(data['design_freq_hz']),
            spacing=float(data.get('spacing', HALF_WAVELENGTH)),
        )


@dataclass(frozen=True)
class SourceAngle:
    """来波方向：方位角从阵列法线在水平面内量起，俯仰角从水平面量起（弧度）"""

    azimuth_rad: float
    elevation_rad: float

    def __post_init__(self):
        for name in ('azimuth_rad', 'elevation_rad'):
            value = getattr(self, name)
            if not (math.isfinite(value) and -math.pi / 2 < value < math.pi / 2):
                raise DomainError(f"{name} 超出前半空间可见区 (-pi/2, pi/2): {value!r}")

    @classmethod
    def from_degrees(cls, azimuth_deg: float, elevation_deg: float) -> 'SourceAngle':
        return cls(math.radians(azimuth_deg), math.radians(elevation_deg))

    @property
    def azimuth_deg(self) -> float:
        return math.degrees(self.azimuth_rad)

    @property
    def elevation_deg(self) -> float:
        return math.degrees(self.elevation_rad)


@dataclass(frozen=True)
class SpatialFrequency:
    """空间频率（弧度/阵元）。f > f_d 时允许超出 [-pi, pi]"""

    omega_x: float
    omega_z: float

    def scaled(self, factor: float) -> 'SpatialFrequency':
        return SpatialFrequency(self.omega_x * factor, self.omega_z * factor)
