"""
波束域窗口

窗口中心为目标空间频率对应的 DFT 位置 floor(N*omega/(2*pi) + 0.5) mod N，
每个轴取 W 个循环连续的频点；W 为偶数时多出的频点放在下标增大一侧。
窗口整轴覆盖时频点按 0..N-1 顺序排列，选择即恒等。
所有块使用同一窗口，因此全局降维等价于 (I_T ⊗ S D)。
"""

import math
from dataclasses import dataclass
from typing import Dict, Any, Optional, Tuple

import numpy as np

from internal.array_model import ArrayLayout, SpatialFrequency, global_steering
from internal.beamspace.transform import dft_2d, idft_2d
from internal.utils.errors import DimensionError


def center_bin(omega: float, n: int) -> int:
    """空间频率对应的 DFT 频点（四舍五入，0.5 向上）"""
    return int(math.floor(n * omega / (2 * math.pi) + 0.5)) % n


def window_bins(center: int, width: int, n: int) -> Tuple[int, ...]:
    if width == n:
        return tuple(range(n))
    start = center - (width - 1) // 2
    return tuple((start + i) % n for i in range(width))


@dataclass(frozen=True)
class BeamspaceWindow:
    """单个目标在单个子带上的波束域窗口"""

    n_z: int
    n_x: int
    bins_z: Tuple[int, ...]
    bins_x: Tuple[int, ...]
    center_z: int
    center_x: int
    target_id: Optional[int] = None
    subband: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.bins_z) * len(self.bins_x)

    @property
    def tile_size(self) -> int:
        return self.n_z * self.n_x

    @property
    def flat_indices(self) -> np.ndarray:
        """选中系数在块波束域向量中的下标，x 在外层、z 在内层"""
        bz = np.asarray(self.bins_z, dtype=np.intp)
        bx = np.asarray(self.bins_x, dtype=np.intp)
        return (bx[:, None] * self.n_z + bz[None, :]).reshape(-1)

    def selector(self) -> np.ndarray:
        """选择矩阵 S，形状 [W, N]"""
        s = np.zeros((self.size, self.tile_size))
        s[np.arange(self.size), self.flat_indices] = 1.0
        return s

    def to_dict(self) -> Dict[str, Any]:
        return {
            'target_id': self.target_id,
            'subband': self.subband,
            'tile_dims': [self.n_z, self.n_x],
            'center': [self.center_z, self.center_x],
            'bins_z': list(self.bins_z),
            'bins_x': list(self.bins_x),
        }


def plan_window(layout: ArrayLayout, omega: SpatialFrequency, w_z: int, w_x: int,
                target_id: Optional[int] = None, subband: Optional[int] = None) -> BeamspaceWindow:
    """按目标在当前子带的空间频率规划窗口"""
    if not 1 <= w_z <= layout.elems_z:
        raise DimensionError(f"W_z={w_z} 超出块尺寸 N_z={layout.elems_z}")
    if not 1 <= w_x <= layout.elems_x:
        raise DimensionError(f"W_x={w_x} 超出块尺寸 N_x={layout.elems_x}")
    c_z = center_bin(omega.omega_z, layout.elems_z)
    c_x = center_bin(omega.omega_x, layout.elems_x)
    return BeamspaceWindow(
        n_z=layout.elems_z,
        n_x=layout.elems_x,
        bins_z=window_bins(c_z, w_z, layout.elems_z),
        bins_x=window_bins(c_x, w_x, layout.elems_x),
        center_z=c_z,
        center_x=c_x,
        target_id=target_id,
        subband=subband,
    )


def apply_window(window: BeamspaceWindow, beamspace: np.ndarray) -> np.ndarray:
    """从块波束域向量中取出窗口内的 W 个系数，等价于 S @ x"""
    beamspace = np.asarray(beamspace)
    if beamspace.shape[-1] != window.tile_size:
        raise DimensionError(f"波束域向量长度 {beamspace.shape[-1]} 与窗口块尺寸 {window.tile_size} 不符")
    return beamspace[..., window.flat_indices]


def reduce_tile(window: BeamspaceWindow, snapshot: np.ndarray) -> np.ndarray:
    """块快拍 -> 窗口内波束域系数"""
    return apply_window(window, dft_2d(snapshot, window.n_z, window.n_x))


def reduce_global(window: BeamspaceWindow, stacked: np.ndarray) -> np.ndarray:
    """
    全局降维：每个块做同样的 DFT 与选择后拼接

    Args:
        window: 各块共用的窗口
        stacked: [..., T*N] 全阵列快拍（可带快拍维）

    Returns:
        [..., T*W]
    """
    stacked = np.asarray(stacked)
    n = window.tile_size
    if stacked.shape[-1] == 0 or stacked.shape[-1] % n:
        raise DimensionError(f"快拍长度 {stacked.shape[-1]} 不是块长度 {n} 的整数倍")
    n_tiles = stacked.shape[-1] // n
    tiles = stacked.reshape(*stacked.shape[:-1], n_tiles, n)
    reduced = apply_window(window, dft_2d(tiles, window.n_z, window.n_x))
    return reduced.reshape(*stacked.shape[:-1], n_tiles * window.size)


def expand_global(window: BeamspaceWindow, reduced: np.ndarray) -> np.ndarray:
    """reduce_global 的伴随：(I_T ⊗ D^H S^T)"""
    reduced = np.asarray(reduced)
    w = window.size
    if reduced.shape[-1] == 0 or reduced.shape[-1] % w:
        raise DimensionError(f"降维向量长度 {reduced.shape[-1]} 不是窗口大小 {w} 的整数倍")
    n_tiles = reduced.shape[-1] // w
    coeffs = np.zeros((*reduced.shape[:-1], n_tiles, window.tile_size), dtype=complex)
    coeffs[..., window.flat_indices] = reduced.reshape(*reduced.shape[:-1], n_tiles, w)
    return idft_2d(coeffs, window.n_z, window.n_x).reshape(*reduced.shape[:-1], n_tiles * window.tile_size)


def reduction_matrix(window: BeamspaceWindow, n_tiles: int) -> np.ndarray:
    """显式降维矩阵 I_T ⊗ B，形状 [T*W, T*N]"""
    return reduce_global(window, np.eye(n_tiles * window.tile_size)).T


def windowed_steering(layout: ArrayLayout, window: BeamspaceWindow, omega: SpatialFrequency) -> np.ndarray:
    """降维后的导向矢量"""
    return reduce_global(window, global_steering(layout, omega))
