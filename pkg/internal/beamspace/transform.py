"""
块内二维酉 DFT

D = D_Nx^T ⊗ D_Nz。块内快拍按 [x, z] 重排后，D 等价于两个轴上的正交归一化 FFT，
输出下标为 kx * N_z + kz。
"""

from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg

from internal.utils.errors import DimensionError


def dft_2d(x: np.ndarray, n_z: int, n_x: int) -> np.ndarray:
    """
    对最后一维（长度 N_z*N_x）做块内二维酉 DFT

    Args:
        x: [..., N] 复数组
        n_z, n_x: 块尺寸

    Returns:
        [..., N] 波束域系数
    """
    x = np.asarray(x)
    n = n_z * n_x
    if x.shape[-1] != n:
        raise DimensionError(f"块快拍长度 {x.shape[-1]} 与块尺寸 {n_z}x{n_x} 不符")
    grid = x.reshape(*x.shape[:-1], n_x, n_z)
    return scipy.fft.fft2(grid, axes=(-2, -1), norm="ortho").reshape(x.shape)


def idft_2d(x: np.ndarray, n_z: int, n_x: int) -> np.ndarray:
    """dft_2d 的伴随（即逆）变换"""
    x = np.asarray(x)
    n = n_z * n_x
    if x.shape[-1] != n:
        raise DimensionError(f"波束域向量长度 {x.shape[-1]} 与块尺寸 {n_z}x{n_x} 不符")
    grid = x.reshape(*x.shape[:-1], n_x, n_z)
    return scipy.fft.ifft2(grid, axes=(-2, -1), norm="ortho").reshape(x.shape)


@dataclass(frozen=True)
class BeamspaceTransform:
    """块内波束域变换"""

    n_z: int
    n_x: int
    unitary: bool = True

    @property
    def size(self) -> int:
        return self.n_z * self.n_x

    def matrix(self) -> np.ndarray:
        """显式变换矩阵 D（仅用于校验）"""
        d_x = scipy.linalg.dft(self.n_x, scale='sqrtn')
        d_z = scipy.linalg.dft(self.n_z, scale='sqrtn')
        return np.kron(d_x.T, d_z)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return dft_2d(x, self.n_z, self.n_x)

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        return idft_2d(x, self.n_z, self.n_x)
