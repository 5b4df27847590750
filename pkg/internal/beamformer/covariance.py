"""
协方差估计

样本协方差 R = (1/n_t) * sum(y y^H) + delta * I，delta = loading_factor * trace(R) / d
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from internal.array_model import ArrayLayout, reference_spatial_freq, spatial_freq_at, global_steering
from internal.beamspace import BeamspaceWindow, reduction_matrix
from internal.utils.errors import InsufficientSnapshotsError, DimensionError

DEFAULT_LOADING_FACTOR = 1e-9


@dataclass(frozen=True)
class CovarianceEstimate:
    """Hermitian 协方差矩阵及其估计信息"""

    matrix: np.ndarray
    n_snapshots: int
    loading: float = 0.0
    loading_factor: float = 0.0

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def condition_number(self) -> float:
        """特征值之比；矩阵奇异时返回 inf"""
        eig = np.linalg.eigvalsh(self.matrix)
        if eig[0] <= 0:
            return float('inf')
        return float(eig[-1] / eig[0])


def estimate_covariance(snapshots: np.ndarray, loading_factor: float = DEFAULT_LOADING_FACTOR) -> CovarianceEstimate:
    """
    样本协方差估计

    Args:
        snapshots: [n_t, d] 快拍，每行一个快拍
        loading_factor: 相对对角加载系数

    Returns:
        CovarianceEstimate
    """
    y = np.asarray(snapshots)
    if y.ndim == 1:
        y = y[None, :]
    if y.ndim != 2:
        raise DimensionError(f"快拍必须是 [n_t, d] 矩阵: {y.shape}")
    n_t, d = y.shape
    if n_t < 1:
        raise InsufficientSnapshotsError("协方差估计至少需要 1 个快拍")
    r = y.T @ y.conj() / n_t
    r, delta = diagonal_load(0.5 * (r + r.conj().T), loading_factor)
    return CovarianceEstimate(matrix=r, n_snapshots=n_t, loading=delta, loading_factor=loading_factor)


def diagonal_load(matrix: np.ndarray, loading_factor: float):
    """
    相对对角加载 delta = loading_factor * trace(R) / d

    Returns:
        (加载后的矩阵, delta)
    """
    if loading_factor < 0:
        raise ValueError(f"loading_factor 不能为负: {loading_factor}")
    r = np.asarray(matrix)
    d = r.shape[0]
    delta = loading_factor * float(np.trace(r).real) / d
    if delta > 0:
        r = r + delta * np.eye(d)
    return r, delta


def covariance_from_sources(layout: ArrayLayout, omegas, powers, noise_power) -> np.ndarray:
    """
    由信源空间频率和功率构造理想协方差 sum(p a a^H) + diag(sigma^2)

    noise_power 为标量或逐阵元功率 [T*N]
    """
    n = layout.total_elements
    r = np.diag(np.broadcast_to(np.asarray(noise_power, dtype=float), (n,))).astype(complex)
    for omega, power in zip(omegas, powers):
        a = global_steering(layout, omega)
        r += power * np.outer(a, a.conj())
    return r


def analytic_covariance(layout: ArrayLayout, scenario, freq_hz: Optional[float] = None) -> np.ndarray:
    """
    由场景真值构造的理想阵元域协方差（测试用）

    目标功率按脉冲占空比折算到每个快拍。
    """
    wf = scenario.waveform
    freq_hz = layout.design_freq_hz if freq_hz is None else freq_hz
    duty = wf.pulse_samples / wf.samples_per_pulse
    omegas, powers = [], []
    for t in scenario.targets:
        omegas.append(spatial_freq_at(reference_spatial_freq(t.angle), freq_hz, layout.design_freq_hz))
        powers.append(duty * t.amplitude ** 2)
    for j in scenario.interferers:
        omegas.append(spatial_freq_at(reference_spatial_freq(j.angle), freq_hz, layout.design_freq_hz))
        powers.append(j.power)
    noise = scenario.element_noise_powers(layout.n_tiles, layout.tile_elements)
    return covariance_from_sources(layout, omegas, powers, noise)


def reduce_covariance(window: BeamspaceWindow, cov: np.ndarray) -> np.ndarray:
    """阵元域协方差投影到窗口化波束域 (I⊗B) R (I⊗B)^H"""
    cov = np.asarray(cov)
    n_tiles, rem = divmod(cov.shape[0], window.tile_size)
    if rem or cov.shape[0] != cov.shape[1]:
        raise DimensionError(f"协方差尺寸 {cov.shape} 与窗口块尺寸 {window.tile_size} 不符")
    b = reduction_matrix(window, n_tiles)
    return b @ cov @ b.conj().T
