"""
FFT 信道化器

临界采样、不重叠的 L 点 FFT 分块，正交归一化，能量守恒。
子带 l 的第 p*(Ns/L)+b 个快拍来自第 p 个脉冲的第 b 个分块。
"""

import numpy as np
import scipy.fft

from internal.utils.errors import DimensionError


def channelize(series: np.ndarray, n_subbands: int) -> np.ndarray:
    """
    宽带时间序列分解为子带快拍

    Args:
        series: [M, Ns, ...] 复数组，M 个脉冲，每个脉冲 Ns 个采样，其余维度（如阵元）原样保留
        n_subbands: 子带数 L

    Returns:
        [L, M*Ns/L, ...] 复数组
    """
    series = np.asarray(series)
    if series.ndim < 2:
        raise DimensionError(f"输入至少需要 [脉冲, 采样] 两维: {series.shape}")
    n_pulses, n_samples = series.shape[:2]
    if n_subbands < 1 or n_samples % n_subbands:
        raise DimensionError(f"每脉冲采样数 {n_samples} 不能被子带数 {n_subbands} 整除")
    rest = series.shape[2:]
    blocks = series.reshape(n_pulses, n_samples // n_subbands, n_subbands, *rest)
    spectra = scipy.fft.fft(blocks, axis=2, norm="ortho")
    spectra = np.moveaxis(spectra, 2, 0)
    return spectra.reshape(n_subbands, n_pulses * (n_samples // n_subbands), *rest)


def dechannelize(subbands: np.ndarray, n_pulses: int) -> np.ndarray:
    """channelize 的精确逆变换，[L, M*Ns/L, ...] -> [M, Ns, ...]"""
    subbands = np.asarray(subbands)
    if subbands.ndim < 2:
        raise DimensionError(f"输入至少需要 [子带, 快拍] 两维: {subbands.shape}")
    n_subbands, n_snapshots = subbands.shape[:2]
    if n_pulses < 1 or n_snapshots % n_pulses:
        raise DimensionError(f"快拍数 {n_snapshots} 不能被脉冲数 {n_pulses} 整除")
    rest = subbands.shape[2:]
    block_length = n_snapshots // n_pulses
    spectra = subbands.reshape(n_subbands, n_pulses, block_length, *rest)
    spectra = np.moveaxis(spectra, 0, 2)
    blocks = scipy.fft.ifft(spectra, axis=2, norm="ortho")
    return blocks.reshape(n_pulses, block_length * n_subbands, *rest)
