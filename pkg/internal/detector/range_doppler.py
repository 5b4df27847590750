"""
距离-多普勒处理

逐脉冲匹配滤波，再沿脉冲做 FFT，速度轴经 fftshift 后单调递增。
默认参考信号不加窗（真正的匹配滤波，峰值等于脉冲能量）；hamming、taylor 窗用于压低距离旁瓣。
距离门间隔 c/(2B)，速度单元间隔 lambda*PRF/(2M)。
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft
from scipy.signal import get_window
from scipy.signal.windows import taylor

from internal.scene import Waveform, transmit_pulse
from internal.utils.errors import DimensionError, DomainError

RANGE_WINDOWS = ("none", "hamming", "taylor")
DOPPLER_TAPERS = ("none", "hamming", "hann", "taylor")


@dataclass(frozen=True)
class RangeDopplerMap:
    """距离-多普勒功率图，形状 [距离单元, 速度单元]"""

    power: np.ndarray
    range_axis_m: np.ndarray
    velocity_axis_mps: np.ndarray
    target_id: Optional[int] = None
    mode: Optional[str] = None

    @property
    def shape(self):
        return self.power.shape

    @property
    def range_step_m(self) -> float:
        return float(self.range_axis_m[1] - self.range_axis_m[0]) if len(self.range_axis_m) > 1 else 0.0

    def velocity_index(self, doppler_bin: int) -> int:
        """未移位的 DFT 频点 -> fftshift 后的列下标"""
        n = self.power.shape[1]
        return (doppler_bin + n // 2) % n


def _taper(name: str, length: int) -> np.ndarray:
    if name == "none":
        return np.ones(length)
    if name == "taylor":
        return taylor(length, sym=True)
    return get_window(name, length, fftbins=False)


def doppler_bin(velocity_mps: float, waveform: Waveform) -> int:
    """径向速度对应的（未移位）多普勒 DFT 频点"""
    m = waveform.pulses_per_cpi
    return int(math.floor(2.0 * velocity_mps * m / (waveform.wavelength_m * waveform.prf_hz) + 0.5)) % m


def range_doppler(series: np.ndarray, waveform: Waveform, range_window: str = "none",
                  doppler_taper: str = "none", target_id: Optional[int] = None,
                  mode: Optional[str] = None) -> RangeDopplerMap:
    """
    宽带序列生成距离-多普勒图

    Args:
        series: [M, Ns] 宽带波束形成输出
        waveform: 波形参数
        range_window: 匹配滤波参考信号的窗函数
        doppler_taper: 多普勒维窗函数

    Returns:
        RangeDopplerMap
    """
    if range_window not in RANGE_WINDOWS:
        raise DomainError(f"未知的距离窗: {range_window}")
    if doppler_taper not in DOPPLER_TAPERS:
        raise DomainError(f"未知的多普勒窗: {doppler_taper}")
    x = np.asarray(series)
    m, ns = waveform.pulses_per_cpi, waveform.samples_per_pulse
    if x.shape != (m, ns):
        raise DimensionError(f"宽带序列形状 {x.shape} 与波形 [M={m}, Ns={ns}] 不符")

    reference = transmit_pulse(waveform) * _taper(range_window, waveform.pulse_samples)
    n_fft = scipy.fft.next_fast_len(ns + waveform.pulse_samples - 1)
    spectrum = scipy.fft.fft(x, n=n_fft, axis=1) * np.conj(scipy.fft.fft(reference, n=n_fft))
    compressed = scipy.fft.ifft(spectrum, axis=1)[:, :ns]

    compressed = compressed * _taper(doppler_taper, m)[:, None]
    doppler = scipy.fft.fftshift(scipy.fft.fft(compressed, axis=0), axes=0)
    power = np.abs(doppler.T) ** 2

    range_axis = waveform.range_offset_m + waveform.range_resolution_m * np.arange(ns)
    velocity_axis = scipy.fft.fftshift(scipy.fft.fftfreq(m, d=1.0 / waveform.prf_hz)) * waveform.wavelength_m / 2.0
    return RangeDopplerMap(power=power, range_axis_m=range_axis, velocity_axis_mps=velocity_axis,
                           target_id=target_id, mode=mode)
