"""
发射脉冲
"""

import numpy as np

from internal.scene.scenario import Waveform


def transmit_pulse(waveform: Waveform) -> np.ndarray:
    """
    复基带发射脉冲，恒模，采样率等于带宽

    线性调频时瞬时频率从 -B/2 扫到 +B/2；否则为矩形脉冲。
    """
    n = np.arange(waveform.pulse_samples)
    if not waveform.chirp:
        return np.ones(waveform.pulse_samples, dtype=complex)
    fs = waveform.bandwidth_hz
    duration = waveform.pulse_samples / fs
    t = n / fs - duration / 2
    return np.exp(1j * np.pi * (waveform.bandwidth_hz / duration) * t ** 2)


def pulse_train(waveform: Waveform, gate: int, amplitude: float, doppler_hz: float) -> np.ndarray:
    """
    单个目标在整个 CPI 内的宽带回波

    Returns:
        [M, Ns] 复数组；第 p 个脉冲乘以 exp(j*2*pi*f_D*p/PRF)
    """
    pulse = transmit_pulse(waveform)
    row = np.zeros(waveform.samples_per_pulse, dtype=complex)
    row[gate:gate + waveform.pulse_samples] = amplitude * pulse
    p = np.arange(waveform.pulses_per_cpi)
    rotation = np.exp(2j * np.pi * doppler_hz * p / waveform.prf_hz)
    return rotation[:, None] * row[None, :]
