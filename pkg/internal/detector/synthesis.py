"""
宽带合成：信道化器的精确逆
"""

from typing import Mapping, Sequence, Union

import numpy as np

from internal.scene import Waveform, dechannelize
from internal.utils.errors import DimensionError


def synthesize_wideband(subband_series: Union[np.ndarray, Sequence, Mapping[int, np.ndarray]],
                        waveform: Waveform) -> np.ndarray:
    """
    各子带波束形成输出合成为宽带时间序列

    Args:
        subband_series: [L, M*Ns/L] 数组、长度 L 的序列，或 {子带下标: 序列}
        waveform: 波形参数

    Returns:
        [M, Ns] 复数组
    """
    n_subbands = waveform.n_subbands
    if isinstance(subband_series, Mapping):
        missing = [i for i in range(n_subbands) if i not in subband_series]
        if missing:
            raise DimensionError(f"缺少子带: {missing}")
        subband_series = [subband_series[i] for i in range(n_subbands)]
    if not isinstance(subband_series, np.ndarray):
        lengths = {np.shape(s) for s in subband_series}
        if len(lengths) > 1:
            raise DimensionError(f"各子带序列长度不一致: {sorted(lengths)}")
    stacked = np.asarray(subband_series)
    if stacked.shape[0] != n_subbands:
        raise DimensionError(f"子带数 {stacked.shape[0]} 与波形子带数 {n_subbands} 不符")
    if stacked.shape[1] != waveform.snapshots_per_subband:
        raise DimensionError(
            f"子带序列长度 {stacked.shape[1]} 与波形快拍数 {waveform.snapshots_per_subband} 不符"
        )
    return dechannelize(stacked, waveform.pulses_per_cpi)
