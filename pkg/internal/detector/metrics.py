"""
检测评估指标

CFAR 峰值落在真值 ±1 距离单元、±1 速度单元（速度维循环）内即视为检测到该目标，
多个候选时取 |Δr| + |Δv| 最小者，再取功率较大者。
检测信干噪比在真值单元上计算：该单元功率 / 该单元 CFAR 模板估计的底噪；
漏检目标的误差记为 inf，检测信干噪比记为 0。
"""

import math
from dataclasses import dataclass, field, asdict
from typing import Dict, Any, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from internal.detector.cfar import CfarConfig, CfarPeak, cfar_detect, noise_floor
from internal.detector.range_doppler import RangeDopplerMap, doppler_bin
from internal.scene import GroundTruth, TargetTruth, Waveform
from internal.utils.errors import DimensionError, DomainError

MISSED_ERROR = math.inf
MISSED_SINR_DB = 0.0
ASSOCIATION_TOLERANCE = 1

REPORT_COLUMNS = ['scenario', 'mode', 'target_id', 'detected', 'range_err_m', 'vel_err_mps', 'sinr_db']


def associate(peaks: Sequence[CfarPeak], true_bin: Tuple[int, int], n_velocity: int,
              tolerance: int = ASSOCIATION_TOLERANCE) -> Optional[CfarPeak]:
    """在真值单元附近找最近的 CFAR 峰值"""
    r0, v0 = true_bin
    best, best_key = None, None
    for peak in peaks:
        dr = abs(peak.range_index - r0)
        dv = abs(peak.velocity_index - v0) % n_velocity
        dv = min(dv, n_velocity - dv)
        if dr > tolerance or dv > tolerance:
            continue
        key = (dr + dv, -peak.power)
        if best_key is None or key < best_key:
            best, best_key = peak, key
    return best


def _check_bin(power: np.ndarray, true_bin: Tuple[int, int]):
    r, v = true_bin
    if not (0 <= r < power.shape[0] and 0 <= v < power.shape[1]):
        raise DimensionError(f"真值单元 {true_bin} 超出图尺寸 {power.shape}")


def _cell_sinr_db(power: np.ndarray, floor: np.ndarray, true_bin: Tuple[int, int]) -> float:
    r, v = true_bin
    if floor[r, v] <= 0:
        return math.inf
    return float(10.0 * np.log10(power[r, v] / floor[r, v]))


def detection_sinr(rd_map: Union[RangeDopplerMap, np.ndarray], true_bin: Tuple[int, int],
                   config: CfarConfig, peaks: Optional[Sequence[CfarPeak]] = None) -> float:
    """
    检测信干噪比（dB）：真值单元的功率 / 该单元 CFAR 模板估计的底噪

    真值 ±1 单元内没有 CFAR 峰值时返回 0
    """
    power = rd_map.power if isinstance(rd_map, RangeDopplerMap) else np.asarray(rd_map, dtype=float)
    _check_bin(power, true_bin)
    if peaks is None:
        peaks = cfar_detect(power, config)
    if associate(peaks, true_bin, power.shape[1]) is None:
        return MISSED_SINR_DB
    return _cell_sinr_db(power, noise_floor(power, config), true_bin)


@dataclass(frozen=True)
class TargetDetection:
    """单个目标在某一模式下的检测结果"""

    target_id: int
    mode: str
    detected: bool
    range_bin: Optional[int]
    velocity_bin: Optional[int]
    range_err_m: float
    vel_err_mps: float
    sinr_db: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class DetectionReport:
    """某一模式下全部目标的检测结果"""

    scenario: str
    mode: str
    detections: List[TargetDetection] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_detected(self) -> int:
        return sum(1 for d in self.detections if d.detected)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scenario': self.scenario,
            'mode': self.mode,
            'n_detected': self.n_detected,
            'detections': [d.to_dict() for d in self.detections],
            'metadata': self.metadata,
        }


def detect_target(rd_map: RangeDopplerMap, truth: TargetTruth, waveform: Waveform,
                  config: CfarConfig, mode: str) -> TargetDetection:
    """对单个目标的距离-多普勒图做检测并计算误差"""
    true_bin = (truth.range_gate, rd_map.velocity_index(doppler_bin(truth.velocity_mps, waveform)))
    _check_bin(rd_map.power, true_bin)
    peaks = cfar_detect(rd_map, config)
    peak = associate(peaks, true_bin, rd_map.shape[1])
    if peak is None:
        return TargetDetection(truth.target_id, mode, False, None, None,
                               MISSED_ERROR, MISSED_ERROR, MISSED_SINR_DB)
    return TargetDetection(
        target_id=truth.target_id,
        mode=mode,
        detected=True,
        range_bin=peak.range_index,
        velocity_bin=peak.velocity_index,
        range_err_m=float(abs(rd_map.range_axis_m[peak.range_index] - truth.range_m)),
        vel_err_mps=float(abs(rd_map.velocity_axis_mps[peak.velocity_index] - truth.velocity_mps)),
        sinr_db=detection_sinr(rd_map, true_bin, config, peaks),
    )


def evaluate(truth: GroundTruth, reports: Union[Mapping[str, DetectionReport], Sequence[DetectionReport]]) -> pd.DataFrame:
    """
    各模式检测结果对比表

    Returns:
        DataFrame，列为 scenario, mode, target_id, detected, range_err_m, vel_err_mps, sinr_db
    """
    if isinstance(reports, Mapping):
        reports = list(reports.values())
    if not reports:
        raise DomainError("模式集合为空")
    rows = []
    for report in reports:
        by_id = {d.target_id: d for d in report.detections}
        for target_id in truth.target_ids:
            d = by_id.get(target_id)
            if d is None:
                d = TargetDetection(target_id, report.mode, False, None, None,
                                    MISSED_ERROR, MISSED_ERROR, MISSED_SINR_DB)
            rows.append({
                'scenario': report.scenario,
                'mode': report.mode,
                'target_id': target_id,
                'detected': bool(d.detected),
                'range_err_m': d.range_err_m,
                'vel_err_mps': d.vel_err_mps,
                'sinr_db': d.sinr_db,
            })
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def summarize(table: pd.DataFrame) -> pd.DataFrame:
    """按模式汇总检测数与平均信干噪比（漏检按 0 dB 计入）"""
    grouped = table.groupby('mode', sort=False)
    return pd.DataFrame({
        'n_targets': grouped['target_id'].count(),
        'n_detected': grouped['detected'].sum().astype(int),
        'mean_sinr_db': grouped['sinr_db'].mean(),
    }).reset_index()
