"""检测模块：宽带合成、距离-多普勒、CFAR 与评估"""

from internal.detector.synthesis import synthesize_wideband
from internal.detector.range_doppler import (
    RangeDopplerMap, range_doppler, doppler_bin, RANGE_WINDOWS, DOPPLER_TAPERS,
)
from internal.detector.cfar import CfarConfig, CfarPeak, cfar_detect, cfar_mask, noise_floor
from internal.detector.metrics import (
    TargetDetection,
    DetectionReport,
    associate,
    detection_sinr,
    detect_target,
    evaluate,
    summarize,
    REPORT_COLUMNS,
    MISSED_ERROR,
    MISSED_SINR_DB,
)

__all__ = [
    "synthesize_wideband",
    "RangeDopplerMap", "range_doppler", "doppler_bin", "RANGE_WINDOWS", "DOPPLER_TAPERS",
    "CfarConfig", "CfarPeak", "cfar_detect", "cfar_mask", "noise_floor",
    "TargetDetection", "DetectionReport", "associate", "detection_sinr", "detect_target",
    "evaluate", "summarize", "REPORT_COLUMNS", "MISSED_ERROR", "MISSED_SINR_DB",
]
