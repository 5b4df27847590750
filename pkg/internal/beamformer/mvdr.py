"""
MVDR 波束形成

c = R^-1 a / (a^H R^-1 a)，通过 Cholesky 分解求解，不显式求逆。
降维模式在窗口化波束域求解，再经 (I_T ⊗ B^H) 提升回阵元域。
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union, Dict, Any

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from internal.array_model import ArrayLayout, SpatialFrequency
from internal.beamformer.covariance import CovarianceEstimate, estimate_covariance, DEFAULT_LOADING_FACTOR
from internal.beamspace import BeamspaceWindow, reduce_global, expand_global, windowed_steering
from internal.config import TomlConfig
from internal.utils import get_logger
from internal.utils.errors import SingularCovarianceError, DimensionError, DomainError

logger = get_logger('beamformer')

ELEMENT = "element"
BEAMSPACE = "beamspace"

SINGULAR_CONDITION = 1.0 / np.finfo(float).eps
EXACT_CONDITION_MAX_DIMENSION = 16


@dataclass(frozen=True)
class Correlator:
    """相关器（权矢量），满足 c^H a = 1"""

    weights: np.ndarray
    steering: np.ndarray
    domain: str = ELEMENT
    condition_number: float = 1.0
    condition_exact: bool = True
    ill_conditioned: bool = False
    window: Optional[BeamspaceWindow] = None
    target_id: Optional[int] = None
    subband: Optional[int] = None

    @property
    def dimension(self) -> int:
        return self.weights.shape[0]

    def distortionless_error(self) -> float:
        return float(abs(np.vdot(self.weights, self.steering) - 1.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'domain': self.domain,
            'target_id': self.target_id,
            'subband': self.subband,
            'dimension': self.dimension,
            'condition_number': self.condition_number,
            'condition_exact': self.condition_exact,
            'ill_conditioned': self.ill_conditioned,
            'window': self.window.to_dict() if self.window else None,
            'weights_re': self.weights.real.tolist(),
            'weights_im': self.weights.imag.tolist(),
        }


@dataclass(frozen=True)
class LiftedCorrelator:
    """提升到阵元域的相关器，长度 T*N"""

    weights: np.ndarray
    source: Correlator

    @classmethod
    def from_element(cls, correlator: Correlator) -> 'LiftedCorrelator':
        if correlator.domain != ELEMENT:
            raise DomainError("只有阵元域相关器可以直接作为提升结果")
        return cls(correlator.weights, correlator)

    def apply(self, snapshots: np.ndarray) -> np.ndarray:
        return mvdr_output(self.weights, snapshots)


def condition_number(matrix: np.ndarray, factor=None) -> Tuple[float, bool]:
    """
    协方差条件数

    d 不超过 EXACT_CONDITION_MAX_DIMENSION 时由特征值精确计算；更大的矩阵取 Cholesky 主元比的平方，
    这只是精确条件数的下界估计，可能低几个数量级。

    Returns:
        (条件数, 是否精确)
    """
    r = np.asarray(matrix)
    if r.shape[0] <= EXACT_CONDITION_MAX_DIMENSION:
        eig = np.linalg.eigvalsh(r)
        return (math.inf if eig[0] <= 0 else float(eig[-1] / eig[0])), True
    if factor is None:
        factor = cho_factor(r, lower=True)
    pivots = np.abs(np.diag(factor[0]))
    if pivots.min() == 0:
        return math.inf, False
    return float((pivots.max() / pivots.min()) ** 2), False


def mvdr_weights(cov: Union[CovarianceEstimate, np.ndarray], steering: np.ndarray,
                 domain: str = ELEMENT, ill_condition_threshold: Optional[float] = None,
                 **metadata) -> Correlator:
    """
    MVDR 权矢量

    Args:
        cov: 协方差（已加载）
        steering: 约束方向导向矢量
        domain: element 或 beamspace
        ill_condition_threshold: 病态告警门限，默认取配置

    Returns:
        Correlator

    Raises:
        SingularCovarianceError: 协方差不正定
    """
    r = cov.matrix if isinstance(cov, CovarianceEstimate) else np.asarray(cov)
    a = np.asarray(steering, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] != a.shape[0]:
        raise DimensionError(f"协方差 {r.shape} 与导向矢量 {a.shape} 维度不符")
    if not np.any(a):
        raise DomainError("导向矢量为零")
    if isinstance(cov, CovarianceEstimate) and cov.loading == 0 and cov.n_snapshots < cov.dimension:
        raise SingularCovarianceError(
            f"未加载的样本协方差秩不足: 快拍数 {cov.n_snapshots} < 维度 {cov.dimension}"
        )

    try:
        factor = cho_factor(r, lower=True)
    except LinAlgError as e:
        raise SingularCovarianceError(f"协方差矩阵不正定 (d={r.shape[0]}): {e}")
    pivots = np.abs(np.diag(factor[0]))
    if pivots.min() == 0 or not np.all(np.isfinite(pivots)):
        raise SingularCovarianceError(f"协方差矩阵奇异 (d={r.shape[0]})")
    condition, exact = condition_number(r, factor)
    label = "条件数" if exact else "条件数估计"
    if condition >= SINGULAR_CONDITION:
        raise SingularCovarianceError(f"协方差矩阵数值奇异: {label} {condition:.3e} (d={r.shape[0]})")

    x = cho_solve(factor, a)
    weights = x / np.vdot(a, x)

    threshold = TomlConfig().ILL_CONDITION_THRESHOLD if ill_condition_threshold is None else ill_condition_threshold
    ill = condition > threshold
    if ill:
        logger.warning(f"协方差病态: {label} {condition:.3e} > {threshold:.1e} (d={r.shape[0]})")
    return Correlator(weights=weights, steering=a, domain=domain, condition_number=condition,
                      condition_exact=exact, ill_conditioned=ill, **metadata)


def mvdr_output(correlator: Union[Correlator, np.ndarray], snapshots: np.ndarray) -> np.ndarray:
    """波束形成输出 c^H y[n]"""
    c = correlator.weights if isinstance(correlator, Correlator) else np.asarray(correlator)
    y = np.asarray(snapshots)
    if y.shape[-1] != c.shape[0]:
        raise DimensionError(f"快拍长度 {y.shape[-1]} 与权矢量长度 {c.shape[0]} 不符")
    return y @ c.conj()


def reduced_mvdr(layout: ArrayLayout, window: BeamspaceWindow, snapshots: np.ndarray,
                 omega: SpatialFrequency, loading_factor: float = DEFAULT_LOADING_FACTOR, **metadata) -> Correlator:
    """
    窗口化波束域 MVDR

    Args:
        layout: 阵列几何
        window: 目标 k 在当前子带的窗口（所有块共用）
        snapshots: [n_t, T*N] 阵元域训练快拍
        omega: 目标在当前子带的空间频率
        loading_factor: 相对对角加载系数

    Returns:
        波束域 Correlator，长度 T*W
    """
    if window.n_z != layout.elems_z or window.n_x != layout.elems_x:
        raise DimensionError(f"窗口块尺寸 {window.n_z}x{window.n_x} 与阵列块尺寸不符")
    reduced = reduce_global(window, snapshots)
    cov = estimate_covariance(reduced, loading_factor)
    steering = windowed_steering(layout, window, omega)
    metadata.setdefault('target_id', window.target_id)
    metadata.setdefault('subband', window.subband)
    return mvdr_weights(cov, steering, domain=BEAMSPACE, window=window, **metadata)


def lift(correlator: Correlator, window: Optional[BeamspaceWindow] = None) -> LiftedCorrelator:
    """波束域相关器提升到阵元域：(I_T ⊗ B^H) c"""
    window = window or correlator.window
    if window is None:
        raise DomainError("提升需要窗口")
    if correlator.dimension % window.size:
        raise DimensionError(f"相关器长度 {correlator.dimension} 不是窗口大小 {window.size} 的整数倍")
    return LiftedCorrelator(expand_global(window, correlator.weights), correlator)


def output_sinr(weights: np.ndarray, steering: np.ndarray, signal_power: float,
                interference_cov: np.ndarray) -> float:
    """输出信干噪比（线性值）"""
    w = weights.weights if isinstance(weights, (Correlator, LiftedCorrelator)) else np.asarray(weights)
    gain = abs(np.vdot(w, steering)) ** 2
    return float(signal_power * gain / np.real(np.vdot(w, interference_cov @ w)))
