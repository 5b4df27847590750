"""
波束形成模式

oracle-full       全阵列阵元域 MVDR，维度 T*N
tiled-beamspace   分块窗口化波束域 MVDR，维度 T*W
single-beamspace  角点处单个子阵的窗口化波束域 MVDR，维度 W

每次求解分三步：reduce（窗口规划与块内 DFT 降维）、solve_reduced（协方差估计与 MVDR）、
lift_correlator（提升回阵元域），引擎分别计时。
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from internal.array_model import ArrayLayout, SpatialFrequency, global_steering
from internal.beamformer import (
    Correlator, LiftedCorrelator, estimate_covariance, mvdr_weights, lift, reduce_covariance, diagonal_load,
    ELEMENT, BEAMSPACE,
)
from internal.beamspace import BeamspaceWindow, plan_window, reduce_global, windowed_steering
from internal.utils.errors import ConfigError, DimensionError


@dataclass(frozen=True)
class ReducedProblem:
    """降维后的求解输入：训练数据与约束方向"""

    data: np.ndarray
    steering: np.ndarray
    domain: str
    window: Optional[BeamspaceWindow] = None
    target_id: Optional[int] = None
    subband: Optional[int] = None

    @property
    def dimension(self) -> int:
        return self.steering.shape[0]


class BeamformerMode(ABC):
    """波束形成模式基类"""

    name: str = ""

    def __init__(self, layout: ArrayLayout, loading_factor: float):
        self.layout = layout
        self.loading_factor = loading_factor

    @property
    def output_layout(self) -> ArrayLayout:
        """提升后相关器所在的阵列"""
        return self.layout

    @property
    def columns(self) -> Optional[np.ndarray]:
        """本模式使用的全阵列快拍列，None 表示全部"""
        return None

    @property
    @abstractmethod
    def dimension(self) -> int:
        """自适应自由度 d"""

    def select(self, snapshots: np.ndarray) -> np.ndarray:
        cols = self.columns
        return snapshots if cols is None else snapshots[..., cols]

    def plan(self, omega: SpatialFrequency, target_id: int, subband: int) -> Optional[BeamspaceWindow]:
        return None

    @abstractmethod
    def reduce(self, training: np.ndarray, omega: SpatialFrequency,
               target_id: Optional[int] = None, subband: Optional[int] = None) -> ReducedProblem:
        """
        训练快拍降到求解域

        Args:
            training: [n_t, ...] 已按 select 取列的阵元域训练快拍
            omega: 目标在当前子带的空间频率
        """

    @abstractmethod
    def lift_correlator(self, correlator: Correlator) -> LiftedCorrelator:
        """求解域相关器提升到阵元域"""

    def solve_reduced(self, problem: ReducedProblem) -> Correlator:
        """协方差估计与 MVDR 求解"""
        cov = estimate_covariance(problem.data, self.loading_factor)
        return mvdr_weights(cov, problem.steering, domain=problem.domain, window=problem.window,
                            target_id=problem.target_id, subband=problem.subband)

    def solve(self, training: np.ndarray, omega: SpatialFrequency,
              target_id: Optional[int] = None, subband: Optional[int] = None) -> Tuple[Correlator, LiftedCorrelator]:
        """
        由训练快拍求相关器

        Returns:
            (求解域的相关器, 提升到阵元域的相关器)
        """
        correlator = self.solve_reduced(self.reduce(training, omega, target_id, subband))
        return correlator, self.lift_correlator(correlator)

    def solve_analytic(self, covariance: np.ndarray, omega: SpatialFrequency,
                       target_id: Optional[int] = None, subband: Optional[int] = None) -> Tuple[Correlator, LiftedCorrelator]:
        """
        由理想阵元域协方差（全阵列）求相关器，加载规则与样本协方差相同

        Raises:
            DimensionError: 协方差尺寸与阵列不符
        """
        r = np.asarray(covariance)
        if r.shape != (self.layout.total_elements, self.layout.total_elements):
            raise DimensionError(f"协方差尺寸 {r.shape} 与阵列阵元数 {self.layout.total_elements} 不符")
        cols = self.columns
        if cols is not None:
            r = r[np.ix_(cols, cols)]
        problem = self.reduce(np.zeros((1, r.shape[0]), dtype=complex), omega, target_id, subband)
        if problem.window is not None:
            r = reduce_covariance(problem.window, r)
        loaded, _ = diagonal_load(r, self.loading_factor)
        correlator = mvdr_weights(loaded, problem.steering, domain=problem.domain, window=problem.window,
                                  target_id=target_id, subband=subband)
        return correlator, self.lift_correlator(correlator)

    def describe(self) -> dict:
        return {'mode': self.name, 'dimension': self.dimension, 'layout': self.output_layout.to_dict()}


class OracleMode(BeamformerMode):
    """全维阵元域 MVDR"""

    name = "oracle-full"

    @property
    def dimension(self) -> int:
        return self.layout.total_elements

    def reduce(self, training, omega, target_id=None, subband=None):
        return ReducedProblem(np.asarray(training), global_steering(self.layout, omega), ELEMENT,
                              target_id=target_id, subband=subband)

    def lift_correlator(self, correlator):
        return LiftedCorrelator.from_element(correlator)


class TiledBeamspaceMode(BeamformerMode):
    """各块共用窗口的波束域 MVDR"""

    name = "tiled-beamspace"

    def __init__(self, layout: ArrayLayout, loading_factor: float, window: Tuple[int, int]):
        super().__init__(layout, loading_factor)
        self.w_z, self.w_x = window

    @property
    def dimension(self) -> int:
        return self.output_layout.n_tiles * self.w_z * self.w_x

    def plan(self, omega, target_id, subband):
        return plan_window(self.output_layout, omega, self.w_z, self.w_x, target_id, subband)

    def reduce(self, training, omega, target_id=None, subband=None):
        window = self.plan(omega, target_id, subband)
        return ReducedProblem(reduce_global(window, training), windowed_steering(self.output_layout, window, omega),
                              BEAMSPACE, window=window, target_id=target_id, subband=subband)

    def lift_correlator(self, correlator):
        return lift(correlator)

    def describe(self) -> dict:
        info = super().describe()
        info['window'] = [self.w_z, self.w_x]
        return info


class SingleBeamspaceMode(TiledBeamspaceMode):
    """角点子阵作为单个块的波束域 MVDR"""

    name = "single-beamspace"

    def __init__(self, layout: ArrayLayout, loading_factor: float, window: Tuple[int, int],
                 single_array: Tuple[int, int]):
        super().__init__(layout, loading_factor, window)
        self.sub = layout.sub_layout(*single_array)
        self._columns = layout.sub_aperture_indices(*single_array)

    @property
    def output_layout(self) -> ArrayLayout:
        return self.sub

    @property
    def columns(self) -> Optional[np.ndarray]:
        return self._columns


class ModeFactory:
    """波束形成模式工厂"""

    @staticmethod
    def create_mode(mode_name: str, config, layout: ArrayLayout) -> BeamformerMode:
        """创建模式

        Args:
            mode_name: 模式名称
            config: RunConfig
            layout: 全阵列几何

        Returns:
            模式实例
        """
        if mode_name == "oracle-full":
            return OracleMode(layout, config.loading_factor)
        if mode_name == "tiled-beamspace":
            return TiledBeamspaceMode(layout, config.loading_factor, config.window_for(mode_name))
        if mode_name == "single-beamspace":
            return SingleBeamspaceMode(layout, config.loading_factor, config.window_for(mode_name),
                                       config.single_array)
        raise ConfigError(f"未知模式: {mode_name}", 'modes')

    @staticmethod
    def get_available_modes() -> List[str]:
        return ["oracle-full", "single-beamspace", "tiled-beamspace"]

    @staticmethod
    def get_mode_description(mode_name: str) -> str:
        descriptions = {
            "oracle-full": "全阵列阵元域 MVDR，维度 T*N，作为性能上界",
            "single-beamspace": "角点单个子阵的窗口化波束域 MVDR，维度 W",
            "tiled-beamspace": "各块共用窗口的分块波束域 MVDR，维度 T*W",
        }
        return descriptions.get(mode_name, "未知模式")
