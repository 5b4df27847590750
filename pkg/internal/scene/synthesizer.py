"""
子带快拍合成

目标回波先在宽带上生成再信道化，然后乘以子带中心频率处的导向矢量；
干扰与噪声直接在子带域按快拍独立生成。
随机数按 (子带, 脉冲) 分流：SeedSequence(seed, spawn_key=(0, l, p))，
每个流依次生成各干扰机的符号，然后生成噪声，因此并行与串行结果逐位一致。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from internal.array_model import (
    ArrayLayout, SpatialFrequency, reference_spatial_freq, spatial_freq_at, global_steering,
)
from internal.scene.channelizer import channelize
from internal.scene.scenario import Scenario, Target
from internal.scene.waveform import pulse_train
from internal.utils import get_logger
from internal.utils.errors import DegenerateSceneError, DimensionError

logger = get_logger('scene')

RNG_STREAM = 0


@dataclass(frozen=True)
class TargetTruth:
    """单个目标的真值（距离量化到距离门）"""

    target_id: int
    azimuth_rad: float
    elevation_rad: float
    reference_omega: SpatialFrequency
    range_gate: int
    range_m: float
    velocity_mps: float
    doppler_hz: float


@dataclass(frozen=True)
class GroundTruth:
    """场景真值"""

    scenario_name: str
    targets: Tuple[TargetTruth, ...]
    jammer_omegas: Tuple[SpatialFrequency, ...]

    def target(self, target_id: int) -> TargetTruth:
        for t in self.targets:
            if t.target_id == target_id:
                return t
        raise KeyError(target_id)

    @property
    def target_ids(self) -> List[int]:
        return [t.target_id for t in self.targets]


@dataclass(frozen=True)
class SubbandSnapshots:
    """
    各子带阵元域快拍

    data 形状为 [L, n_snapshots, T*N]；noise_powers 为逐阵元噪声功率 [T*N]，同一块内相同
    """

    data: np.ndarray
    subband_centers_hz: np.ndarray
    noise_power: float
    layout: ArrayLayout
    noise_powers: Optional[np.ndarray] = None

    def tile_noise_powers(self) -> np.ndarray:
        """各块噪声功率 sigma_t^2"""
        if self.noise_powers is None:
            return np.full(self.layout.n_tiles, self.noise_power)
        return self.noise_powers.reshape(self.layout.n_tiles, self.layout.tile_elements)[:, 0]

    @property
    def n_subbands(self) -> int:
        return self.data.shape[0]

    @property
    def n_snapshots(self) -> int:
        return self.data.shape[1]

    def subband(self, index: int) -> np.ndarray:
        if not 0 <= index < self.n_subbands:
            raise DimensionError(f"子带下标越界: {index}")
        return self.data[index]

    def training_indices(self, n_train: int) -> np.ndarray:
        """在整个 CPI 内均匀抽取 n_train 个训练快拍"""
        n_train = max(1, min(int(n_train), self.n_snapshots))
        return np.linspace(0, self.n_snapshots - 1, n_train).astype(np.intp)


def ground_truth(scenario: Scenario) -> GroundTruth:
    wf = scenario.waveform
    targets = []
    for t in scenario.targets:
        gate = wf.range_gate(t.range_m)
        targets.append(TargetTruth(
            target_id=t.target_id,
            azimuth_rad=t.angle.azimuth_rad,
            elevation_rad=t.angle.elevation_rad,
            reference_omega=reference_spatial_freq(t.angle),
            range_gate=gate,
            range_m=wf.gate_range(gate),
            velocity_mps=t.velocity_mps,
            doppler_hz=2.0 * t.velocity_mps / wf.wavelength_m,
        ))
    return GroundTruth(
        scenario_name=scenario.name,
        targets=tuple(targets),
        jammer_omegas=tuple(reference_spatial_freq(j.angle) for j in scenario.interferers),
    )


def _target_subbands(scenario: Scenario, target: Target) -> np.ndarray:
    """单个目标信道化后的标量子带序列 [L, n_snapshots]"""
    wf = scenario.waveform
    gate = wf.range_gate(target.range_m)
    doppler_hz = 2.0 * target.velocity_mps / wf.wavelength_m
    return channelize(pulse_train(wf, gate, target.amplitude, doppler_hz), wf.n_subbands)


def _synthesize_subband(layout: ArrayLayout, scenario: Scenario, seed: int, index: int,
                        freq_hz: float, target_series: List[np.ndarray], noise_powers: np.ndarray) -> np.ndarray:
    wf = scenario.waveform
    n_elem = layout.total_elements
    block = wf.block_length
    out = np.zeros((wf.snapshots_per_subband, n_elem), dtype=complex)

    for target, series in zip(scenario.targets, target_series):
        omega = spatial_freq_at(reference_spatial_freq(target.angle), freq_hz, layout.design_freq_hz)
        out += series[index][:, None] * global_steering(layout, omega)[None, :]

    jammer_steering = [
        global_steering(layout, spatial_freq_at(reference_spatial_freq(j.angle), freq_hz, layout.design_freq_hz))
        for j in scenario.interferers
    ]
    noise_std = np.sqrt(noise_powers / 2.0)[None, :]
    for p in range(wf.pulses_per_cpi):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(RNG_STREAM, index, p)))
        rows = slice(p * block, (p + 1) * block)
        for jammer, steering in zip(scenario.interferers, jammer_steering):
            std = np.sqrt(jammer.power / 2.0)
            if scenario.jammer_model == "point":
                symbols = std * (rng.standard_normal(block) + 1j * rng.standard_normal(block))
                out[rows] += symbols[:, None] * steering[None, :]
            else:
                out[rows] += std * (rng.standard_normal((block, n_elem)) + 1j * rng.standard_normal((block, n_elem)))
        if scenario.noise_enabled:
            out[rows] += noise_std * (rng.standard_normal((block, n_elem)) + 1j * rng.standard_normal((block, n_elem)))
    return out


def synthesize(layout: ArrayLayout, scenario: Scenario, seed: int,
               workers: Optional[int] = None) -> Tuple[SubbandSnapshots, GroundTruth]:
    """
    合成场景的子带快拍

    Args:
        layout: 阵列几何
        scenario: 场景
        seed: 随机种子
        workers: 子带并行线程数，None 或 1 表示串行

    Returns:
        (SubbandSnapshots, GroundTruth)
    """
    if not scenario.targets and not scenario.interferers and not scenario.noise_enabled:
        raise DegenerateSceneError(f"场景 {scenario.name} 没有目标、干扰和噪声")
    if not scenario.targets and not scenario.interferers:
        logger.warning(f"场景 {scenario.name} 只有噪声")

    wf = scenario.waveform
    centers = wf.subband_centers_hz
    target_series = [_target_subbands(scenario, t) for t in scenario.targets]
    noise_powers = scenario.element_noise_powers(layout.n_tiles, layout.tile_elements)

    def work(index):
        return _synthesize_subband(layout, scenario, seed, index, float(centers[index]), target_series,
                                   noise_powers)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            cubes = list(executor.map(work, range(wf.n_subbands)))
    else:
        cubes = [work(i) for i in range(wf.n_subbands)]

    snapshots = SubbandSnapshots(
        data=np.stack(cubes),
        subband_centers_hz=centers,
        noise_power=scenario.noise_power,
        layout=layout,
        noise_powers=noise_powers,
    )
    logger.info(
        f"场景 {scenario.name} 合成完成: {wf.n_subbands} 个子带, 每子带 {wf.snapshots_per_subband} 个快拍, "
        f"{layout.total_elements} 个阵元, {len(scenario.targets)} 个目标, {len(scenario.interferers)} 个干扰"
    )
    return snapshots, ground_truth(scenario)
