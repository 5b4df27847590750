"""
仿真引擎

场景合成 -> (模式 x 目标 x 子带) 波束形成 -> 宽带合成 -> 距离-多普勒 -> CFAR -> 评估，
最后串行写出报告、方向图和运行清单。
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from internal.array_model import SourceAngle, spatial_freq_at
from internal.beamformer import (
    Correlator, LiftedCorrelator, PatternGrid, beam_pattern, pattern_frame, mainlobe_width,
)
from internal.config import TomlConfig
from internal.data import write_array
from internal.detector import (
    DetectionReport, TargetDetection, RangeDopplerMap, synthesize_wideband, range_doppler,
    detect_target, evaluate, summarize,
)
from internal.pipeline.manifest import RunManifest, write_json
from internal.pipeline.modes import BeamformerMode, ModeFactory
from internal.pipeline.run_config import RunConfig, validate_config, validate_file, config_hash
from internal.pipeline.schema import Diagnostics, MODE_NAMES
from internal.scene import GroundTruth, Scenario, SubbandSnapshots, TargetTruth, synthesize
from internal.utils import get_logger, set_run_id, get_run_id
from internal.utils.errors import ConfigError

logger = get_logger('pipeline.engine')

CENTER_SUBBAND = 0
DISTORTIONLESS_TOLERANCE = 1e-9
FLOAT_FORMAT = '%.6f'


@dataclass
class TargetOutcome:
    """单个 (模式, 目标) 的处理结果"""

    mode: str
    detection: TargetDetection
    rd_map: RangeDopplerMap
    center: Correlator
    center_lifted: LiftedCorrelator
    n_train: int
    solve_seconds: float
    reduce_seconds: float
    n_solves: int
    max_distortionless_error: float
    ill_conditioned: int


@dataclass
class SubbandSolve:
    """单个子带的求解结果与分段耗时"""

    correlator: Correlator
    lifted: LiftedCorrelator
    output: np.ndarray
    solve_seconds: float
    reduce_seconds: float


@dataclass
class PatternResult:
    """方向图输出"""

    target_id: int
    mode: str
    subband: int
    frame: pd.DataFrame
    mainlobe: Dict[str, float]
    path: Optional[str] = None


@dataclass
class RunResult:
    """一次运行的结果"""

    run_id: str
    scenario: Scenario
    truth: GroundTruth
    table: pd.DataFrame
    summary: pd.DataFrame
    reports: List[DetectionReport]
    outcomes: List[TargetOutcome]
    patterns: List[PatternResult] = field(default_factory=list)
    manifest: Optional[RunManifest] = None
    output_dir: Optional[str] = None


class SimulationEngine:
    """仿真引擎"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = logger
        self.scenario: Optional[Scenario] = None
        self.layout = None
        self.snapshots: Optional[SubbandSnapshots] = None
        self.truth: Optional[GroundTruth] = None
        self.diagnostics: Optional[Diagnostics] = None
        self.stages: Dict[str, float] = {}

    @staticmethod
    def validate(path: str) -> Diagnostics:
        """校验配置文件，无副作用"""
        return validate_file(path)

    def _timed(self, stage: str, start: float):
        self.stages[stage] = self.stages.get(stage, 0.0) + time.perf_counter() - start

    def prepare(self):
        """校验配置并合成场景，结果缓存"""
        if self.snapshots is not None:
            return
        diag, scenario, layout = validate_config(self.config)
        for warning in diag.warnings:
            self.logger.warning(f"配置警告 {warning}")
        diag.raise_if_failed()
        self.diagnostics = diag
        self.scenario, self.layout = scenario, layout

        start = time.perf_counter()
        self.snapshots, self.truth = synthesize(layout, scenario, self.config.seed, self.config.workers)
        self._timed('synthesize', start)

    def create_modes(self, names: Optional[Sequence[str]] = None) -> List[BeamformerMode]:
        return [ModeFactory.create_mode(name, self.config, self.layout) for name in (names or self.config.modes)]

    def training_size(self, mode: BeamformerMode) -> int:
        """训练快拍数：显式 n_t，否则为倍数 x 维度，不超过可用快拍数"""
        wanted = self.config.n_t or self.config.snapshot_multiplier * mode.dimension
        available = self.snapshots.n_snapshots
        if wanted > available:
            self.logger.warning(f"{mode.name}: 训练快拍数 {wanted} 超过可用快拍数 {available}，按 {available} 计")
            wanted = available
        if wanted < mode.dimension:
            self.logger.warning(f"{mode.name}: 训练快拍数 {wanted} 小于维度 {mode.dimension}，依赖对角加载")
        return wanted

    def _omega(self, truth: TargetTruth, subband: int):
        freq = float(self.snapshots.subband_centers_hz[subband])
        return spatial_freq_at(truth.reference_omega, freq, self.layout.design_freq_hz)

    def _solve_subband(self, mode: BeamformerMode, truth: TargetTruth, subband: int,
                       train_idx: np.ndarray) -> SubbandSolve:
        omega = self._omega(truth, subband)
        data = mode.select(self.snapshots.subband(subband))
        start = time.perf_counter()
        problem = mode.reduce(data[train_idx], omega, truth.target_id, subband)
        reduced = time.perf_counter()
        correlator = mode.solve_reduced(problem)
        solved = time.perf_counter()
        lifted = mode.lift_correlator(correlator)
        return SubbandSolve(correlator, lifted, lifted.apply(data), solved - reduced, reduced - start)

    def _process(self, mode: BeamformerMode, truth: TargetTruth, run_id: Optional[str]) -> TargetOutcome:
        if run_id:
            set_run_id(run_id)
        wf = self.scenario.waveform
        n_train = self.training_size(mode)
        train_idx = self.snapshots.training_indices(n_train)

        outputs = np.empty((wf.n_subbands, self.snapshots.n_snapshots), dtype=complex)
        center, center_lifted = None, None
        solve_seconds, reduce_seconds, max_error, ill = 0.0, 0.0, 0.0, 0
        for subband in range(wf.n_subbands):
            solved = self._solve_subband(mode, truth, subband, train_idx)
            outputs[subband] = solved.output
            solve_seconds += solved.solve_seconds
            reduce_seconds += solved.reduce_seconds
            max_error = max(max_error, solved.correlator.distortionless_error())
            ill += int(solved.correlator.ill_conditioned)
            if subband == CENTER_SUBBAND:
                center, center_lifted = solved.correlator, solved.lifted
        if max_error > DISTORTIONLESS_TOLERANCE:
            self.logger.warning(f"{mode.name} 目标 {truth.target_id}: |c^H a - 1| = {max_error:.2e}")

        wideband = synthesize_wideband(outputs, wf)
        rd_map = range_doppler(wideband, wf, self.config.range_window, self.config.doppler_taper,
                               target_id=truth.target_id, mode=mode.name)
        detection = detect_target(rd_map, truth, wf, self.config.cfar, mode.name)
        self.logger.info(
            f"{mode.name} 目标 {truth.target_id}: detected={detection.detected}, "
            f"SINR={detection.sinr_db:.2f} dB, d={mode.dimension}, n_t={n_train}"
        )
        return TargetOutcome(
            mode=mode.name,
            detection=detection,
            rd_map=rd_map,
            center=center,
            center_lifted=center_lifted,
            n_train=n_train,
            solve_seconds=solve_seconds,
            reduce_seconds=reduce_seconds,
            n_solves=wf.n_subbands,
            max_distortionless_error=max_error,
            ill_conditioned=ill,
        )

    def _beamform_all(self, modes: List[BeamformerMode]) -> List[TargetOutcome]:
        run_id = get_run_id()
        items = [(mode, truth) for mode in modes for truth in self.truth.targets]
        if self.config.workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
                return list(executor.map(lambda item: self._process(item[0], item[1], run_id), items))
        return [self._process(mode, truth, run_id) for mode, truth in items]

    def benchmark_solve(self, mode: BeamformerMode) -> float:
        """
        协方差估计+求解的最短耗时（秒）

        在第一个目标的中心子带上降维一次，重复 SOLVE_BENCHMARK_REPEATS 次 solve_reduced 取最小值，
        不含降维与提升。
        """
        truth = self.truth.targets[0]
        data = mode.select(self.snapshots.subband(CENTER_SUBBAND))
        train_idx = self.snapshots.training_indices(self.training_size(mode))
        problem = mode.reduce(data[train_idx], self._omega(truth, CENTER_SUBBAND), truth.target_id, CENTER_SUBBAND)
        best = float('inf')
        for _ in range(max(1, int(TomlConfig().SOLVE_BENCHMARK_REPEATS))):
            start = time.perf_counter()
            mode.solve_reduced(problem)
            best = min(best, time.perf_counter() - start)
        return best

    def complexity_ledger(self, modes: List[BeamformerMode], outcomes: List[TargetOutcome]) -> List[Dict[str, Any]]:
        """各模式维度、训练快拍数、降维与协方差估计+求解的耗时，以及相对全维求解的加速比"""
        per_mode = {}
        for outcome in outcomes:
            entry = per_mode.setdefault(outcome.mode, {'seconds': 0.0, 'reduce': 0.0, 'solves': 0,
                                                       'n_t': outcome.n_train})
            entry['seconds'] += outcome.solve_seconds
            entry['reduce'] += outcome.reduce_seconds
            entry['solves'] += outcome.n_solves

        target = float(TomlConfig().SPEEDUP_TARGET)
        benchmarks = {}
        if self.truth.targets:
            oracle = next((m for m in modes if m.name == 'oracle-full'), None) \
                or ModeFactory.create_mode('oracle-full', self.config, self.layout)
            benchmarks['oracle-full'] = self.benchmark_solve(oracle)

        ledger = []
        for mode in modes:
            entry = per_mode.get(mode.name)
            if not entry:
                continue
            row = {
                'mode': mode.name,
                'dimension': mode.dimension,
                'n_t': entry['n_t'],
                'solves': entry['solves'],
                'mean_reduce_seconds': entry['reduce'] / entry['solves'],
                'mean_solve_seconds': entry['seconds'] / entry['solves'],
            }
            if benchmarks:
                if mode.name not in benchmarks:
                    benchmarks[mode.name] = self.benchmark_solve(mode)
                bench = benchmarks[mode.name]
                row['benchmark_solve_seconds'] = bench
                row['speedup_vs_oracle'] = benchmarks['oracle-full'] / bench if bench > 0 else float('inf')
            else:
                row['benchmark_solve_seconds'] = float('nan')
                row['speedup_vs_oracle'] = float('nan')
            if mode.name != 'oracle-full':
                row['speedup_target'] = target
                row['meets_speedup_target'] = bool(row['speedup_vs_oracle'] >= target)
                if not row['meets_speedup_target']:
                    self.logger.warning(
                        f"{mode.name}: 求解加速比 {row['speedup_vs_oracle']:.1f} 低于目标 {target:.0f} "
                        f"(d={mode.dimension} 对 d={self.layout.total_elements})"
                    )
            ledger.append(row)
        return ledger

    def _pattern(self, outcome_lifted: LiftedCorrelator, mode: BeamformerMode, truth: TargetTruth,
                 subband: int, grid: PatternGrid) -> PatternResult:
        freq = float(self.snapshots.subband_centers_hz[subband])
        pattern = beam_pattern(outcome_lifted, mode.output_layout, grid, freq)
        angle = SourceAngle(truth.azimuth_rad, truth.elevation_rad)
        return PatternResult(
            target_id=truth.target_id,
            mode=mode.name,
            subband=subband,
            frame=pattern_frame(pattern, grid),
            mainlobe=mainlobe_width(pattern, grid, angle),
        )

    def _truth_for(self, target_id: int) -> TargetTruth:
        try:
            return self.truth.target(target_id)
        except KeyError:
            raise ConfigError(f"未知目标 {target_id}，可选: {self.truth.target_ids}", 'target_id')

    def emit_pattern(self, target_id: int, mode_name: str, subband: int = CENTER_SUBBAND,
                     grid: Optional[PatternGrid] = None, output_dir: Optional[str] = None) -> PatternResult:
        """
        单个目标在某一模式下提升相关器的方向图

        Args:
            target_id: 目标编号
            mode_name: 模式名称
            subband: 子带下标，默认中心子带
            grid: 角度网格，默认取配置
            output_dir: 写出目录，None 表示不写文件

        Raises:
            ConfigError: 未知目标或模式
        """
        if mode_name not in MODE_NAMES:
            raise ConfigError(f"未知模式 {mode_name!r}，可选: {', '.join(MODE_NAMES)}", 'mode')
        self.prepare()
        truth = self._truth_for(target_id)
        if not 0 <= subband < self.scenario.waveform.n_subbands:
            raise ConfigError(f"子带下标越界: {subband}", 'subband')
        mode = ModeFactory.create_mode(mode_name, self.config, self.layout)
        train_idx = self.snapshots.training_indices(self.training_size(mode))
        lifted = self._solve_subband(mode, truth, subband, train_idx).lifted
        result = self._pattern(lifted, mode, truth, subband, grid or self.config.pattern_grid)
        if output_dir:
            result.path = self._write_pattern(result, output_dir)
        return result

    @staticmethod
    def _write_pattern(result: PatternResult, output_dir: str) -> str:
        path = os.path.join(output_dir, 'patterns', f"pattern_{result.mode}_t{result.target_id}.csv")
        os.makedirs(os.path.dirname(path), exist_ok=True)
        result.frame.to_csv(path, index=False, float_format='%.9g')
        return path

    def run(self, write: bool = True, run_id: Optional[str] = None) -> RunResult:
        """
        执行一次完整仿真

        Args:
            write: 是否写出报告与清单
            run_id: 运行编号，None 时自动生成

        Returns:
            RunResult
        """
        run_id = set_run_id(run_id or get_run_id())
        total = time.perf_counter()
        self.prepare()
        self.logger.info(f"开始运行: 场景 {self.scenario.name}, 模式 {', '.join(self.config.modes)}, "
                         f"种子 {self.config.seed}")

        modes = self.create_modes()
        start = time.perf_counter()
        outcomes = self._beamform_all(modes)
        self._timed('beamform_detect', start)

        start = time.perf_counter()
        reports = []
        for mode in modes:
            detections = [o.detection for o in outcomes if o.mode == mode.name]
            mode_outcomes = [o for o in outcomes if o.mode == mode.name]
            reports.append(DetectionReport(
                scenario=self.scenario.name,
                mode=mode.name,
                detections=detections,
                metadata={
                    **mode.describe(),
                    'n_t': mode_outcomes[0].n_train if mode_outcomes else None,
                    'max_distortionless_error': max((o.max_distortionless_error for o in mode_outcomes), default=0.0),
                    'ill_conditioned_solves': sum(o.ill_conditioned for o in mode_outcomes),
                },
            ))
        table = evaluate(self.truth, reports)
        summary = summarize(table)
        self._timed('evaluate', start)

        start = time.perf_counter()
        patterns = []
        by_key = {(o.mode, o.detection.target_id): o for o in outcomes}
        mode_by_name = {m.name: m for m in modes}
        for target_id, mode_name in self.config.patterns:
            truth = self._truth_for(target_id)
            outcome = by_key.get((mode_name, target_id))
            if outcome is None:
                patterns.append(self.emit_pattern(target_id, mode_name))
            else:
                patterns.append(self._pattern(outcome.center_lifted, mode_by_name[mode_name], truth,
                                              CENTER_SUBBAND, self.config.pattern_grid))
        self._timed('patterns', start)

        result = RunResult(run_id=run_id, scenario=self.scenario, truth=self.truth, table=table,
                           summary=summary, reports=reports, outcomes=outcomes, patterns=patterns)
        for row in summary.itertuples(index=False):
            self.logger.info(f"{row.mode}: 检测 {row.n_detected}/{row.n_targets}, 平均 SINR {row.mean_sinr_db:.2f} dB")

        if write:
            self._write_outputs(result, modes, self.complexity_ledger(modes, outcomes), total)
        return result

    def _write_outputs(self, result: RunResult, modes: List[BeamformerMode],
                       ledger: List[Dict[str, Any]], total_start: float):
        out = self.config.output_dir
        os.makedirs(out, exist_ok=True)
        start = time.perf_counter()
        written = []

        path = os.path.join(out, 'report.csv')
        result.table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        written.append(path)

        path = os.path.join(out, 'summary.csv')
        result.summary.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        written.append(path)

        path = os.path.join(out, 'report.json')
        write_json(path, {
            'scenario': self.scenario.name,
            'seed': self.config.seed,
            'summary': result.summary.to_dict(orient='records'),
            'reports': [r.to_dict() for r in result.reports],
            'patterns': [
                {'target_id': p.target_id, 'mode': p.mode, 'subband': p.subband, 'mainlobe_width_deg': p.mainlobe}
                for p in result.patterns
            ],
        })
        written.append(path)

        path = os.path.join(out, 'correlators.json')
        write_json(path, [
            {'mode': o.mode, **o.center.to_dict(), 'lifted_dimension': int(o.center_lifted.weights.shape[0])}
            for o in result.outcomes
        ])
        written.append(path)

        for pattern in result.patterns:
            pattern.path = self._write_pattern(pattern, out)
            written.append(pattern.path)

        if self.config.export_maps:
            for o in result.outcomes:
                path = os.path.join(out, 'maps', f"rd_{o.mode}_t{o.detection.target_id}.tbrc")
                written.extend(write_array(path, o.rd_map.power, {
                    'mode': o.mode,
                    'target_id': o.detection.target_id,
                    'axes': ['range', 'velocity'],
                    'range_axis_m': [float(o.rd_map.range_axis_m[0]), float(o.rd_map.range_step_m)],
                    'velocity_axis_mps': o.rd_map.velocity_axis_mps.tolist(),
                }))
        if self.config.export_snapshots:
            path = os.path.join(out, 'snapshots.tbrc')
            written.extend(write_array(path, self.snapshots.data, {
                'axes': ['subband', 'snapshot', 'element'],
                'subband_centers_hz': self.snapshots.subband_centers_hz.tolist(),
                'layout': self.layout.to_dict(),
            }))
        self._timed('write', start)
        self.stages['total'] = time.perf_counter() - total_start

        manifest = RunManifest(
            config_hash=config_hash(self.config, self.scenario),
            run_id=result.run_id,
            config=self.config.to_dict(),
            complexity=ledger,
            loading={'loading_factor': self.config.loading_factor, 'rule': 'delta = loading_factor * trace(R) / d'},
            warnings=list(self.diagnostics.warnings) if self.diagnostics else [],
        )
        for stage, seconds in self.stages.items():
            manifest.add_stage(stage, seconds)
        for path in written:
            manifest.add_output(path, out)
        manifest.write(os.path.join(out, 'manifest.json'))
        result.manifest = manifest
        result.output_dir = out
        self.logger.info(f"输出已写入 {out}，共 {len(written)} 个文件")

    def _sweep(self, column: str, values: Sequence[float], filename: str, label: str,
               write: bool) -> pd.DataFrame:
        tables = []
        for value in values:
            engine = SimulationEngine(replace(self.config, **{column: float(value)}))
            result = engine.run(write=False, run_id=get_run_id())
            table = result.table.copy()
            table.insert(0, column, float(value))
            tables.append(table)
        frame = pd.concat(tables, ignore_index=True)
        if write:
            os.makedirs(self.config.output_dir, exist_ok=True)
            path = os.path.join(self.config.output_dir, filename)
            written = frame.copy()
            written[column] = written[column].map(lambda v: f"{v:.6g}")
            written.to_csv(path, index=False, float_format=FLOAT_FORMAT)
            self.logger.info(f"{label}扫描完成: {len(values)} 个取值，写入 {path}")
        return frame

    def sweep(self, inr_values: Sequence[float], write: bool = True) -> pd.DataFrame:
        """
        干噪比扫描：每个取值重新合成场景并运行全部模式

        Returns:
            增加 inr_db 列的报告表，写出 sweep.csv
        """
        if not inr_values:
            raise ConfigError("干噪比列表为空", 'inr_db')
        return self._sweep('inr_db', inr_values, 'sweep.csv', '干噪比', write)

    def loading_sweep(self, loading_values: Sequence[float], write: bool = True) -> pd.DataFrame:
        """
        对角加载扫描：场景与种子不变，只改变相对加载系数

        Returns:
            增加 loading_factor 列的报告表，写出 loading_sweep.csv
        """
        if not loading_values:
            raise ConfigError("对角加载列表为空", 'loading_factor')
        for value in loading_values:
            if not value >= 0:
                raise ConfigError(f"对角加载系数不能为负: {value}", 'loading_factor')
        return self._sweep('loading_factor', loading_values, 'loading_sweep.csv', '对角加载', write)
