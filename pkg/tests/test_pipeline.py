"""
仿真流水线测试

运行配置、校验、模式、端到端运行、输出文件与命令行
"""

import contextlib
import importlib.util
import io
import json
import math
import os
import sys
import tempfile
import unittest

import numpy as np
import pandas as pd

# 添加项目路径
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, ROOT)

from internal.array_model import SpatialFrequency, reference_spatial_freq
from internal.beamformer import analytic_covariance, response_at
from internal.data import read_array
from internal.pipeline import (
    RunConfig, SimulationEngine, ModeFactory, check_structure, validate_config, config_hash, parse_window,
)
from internal.pipeline.manifest import file_sha256, json_safe
from internal.scene import scenario_library
from internal.utils.errors import ConfigError, DimensionError


def load_cli():
    """按路径加载命令行入口（包名 cmd 与标准库同名）"""
    spec = importlib.util.spec_from_file_location('tbradar_cli', os.path.join(ROOT, 'cmd', 'main.py'))
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def write_config(directory: str, data: dict) -> str:
    path = os.path.join(directory, 'run.json')
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f)
    return path


class TestRunConfig(unittest.TestCase):
    """测试运行配置"""

    def test_desk_defaults(self):
        """测试桌面配置档默认值"""
        config = RunConfig.from_dict({})
        self.assertEqual(config.profile, 'desk')
        self.assertEqual(config.layout, {'tiles_z': 4, 'tiles_x': 2, 'elems_z': 2, 'elems_x': 16})
        self.assertEqual(config.modes, ('single-beamspace', 'tiled-beamspace'))
        self.assertEqual(config.window_for('tiled-beamspace'), (2, 2))
        self.assertEqual(config.window_for('single-beamspace'), (4, 4))
        self.assertEqual(config.single_array, (4, 8))
        self.assertEqual(config.n_subbands, 8)
        self.assertEqual(config.loading_factor, 1e-9)
        self.assertEqual(config.range_window, 'none')

    def test_paper_profile(self):
        config = RunConfig.from_dict({'profile': 'paper'})
        self.assertEqual(config.layout['elems_x'], 32)
        self.assertEqual(config.n_subbands, 32)
        with self.assertRaises(ConfigError):
            RunConfig.from_dict({'profile': 'huge'})

    def test_structure_errors_carry_paths(self):
        with self.assertRaises(ConfigError) as ctx:
            RunConfig.from_dict({'modes': ['tiled-beamspace', 'mystery'], 'seeed': 1})
        message = str(ctx.exception)
        self.assertIn('modes[1]', message)
        self.assertIn('seeed', message)

    def test_check_structure(self):
        """测试结构检查"""
        diag = check_structure({
            'loading_factor': -1.0,
            'windows': {'oracle-full': [2, 2], 'tiled-beamspace': [2, 0]},
            'range_window': 'kaiser',
            'workers': True,
        })
        joined = '\n'.join(diag.errors)
        self.assertFalse(diag.ok)
        for path in ('loading_factor', 'windows.oracle-full', 'windows.tiled-beamspace[1]', 'range_window', 'workers'):
            self.assertIn(path, joined)
        self.assertFalse(check_structure([1, 2]).ok)
        self.assertTrue(check_structure({'seed': 3, 'modes': ['oracle-full']}).ok)

    def test_window_too_large(self):
        config = RunConfig.from_dict({'windows': {'tiled-beamspace': [2, 32]}})
        diag, _, _ = validate_config(config)
        self.assertTrue(any(e.startswith('windows.tiled-beamspace[1]') for e in diag.errors), diag.errors)

    def test_subbands_must_divide_samples(self):
        diag, scenario, _ = validate_config(RunConfig.from_dict({'n_subbands': 7}))
        self.assertIsNone(scenario)
        self.assertTrue(any('子带数' in e for e in diag.errors), diag.errors)

    def test_inline_velocity_out_of_range(self):
        """测试内联场景的速度模糊检查"""
        inline = {
            'name': 'fast',
            'waveform': {'carrier_hz': 2997924580.0, 'bandwidth_hz': 149896229.0, 'n_subbands': 8,
                         'pulses_per_cpi': 32, 'samples_per_pulse': 256, 'prf_hz': 20000.0,
                         'range_offset_m': 3000.0},
            'targets': [{'azimuth_deg': 0.0, 'elevation_deg': 0.0, 'range_m': 3050.0, 'velocity_mps': 600.0}],
        }
        diag, _, _ = validate_config(RunConfig.from_dict({'scenario': {'inline': inline}}))
        self.assertTrue(any(e.startswith('scenario.targets[0].velocity_mps') for e in diag.errors), diag.errors)

    def test_tile_noise_length(self):
        """测试逐块噪声长度必须等于块数"""
        inline = scenario_library('A1-like').to_dict()
        inline['noise']['tile_power_db'] = [0.0, 3.0]
        diag, _, _ = validate_config(RunConfig.from_dict({'scenario': {'inline': inline}}))
        self.assertTrue(any(e.startswith('scenario.noise.tile_power_db') for e in diag.errors), diag.errors)
        inline['noise']['tile_power_db'] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
        diag, scenario, _ = validate_config(RunConfig.from_dict({'scenario': {'inline': inline}}))
        self.assertTrue(diag.ok, diag.errors)
        self.assertEqual(len(scenario.tile_noise_db), 8)

    def test_unloaded_warning(self):
        diag, _, _ = validate_config(RunConfig.from_dict({'loading_factor': 0}))
        self.assertTrue(diag.ok)
        self.assertTrue(any(w.startswith('loading_factor') for w in diag.warnings))

    def test_scenario_file_relative_to_config(self):
        from internal.scene import dump_scenario, scenario_library
        with tempfile.TemporaryDirectory() as tmp:
            dump_scenario(scenario_library('B1-like'), os.path.join(tmp, 'scene.json'))
            path = write_config(tmp, {'scenario': {'file': 'scene.json'}, 'inr_db': 50.0})
            config = RunConfig.from_file(path)
            diag, scenario, _ = validate_config(config)
        self.assertTrue(diag.ok, diag.errors)
        self.assertEqual(len(scenario.interferers), 3)
        self.assertTrue(all(j.inr_db == 50.0 for j in scenario.interferers))

    def test_config_hash(self):
        a = RunConfig.from_dict({'seed': 1, 'output_dir': 'x', 'workers': 1})
        b = RunConfig.from_dict({'seed': 1, 'output_dir': 'y', 'workers': 8})
        c = RunConfig.from_dict({'seed': 2})
        self.assertEqual(config_hash(a), config_hash(b))
        self.assertNotEqual(config_hash(a), config_hash(c))

    def test_to_dict_round_trip(self):
        config = RunConfig.from_dict({'modes': ['oracle-full'], 'patterns': [{'target_id': 2, 'mode': 'oracle-full'}]})
        again = RunConfig.from_dict(config.to_dict())
        self.assertEqual(config_hash(config), config_hash(again))

    def test_parse_window(self):
        self.assertEqual(parse_window('2x4'), [(None, (2, 4))])
        self.assertEqual(parse_window('tiled-beamspace:1x2, single-beamspace:4X8'),
                         [('tiled-beamspace', (1, 2)), ('single-beamspace', (4, 8))])
        with self.assertRaises(ConfigError):
            parse_window('2by4')
        with self.assertRaises(ConfigError):
            parse_window('other:2x2')

    def test_json_safe(self):
        self.assertEqual(json_safe({'a': math.inf, 'b': [-math.inf, 1.5]}), {'a': 'inf', 'b': ['-inf', 1.5]})


class TestModes(unittest.TestCase):
    """测试波束形成模式"""

    def setUp(self):
        self.config = RunConfig.from_dict({'modes': ['oracle-full', 'single-beamspace', 'tiled-beamspace']})
        _, _, self.layout = validate_config(self.config)

    def test_dimensions(self):
        dims = {name: ModeFactory.create_mode(name, self.config, self.layout).dimension
                for name in ModeFactory.get_available_modes()}
        self.assertEqual(dims, {'oracle-full': 256, 'single-beamspace': 16, 'tiled-beamspace': 32})

    def test_single_mode_uses_corner_sub_aperture(self):
        mode = ModeFactory.create_mode('single-beamspace', self.config, self.layout)
        self.assertEqual(mode.output_layout.total_elements, 32)
        self.assertEqual(len(mode.columns), 32)
        self.assertEqual(mode.describe()['window'], [4, 4])

    def test_solve_splits_into_reduce_solve_lift(self):
        """测试求解可拆分为降维、协方差估计+求解、提升三步"""
        rng = np.random.default_rng(0)
        y = rng.standard_normal((128, 256)) + 1j * rng.standard_normal((128, 256))
        omega = SpatialFrequency(0.3, 0.1)
        mode = ModeFactory.create_mode('tiled-beamspace', self.config, self.layout)
        problem = mode.reduce(y, omega, 1, 0)
        self.assertEqual(problem.data.shape, (128, 32))
        self.assertEqual(problem.dimension, 32)
        correlator, lifted = mode.solve(y, omega, 1, 0)
        np.testing.assert_array_equal(mode.solve_reduced(problem).weights, correlator.weights)
        np.testing.assert_array_equal(mode.lift_correlator(correlator).weights, lifted.weights)
        self.assertEqual(lifted.weights.shape, (256,))
        with self.assertRaises(DimensionError):
            mode.solve_analytic(np.eye(32), omega)

    def test_unknown_mode(self):
        with self.assertRaises(ConfigError):
            ModeFactory.create_mode('sparse', self.config, self.layout)
        self.assertEqual(ModeFactory.get_mode_description('sparse'), '未知模式')


class TestSimulationEngine(unittest.TestCase):
    """测试端到端仿真"""

    def test_tiled_matches_oracle_in_difficult_scene(self):
        """测试困难场景：分块模式与全维模式逐目标检测，单子阵模式退化"""
        modes = ['oracle-full', 'single-beamspace', 'tiled-beamspace']
        tables, widths = [], {mode: [] for mode in modes}
        for seed in range(5):
            config = RunConfig.from_dict({
                'scenario': {'library': 'E2-like'}, 'modes': modes, 'seed': seed,
                'patterns': [{'target_id': 5, 'mode': mode} for mode in modes],
            })
            result = SimulationEngine(config).run(write=False)
            self.assertEqual(len(result.table), 27)
            tables.append(result.table)
            for pattern in result.patterns:
                widths[pattern.mode].append(pattern.mainlobe['azimuth_deg'])
        table = pd.concat(tables, ignore_index=True)

        rate = table.groupby(['mode', 'target_id'])['detected'].mean()
        for target_id in range(1, 10):
            self.assertGreaterEqual(rate[('tiled-beamspace', target_id)], 0.8, f"目标 {target_id}")
            self.assertGreaterEqual(rate[('oracle-full', target_id)], 0.8, f"目标 {target_id}")
        self.assertLessEqual(table.loc[table['mode'] == 'single-beamspace', 'detected'].mean(), 0.5)

        sinr = table.groupby(['mode', 'target_id'])['sinr_db'].mean()
        better = sum(sinr[('tiled-beamspace', t)] >= sinr[('single-beamspace', t)] for t in range(1, 10))
        self.assertGreaterEqual(better / 9, 0.8)

        tiled_width = float(np.mean(widths['tiled-beamspace']))
        self.assertLessEqual(tiled_width, 1.1 * float(np.mean(widths['oracle-full'])))
        self.assertLess(tiled_width, float(np.mean(widths['single-beamspace'])))

    def test_tiled_nulls_deeper_at_each_jammer(self):
        """测试理想协方差下，每个干扰方向上分块模式的响应低于单子阵模式"""
        config = RunConfig.from_dict({'scenario': {'library': 'E2-like'},
                                      'modes': ['single-beamspace', 'tiled-beamspace']})
        _, scenario, layout = validate_config(config)
        cov = analytic_covariance(layout, scenario)
        tiled = ModeFactory.create_mode('tiled-beamspace', config, layout)
        single = ModeFactory.create_mode('single-beamspace', config, layout)
        for jammer in scenario.interferers:
            target = min(scenario.targets, key=lambda t: abs(t.angle.azimuth_deg - jammer.angle.azimuth_deg))
            omega = reference_spatial_freq(target.angle)
            jam = reference_spatial_freq(jammer.angle)
            levels = {}
            for mode in (tiled, single):
                correlator, lifted = mode.solve_analytic(cov, omega, target.target_id)
                self.assertLess(correlator.distortionless_error(), 1e-9)
                response = response_at(lifted, mode.output_layout, [jam.omega_x], [jam.omega_z])[0]
                levels[mode.name] = 20.0 * math.log10(response)
            self.assertLess(levels['tiled-beamspace'], levels['single-beamspace'] - 6.0,
                            f"目标 {target.target_id}: {levels}")

    def test_strong_jammers_with_default_loading(self):
        """测试 120 dB 干扰下默认对角加载的分块模式仍能检测全部目标"""
        for seed in range(3):
            config = RunConfig.from_dict({
                'scenario': {'library': 'A1-like'}, 'inr_db': 120.0,
                'modes': ['tiled-beamspace'], 'seed': seed,
            })
            self.assertEqual(config.loading_factor, 1e-9)
            table = SimulationEngine(config).run(write=False).table
            self.assertTrue(table['detected'].all(), table)
            self.assertTrue((table['sinr_db'] >= 10.0).all(), table)

    def test_loading_sweep(self):
        """测试对角加载扫描：强干扰下轻加载不劣于重加载"""
        with tempfile.TemporaryDirectory() as tmp:
            config = RunConfig.from_dict({'scenario': {'library': 'A1-like'}, 'inr_db': 120.0,
                                          'modes': ['tiled-beamspace'], 'output_dir': tmp})
            frame = SimulationEngine(config).loading_sweep([1e-3, 1e-9])
            self.assertTrue(os.path.exists(os.path.join(tmp, 'loading_sweep.csv')))
        self.assertEqual(len(frame), 18)
        detected = frame.groupby('loading_factor')['detected'].sum()
        self.assertEqual(detected[1e-9], 9)
        self.assertGreaterEqual(detected[1e-9], detected[1e-3])
        with self.assertRaises(ConfigError):
            SimulationEngine(config).loading_sweep([])
        with self.assertRaises(ConfigError):
            SimulationEngine(config).loading_sweep([-1.0])

    def test_deterministic_across_workers(self):
        """测试线程数不影响输出"""
        contents = []
        with tempfile.TemporaryDirectory() as tmp:
            for workers in (1, 8):
                out = os.path.join(tmp, f'w{workers}')
                config = RunConfig.from_dict({'scenario': {'library': 'C1-like'}, 'seed': 7,
                                              'workers': workers, 'output_dir': out})
                SimulationEngine(config).run(write=True)
                files = {}
                for name in ('report.csv', 'report.json', 'correlators.json'):
                    with open(os.path.join(out, name), 'rb') as f:
                        files[name] = f.read()
                contents.append(files)
        self.assertEqual(contents[0], contents[1])

    def test_modes_are_independent(self):
        base = {'scenario': {'library': 'B2-like'}, 'seed': 3}
        both = SimulationEngine(RunConfig.from_dict(base)).run(write=False).table
        alone = SimulationEngine(RunConfig.from_dict({**base, 'modes': ['tiled-beamspace']})).run(write=False).table
        tiled = both[both['mode'] == 'tiled-beamspace'].reset_index(drop=True)
        pd.testing.assert_frame_equal(tiled, alone.reset_index(drop=True))

    def test_outputs_and_manifest(self):
        """测试输出文件与运行清单"""
        with tempfile.TemporaryDirectory() as tmp:
            config = RunConfig.from_dict({
                'scenario': {'library': 'A2-like'}, 'modes': ['tiled-beamspace'],
                'patterns': [{'target_id': 5, 'mode': 'tiled-beamspace'}],
                'export': {'maps': True}, 'output_dir': tmp,
            })
            engine = SimulationEngine(config)
            result = engine.run(write=True)

            with open(os.path.join(tmp, 'manifest.json'), encoding='utf-8') as f:
                manifest = json.load(f)
            self.assertEqual(manifest['config_hash'], config_hash(config, engine.scenario))
            self.assertEqual(manifest['run_id'], result.run_id)
            paths = {o['path'] for o in manifest['outputs']}
            for name in ('report.csv', 'summary.csv', 'report.json', 'correlators.json',
                         'patterns/pattern_tiled-beamspace_t5.csv', 'maps/rd_tiled-beamspace_t1.tbrc'):
                self.assertIn(name, paths)
            for output in manifest['outputs']:
                self.assertEqual(file_sha256(os.path.join(tmp, output['path'])), output['sha256'])
            ledger = manifest['complexity'][0]
            self.assertEqual(ledger['dimension'], 32)
            self.assertEqual(ledger['speedup_target'], 20.0)
            self.assertGreaterEqual(ledger['speedup_vs_oracle'], 20.0, ledger)
            self.assertTrue(ledger['meets_speedup_target'])
            self.assertGreater(ledger['mean_reduce_seconds'], 0.0)
            self.assertEqual(manifest['loading']['loading_factor'], 1e-9)

            report = pd.read_csv(os.path.join(tmp, 'report.csv'))
            self.assertEqual(list(report.columns),
                             ['scenario', 'mode', 'target_id', 'detected', 'range_err_m', 'vel_err_mps', 'sinr_db'])
            rd = read_array(os.path.join(tmp, 'maps', 'rd_tiled-beamspace_t1.tbrc'))
            self.assertEqual(rd.shape, (256, 32))

            with open(os.path.join(tmp, 'correlators.json'), encoding='utf-8') as f:
                correlators = json.load(f)
            self.assertEqual(len(correlators), 9)
            self.assertEqual(correlators[0]['dimension'], 32)
            self.assertEqual(correlators[0]['lifted_dimension'], 256)

    def test_emit_pattern(self):
        """测试方向图：分块模式主瓣窄于单子阵"""
        config = RunConfig.from_dict({'scenario': {'library': 'E2-like'}, 'seed': 1})
        engine = SimulationEngine(config)
        with tempfile.TemporaryDirectory() as tmp:
            tiled = engine.emit_pattern(5, 'tiled-beamspace', output_dir=tmp)
            self.assertTrue(os.path.exists(tiled.path))
        single = engine.emit_pattern(5, 'single-beamspace')
        self.assertIsNone(single.path)
        self.assertEqual(len(tiled.frame), 121 * 61)
        self.assertLess(tiled.mainlobe['azimuth_deg'], single.mainlobe['azimuth_deg'])
        with self.assertRaises(ConfigError):
            engine.emit_pattern(99, 'tiled-beamspace')
        with self.assertRaises(ConfigError):
            engine.emit_pattern(5, 'sparse')
        with self.assertRaises(ConfigError):
            engine.emit_pattern(5, 'tiled-beamspace', subband=8)

    def test_sweep(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = RunConfig.from_dict({'scenario': {'library': 'A1-like'}, 'modes': ['tiled-beamspace'],
                                          'output_dir': tmp})
            frame = SimulationEngine(config).sweep([60.0, 90.0])
            self.assertTrue(os.path.exists(os.path.join(tmp, 'sweep.csv')))
        self.assertEqual(len(frame), 18)
        self.assertEqual(sorted(frame['inr_db'].unique()), [60.0, 90.0])
        with self.assertRaises(ConfigError):
            SimulationEngine(config).sweep([])


class TestCommandLine(unittest.TestCase):
    """测试命令行入口"""

    @classmethod
    def setUpClass(cls):
        cls.cli = load_cli()

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = self.cli.main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_scenario_list(self):
        code, out, _ = self.run_cli('scenario-list')
        self.assertEqual(code, 0)
        self.assertEqual(len(out.strip().splitlines()), 10)

    def test_validate(self):
        """测试 validate 的退出码"""
        with tempfile.TemporaryDirectory() as tmp:
            good = write_config(tmp, {'scenario': {'library': 'A1-like'}})
            code, out, _ = self.run_cli('validate', '--config', good)
            self.assertEqual(code, 0)
            self.assertIn('OK', out)

            bad = write_config(tmp, {'windows': {'tiled-beamspace': [2, 32]}})
            code, _, err = self.run_cli('validate', '--config', bad)
            self.assertEqual(code, 2)
            self.assertIn('windows.tiled-beamspace[1]', err)

        code, _, _ = self.run_cli('validate', '--config', '/nonexistent/run.json')
        self.assertEqual(code, 2)

    def test_run_writes_reports(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, out, _ = self.run_cli('run', '--scenario', 'A1-like', '--modes', 'tiled-beamspace',
                                        '--window', '2x4', '--seed', '2', '--out', tmp,
                                        '--pattern', '3:tiled-beamspace')
            self.assertEqual(code, 0)
            self.assertIn('tiled-beamspace', out)
            for name in ('report.csv', 'report.json', 'manifest.json', 'patterns/pattern_tiled-beamspace_t3.csv'):
                self.assertTrue(os.path.exists(os.path.join(tmp, name)), name)
            with open(os.path.join(tmp, 'manifest.json'), encoding='utf-8') as f:
                self.assertEqual(json.load(f)['config']['windows']['tiled-beamspace'], [2, 4])

    def test_singular_covariance_exit_code(self):
        """测试未加载且快拍不足时退出码为 3"""
        with tempfile.TemporaryDirectory() as tmp:
            code, _, err = self.run_cli('run', '--scenario', 'E2-like', '--modes', 'tiled-beamspace',
                                        '--loading', '0', '--snapshots', '4', '--out', tmp)
        self.assertEqual(code, 3)
        self.assertIn('error', err)

    def test_loading_sweep_command(self):
        """测试对角加载扫描命令"""
        with tempfile.TemporaryDirectory() as tmp:
            code, out, _ = self.run_cli('sweep', '--scenario', 'A1-like', '--modes', 'tiled-beamspace',
                                        '--inr', '120', '--loading-values', '1e-3,1e-9', '--out', tmp)
            self.assertEqual(code, 0)
            self.assertIn('loading_factor', out)
            frame = pd.read_csv(os.path.join(tmp, 'loading_sweep.csv'))
        self.assertEqual(sorted(frame['loading_factor'].unique()), [1e-9, 1e-3])
        code, _, err = self.run_cli('sweep', '--scenario', 'A1-like')
        self.assertEqual(code, 2)

    def test_bad_window_argument(self):
        code, _, err = self.run_cli('run', '--window', 'wide', '--modes', 'tiled-beamspace')
        self.assertEqual(code, 2)
        self.assertIn('windows', err)


if __name__ == '__main__':
    unittest.main()
