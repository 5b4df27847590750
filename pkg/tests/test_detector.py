"""
检测链路测试：宽带合成、距离-多普勒、CFAR 与评估
"""

import math
import os
import sys
import unittest

import numpy as np

# 添加项目路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from internal.array_model import SourceAngle
from internal.detector import (
    synthesize_wideband, range_doppler, doppler_bin, RangeDopplerMap,
    CfarConfig, CfarPeak, cfar_detect, cfar_mask, noise_floor,
    associate, detection_sinr, detect_target, evaluate, summarize,
    DetectionReport, TargetDetection, REPORT_COLUMNS, MISSED_SINR_DB,
)
from internal.scene import Waveform, Scenario, Target, channelize, pulse_train, ground_truth
from internal.utils.errors import DimensionError, DomainError


def desk_waveform() -> Waveform:
    return Waveform(carrier_hz=2997924580.0, bandwidth_hz=149896229.0, n_subbands=8, pulses_per_cpi=32,
                    samples_per_pulse=256, prf_hz=20000.0, chirp=True, pulse_samples=64, range_offset_m=3000.0)


class TestWidebandSynthesis(unittest.TestCase):
    """测试子带合成为宽带序列"""

    def setUp(self):
        self.wf = desk_waveform()
        rng = np.random.default_rng(4)
        self.series = rng.standard_normal((32, 256)) + 1j * rng.standard_normal((32, 256))

    def test_inverts_channelizer(self):
        subbands = channelize(self.series, 8)
        np.testing.assert_allclose(synthesize_wideband(subbands, self.wf), self.series, atol=1e-10)

    def test_accepts_mapping(self):
        subbands = channelize(self.series, 8)
        mapping = {i: subbands[i] for i in reversed(range(8))}
        np.testing.assert_allclose(synthesize_wideband(mapping, self.wf), self.series, atol=1e-10)

    def test_missing_subband(self):
        subbands = channelize(self.series, 8)
        with self.assertRaises(DimensionError):
            synthesize_wideband({i: subbands[i] for i in range(7)}, self.wf)

    def test_length_mismatch(self):
        with self.assertRaises(DimensionError):
            synthesize_wideband([np.zeros(1024)] * 7 + [np.zeros(1000)], self.wf)
        with self.assertRaises(DimensionError):
            synthesize_wideband(np.zeros((8, 512)), self.wf)


class TestRangeDoppler(unittest.TestCase):
    """测试距离-多普勒处理"""

    def setUp(self):
        self.wf = desk_waveform()

    def test_doppler_bin_and_axis(self):
        self.assertEqual(doppler_bin(62.5, self.wf), 2)
        self.assertEqual(doppler_bin(-62.5, self.wf), 30)
        series = np.zeros((32, 256), dtype=complex)
        rd = range_doppler(series, self.wf)
        self.assertEqual(rd.velocity_index(2), 18)
        self.assertAlmostEqual(rd.velocity_axis_mps[18], 62.5, places=9)
        self.assertAlmostEqual(rd.range_axis_m[20], 3020.0, places=6)
        self.assertAlmostEqual(rd.range_step_m, 1.0, places=9)

    def test_point_target_peak(self):
        series = pulse_train(self.wf, gate=20, amplitude=1.0, doppler_hz=2 * 62.5 / self.wf.wavelength_m)
        for window in ('none', 'hamming', 'taylor'):
            rd = range_doppler(series, self.wf, range_window=window)
            self.assertEqual(rd.shape, (256, 32))
            self.assertEqual(np.unravel_index(np.argmax(rd.power), rd.shape), (20, 18))

    def test_matched_filter_peak_equals_pulse_energy(self):
        """测试默认不加窗时真值单元功率等于脉冲串能量的平方"""
        series = pulse_train(self.wf, gate=20, amplitude=0.5, doppler_hz=2 * 62.5 / self.wf.wavelength_m)
        rd = range_doppler(series, self.wf)
        energy = 0.5 * self.wf.pulse_samples * self.wf.pulses_per_cpi
        self.assertAlmostEqual(rd.power[20, 18] / energy ** 2, 1.0, places=9)
        self.assertAlmostEqual(rd.power.max(), rd.power[20, 18], places=6)
        tapered = range_doppler(series, self.wf, range_window='hamming')
        self.assertLess(tapered.power[20, 18], rd.power[20, 18])

    def test_doppler_taper(self):
        series = pulse_train(self.wf, gate=40, amplitude=1.0, doppler_hz=-2 * 125.0 / self.wf.wavelength_m)
        rd = range_doppler(series, self.wf, doppler_taper='hann')
        self.assertEqual(np.unravel_index(np.argmax(rd.power), rd.shape), (40, 12))

    def test_invalid_arguments(self):
        with self.assertRaises(DomainError):
            range_doppler(np.zeros((32, 256)), self.wf, range_window='kaiser')
        with self.assertRaises(DomainError):
            range_doppler(np.zeros((32, 256)), self.wf, doppler_taper='blackman')
        with self.assertRaises(DimensionError):
            range_doppler(np.zeros((16, 256)), self.wf)


class TestCfar(unittest.TestCase):
    """测试 CA-CFAR"""

    def setUp(self):
        self.config = CfarConfig(threshold_db=10.0, guard_cells=2, training_cells=8)

    def test_false_alarm_rate(self):
        rng = np.random.default_rng(2024)
        power = rng.exponential(1.0, size=(1000, 100))
        count = int(cfar_mask(power, self.config)[10:990].sum())
        expected = self.config.false_alarm_rate() * 980 * 100
        self.assertAlmostEqual(expected, 41.5, delta=1.0)
        self.assertTrue(expected / 2 <= count <= expected * 2, count)

    def test_edge_floor_uses_cells_inside_map(self):
        floor = noise_floor(np.full((50, 3), 2.0), self.config)
        np.testing.assert_allclose(floor, 2.0)

    def test_single_peak(self):
        power = np.ones((100, 8))
        power[50, 3] = 1000.0
        power[51, 3] = 500.0
        peaks = cfar_detect(power, self.config)
        self.assertEqual(len(peaks), 1)
        peak = peaks[0]
        self.assertEqual((peak.range_index, peak.velocity_index), (50, 3))
        self.assertAlmostEqual(peak.sinr_db, 30.0, places=9)

    def test_two_separated_spikes(self):
        """测试相距超过模板长度的两个尖峰各自检测"""
        power = np.ones((128, 4))
        power[30, 1] = 1000.0
        power[30 + self.config.stencil_length + 5, 1] = 1000.0
        peaks = cfar_detect(power, self.config)
        self.assertEqual([(p.range_index, p.velocity_index) for p in peaks],
                         [(30, 1), (30 + self.config.stencil_length + 5, 1)])

    def test_plateau_gives_one_detection(self):
        """测试等功率平台只检测一次"""
        power = np.ones((100, 4))
        power[40:43, 2] = 1000.0
        peaks = cfar_detect(power, self.config)
        self.assertEqual([(p.range_index, p.velocity_index) for p in peaks], [(40, 2)])

    def test_flat_map_has_no_detections(self):
        self.assertEqual(cfar_detect(np.full((64, 4), 3.0), self.config), [])

    def test_map_too_short(self):
        with self.assertRaises(DimensionError):
            noise_floor(np.ones((20, 4)), self.config)
        with self.assertRaises(DimensionError):
            cfar_detect(np.ones(30), self.config)

    def test_config_checks(self):
        self.assertEqual(self.config.stencil_length, 21)
        self.assertEqual(self.config.kernel().sum(), 16)
        with self.assertRaises(DomainError):
            CfarConfig(threshold_db=0.0)
        with self.assertRaises(DomainError):
            CfarConfig(training_cells=0)
        with self.assertRaises(DomainError):
            CfarConfig(guard_cells=-1)


class TestAssociation(unittest.TestCase):
    """测试检测关联与评估"""

    def setUp(self):
        self.config = CfarConfig()
        self.wf = desk_waveform()

    def test_tolerance_and_velocity_wrap(self):
        peaks = [CfarPeak(10, 31, 5.0, 1.0), CfarPeak(12, 0, 50.0, 1.0)]
        self.assertIs(associate(peaks, (10, 0), 32), peaks[0])
        self.assertIsNone(associate(peaks, (14, 0), 32))

    def test_nearest_then_strongest(self):
        peaks = [CfarPeak(10, 5, 100.0, 1.0), CfarPeak(11, 5, 10.0, 1.0), CfarPeak(11, 4, 20.0, 1.0)]
        self.assertIs(associate(peaks, (11, 5), 32), peaks[1])
        tied = [CfarPeak(10, 5, 3.0, 1.0), CfarPeak(12, 5, 30.0, 1.0)]
        self.assertIs(associate(tied, (11, 5), 32), tied[1])

    def test_detection_sinr_missed(self):
        self.assertEqual(detection_sinr(np.ones((64, 8)), (30, 2), self.config), MISSED_SINR_DB)
        with self.assertRaises(DimensionError):
            detection_sinr(np.ones((64, 8)), (64, 2), self.config)

    def test_detection_sinr_spike_over_unit_floor(self):
        power = np.ones((64, 8))
        power[30, 2] = 100.0
        self.assertAlmostEqual(detection_sinr(power, (30, 2), self.config), 20.0, places=9)

    def test_detection_sinr_uses_true_cell(self):
        """测试峰值落在相邻单元时按真值单元计算"""
        power = np.ones((64, 8))
        power[31, 2] = 1000.0
        power[30, 2] = 100.0
        peaks = cfar_detect(power, self.config)
        self.assertEqual([(p.range_index, p.velocity_index) for p in peaks], [(31, 2)])
        self.assertAlmostEqual(peaks[0].sinr_db, 30.0, places=9)
        self.assertAlmostEqual(detection_sinr(power, (30, 2), self.config), 20.0, places=9)

    def test_detection_sinr_scale_invariant(self):
        """测试检测信干噪比不随图整体缩放变化"""
        rng = np.random.default_rng(11)
        power = rng.exponential(1.0, size=(128, 16))
        power[60, 5] = 500.0
        reference = detection_sinr(power, (60, 5), self.config)
        self.assertGreater(reference, 10.0)
        for scale in (1e-6, 3.0, 1e6):
            self.assertAlmostEqual(detection_sinr(power * scale, (60, 5), self.config), reference, places=9)

    def _truth(self, velocity):
        target = Target(1, SourceAngle.from_degrees(5.0, 2.0), 3020.0, velocity)
        return ground_truth(Scenario('one', self.wf, targets=(target,))).target(1)

    def test_detect_target(self):
        rng = np.random.default_rng(8)
        series = pulse_train(self.wf, 20, 1.0, 2 * 62.5 / self.wf.wavelength_m)
        series = series + 0.1 * (rng.standard_normal(series.shape) + 1j * rng.standard_normal(series.shape))
        rd = range_doppler(series, self.wf)
        found = detect_target(rd, self._truth(62.5), self.wf, self.config, 'oracle-full')
        self.assertTrue(found.detected)
        self.assertEqual((found.range_bin, found.velocity_bin), (20, 18))
        self.assertAlmostEqual(found.range_err_m, 0.0, places=9)
        self.assertAlmostEqual(found.vel_err_mps, 0.0, places=9)
        self.assertGreater(found.sinr_db, 20.0)

        missed = detect_target(rd, self._truth(-250.0), self.wf, self.config, 'oracle-full')
        self.assertFalse(missed.detected)
        self.assertTrue(math.isinf(missed.range_err_m) and math.isinf(missed.vel_err_mps))
        self.assertEqual(missed.sinr_db, 0.0)

    def test_evaluate_and_summarize(self):
        truth = ground_truth(Scenario('two', self.wf, targets=(
            Target(1, SourceAngle(0.0, 0.0), 3020.0, 0.0),
            Target(2, SourceAngle(0.0, 0.0), 3040.0, 0.0),
        )))
        hit = TargetDetection(1, 'tiled-beamspace', True, 20, 16, 0.0, 0.0, 25.0)
        reports = {
            'tiled-beamspace': DetectionReport('two', 'tiled-beamspace', [hit]),
            'single-beamspace': DetectionReport('two', 'single-beamspace', []),
        }
        table = evaluate(truth, reports)
        self.assertEqual(list(table.columns), REPORT_COLUMNS)
        self.assertEqual(len(table), 4)
        self.assertTrue(math.isinf(table.iloc[1]['range_err_m']))
        summary = summarize(table)
        tiled = summary[summary['mode'] == 'tiled-beamspace'].iloc[0]
        self.assertEqual(int(tiled['n_detected']), 1)
        self.assertAlmostEqual(float(tiled['mean_sinr_db']), 12.5)
        with self.assertRaises(DomainError):
            evaluate(truth, [])

    def test_report_to_dict(self):
        report = DetectionReport('s', 'oracle-full', [TargetDetection(3, 'oracle-full', False, None, None,
                                                                     math.inf, math.inf, 0.0)])
        data = report.to_dict()
        self.assertEqual(data['n_detected'], 0)
        self.assertIsNone(data['detections'][0]['range_bin'])
        self.assertIsInstance(RangeDopplerMap(np.ones((2, 2)), np.arange(2.0), np.arange(2.0)).shape, tuple)


if __name__ == '__main__':
    unittest.main()
