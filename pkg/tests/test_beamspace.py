"""
波束域变换与窗口测试
"""

import math
import os
import sys
import unittest

import numpy as np

# 添加项目路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from internal.array_model import ArrayLayout, SpatialFrequency, global_steering, per_tile_steering
from internal.beamspace import (
    BeamspaceTransform, dft_2d, idft_2d,
    center_bin, plan_window, apply_window, reduce_tile, reduce_global, expand_global,
    reduction_matrix, windowed_steering,
)
from internal.utils.errors import DimensionError

CARRIER_HZ = 2997924580.0


class TestTransform(unittest.TestCase):
    """测试块内二维 DFT"""

    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_matches_explicit_matrix(self):
        transform = BeamspaceTransform(n_z=2, n_x=4)
        x = self.rng.standard_normal(8) + 1j * self.rng.standard_normal(8)
        np.testing.assert_allclose(transform.apply(x), transform.matrix() @ x, atol=1e-12)

    def test_unitary(self):
        d = BeamspaceTransform(n_z=4, n_x=8).matrix()
        np.testing.assert_allclose(d @ d.conj().T, np.eye(32), atol=1e-12)

    def test_adjoint_is_inverse(self):
        x = self.rng.standard_normal((5, 32)) + 1j * self.rng.standard_normal((5, 32))
        np.testing.assert_allclose(idft_2d(dft_2d(x, 2, 16), 2, 16), x, atol=1e-12)

    def test_length_mismatch(self):
        with self.assertRaises(DimensionError):
            dft_2d(np.zeros(10), 2, 4)


class TestWindow(unittest.TestCase):
    """测试窗口规划"""

    def setUp(self):
        self.layout = ArrayLayout(2, 2, 4, 8, CARRIER_HZ)

    def test_center_bin(self):
        self.assertEqual(center_bin(2 * math.pi / 8, 8), 1)
        self.assertEqual(center_bin(-2 * math.pi / 8, 8), 7)
        # 0.5 向上取整
        self.assertEqual(center_bin(2 * math.pi * 0.5 / 8, 8), 1)
        self.assertEqual(center_bin(2 * math.pi * 4.3 / 8, 8), 4)
        self.assertEqual(center_bin(0.0, 1), 0)

    def test_bins_wrap_and_extra_bin_above_center(self):
        omega = SpatialFrequency(0.0, 0.0)
        window = plan_window(self.layout, omega, 2, 4)
        self.assertEqual(window.bins_z, (0, 1))
        self.assertEqual(window.bins_x, (7, 0, 1, 2))
        self.assertEqual(plan_window(self.layout, omega, 3, 3).bins_x, (7, 0, 1))

    def test_windows_are_nested(self):
        omega = SpatialFrequency(2.1, -0.8)
        previous = set()
        for w_x in range(1, 9):
            bins = set(plan_window(self.layout, omega, 1, w_x).bins_x)
            self.assertTrue(previous <= bins)
            self.assertEqual(len(bins), w_x)
            previous = bins

    def test_full_window_is_identity(self):
        window = plan_window(self.layout, SpatialFrequency(1.3, 0.4), 4, 8)
        np.testing.assert_array_equal(window.flat_indices, np.arange(32))
        np.testing.assert_array_equal(window.selector(), np.eye(32))

    def test_flat_index_is_x_major(self):
        window = plan_window(self.layout, SpatialFrequency(2 * math.pi * 3 / 8, 2 * math.pi / 4), 1, 1)
        self.assertEqual((window.center_z, window.center_x), (1, 3))
        self.assertEqual(window.flat_indices.tolist(), [3 * 4 + 1])

    def test_window_too_large(self):
        with self.assertRaises(DimensionError):
            plan_window(self.layout, SpatialFrequency(0.0, 0.0), 5, 2)
        with self.assertRaises(DimensionError):
            plan_window(self.layout, SpatialFrequency(0.0, 0.0), 2, 0)

    def test_to_dict(self):
        window = plan_window(self.layout, SpatialFrequency(0.0, 0.0), 2, 2, target_id=4, subband=1)
        data = window.to_dict()
        self.assertEqual(data['target_id'], 4)
        self.assertEqual(data['tile_dims'], [4, 8])
        self.assertEqual(data['bins_x'], [0, 1])


class TestReduction(unittest.TestCase):
    """测试全局降维"""

    def setUp(self):
        self.layout = ArrayLayout(2, 2, 4, 8, CARRIER_HZ)
        self.rng = np.random.default_rng(9)
        self.window = plan_window(self.layout, SpatialFrequency(0.9, -0.4), 2, 2)

    def test_selector_matches_apply(self):
        x = self.rng.standard_normal(32) + 1j * self.rng.standard_normal(32)
        np.testing.assert_allclose(apply_window(self.window, x), self.window.selector() @ x)

    def test_reduce_global_is_blockwise(self):
        y = self.rng.standard_normal((3, 128)) + 1j * self.rng.standard_normal((3, 128))
        reduced = reduce_global(self.window, y)
        self.assertEqual(reduced.shape, (3, 16))
        for t in range(4):
            np.testing.assert_allclose(reduced[:, 4 * t:4 * (t + 1)],
                                       reduce_tile(self.window, y[:, 32 * t:32 * (t + 1)]), atol=1e-12)
        np.testing.assert_allclose(reduced, y @ reduction_matrix(self.window, 4).T, atol=1e-12)

    def test_expand_is_adjoint(self):
        x = self.rng.standard_normal(128) + 1j * self.rng.standard_normal(128)
        z = self.rng.standard_normal(16) + 1j * self.rng.standard_normal(16)
        lhs = np.vdot(reduce_global(self.window, x), z)
        rhs = np.vdot(x, expand_global(self.window, z))
        self.assertAlmostEqual(abs(lhs - rhs), 0.0, places=10)

    def test_rows_are_orthonormal(self):
        b = reduction_matrix(self.window, 4)
        np.testing.assert_allclose(b @ b.conj().T, np.eye(16), atol=1e-12)

    def test_on_grid_steering_concentrates_in_one_bin(self):
        omega = SpatialFrequency(2 * math.pi * 3 / 8, 2 * math.pi * 1 / 4)
        window = plan_window(self.layout, omega, 1, 1)
        reduced = windowed_steering(self.layout, window, omega)
        self.assertEqual(reduced.shape, (4,))
        np.testing.assert_allclose(np.abs(reduced), math.sqrt(32), atol=1e-10)
        for t in range(4):
            tile = per_tile_steering(self.layout, omega, t)
            self.assertAlmostEqual(abs(reduced[t]), np.linalg.norm(tile), places=10)

    def test_bad_length(self):
        with self.assertRaises(DimensionError):
            reduce_global(self.window, np.zeros(33))
        with self.assertRaises(DimensionError):
            expand_global(self.window, np.zeros(5))

    def test_full_window_preserves_norm(self):
        window = plan_window(self.layout, SpatialFrequency(0.2, 0.1), 4, 8)
        a = global_steering(self.layout, SpatialFrequency(-1.0, 0.6))
        self.assertAlmostEqual(np.linalg.norm(reduce_global(window, a)), np.linalg.norm(a), places=10)


if __name__ == '__main__':
    unittest.main()
