"""
阵列模型测试

导向矢量的 Kronecker 分解、频率缩放与子阵选择
"""

import math
import os
import sys
import unittest

import numpy as np

# 添加项目路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from internal.array_model import (
    ArrayLayout, SourceAngle, SpatialFrequency,
    reference_spatial_freq, spatial_freq_at, steering_1d, element_response, tile_response,
    per_tile_steering, global_steering, monolithic_steering, steering_matrix, angles_to_spatial_freq,
)
from internal.utils.errors import DomainError, DimensionError

CARRIER_HZ = 2997924580.0


class TestArrayLayout(unittest.TestCase):
    """测试阵列几何"""

    def setUp(self):
        self.layout = ArrayLayout(tiles_z=4, tiles_x=2, elems_z=2, elems_x=16, design_freq_hz=CARRIER_HZ)

    def test_dimensions(self):
        self.assertEqual(self.layout.n_tiles, 8)
        self.assertEqual(self.layout.tile_elements, 32)
        self.assertEqual(self.layout.total_elements, 256)
        self.assertEqual((self.layout.total_z, self.layout.total_x), (8, 32))
        self.assertAlmostEqual(self.layout.wavelength_m, 0.1, places=12)

    def test_tile_index_is_z_fastest(self):
        self.assertEqual(self.layout.tile_index(0, 0), 0)
        self.assertEqual(self.layout.tile_index(1, 0), 1)
        self.assertEqual(self.layout.tile_index(0, 1), 4)

    def test_element_coordinates_order(self):
        x, z = self.layout.element_coordinates()
        # 块 0 的前 N_z 个阵元沿 z 排列
        np.testing.assert_array_equal(z[:2], [0, 1])
        np.testing.assert_array_equal(x[:4], [0, 0, 1, 1])
        # 块 1 在 z 方向紧接块 0
        self.assertEqual((x[32], z[32]), (0, 2))
        self.assertEqual(len(set(zip(x.tolist(), z.tolist()))), 256)

    def test_invalid_layout(self):
        with self.assertRaises(DomainError):
            ArrayLayout(0, 2, 2, 16, CARRIER_HZ)
        with self.assertRaises(DomainError):
            ArrayLayout(4, 2, 2, 16, -1.0)

    def test_dict_round_trip(self):
        self.assertEqual(ArrayLayout.from_dict(self.layout.to_dict()), self.layout)


class TestSteering(unittest.TestCase):
    """测试导向矢量"""

    def setUp(self):
        self.layout = ArrayLayout(4, 2, 2, 16, CARRIER_HZ)
        self.rng = np.random.default_rng(7)

    def test_global_equals_monolithic(self):
        for _ in range(20):
            omega = SpatialFrequency(*self.rng.uniform(-math.pi, math.pi, 2))
            np.testing.assert_allclose(global_steering(self.layout, omega),
                                       monolithic_steering(self.layout, omega), atol=1e-12)

    def test_per_tile_concatenation(self):
        omega = SpatialFrequency(0.7, -0.3)
        stacked = np.concatenate([per_tile_steering(self.layout, omega, t) for t in range(self.layout.n_tiles)])
        np.testing.assert_allclose(stacked, global_steering(self.layout, omega), atol=1e-12)
        with self.assertRaises(DimensionError):
            per_tile_steering(self.layout, omega, self.layout.n_tiles)

    def test_per_tile_is_phase_shifted_element_response(self):
        omega = SpatialFrequency(0.4, 1.1)
        base = element_response(self.layout, omega)
        phases = tile_response(self.layout, omega)
        for t in range(self.layout.n_tiles):
            np.testing.assert_allclose(per_tile_steering(self.layout, omega, t), phases[t] * base, atol=1e-12)
        self.assertAlmostEqual(abs(phases[0]), 1.0)

    def test_steering_1d(self):
        np.testing.assert_allclose(steering_1d(4, 0.0), np.ones(4))
        self.assertEqual(steering_1d(1, 2.0)[0], 1.0)
        with self.assertRaises(DimensionError):
            steering_1d(0, 0.5)

    def test_spatial_freq_scaling(self):
        ref = reference_spatial_freq(SourceAngle.from_degrees(20.0, 10.0))
        self.assertIs(spatial_freq_at(ref, CARRIER_HZ, CARRIER_HZ), ref)
        scaled = spatial_freq_at(ref, 1.05 * CARRIER_HZ, CARRIER_HZ)
        self.assertAlmostEqual(scaled.omega_x, 1.05 * ref.omega_x, places=12)
        self.assertAlmostEqual(scaled.omega_z, 1.05 * ref.omega_z, places=12)
        with self.assertRaises(DomainError):
            spatial_freq_at(ref, 0.0, CARRIER_HZ)

    def test_reference_spatial_freq_broadside(self):
        omega = reference_spatial_freq(SourceAngle(0.0, 0.0))
        self.assertEqual((omega.omega_x, omega.omega_z), (0.0, 0.0))
        omega = reference_spatial_freq(SourceAngle.from_degrees(30.0, 0.0))
        self.assertAlmostEqual(omega.omega_x, math.pi / 2, places=12)

    def test_angle_domain(self):
        with self.assertRaises(DomainError):
            SourceAngle(math.pi / 2, 0.0)
        with self.assertRaises(DomainError):
            SourceAngle(0.0, -math.pi / 2)

    def test_steering_matrix_rows(self):
        ox, oz = [0.1, -0.5], [0.3, 0.2]
        a = steering_matrix(self.layout, ox, oz)
        self.assertEqual(a.shape, (2, 256))
        np.testing.assert_allclose(a[1], global_steering(self.layout, SpatialFrequency(-0.5, 0.2)), atol=1e-12)

    def test_angles_to_spatial_freq_matches_reference(self):
        angle = SourceAngle.from_degrees(-35.0, 12.0)
        ox, oz = angles_to_spatial_freq(angle.azimuth_rad, angle.elevation_rad, CARRIER_HZ, CARRIER_HZ)
        ref = reference_spatial_freq(angle)
        self.assertAlmostEqual(float(ox), ref.omega_x, places=12)
        self.assertAlmostEqual(float(oz), ref.omega_z, places=12)

    def test_sub_aperture_columns(self):
        sub = self.layout.sub_layout(4, 8)
        cols = self.layout.sub_aperture_indices(4, 8)
        self.assertEqual(len(cols), 32)
        omega = SpatialFrequency(0.9, -1.2)
        np.testing.assert_allclose(global_steering(self.layout, omega)[cols], global_steering(sub, omega), atol=1e-12)
        with self.assertRaises(DimensionError):
            self.layout.sub_layout(9, 8)


if __name__ == '__main__':
    unittest.main()
