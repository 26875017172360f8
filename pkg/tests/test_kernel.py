import unittest
from unittest.mock import patch
import numpy as np
from scipy.integrate import quad

from fracbound.gridbox import ScalarField, build_grid
from fracbound.kernel import (normalization_constant, FracParams, KernelTable, tail_integral,
                              frac_laplacian_apply, frac_laplacian_apply_fast,
                              gagliardo_energy, dirichlet_pairing)
from fracbound.kernel.oracles import (constant_field_check, profile_check, symbol_check,
                                      profile_constant, profile_quadrature, symbol_ratio)

class TestNormalization(unittest.TestCase):
    def test_closed_form_values(self):
        self.assertAlmostEqual(normalization_constant(1, 0.5), 1.0 / np.pi, places=14)
        self.assertAlmostEqual(normalization_constant(2, 0.5), 0.5 / np.pi, places=14)

    def test_vanishes_as_alpha_goes_to_zero(self):
        self.assertLess(normalization_constant(1, 1e-3), 2e-3)
        self.assertGreater(normalization_constant(1, 1e-3), 0.0)

    def test_rejects_alpha_outside_unit_interval(self):
        for alpha in (0.0, 1.0, -0.2):
            with self.assertRaises(ValueError):
                normalization_constant(1, alpha)
        with self.assertRaises(ValueError):
            FracParams(0.5, -1.0)


class TestTail(unittest.TestCase):
    def test_tail_1d_positive_symmetric_and_largest_at_edges(self):
        kernel = KernelTable(build_grid(1, 1.0, 21), 0.4)
        tail = kernel.tail
        self.assertTrue(np.all(tail > 0.0))
        np.testing.assert_allclose(tail, tail[::-1], rtol=1e-12)
        self.assertIn(int(np.argmax(tail)), (0, 20))
        self.assertEqual(int(np.argmin(tail)), 10)

    def test_tail_2d_matches_angular_quadrature(self):
        """Closed form against int over directions of R(theta)^{-2a} / (2a)."""
        alpha, a = 0.35, 1.0
        point = np.array([[0.3, -0.2]])

        def exit_distance(theta):
            c, s = np.cos(theta), np.sin(theta)
            ts = []
            if c > 0: ts.append((a - point[0, 0]) / c)
            if c < 0: ts.append((-a - point[0, 0]) / c)
            if s > 0: ts.append((a - point[0, 1]) / s)
            if s < 0: ts.append((-a - point[0, 1]) / s)
            return min(ts)

        corners = sorted(np.mod(np.arctan2(cy - point[0, 1], cx - point[0, 0]), 2 * np.pi)
                         for cx in (-a, a) for cy in (-a, a))
        edges = [0.0] + corners + [2 * np.pi]
        ref = sum(quad(lambda t: exit_distance(t) ** (-2 * alpha) / (2 * alpha), lo, hi,
                       epsabs=0.0, epsrel=1e-12)[0] for lo, hi in zip(edges, edges[1:]))
        self.assertAlmostEqual(tail_integral(point, a, alpha)[0] / ref, 1.0, places=9)

    def test_tail_2d_symmetry(self):
        kernel = KernelTable(build_grid(2, 1.0, 9), 0.6)
        tail = kernel.tail.reshape(9, 9)
        np.testing.assert_allclose(tail, tail.T, rtol=1e-12)
        np.testing.assert_allclose(tail, tail[::-1, :], rtol=1e-12)


class TestOperator(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_constant_field_annihilated_without_tail(self):
        for grid in (build_grid(1, 1.0, 33), build_grid(2, 1.0, 17)):
            result = constant_field_check(grid, 0.5)
            self.assertTrue(result["passed"], result)

    def test_fast_matches_reference_1d(self):
        kernel = KernelTable(build_grid(1, 1.0, 64), 0.3)
        for _ in range(50):
            u = ScalarField(kernel.grid, self.rng.standard_normal(64))
            ref = frac_laplacian_apply(kernel, u).values
            fast = frac_laplacian_apply_fast(kernel, u).values
            self.assertLess(np.max(np.abs(fast - ref)) / np.max(np.abs(ref)), 1e-11)

    def test_fast_matches_reference_2d_delta_field(self):
        grid = build_grid(2, 1.0, 15)
        kernel = KernelTable(grid, 0.7)
        values = np.zeros(grid.size)
        values[grid.size // 2] = 1.0
        u = ScalarField(grid, values)
        ref = frac_laplacian_apply(kernel, u, block_size=17).values
        fast = frac_laplacian_apply_fast(kernel, u).values
        self.assertLess(np.max(np.abs(fast - ref)) / np.max(np.abs(ref)), 1e-11)

    def test_weights_symmetric_and_decreasing(self):
        kernel = KernelTable(build_grid(1, 1.0, 11), 0.5)
        w = kernel.weights
        np.testing.assert_array_equal(w, w[::-1])
        right = w[11:]
        self.assertTrue(np.all(right > 0.0))
        self.assertTrue(np.all(np.diff(right) < 0.0))

    def test_energy_properties(self):
        kernel = KernelTable(build_grid(1, 1.0, 33), 0.4)
        u = ScalarField(kernel.grid, self.rng.standard_normal(33))
        w = ScalarField(kernel.grid, self.rng.standard_normal(33))
        J = gagliardo_energy(kernel, u)
        self.assertGreater(J, 0.0)
        self.assertEqual(gagliardo_energy(kernel, ScalarField.zeros(kernel.grid)), 0.0)
        self.assertAlmostEqual(gagliardo_energy(kernel, u.with_values(2 * u.values)) / J, 4.0,
                               places=12)
        self.assertAlmostEqual(dirichlet_pairing(kernel, u, u) / J, 1.0, places=12)
        self.assertEqual(dirichlet_pairing(kernel, u, ScalarField.zeros(kernel.grid)), 0.0)
        self.assertAlmostEqual(dirichlet_pairing(kernel, u, w), dirichlet_pairing(kernel, w, u),
                               places=10)
        polar = 0.25 * (gagliardo_energy(kernel, u.with_values(u.values + w.values))
                        - gagliardo_energy(kernel, u.with_values(u.values - w.values)))
        self.assertAlmostEqual(dirichlet_pairing(kernel, u, w), polar, places=10)

    def test_dense_pairing_matches_fast(self):
        kernel = KernelTable(build_grid(2, 1.0, 9), 0.5)
        u = ScalarField(kernel.grid, self.rng.standard_normal(81))
        w = ScalarField(kernel.grid, self.rng.standard_normal(81))
        fast = dirichlet_pairing(kernel, u, w)
        dense = dirichlet_pairing(kernel, u, w, method="dense")
        scale = np.sqrt(gagliardo_energy(kernel, u) * gagliardo_energy(kernel, w))
        self.assertLess(abs(fast - dense), 1e-10 * scale)
        with self.assertRaises(ValueError):
            dirichlet_pairing(kernel, u, w, method="spectral")

    def test_single_point_energy(self):
        kernel = KernelTable(build_grid(1, 1.0, 21), 0.5)
        i, v = 7, 1.5
        values = np.zeros(21)
        values[i] = v
        expected = 2 * v ** 2 * kernel.energy_scale * (kernel.dense_rows(np.array([i])).sum()
                                                       + kernel.tail[i])
        self.assertAlmostEqual(gagliardo_energy(kernel, ScalarField(kernel.grid, values))
                               / expected, 1.0, places=11)

    def test_integration_by_parts(self):
        kernel = KernelTable(build_grid(1, 1.5, 41), 0.25)
        u = ScalarField(kernel.grid, self.rng.standard_normal(41))
        v = ScalarField(kernel.grid, self.rng.standard_normal(41))
        lhs = float(np.dot(v.values, frac_laplacian_apply(kernel, u).values)) \
            * kernel.grid.cell_volume
        rhs = 0.5 * kernel.c_norm * dirichlet_pairing(kernel, u, v)
        Lu = frac_laplacian_apply(kernel, u).values
        scale = kernel.grid.cell_volume * np.linalg.norm(v.values) * np.linalg.norm(Lu)
        self.assertLess(abs(lhs - rhs), 1e-10 * scale)

    def test_grid_mismatch(self):
        kernel = KernelTable(build_grid(1, 1.0, 11), 0.5)
        with self.assertRaises(ValueError):
            frac_laplacian_apply(kernel, ScalarField.zeros(build_grid(1, 1.0, 13)))

    def test_symbol_ratio_needs_odd_N(self):
        with self.assertRaises(ValueError):
            symbol_ratio(0.5, 8 * np.pi, 200)


class TestOracles(unittest.TestCase):
    def test_profile_quadrature_is_constant_inside(self):
        for alpha in (0.25, 0.5):
            ref = profile_constant(1, alpha)
            for x in (0.0, 0.3):
                self.assertAlmostEqual(profile_quadrature(x, alpha) / ref, 1.0, places=6)

    def test_profile_check_converges(self):
        for alpha in (0.25, 0.5):
            result = profile_check(alpha)
            self.assertTrue(result["passed"], result)
            self.assertLess(result["relative_errors"][-1], 0.02)

    def test_symbol_check_converges(self):
        for alpha in (0.25, 0.5, 0.75):
            result = symbol_check(alpha)
            self.assertTrue(result["passed"], result)

    def test_doubled_constant_fails_symbol_check(self):
        real = normalization_constant
        with patch("fracbound.kernel.kernel_table.normalization_constant",
                   side_effect=lambda n, a: 2.0 * real(n, a)):
            result = symbol_check(0.5)
        self.assertFalse(result["passed"])
        self.assertGreater(abs(result["extrapolated_ratio"] - 1.0), 0.5)


if __name__ == "__main__":
    unittest.main()
