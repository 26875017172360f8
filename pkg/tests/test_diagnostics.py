import unittest
import warnings
import numpy as np
from unittest.mock import patch

from fracbound.gridbox import ScalarField, build_grid
from fracbound.geometry import Ball, DomainSpec, ObstacleSpec, indicator_omega, sample_obstacle
from fracbound.diagnostics import (bounds_check, positivity_volume, boundary_proximity,
                                   holder_seminorm, holder_trace, auto_stride,
                                   free_boundary_extract, nondegeneracy_scan, density_check,
                                   default_radii, harnack_ratio, diagnostics_summary, SECTIONS)

def quiet(func, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return func(*args, **kwargs)


class TestBounds(unittest.TestCase):
    def test_violations(self):
        grid = build_grid(1, 1.0, 5)
        phi = ScalarField(grid, [0.0, 0.5, 1.0, 0.5, 0.0])
        u = ScalarField(grid, [-0.1, 0.2, 1.2, 0.3, 0.0])
        result = bounds_check(u, phi)
        self.assertAlmostEqual(result["lower_violation"], 0.1, places=14)
        self.assertAlmostEqual(result["upper_violation"], 0.2, places=14)
        self.assertEqual(bounds_check(phi, phi)["upper_violation"], 0.0)

    def test_positivity_volume_and_proximity(self):
        grid = build_grid(1, 2.0, 41)
        chi = indicator_omega(DomainSpec((Ball((0.0,), 0.9),)), grid)
        u = ScalarField.from_function(grid, lambda x: np.where(np.abs(x[:, 0] - 1.5) < 0.15,
                                                               1.0, 0.0))
        self.assertAlmostEqual(positivity_volume(u, chi, 0.0), 3 * grid.spacing, places=12)
        self.assertAlmostEqual(boundary_proximity(u, 0.0), 0.4, places=12)
        self.assertEqual(boundary_proximity(ScalarField.zeros(grid), 0.0), np.inf)
        with self.assertRaises(ValueError):
            positivity_volume(u, chi, -1.0)


class TestHolder(unittest.TestCase):
    def test_optimal_exponent_bounded_above_optimal_grows(self):
        alpha = 0.25
        estimates = {}
        for N in (21, 81):
            grid = build_grid(1, 1.0, N)
            u = ScalarField.from_function(grid, lambda x: np.abs(x[:, 0]) ** alpha)
            estimates[N] = (holder_seminorm(u, alpha).seminorm,
                            holder_seminorm(u, 0.5 * (alpha + 1.0)).seminorm)
        self.assertAlmostEqual(estimates[21][0], 1.0, places=3)
        self.assertAlmostEqual(estimates[81][0], 1.0, places=3)
        self.assertGreaterEqual(estimates[81][1] / estimates[21][1], 1.5)

    def test_trace_and_validation(self):
        grid = build_grid(1, 1.0, 11)
        u = ScalarField.from_function(grid, lambda x: x[:, 0])
        trace = holder_trace([u, u.with_values(2 * u.values)], 1.0)
        self.assertAlmostEqual(trace[0].seminorm, 1.0, places=12)
        self.assertAlmostEqual(trace[1].seminorm, 2.0, places=12)
        self.assertEqual(trace[0].pair_count, 55)
        with self.assertRaises(ValueError):
            holder_seminorm(u, 0.0)
        with self.assertRaises(ValueError):
            holder_seminorm(u, 0.5, stride=0)

    def test_matches_pairwise_loop(self):
        rng = np.random.default_rng(7)
        for dimension, N, stride in ((1, 40, 1), (1, 40, 3), (2, 9, 1), (2, 9, 2)):
            grid = build_grid(dimension, 1.0, N)
            u = ScalarField(grid, rng.standard_normal(grid.size))
            take = np.arange(0, N, stride)
            keep = [k for k in range(grid.size)
                    if all(i in take for i in np.unravel_index(k, grid.shape))]
            pts = grid.points()
            expected = 0.0
            for a, i in enumerate(keep):
                for j in keep[a + 1:]:
                    d = np.linalg.norm(pts[i] - pts[j])
                    expected = max(expected, abs(u.values[i] - u.values[j]) / d ** 0.6)
            with patch("fracbound.diagnostics.holder.PAIR_BLOCK", 7):
                est = holder_seminorm(u, 0.6, stride)
            self.assertAlmostEqual(est.seminorm, expected, delta=1e-12 * expected)
            self.assertEqual(est.pair_count, len(keep) * (len(keep) - 1) // 2)

    def test_auto_stride(self):
        self.assertEqual(auto_stride(build_grid(1, 1.0, 201)), 1)
        self.assertEqual(auto_stride(build_grid(2, 1.0, 201)), 4)


class TestFreeBoundary(unittest.TestCase):
    def test_disk_perimeter(self):
        grid = build_grid(2, 1.0, 101)
        R = 0.5
        u = ScalarField.from_function(grid, lambda x: np.clip(R - np.linalg.norm(x, axis=1),
                                                              0.0, None))
        extract = free_boundary_extract(u, 0.0)
        self.assertAlmostEqual(extract.measure_estimate / (2 * np.pi * R), 1.0, delta=0.15)
        self.assertEqual(len(extract.components), 1)
        self.assertAlmostEqual(extract.components[0]["measure"] / (np.pi * R ** 2), 1.0,
                               delta=0.1)

    def test_faces_1d_and_regions(self):
        grid = build_grid(1, 2.0, 41)
        domain = DomainSpec((Ball((0.0,), 0.9),))
        u = ScalarField.from_function(grid, lambda x: np.where(np.abs(x[:, 0]) < 0.55, 1.0, 0.0))
        extract = free_boundary_extract(u, 0.0, domain)
        self.assertEqual(len(extract.faces), 2)
        self.assertEqual(extract.measure_estimate, 2.0)
        self.assertEqual(len(extract.components), 1)
        self.assertEqual(extract.components[0]["region"], "interior")
        self.assertEqual(list(extract.regions), ["interior", "interior"])
        out = extract.to_dict()
        self.assertEqual(out["face_count"], 2)
        self.assertEqual(out["interior_points"], 2)

    def test_empty_extract_warns(self):
        grid = build_grid(1, 1.0, 11)
        with self.assertWarnsRegex(UserWarning, "empty"):
            extract = free_boundary_extract(ScalarField.zeros(grid), 0.0)
        self.assertTrue(extract.empty)
        self.assertEqual(extract.components, [])

    def test_edge_contact_warns(self):
        grid = build_grid(1, 1.0, 11)
        u = ScalarField.from_function(grid, lambda x: np.where(x[:, 0] > 0.5, 1.0, 0.0))
        with self.assertWarnsRegex(UserWarning, "edge"):
            free_boundary_extract(u, 0.0)


class TestGrowth(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.alpha = 0.5
        cls.grid = build_grid(1, 2.0, 401)
        h = cls.grid.spacing
        cls.u = ScalarField.from_function(
            cls.grid, lambda x: np.clip(np.abs(x[:, 0]) - 0.5 - h / 2, 0.0, None) ** cls.alpha)
        cls.extract = quiet(free_boundary_extract, cls.u, 0.0)

    def test_slope_near_alpha(self):
        scan = nondegeneracy_scan(self.u, self.extract, default_radii(self.grid), self.alpha)
        self.assertEqual(len(scan.points), 2)
        self.assertFalse(np.any(scan.flagged))
        self.assertGreaterEqual(scan.median_slope, 0.8 * self.alpha)
        self.assertLessEqual(scan.median_slope, 1.2 * self.alpha)
        self.assertGreater(scan.to_dict()["min_ratio"], 0.0)
        self.assertEqual(scan.to_dict()["min_radii_used"], 6)

    def test_densities_positive(self):
        density = density_check(self.u, self.extract, default_radii(self.grid), 0.0)
        self.assertTrue(np.all(density.min_density_pos > 0.0))
        self.assertTrue(np.all(density.min_density_zero > 0.0))
        self.assertEqual(density.to_dict()["flagged_points"], 0)

    def test_slope_invariant_under_scaling(self):
        radii = default_radii(self.grid)
        base = nondegeneracy_scan(self.u, self.extract, radii, self.alpha)
        for c in (0.01, 7.0):
            scaled = nondegeneracy_scan(self.u.with_values(c * self.u.values), self.extract,
                                        radii, self.alpha)
            np.testing.assert_allclose(scaled.slopes, base.slopes, rtol=0.0, atol=1e-10)
            np.testing.assert_allclose(scaled.min_ratio, c * base.min_ratio, rtol=1e-12)

    def test_radius_checks(self):
        h = self.grid.spacing
        with self.assertRaises(ValueError):
            nondegeneracy_scan(self.u, self.extract, [3 * h, 4 * h], self.alpha)
        with self.assertRaises(ValueError):
            density_check(self.u, self.extract, [h, 4 * h, 6 * h], 0.0)

    def test_close_to_box_edge_gets_no_slope(self):
        radii = [0.5, 0.8, 1.0]
        scan = nondegeneracy_scan(self.u, self.extract, radii, self.alpha)
        self.assertTrue(np.all(scan.flagged))
        self.assertTrue(np.isnan(scan.median_slope))


class TestHarnack(unittest.TestCase):
    def setUp(self):
        self.grid = build_grid(1, 2.0, 81)
        domain = DomainSpec((Ball((0.0,), 0.9),))
        self.chi = indicator_omega(domain, self.grid)
        self.phi = sample_obstacle(ObstacleSpec(1.0, (0.0,), 0.5), self.grid, domain)

    def test_finite_ratio_off_contact(self):
        u = self.phi.with_values(self.phi.values + 0.05 * self.chi.values)
        result = harnack_ratio(u, self.phi, self.chi, 1e-8)
        self.assertFalse(result.flagged)
        self.assertTrue(np.isfinite(result.ratio))
        self.assertGreaterEqual(result.ratio, 1.0)
        self.assertGreater(result.cells, 0)

    def test_zero_field_has_empty_subdomain(self):
        zero = ScalarField.zeros(self.grid)
        with self.assertRaisesRegex(ValueError, "empty"):
            harnack_ratio(zero, zero, self.chi, 0.0)
        with self.assertRaises(ValueError):
            harnack_ratio(self.phi, self.phi, self.chi, 0.0, shrink=1.0)


    def test_contact_band_follows_tolerance(self):
        u = self.phi.with_values(self.phi.values + 0.005 * self.chi.values)
        result = harnack_ratio(u, self.phi, self.chi, 1e-8, tol=1e-3)
        self.assertGreater(result.cells, 0)
        self.assertEqual(result.to_dict()["contact_tol"], 1e-3)
        with self.assertRaisesRegex(ValueError, "empty"):
            harnack_ratio(u, self.phi, self.chi, 1e-8, tol=1e-2)
        summary, _ = quiet(diagnostics_summary, u, self.phi, self.chi, 0.5, 1e-8,
                           contact_tol=1e-2)
        self.assertTrue(summary["harnack"]["flagged"])


class TestSummary(unittest.TestCase):
    def test_sections_and_rows(self):
        grid = build_grid(1, 2.0, 81)
        domain = DomainSpec((Ball((0.0,), 0.9),))
        chi = indicator_omega(domain, grid)
        phi = sample_obstacle(ObstacleSpec(1.0, (0.0,), 0.5), grid, domain)
        u = phi.with_values(phi.values + 0.05 * chi.values)
        summary, rows = quiet(diagnostics_summary, u, phi, chi, 0.5, 1e-8, domain)
        self.assertEqual(tuple(summary), SECTIONS)
        self.assertEqual(len(rows), summary["free_boundary"]["boundary_points"])
        for coords, slope, dens_pos, dens_zero in rows:
            self.assertEqual(len(coords), 1)
        self.assertEqual(summary["holder"]["stride"], 1)

    def test_zero_field_reports_harnack_error(self):
        grid = build_grid(1, 2.0, 41)
        chi = indicator_omega(DomainSpec((Ball((0.0,), 0.9),)), grid)
        zero = ScalarField.zeros(grid)
        summary, rows = quiet(diagnostics_summary, zero, zero, chi, 0.5, 0.0)
        self.assertTrue(summary["harnack"]["flagged"])
        self.assertIsNone(summary["harnack"]["ratio"])
        self.assertEqual(rows, [])
        self.assertEqual(summary["volume"]["threshold_volume"], 0.0)


if __name__ == "__main__":
    unittest.main()
