import os
import tempfile
import unittest
import warnings
import numpy as np

from fracbound.config import parse_config, load_metrics
from fracbound.diagnostics import SECTIONS
from fracbound.api.cli import main

# the default scenario: Omega = (-1, 1), unit bump of radius 0.5, gamma = 0.5
STANDARD = ""
FINE = "grid:\n  points_per_axis: 401\n"

COARSE_2D = """
grid:
  dimension: 2
  half_width: 2.0
  points_per_axis: 33
domain:
  - shape: ball
    center: [0.0, 0.0]
    radius: 0.8
obstacle:
  amplitude: 1.0
  center: [0.0, 0.0]
  radius: 0.4
alpha: 0.5
gamma: 0.2
schedule:
  sigma0: 0.1
  delta0: 0.1
  rho: 0.25
  sigma_min: 0.025
  delta_min: 0.05
solver:
  max_iters: 3000
"""

def relative_change(coarse, fine):
    return abs(fine - coarse) / abs(coarse)


class CliRuns(unittest.TestCase):
    @classmethod
    def solve(cls, text, name):
        path = os.path.join(cls.tmp.name, f"{name}.yaml")
        with open(path, "w") as f:
            f.write(text)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            code = main(["solve", path, "--name", name, "--output-dir", cls.out, "--quiet"])
        return code, load_metrics(os.path.join(cls.out, f"{name}.metrics.yaml"))

    @classmethod
    def output(cls, name):
        return os.path.join(cls.out, name)

    @classmethod
    def make_tmp(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.out = os.path.join(cls.tmp.name, "out")

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()


class TestStandardScenario(CliRuns):
    @classmethod
    def setUpClass(cls):
        cls.make_tmp()
        cls.config = parse_config(STANDARD)
        cls.grad_tol = cls.config.solver.grad_tol
        cls.code, metrics = cls.solve(STANDARD, "coarse")
        cls.result = metrics["result"]
        cls.diagnostics = cls.result["diagnostics"]
        cls.repeat_code, _ = cls.solve(STANDARD, "repeat")
        _, fine = cls.solve(FINE, "fine")
        cls.fine = fine["result"]["diagnostics"]

    def test_solve_qualifies(self):
        self.assertEqual(self.code, 0)
        self.assertTrue(self.result["converged"])
        tuning = self.result["volume_tuning"]
        self.assertTrue(tuning["qualified"])
        self.assertLessEqual(tuning["error"], 0.05)
        errors = [row["error"] for row in tuning["trace"]]
        self.assertTrue(all(b <= a for a, b in zip(errors, errors[1:])))

    def test_a_priori_bounds(self):
        bounds = self.diagnostics["bounds"]
        self.assertLessEqual(bounds["lower_violation"], 10 * self.grad_tol)
        self.assertLessEqual(bounds["upper_violation"], 10 * self.grad_tol)

    def test_obstacle_violation_along_sigma_steps(self):
        sigma_steps = [s for s in self.result["stages"] if s["stage"] == "sigma"]
        violations = [s["obstacle_violation"] for s in sigma_steps]
        for before, after in zip(violations, violations[1:]):
            self.assertLessEqual(after, before + 1e-10)
        self.assertLessEqual(violations[-1], 1e-3 * self.config.obstacle.amplitude)

    def test_obstacle_slope_settles(self):
        sup_g = [s["sup_g_prime"] for s in self.result["stages"] if s["stage"] == "sigma"]
        last = sup_g[-3:]
        for before, after in zip(last, last[1:]):
            self.assertLess(relative_change(before, after), 0.05)

    def test_energy_ceiling(self):
        ceiling = self.result["energy_ceiling"]
        for stage in self.result["stages"]:
            self.assertLessEqual(stage["energy"]["total"], ceiling + 1e-12 * abs(ceiling))

    def test_euler_lagrange_residuals(self):
        for stage in ("delta", "limit"):
            report = self.result["residuals"][stage]
            self.assertEqual(report["monitored"]["contact_tol"], 10 * self.grad_tol)
            for key, value in report["residuals"].items():
                self.assertLessEqual(value, 50 * self.grad_tol, f"{stage}.{key}")

    def test_variational_inequality(self):
        scan = self.diagnostics["variational_inequality"]
        self.assertEqual(scan["count"], 10)
        self.assertGreaterEqual(scan["min"], -50 * self.grad_tol)
        self.assertTrue(scan["passed"])

    def test_repeated_runs_are_identical(self):
        self.assertEqual(self.repeat_code, self.code)
        for suffix in ("field.csv", "diagnostics.csv"):
            with open(self.output(f"coarse.{suffix}"), "rb") as a, \
                    open(self.output(f"repeat.{suffix}"), "rb") as b:
                self.assertEqual(a.read(), b.read(), suffix)
        with open(self.output("coarse.metrics.yaml"), "rb") as a, \
                open(self.output("repeat.metrics.yaml"), "rb") as b:
            self.assertEqual(a.read(), b.read())

    def test_growth_slope_on_refined_grid(self):
        # at N = 201 only 3h, 4h and 6h stay below half the distance to the
        # boundary of Omega; the slope criterion is read at N = 401
        scan = self.fine["nondegeneracy"]
        self.assertGreaterEqual(scan["min_radii_used"], 5)
        alpha = self.config.alpha
        self.assertGreaterEqual(scan["median_slope"], 0.8 * alpha)
        self.assertLessEqual(scan["median_slope"], 1.2 * alpha)
        self.assertEqual(scan["flagged_points"], 0)

    def test_density_under_refinement(self):
        for key in ("min_density_pos", "min_density_zero"):
            coarse, fine = self.diagnostics["density"][key], self.fine["density"][key]
            self.assertGreater(coarse, 0.0)
            self.assertGreater(fine, 0.0)
            self.assertLessEqual(relative_change(coarse, fine), 0.3, key)

    def test_holder_under_refinement(self):
        coarse, fine = self.diagnostics["holder"], self.fine["holder"]
        self.assertLessEqual(relative_change(coarse["optimal"]["seminorm"],
                                             fine["optimal"]["seminorm"]), 0.25)
        self.assertGreater(fine["above_optimal"]["seminorm"],
                           coarse["above_optimal"]["seminorm"])

    def test_harnack_under_refinement(self):
        coarse, fine = self.diagnostics["harnack"], self.fine["harnack"]
        self.assertFalse(coarse["flagged"])
        self.assertFalse(fine["flagged"])
        self.assertTrue(np.isfinite(coarse["ratio"]))
        self.assertLessEqual(relative_change(coarse["ratio"], fine["ratio"]), 0.25)
        self.assertEqual(coarse["contact_tol"], 10 * self.grad_tol)

    def test_free_boundary_measure_bounded(self):
        coarse = self.diagnostics["free_boundary"]["measure_estimate"]
        fine = self.fine["free_boundary"]["measure_estimate"]
        self.assertGreater(coarse, 0.0)
        self.assertLessEqual(relative_change(coarse, fine), 0.25)


class TestTwoDimensionalSmoke(CliRuns):
    @classmethod
    def setUpClass(cls):
        cls.make_tmp()
        cls.code, metrics = cls.solve(COARSE_2D, "plane")
        cls.result = metrics["result"]

    def test_exit_code_matches_flag(self):
        self.assertIn(self.code, (0, 2))
        self.assertEqual(self.code == 2, self.result["flagged"])

    def test_every_section_reported(self):
        for section in SECTIONS + ("variational_inequality", "admissibility"):
            self.assertIn(section, self.result["diagnostics"])
        harnack = self.result["diagnostics"]["harnack"]
        self.assertIsInstance(harnack["flagged"], bool)
        if harnack["ratio"] is None or not np.isfinite(harnack["ratio"]):
            self.assertTrue(harnack["flagged"])

    def test_unfitted_points_are_flagged(self):
        scan = self.result["diagnostics"]["nondegeneracy"]
        self.assertGreater(scan["points"], 0)
        rows = np.loadtxt(self.output("plane.diagnostics.csv"), delimiter=",", skiprows=1,
                          ndmin=2)
        self.assertEqual(rows.shape, (scan["points"], 5))
        self.assertEqual(int(np.count_nonzero(np.isnan(rows[:, 2]))), scan["flagged_points"])
        if scan["flagged_points"] == scan["points"]:
            self.assertTrue(np.isnan(scan["median_slope"]))
            self.assertEqual(scan["min_radii_used"], 0)


if __name__ == "__main__":
    unittest.main()
