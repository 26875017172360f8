import unittest
import numpy as np

from fracbound.penalty import (PenaltyParams, g_sigma, g_sigma_prime, g_sigma_second,
                               h_delta, h_delta_prime, h_delta_prime_left, h_delta_prime_right,
                               f_eps, f_eps_prime)

class TestObstaclePenalty(unittest.TestCase):
    def test_piece_values(self):
        for sigma in (0.1, 0.37, 0.9):
            self.assertEqual(g_sigma(1.0, sigma), 0.0)
            self.assertAlmostEqual(float(g_sigma(-2 * sigma, sigma)), 1.5, places=14)
            self.assertAlmostEqual(float(g_sigma(-sigma, sigma)), 0.5, places=14)
            self.assertAlmostEqual(float(g_sigma(-sigma / 2, sigma)), 0.125, places=14)
            self.assertAlmostEqual(float(g_sigma_prime(-sigma / 2, sigma)), -0.5 / sigma,
                                   places=12)
            self.assertAlmostEqual(float(g_sigma_prime(-sigma, sigma)), -1.0 / sigma, places=12)
            self.assertEqual(g_sigma_prime(0.0, sigma), 0.0)

    def test_convex_non_increasing_non_negative(self):
        sigma = 0.2
        t = np.linspace(-1.0, 0.5, 1000)
        g = g_sigma(t, sigma)
        self.assertTrue(np.all(g >= 0.0))
        self.assertTrue(np.all(np.diff(g) <= 1e-15))
        midpoint = g_sigma(0.5 * (t[:-1] + t[1:]), sigma)
        self.assertTrue(np.all(midpoint <= 0.5 * (g[:-1] + g[1:]) + 1e-14))
        self.assertTrue(np.all(g_sigma_second(t, sigma) >= 0.0))

    def test_derivative_is_continuous(self):
        sigma = 0.3
        for kink in (-sigma, 0.0):
            left = g_sigma_prime(kink - 1e-12, sigma)
            right = g_sigma_prime(kink + 1e-12, sigma)
            self.assertAlmostEqual(float(left), float(right), places=9)

    def test_sigma_limits(self):
        self.assertEqual(g_sigma(0.3, 1e-6), 0.0)
        self.assertGreater(float(g_sigma(-0.1, 1e-6)), 1e4)


class TestVolumePenalties(unittest.TestCase):
    def test_h_delta_values(self):
        delta = 0.2
        self.assertEqual(h_delta(-1.0, delta), 0.0)
        self.assertAlmostEqual(float(h_delta(delta / 2, delta)), 0.5, places=14)
        self.assertEqual(h_delta(2.0, delta), 1.0)

    def test_h_delta_kink_conventions(self):
        delta = 0.2
        self.assertEqual(h_delta_prime(0.0, delta), 0.0)
        self.assertEqual(h_delta_prime(delta, delta), 0.0)
        self.assertEqual(h_delta_prime(0.1, delta), 1.0 / delta)
        self.assertEqual(h_delta_prime_right(0.0, delta), 1.0 / delta)
        self.assertEqual(h_delta_prime_right(delta, delta), 0.0)
        self.assertEqual(h_delta_prime_left(0.0, delta), 0.0)
        self.assertEqual(h_delta_prime_left(delta, delta), 1.0 / delta)

    def test_h_delta_bounds_and_limit(self):
        t = np.linspace(-2.0, 2.0, 1001)
        for delta in (0.5, 0.05, 0.001):
            self.assertTrue(np.all(np.abs(h_delta_prime(t, delta)) <= 1.0 / delta))
            self.assertTrue(np.all(np.diff(h_delta(t, delta)) >= 0.0))
        far = t[np.abs(t) > 0.01]
        np.testing.assert_array_equal(h_delta(far, 1e-4), (far > 0).astype(float))

    def test_f_eps_values(self):
        eps, gamma = 0.1, 0.5
        self.assertEqual(f_eps(gamma, eps, gamma), 0.0)
        self.assertAlmostEqual(float(f_eps(gamma + 2.0, eps, gamma)), 2.0 / eps, places=12)
        self.assertAlmostEqual(float(f_eps(gamma - 1.0, eps, gamma)), -eps, places=14)
        self.assertEqual(f_eps_prime(gamma, eps, gamma), eps)

    def test_f_eps_increasing_and_bounded_slope(self):
        eps, gamma = 0.05, 0.3
        t = np.linspace(-1.0, 2.0, 1000)
        self.assertTrue(np.all(np.diff(f_eps(t, eps, gamma)) > 0.0))
        self.assertTrue(np.all(np.abs(f_eps_prime(t, eps, gamma)) <= 1.0 / eps))


class TestPenaltyParams(unittest.TestCase):
    def test_validation(self):
        with self.assertRaises(ValueError):
            PenaltyParams(1.0, 0.1, 0.1, 0.5)
        with self.assertRaises(ValueError):
            PenaltyParams(0.1, 0.0, 0.1, 0.5)
        with self.assertRaises(ValueError):
            PenaltyParams(0.1, 0.1, 0.1, 0.0)
        PenaltyParams(0.1, 0.1, 0.1, 0.0, allow_zero_gamma=True)

    def test_reachability(self):
        params = PenaltyParams(0.1, 0.1, 0.1, 2.0)
        params.check_reachable(2.5)
        with self.assertRaisesRegex(ValueError, "unreachable"):
            params.check_reachable(2.0)

    def test_to_dict(self):
        params = PenaltyParams(0.05, 0.1, 0.1, 0.5)
        self.assertEqual(params.to_dict(), {"sigma": 0.05, "delta": 0.1,
                                            "epsilon": 0.1, "gamma": 0.5})


if __name__ == "__main__":
    unittest.main()
