from .penalty_functions import (PenaltyParams,
                                g_sigma, g_sigma_prime, g_sigma_second,
                                h_delta, h_delta_prime, h_delta_prime_right, h_delta_prime_left,
                                f_eps, f_eps_prime)
