import numpy as np
from dataclasses import dataclass

def _unit_interval(name, value):
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")

@dataclass(frozen=True)
class PenaltyParams:
    """Penalization state (sigma, delta, epsilon) and the target volume gamma.

    gamma = 0 is degenerate and only accepted with allow_zero_gamma.
    """
    sigma: float
    delta: float
    epsilon: float
    gamma: float
    allow_zero_gamma: bool = False

    def __post_init__(self):
        _unit_interval("sigma", self.sigma)
        _unit_interval("delta", self.delta)
        _unit_interval("epsilon", self.epsilon)
        if self.gamma < 0 or (self.gamma == 0 and not self.allow_zero_gamma):
            raise ValueError(f"gamma must be positive, got {self.gamma} "
                             "(gamma = 0 needs allow_zero_gamma)")

    def check_reachable(self, exterior_volume: float):
        """Reject gamma >= |box \\ Omega|_h."""
        if self.gamma >= exterior_volume:
            raise ValueError(f"gamma = {self.gamma} is unreachable: the exterior of Omega "
                             f"inside the box only measures {exterior_volume:.6g}")

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "delta": self.delta,
                "epsilon": self.epsilon, "gamma": self.gamma}


# --- obstacle penalty g_sigma ---

def g_sigma(t, sigma):
    """-(t + sigma/2)/sigma for t <= -sigma, t^2/(2 sigma^2) on [-sigma, 0], 0 for t >= 0."""
    t = np.asarray(t, dtype=float)
    out = np.where(t <= -sigma, -(t + 0.5 * sigma) / sigma, 0.5 * (t / sigma) ** 2)
    return np.where(t >= 0.0, 0.0, out)

def g_sigma_prime(t, sigma):
    t = np.asarray(t, dtype=float)
    out = np.where(t <= -sigma, -1.0 / sigma, t / sigma ** 2)
    return np.where(t >= 0.0, 0.0, out)

def g_sigma_second(t, sigma):
    """Curvature 1/sigma^2 on the bridge, zero elsewhere."""
    t = np.asarray(t, dtype=float)
    return np.where((t > -sigma) & (t < 0.0), 1.0 / sigma ** 2, 0.0)


# --- volume indicator h_delta ---

def h_delta(t, delta):
    t = np.asarray(t, dtype=float)
    return np.clip(t / delta, 0.0, 1.0)

def h_delta_prime(t, delta):
    """1/delta on (0, delta); the kinks at 0 and delta get 0."""
    t = np.asarray(t, dtype=float)
    return np.where((t > 0.0) & (t < delta), 1.0 / delta, 0.0)

def h_delta_prime_right(t, delta):
    t = np.asarray(t, dtype=float)
    return np.where((t >= 0.0) & (t < delta), 1.0 / delta, 0.0)

def h_delta_prime_left(t, delta):
    t = np.asarray(t, dtype=float)
    return np.where((t > 0.0) & (t <= delta), 1.0 / delta, 0.0)


# --- volume penalty f_epsilon ---

def f_eps(t, epsilon, gamma):
    t = np.asarray(t, dtype=float)
    return np.where(t >= gamma, (t - gamma) / epsilon, epsilon * (t - gamma))

def f_eps_prime(t, epsilon, gamma):
    """1/epsilon above gamma, epsilon at and below it."""
    t = np.asarray(t, dtype=float)
    return np.where(t > gamma, 1.0 / epsilon, epsilon)
