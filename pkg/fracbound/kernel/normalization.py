import numpy as np
from dataclasses import dataclass
from scipy.special import gamma

def normalization_constant(n: int, alpha: float) -> float:
    """c_{n,alpha} = 4^a Gamma(n/2 + a) / (pi^{n/2} |Gamma(-a)|).

    With this constant the Fourier symbol of (-Delta)^alpha is |xi|^{2 alpha}.
    """
    if n not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return float(4.0 ** alpha * gamma(n / 2.0 + alpha)
                 / (np.pi ** (n / 2.0) * abs(gamma(-alpha))))

@dataclass(frozen=True)
class FracParams:
    alpha: float
    c_norm: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.c_norm > 0:
            raise ValueError(f"c_norm must be positive, got {self.c_norm}")
