import time
import numpy as np
import scipy.fft
from scipy.special import beta, betainc

import fracbound
from ..gridbox import GridSpec
from .normalization import FracParams, normalization_constant

def _angular_integral(theta_tan: np.ndarray, alpha: float) -> np.ndarray:
    """int_0^Theta cos^{2a}(t) dt for tan(Theta) = theta_tan >= 0.

    Uses 1/2 B(1/2, a+1/2) I_{sin^2 Theta}(1/2, a+1/2).
    """
    sin2 = theta_tan ** 2 / (1.0 + theta_tan ** 2)
    return 0.5 * beta(0.5, alpha + 0.5) * betainc(0.5, alpha + 0.5, sin2)

def tail_integral(points: np.ndarray, a: float, alpha: float) -> np.ndarray:
    """int over the complement of [-a, a]^n of |x - y|^{-n-2 alpha} dy.

    n = 1 uses the antiderivative; n = 2 splits directions by the wall the
    ray leaves through, each wall giving a closed incomplete-beta form.
    """
    n = points.shape[1]
    if n == 1:
        x = points[:, 0]
        return ((a - x) ** (-2 * alpha) + (a + x) ** (-2 * alpha)) / (2 * alpha)

    x, y = points[:, 0], points[:, 1]
    total = np.zeros(len(points))
    # (distance to wall, half-spans of the wall on either side of the foot point)
    walls = ((a - x, a - y, a + y),
             (a + x, a - y, a + y),
             (a - y, a - x, a + x),
             (a + y, a - x, a + x))
    for d, span_hi, span_lo in walls:
        ang = _angular_integral(span_hi / d, alpha) + _angular_integral(span_lo / d, alpha)
        total += d ** (-2 * alpha) * ang / (2 * alpha)
    return total


class KernelTable:
    """Precomputed nonlocal weights for (-Delta)^alpha on a truncated grid.

    weights[k]  = c h^n / |k h|^{n + 2 alpha} indexed by offset k (zero at k = 0)
    tail_raw[i] = int over the complement of the cell-covered box of |x_i - y|^{-n-2 alpha}
    tail[i]     = c * tail_raw[i]   (operator tail, zero when include_tail is False)

    The discrete operator is
        v_i = sum_{j != i} w(x_i - x_j) (u_i - u_j) + tail_i u_i
    and the energy is
        J_h(u) = (h^n / c) [ sum_{i != j} w_ij (u_i - u_j)^2 + 2 sum_i tail_i u_i^2 ],
    so that grad J_h = (4 h^n / c) (-Delta)^alpha_h u.
    """

    def __init__(self, grid: GridSpec, alpha: float, include_tail: bool = True,
                 verbose: bool = False):
        start = time.perf_counter()
        self.grid = grid
        self.frac = FracParams(alpha, normalization_constant(grid.dimension, alpha))
        self.include_tail = include_tail

        n, N, h = grid.dimension, grid.points_per_axis, grid.spacing
        c = self.frac.c_norm
        offsets = np.arange(-(N - 1), N, dtype=float)
        if n == 1:
            dist = np.abs(offsets) * h
        else:
            ox, oy = np.meshgrid(offsets, offsets, indexing="ij")
            dist = np.hypot(ox, oy) * h
        with np.errstate(divide="ignore"):
            weights = c * h ** n / dist ** (n + 2 * alpha)
        weights[(N - 1,) * n] = 0.0
        self.weights = weights

        # circular length >= 2N - 1 keeps the needed block of the linear
        # convolution free of wrap-around
        self.fft_shape = (scipy.fft.next_fast_len(2 * N - 1, real=True),) * n
        self.weights_hat = scipy.fft.rfftn(weights, s=self.fft_shape,
                                           workers=fracbound.FFT_WORKERS)

        self.tail_raw = tail_integral(grid.points(), grid.half_width + 0.5 * h, alpha)
        if not include_tail:
            self.tail_raw = np.zeros(grid.size)
        self.tail = c * self.tail_raw
        self.row_sum = self.convolve(np.ones(grid.size))
        self.diagonal = self.row_sum + self.tail

        self.precompute_seconds = time.perf_counter() - start
        self.memory_bytes = int(self.weights.nbytes + self.weights_hat.nbytes
                                + 4 * self.tail.nbytes)
        if verbose:
            print(f"Kernel table for {grid!r}, alpha = {alpha}: "
                  f"{self.precompute_seconds:.3f} s, {self.memory_bytes / 1024**2:.2f} MB")

    def __repr__(self):
        return (f"KernelTable({self.grid!r}, alpha={self.alpha}, "
                f"c_norm={self.c_norm:.6g}, include_tail={self.include_tail})")

    @property
    def alpha(self) -> float:
        return self.frac.alpha

    @property
    def c_norm(self) -> float:
        return self.frac.c_norm

    @property
    def energy_scale(self) -> float:
        """h^n / c, the factor turning operator weights into energy weights."""
        return self.grid.cell_volume / self.c_norm

    def convolve(self, values: np.ndarray) -> np.ndarray:
        """(w * u)_i = sum_j w(x_i - x_j) u_j over the grid, via FFT."""
        N = self.grid.points_per_axis
        u = np.asarray(values, dtype=float).reshape(self.grid.shape)
        u_hat = scipy.fft.rfftn(u, s=self.fft_shape, workers=fracbound.FFT_WORKERS)
        full = scipy.fft.irfftn(self.weights_hat * u_hat, s=self.fft_shape,
                                workers=fracbound.FFT_WORKERS)
        block = full[(slice(N - 1, 2 * N - 1),) * self.grid.dimension]
        return block.ravel()

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Raw-array (-Delta)^alpha_h u = (row_sum + tail) u - w * u."""
        values = np.asarray(values, dtype=float)
        return self.diagonal * values - self.convolve(values)

    def dense_rows(self, rows: np.ndarray):
        """Operator weights w_ij for the given rows, shape (len(rows), N^n)."""
        pts = self.grid.points()
        diff = pts[rows, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(diff ** 2, axis=2))
        n = self.grid.dimension
        with np.errstate(divide="ignore"):
            w = self.c_norm * self.grid.cell_volume / dist ** (n + 2 * self.alpha)
        w[dist == 0.0] = 0.0
        return w
