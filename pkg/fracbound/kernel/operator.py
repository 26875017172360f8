import numpy as np

from ..gridbox import ScalarField, check_same_grid
from .kernel_table import KernelTable

# entries of one dense row block, about 32 MB of float64
DENSE_BLOCK_ENTRIES = 2 ** 22

def _row_blocks(size: int, block_size=None):
    step = block_size or max(1, DENSE_BLOCK_ENTRIES // size)
    for start in range(0, size, step):
        yield np.arange(start, min(start + step, size))

def frac_laplacian_apply(kernel: KernelTable, u: ScalarField,
                         block_size=None) -> ScalarField:
    """Reference apply of the discrete fractional Laplacian.

    v_i = sum_{j != i} w(x_i - x_j) (u_i - u_j) + t_i u_i, summed row by row
    over dense blocks of the weight matrix. Cost is O(N^{2n}).
    """
    grid = check_same_grid(kernel.grid, u)
    vals = u.values
    out = np.empty(grid.size)
    for rows in _row_blocks(grid.size, block_size):
        w = kernel.dense_rows(rows)
        out[rows] = np.sum(w * (vals[rows, None] - vals[None, :]), axis=1) \
            + kernel.tail[rows] * vals[rows]
    return ScalarField(grid, out)

def frac_laplacian_apply_fast(kernel: KernelTable, u: ScalarField) -> ScalarField:
    """Same operator as frac_laplacian_apply through the FFT convolution."""
    grid = check_same_grid(kernel.grid, u)
    return ScalarField(grid, kernel.apply(u.values))

def _check_method(method: str):
    if method not in ("fast", "dense"):
        raise ValueError(f"method must be 'fast' or 'dense', got {method!r}")

def dirichlet_pairing(kernel: KernelTable, u: ScalarField, w: ScalarField,
                      method: str = "fast") -> float:
    """Symmetric bilinear form B(u, w) with B(u, u) = J_h(u).

    B(u, w) = (h^n / c) [ sum_{i != j} w_ij (u_i - u_j)(w_i - w_j)
                          + 2 sum_i t_i u_i w_i ]
            = (2 h^n / c) <w, (-Delta)^alpha_h u>.
    """
    grid = check_same_grid(kernel.grid, u, w)
    _check_method(method)
    if method == "fast":
        return float(2.0 * kernel.energy_scale * np.dot(w.values, kernel.apply(u.values)))

    uv, wv = u.values, w.values
    pair_sum = 0.0
    for rows in _row_blocks(grid.size):
        weights = kernel.dense_rows(rows)
        du = uv[rows, None] - uv[None, :]
        dw = wv[rows, None] - wv[None, :]
        pair_sum += float(np.sum(weights * du * dw))
    tail_sum = 2.0 * float(np.sum(kernel.tail * uv * wv))
    return kernel.energy_scale * (pair_sum + tail_sum)

def gagliardo_energy(kernel: KernelTable, u: ScalarField, method: str = "fast") -> float:
    """Discrete Gagliardo energy J_h(u) of a field that vanishes outside the box.

    No normalization constant: J_h(u) = sum_{i != j} h^{2n} (u_i - u_j)^2 / |x_i - x_j|^{n+2 alpha}
    + 2 sum_i h^n tau_i u_i^2, where tau_i integrates the kernel over the
    complement of the box.
    """
    return dirichlet_pairing(kernel, u, u, method=method)
