"""Analytic and quadrature references for the discrete fractional Laplacian.

The checks here back the `validate-kernel` command and the kernel tests:

- constant fields are annihilated when the far-field tail is switched off,
- (1 - |x|^2)_+^alpha is mapped to a constant inside the unit ball,
- cos(x) is mapped to cos(x) at the center of a large box.

The discrete operator omits the singular diagonal, so its local error is
c zeta(2 alpha - 1) u''(x) h^{2 - 2 alpha} + O(h^{4 - 2 alpha}). Errors are
judged as trends over refinement and, for the symbol, after one Richardson
step with that exponent.
"""
import numpy as np
from scipy.integrate import quad
from scipy.special import gamma
from tqdm import tqdm

from ..gridbox import build_grid, ScalarField
from .kernel_table import KernelTable
from .normalization import normalization_constant

PROFILE_RESOLUTIONS = ((2.0, 101), (2.0, 201), (2.0, 401))
SYMBOL_RESOLUTIONS = ((8 * np.pi, 201), (16 * np.pi, 801), (32 * np.pi, 3201))
PROFILE_SAMPLES = (-0.4, -0.2, 0.0, 0.2, 0.4)

def profile_constant(n: int, alpha: float) -> float:
    """(-Delta)^alpha (1 - |x|^2)_+^alpha inside the unit ball."""
    return float(4.0 ** alpha * gamma(1.0 + alpha) * gamma(n / 2.0 + alpha)
                 / gamma(n / 2.0))

def profile(alpha: float):
    def func(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) < 1.0,
                        np.clip(1.0 - x ** 2, 0.0, None) ** alpha, 0.0)
    return func

def pv_quadrature(func, x: float, alpha: float, reach: float, breaks=(),
                  epsabs: float = 1e-13, epsrel: float = 1e-11) -> float:
    """1D principal value c int_0^inf (2u(x) - u(x+s) - u(x-s)) / s^{1+2 alpha} ds.

    func must be smooth in s away from `breaks` and vanish at x +- s for
    s >= reach. The first segment carries the s^{1-2 alpha} singularity in a
    QAWS algebraic weight; the part beyond reach is integrated exactly.
    """
    c = normalization_constant(1, alpha)
    u0 = float(func(x))

    def second_difference(s):
        return 2.0 * u0 - float(func(x + s)) - float(func(x - s))

    knots = sorted(b for b in breaks if 0.0 < b < reach) + [reach]
    near = 0.5 * knots[0]
    total, _ = quad(lambda s: second_difference(s) / s ** 2, 0.0, near,
                    weight="alg", wvar=(1.0 - 2.0 * alpha, 0.0),
                    epsabs=epsabs, epsrel=epsrel, limit=200)
    lo = near
    for hi in knots:
        part, _ = quad(lambda s: second_difference(s) / s ** (1.0 + 2.0 * alpha), lo, hi,
                       epsabs=epsabs, epsrel=epsrel, limit=200)
        total += part
        lo = hi
    total += 2.0 * u0 * reach ** (-2.0 * alpha) / (2.0 * alpha)
    return c * total

def profile_quadrature(x: float, alpha: float) -> float:
    """pv_quadrature of the 1D profile at a point |x| < 1."""
    ax = abs(x)
    return pv_quadrature(profile(alpha), x, alpha, reach=1.0 + ax, breaks=(1.0 - ax,))

def constant_field_check(grid, alpha: float) -> dict:
    """Apply the tail-free operator to u = 1; the result should vanish."""
    kernel = KernelTable(grid, alpha, include_tail=False)
    v = kernel.apply(np.ones(grid.size))
    scale = float(np.max(kernel.row_sum))
    error = float(np.max(np.abs(v))) / scale
    return {"relative_error": error, "passed": bool(error <= 1e-12)}

def _profile_error(alpha: float, L: float, N: int) -> float:
    grid = build_grid(1, L, N)
    kernel = KernelTable(grid, alpha)
    axis = grid.axis()
    v = kernel.apply(profile(alpha)(axis))
    errors = []
    for x in PROFILE_SAMPLES:
        i = int(round((x + L) / grid.spacing))
        ref = profile_quadrature(axis[i], alpha)
        errors.append(abs(v[i] - ref) / abs(ref))
    return float(max(errors))

def profile_check(alpha: float, resolutions=PROFILE_RESOLUTIONS,
                  verbose: bool = False) -> dict:
    """Interior constancy of the operator on (1 - x^2)_+^alpha over refinement."""
    errors = [_profile_error(alpha, L, N)
              for L, N in tqdm(resolutions, desc="profile", disable=not verbose)]
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    return {"resolutions": [[float(L), int(N)] for L, N in resolutions],
            "relative_errors": errors,
            "constant": profile_constant(1, alpha),
            "passed": bool(decreasing)}

def symbol_ratio(alpha: float, L: float, N: int) -> float:
    """[(-Delta)^alpha_h cos](0) / |1|^{2 alpha} on a box of half-width L."""
    if N % 2 == 0:
        raise ValueError(f"N must be odd so that x = 0 is a grid point, got {N}")
    grid = build_grid(1, L, N)
    kernel = KernelTable(grid, alpha)
    v = kernel.apply(np.cos(grid.axis()))
    return float(v[N // 2])

def symbol_check(alpha: float, resolutions=SYMBOL_RESOLUTIONS, tol: float = 0.05,
                 verbose: bool = False) -> dict:
    """Plane-wave symbol of the discrete operator over refinement.

    Passes when |ratio - 1| decreases monotonically and the Richardson
    extrapolation of the two finest ratios is within tol of 1. The
    resolutions must halve h from one level to the next.
    """
    ratios = [symbol_ratio(alpha, L, N)
              for L, N in tqdm(resolutions, desc="symbol", disable=not verbose)]
    errors = [abs(r - 1.0) for r in ratios]
    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    gain = 2.0 ** (2.0 - 2.0 * alpha)
    extrapolated = (gain * ratios[-1] - ratios[-2]) / (gain - 1.0)
    return {"resolutions": [[float(L), int(N)] for L, N in resolutions],
            "ratios": ratios,
            "relative_errors": errors,
            "extrapolated_ratio": float(extrapolated),
            "passed": bool(decreasing and abs(extrapolated - 1.0) <= tol)}
