import numpy as np
from scipy.optimize import brentq

from ..kernel import KernelTable
from ..penalty import PenaltyParams, g_sigma, h_delta, f_eps, h_delta_prime_right, \
    h_delta_prime_left, f_eps_prime
from ..functional import h_volume, volume_on_kink

MAX_BACKTRACKS = 60

class SolverError(RuntimeError):
    """Non-finite energy or a line search that cannot find sufficient decrease."""
    pass

def snap_trial(u, d, t, exterior):
    """u + t d, with exterior values that change sign stopped at the kink u = 0."""
    x = u + t * d
    cross = exterior & (((u > 0.0) & (x < 0.0)) | ((u < 0.0) & (x > 0.0)))
    x[cross] = 0.0
    return x

def directional_derivative(a, d, u, exterior, params: PenaltyParams, V: float,
                           cell_volume: float) -> float:
    """One-sided derivative of the penalized energy at u along d.

    a is the per-cell gradient of J + int g_sigma; the h_delta and f_eps
    kinks contribute their slopes on the side d points to.
    """
    slope_h = np.where(d > 0.0, h_delta_prime_right(u, params.delta),
                       h_delta_prime_left(u, params.delta))
    dV = float(np.sum((slope_h * d)[exterior])) * cell_volume
    if volume_on_kink(V, params, cell_volume):
        slope_f = 1.0 / params.epsilon if dV > 0.0 else params.epsilon
    else:
        slope_f = float(f_eps_prime(V, params.epsilon, params.gamma))
    return float(np.dot(a, d)) * cell_volume + slope_f * dV

def energy_change(kernel: KernelTable, u, Lu, x, phi, exterior, params: PenaltyParams):
    """I(x) - I(u) evaluated from differences, and L(x - u).

    J(x) - J(u) = (2 h^n / c) (2 <x - u, Lu> + <x - u, L(x - u)>) keeps the
    rounding proportional to the step rather than to J itself.
    """
    hn = kernel.grid.cell_volume
    step = x - u
    L_step = kernel.apply(step)
    dJ = 2.0 * kernel.energy_scale * (2.0 * np.dot(step, Lu) + np.dot(step, L_step))
    dG = float(np.sum(g_sigma(x - phi, params.sigma) - g_sigma(u - phi, params.sigma))) * hn
    Vu = h_volume(u, exterior, params, hn)
    Vx = Vu + float(np.sum(h_delta(x[exterior], params.delta)
                           - h_delta(u[exterior], params.delta))) * hn
    dF = float(f_eps(Vx, params.epsilon, params.gamma) - f_eps(Vu, params.epsilon, params.gamma))
    return float(dJ) + dG + dF, L_step

def land_on_gamma(u, d, t, exterior, params: PenaltyParams, cell_volume: float) -> float:
    """Shorten t so that a step crossing V = gamma stops on it."""
    V0 = h_volume(u, exterior, params, cell_volume)
    if volume_on_kink(V0, params, cell_volume):
        return t

    def gap(s):
        return h_volume(snap_trial(u, d, s, exterior), exterior, params, cell_volume) \
            - params.gamma

    g0, g1 = V0 - params.gamma, gap(t)
    if g0 * g1 >= 0.0:
        return t
    return brentq(gap, 0.0, t, xtol=1e-15 * t, maxiter=200)

def armijo_backtracking(change, trial, t0: float, pred: float, c1: float = 1e-4,
                        factor: float = 0.5, max_backtracks: int = MAX_BACKTRACKS):
    """Backtrack from t0 until change(trial(t)) <= c1 t pred.

    Returns (t, x, dI, L_step, backtracks).
    """
    t = t0
    for k in range(max_backtracks + 1):
        x = trial(t)
        dI, L_step = change(x)
        if not np.isfinite(dI):
            raise SolverError(f"energy is not finite at step {t:.3g}")
        if dI <= c1 * t * pred:
            return t, x, dI, L_step, k
        t *= factor
    raise SolverError(f"line search failed after {max_backtracks} backtracks "
                      f"(initial step {t0:.3g}, directional derivative {pred:.3g})")
