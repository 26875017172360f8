"""One-sided stationarity of the penalized energy.

h_delta has kinks at 0 (convex) and delta (concave) and f_eps has a convex
kink at gamma, so the plain gradient never vanishes at minimizers that sit
on a kink. The residual used here is the minimal-norm element of the
one-sided derivative set per cell:

- off every kink it is the per-cell gradient G_i / h^n,
- at u_i = 0 outside Omega it is D+ if D+ < 0, D- if D- > 0, else 0,
- at u_i = delta outside Omega it is whichever one-sided slope descends,
- when the h_delta volume sits on gamma the slope of f_eps is chosen in
  [epsilon, 1/epsilon] to minimize the (preconditioned) residual norm.
"""
import numpy as np
from dataclasses import dataclass
from scipy.optimize import minimize_scalar

from ..kernel import KernelTable
from ..penalty import PenaltyParams, f_eps_prime
from .penalized import smooth_gradient, h_volume

VOLUME_BAND = 1e-10 # relative width of the f_eps kink

@dataclass(frozen=True)
class Stationarity:
    residual: np.ndarray
    volume_slope: float
    volume_on_kink: bool
    h_volume: float

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.residual))) if self.residual.size else 0.0


def volume_on_kink(V: float, params: PenaltyParams, cell_volume: float) -> bool:
    return abs(V - params.gamma) <= VOLUME_BAND * max(params.gamma, cell_volume)

def one_sided_residual(a, u_vals, exterior, delta: float, slope: float) -> np.ndarray:
    """Combine the smooth per-cell gradient a with slope * h'_delta on Omega^c."""
    jump = slope / delta
    r = np.array(a, dtype=float)

    ramp = exterior & (u_vals > 0.0) & (u_vals < delta)
    r[ramp] += jump

    zero = exterior & (u_vals == 0.0)
    lower, upper = r[zero], r[zero] + jump
    r[zero] = np.where(upper < 0.0, upper, np.where(lower > 0.0, lower, 0.0))

    top = exterior & (u_vals == delta)
    upper, lower = r[top], r[top] + jump
    go_up, go_down = upper < 0.0, lower > 0.0
    r[top] = np.where(go_up & go_down, np.where(-upper >= lower, upper, lower),
                      np.where(go_up, upper, np.where(go_down, lower, 0.0)))
    return r

def stationarity(kernel: KernelTable, u_vals, phi_vals, exterior, params: PenaltyParams,
                 Lu=None, precond=None) -> Stationarity:
    a = smooth_gradient(kernel, u_vals, phi_vals, params, Lu=Lu)
    hn = kernel.grid.cell_volume
    V = h_volume(u_vals, exterior, params, hn)
    on_kink = volume_on_kink(V, params, hn)
    if on_kink:
        weights = 1.0 / precond if precond is not None else np.ones_like(a)

        def objective(slope):
            r = one_sided_residual(a, u_vals, exterior, params.delta, slope)
            return float(np.sum(weights * r ** 2))

        lo, hi = params.epsilon, 1.0 / params.epsilon
        best = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                               options={"xatol": 1e-10 * hi})
        slope = float(best.x)
    else:
        slope = float(f_eps_prime(V, params.epsilon, params.gamma))
    r = one_sided_residual(a, u_vals, exterior, params.delta, slope)
    return Stationarity(residual=r, volume_slope=slope, volume_on_kink=on_kink, h_volume=V)
