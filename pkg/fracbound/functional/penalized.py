import numpy as np
from dataclasses import dataclass, asdict

from ..gridbox import ScalarField, check_same_grid
from ..kernel import KernelTable
from ..penalty import (PenaltyParams, g_sigma, g_sigma_prime, h_delta, h_delta_prime,
                       f_eps, f_eps_prime)

@dataclass(frozen=True)
class EnergyBreakdown:
    """Terms of I = J + int g_sigma(u - phi) + f_eps(int_{Omega^c} h_delta(u))."""
    J_value: float
    obstacle_penalty: float
    volume_penalty: float
    total: float
    measured_h_volume: float

    def to_dict(self) -> dict:
        return asdict(self)


def exterior_mask(chi_omega: ScalarField) -> np.ndarray:
    return chi_omega.values == 0.0

def default_tau_pos(phi: ScalarField) -> float:
    return 1e-8 * phi.sup_norm

def h_volume(u_vals, exterior, params: PenaltyParams, cell_volume: float) -> float:
    """int_{Omega^c} h_delta(u) dx as a grid sum."""
    return float(np.sum(h_delta(u_vals[exterior], params.delta))) * cell_volume

def energy_values(kernel: KernelTable, u_vals, phi_vals, exterior, params: PenaltyParams,
                  Lu=None) -> EnergyBreakdown:
    """Array version of penalized_energy; Lu may be passed in when already known."""
    if Lu is None:
        Lu = kernel.apply(u_vals)
    hn = kernel.grid.cell_volume
    J = float(2.0 * kernel.energy_scale * np.dot(u_vals, Lu))
    obstacle = float(np.sum(g_sigma(u_vals - phi_vals, params.sigma))) * hn
    V = h_volume(u_vals, exterior, params, hn)
    volume = float(f_eps(V, params.epsilon, params.gamma))
    return EnergyBreakdown(J_value=J, obstacle_penalty=obstacle, volume_penalty=volume,
                           total=(J + obstacle) + volume, measured_h_volume=V)

def smooth_gradient(kernel: KernelTable, u_vals, phi_vals, params: PenaltyParams,
                    Lu=None) -> np.ndarray:
    """Per-cell gradient of J + int g_sigma(u - phi): (4/c) Lu + g'_sigma(u - phi)."""
    if Lu is None:
        Lu = kernel.apply(u_vals)
    return 4.0 / kernel.c_norm * Lu + g_sigma_prime(u_vals - phi_vals, params.sigma)

def penalized_energy(kernel: KernelTable, u: ScalarField, phi: ScalarField,
                     chi_omega: ScalarField, params: PenaltyParams) -> EnergyBreakdown:
    check_same_grid(kernel.grid, u, phi, chi_omega)
    return energy_values(kernel, u.values, phi.values, exterior_mask(chi_omega), params)

def penalized_gradient(kernel: KernelTable, u: ScalarField, phi: ScalarField,
                       chi_omega: ScalarField, params: PenaltyParams) -> ScalarField:
    """Exact gradient of penalized_energy with respect to the value vector.

    G_i = h^n [ (4/c) Lu_i + g'_sigma(u_i - phi_i) + f'_eps(V) h'_delta(u_i) chi_{Omega^c}(x_i) ]
    with V the measured h_delta volume and the kink conventions of the penalty module.
    """
    grid = check_same_grid(kernel.grid, u, phi, chi_omega)
    ext = exterior_mask(chi_omega)
    vals = u.values
    grad = smooth_gradient(kernel, vals, phi.values, params)
    V = h_volume(vals, ext, params, grid.cell_volume)
    slope = float(f_eps_prime(V, params.epsilon, params.gamma))
    grad = grad + slope * np.where(ext, h_delta_prime(vals, params.delta), 0.0)
    return ScalarField(grid, grad * grid.cell_volume)

def threshold_volume(u_vals, exterior, tau_pos: float, cell_volume: float) -> float:
    return float(np.count_nonzero((u_vals > tau_pos) & exterior)) * cell_volume

def limit_energy_J_eps(kernel: KernelTable, u: ScalarField, chi_omega: ScalarField,
                       epsilon: float, gamma: float, tau_pos: float) -> float:
    """J_h(u) + f_eps(|{u > tau_pos} \\ Omega|_h)."""
    grid = check_same_grid(kernel.grid, u, chi_omega)
    if tau_pos < 0:
        raise ValueError(f"tau_pos must be non-negative, got {tau_pos}")
    J = float(2.0 * kernel.energy_scale * np.dot(u.values, kernel.apply(u.values)))
    vol = threshold_volume(u.values, exterior_mask(chi_omega), tau_pos, grid.cell_volume)
    return J + float(f_eps(vol, epsilon, gamma))
