"""Euler-Lagrange residuals, the variational inequality and admissibility.

Residuals are reported in per-cell gradient units s = (4/c) (-Delta)^alpha_h u,
the units of the solver's grad_tol. The first variation of the energy gives
s = -g'_sigma(u - phi) - f'_eps(V) h'_delta(u) chi_{Omega^c}, so a solution has
s >= 0 in Omega (equality off the contact set), s = 0 on {u > delta} \\ Omega
and s <= 0 on Omega^c. Each residual is the sup-norm of the violated part.
"""
import numpy as np
from dataclasses import dataclass, field

from ..gridbox import ScalarField, check_same_grid
from ..geometry import ObstacleSpec
from ..kernel import KernelTable, dirichlet_pairing, gagliardo_energy
from ..penalty import (PenaltyParams, h_delta_prime_right, h_delta_prime_left,
                       f_eps_prime)
from .penalized import exterior_mask, default_tau_pos, h_volume, threshold_volume
from .stationarity import stationarity, volume_on_kink

STAGES = ("sigma-delta", "delta", "limit")

# band around the contact set {u = phi} for the default grad_tol; solver runs
# pass SolveConfig.contact_tol
CONTACT_TOL = 1e-3

def _sup(values) -> float:
    return float(np.max(values)) if np.size(values) else 0.0

@dataclass(frozen=True)
class ResidualReport:
    stage: str
    residuals: dict
    monitored: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> dict:
        return {"stage": self.stage,
                "residuals": dict(self.residuals),
                "monitored": dict(self.monitored)}


def el_residual(kernel: KernelTable, u: ScalarField, phi: ScalarField,
                chi_omega: ScalarField, params: PenaltyParams, stage: str,
                tol: float = CONTACT_TOL, tau_pos: float = None) -> ResidualReport:
    """Sup-norm residuals of the Euler-Lagrange system for one continuation stage.

    sigma-delta: one-sided stationarity of the full penalized energy.
    delta:       s + f'_eps(V) h'_delta(u) chi_{Omega^c} = 0 on {u > phi + tol},
                 s >= 0 on the contact set in Omega (band min and max monitored).
    limit:       s >= 0 in Omega with equality on {u > phi + tol};
                 s = 0 on {u > tau_pos} \\ Omega outside the layer {u <= delta};
                 s <= 0 on Omega^c. The layer residual is monitored separately.
    """
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}, expected one of {STAGES}")
    grid = check_same_grid(kernel.grid, u, phi, chi_omega)
    if tau_pos is None:
        tau_pos = default_tau_pos(phi)

    vals, phiv = u.values, phi.values
    ext = exterior_mask(chi_omega)
    omega = ~ext
    Lu = kernel.apply(vals)
    s = 4.0 / kernel.c_norm * Lu
    hn = grid.cell_volume
    monitored = {"contact_tol": tol,
                 "h_volume": h_volume(vals, ext, params, hn),
                 "threshold_volume": threshold_volume(vals, ext, tau_pos, hn)}

    if stage == "sigma-delta":
        stat = stationarity(kernel, vals, phiv, ext, params, Lu=Lu)
        monitored["volume_slope"] = stat.volume_slope
        return ResidualReport(stage, {"euler_lagrange": stat.norm}, monitored)

    free = vals > phiv + tol
    contact = omega & ~free

    if stage == "delta":
        stat = stationarity(kernel, vals, phiv, ext, params, Lu=Lu)
        slope = stat.volume_slope
        ramp = ext & (vals > 0.0) & (vals < params.delta)
        equation = s + np.where(ramp, slope / params.delta, 0.0)
        region = free & ~(ext & (vals == params.delta))
        monitored.update({
            "volume_slope": slope,
            "contact_band_min": float(np.min(s[contact])) if np.any(contact) else 0.0,
            "contact_band_max": _sup(s[contact]),
            "inverse_eps_delta": 1.0 / (params.epsilon * params.delta),
        })
        return ResidualReport(stage, {
            "equation": _sup(np.abs(equation[region])),
            "contact_sign": _sup(np.clip(-s[contact], 0.0, None)),
        }, monitored)

    positive = ext & (vals > tau_pos)
    layer = positive & (vals <= params.delta)
    core = positive & ~layer
    omega_equality = _sup(np.abs(s[omega & free]))
    omega_sign = _sup(np.clip(-s[omega], 0.0, None))
    monitored.update({"omega_equality": omega_equality,
                      "omega_sign": omega_sign,
                      "transition_layer": _sup(np.abs(s[layer])),
                      "layer_cells": int(np.count_nonzero(layer))})
    return ResidualReport(stage, {
        "omega": max(omega_equality, omega_sign),
        "positive_exterior": _sup(np.abs(s[core])),
        "exterior": _sup(np.clip(s[ext], 0.0, None)),
    }, monitored)

def variational_inequality_check(kernel: KernelTable, u_de: ScalarField, w: ScalarField,
                                 phi: ScalarField, chi_omega: ScalarField,
                                 params: PenaltyParams) -> float:
    """Discrete left-hand side of the variational inequality at u = u_de.

    2 J_h(w) - 2 B(w, u) + f'_eps(V(u); dV) with dV = h^n sum_{Omega^c} h'_delta(u; w - u) (w - u),
    where one-sided derivatives follow the direction w - u. Non-negative for
    every w >= phi when u is a stationary point of the delta stage.
    """
    grid = check_same_grid(kernel.grid, u_de, w, phi, chi_omega)
    if np.any(w.values < phi.values):
        raise ValueError(f"test field must satisfy w >= phi, violated by "
                         f"{float(np.max(phi.values - w.values)):.3g}")
    ext = exterior_mask(chi_omega)
    u, step = u_de.values, w.values - u_de.values
    slope_h = np.where(step > 0.0, h_delta_prime_right(u, params.delta),
                       h_delta_prime_left(u, params.delta))
    dV = float(np.sum((slope_h * step)[ext])) * grid.cell_volume
    V = h_volume(u, ext, params, grid.cell_volume)
    if volume_on_kink(V, params, grid.cell_volume):
        slope_f = 1.0 / params.epsilon if dV > 0.0 else params.epsilon
    else:
        slope_f = float(f_eps_prime(V, params.epsilon, params.gamma))
    return (2.0 * gagliardo_energy(kernel, w) - 2.0 * dirichlet_pairing(kernel, u_de, w)
            + slope_f * dV)

def admissible_test_fields(u: ScalarField, phi: ScalarField, count: int = 10,
                           seed: int = 0) -> list:
    """Seeded fields w = max(phi, u +/- a * bump) with random smooth bumps inside the box."""
    grid = check_same_grid(u, phi)
    rng = np.random.default_rng(seed)
    pts = grid.points()
    scale = max(phi.sup_norm, u.sup_norm, 1e-12)
    fields = []
    for _ in range(count):
        radius = rng.uniform(0.1, 0.5) * grid.half_width
        center = rng.uniform(-1.0, 1.0, grid.dimension) * (grid.half_width - radius)
        bump = ObstacleSpec(rng.uniform(0.01, 0.1) * scale, center, radius).evaluate(pts)
        sign = rng.choice((-1.0, 1.0))
        fields.append(u.with_values(np.maximum(phi.values, u.values + sign * bump)))
    return fields

def variational_inequality_scan(kernel: KernelTable, u_de: ScalarField, phi: ScalarField,
                                chi_omega: ScalarField, params: PenaltyParams,
                                count: int = 10, seed: int = 0, tol: float = 5e-3) -> dict:
    values = [variational_inequality_check(kernel, u_de, w, phi, chi_omega, params)
              for w in admissible_test_fields(u_de, phi, count, seed)]
    return {"count": count, "seed": seed, "values": values,
            "min": float(min(values)), "passed": bool(min(values) >= -tol)}

def admissibility_check(kernel: KernelTable, u: ScalarField, phi: ScalarField,
                        chi_omega: ScalarField, gamma: float,
                        tau_pos: float = None) -> dict:
    """The four membership conditions of the constrained problem, as violations."""
    grid = check_same_grid(kernel.grid, u, phi, chi_omega)
    if tau_pos is None:
        tau_pos = default_tau_pos(phi)
    vals = u.values
    ext = exterior_mask(chi_omega)
    s = 4.0 / kernel.c_norm * kernel.apply(vals)
    volume = threshold_volume(vals, ext, tau_pos, grid.cell_volume)
    return {"obstacle_violation": _sup(np.clip(phi.values - vals, 0.0, None)),
            "omega_sign_violation": _sup(np.clip(-s[~ext], 0.0, None)),
            "exterior_harmonic_residual": _sup(np.abs(s[ext & (vals > tau_pos)])),
            "volume_gap": volume - gamma}
