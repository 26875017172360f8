import warnings
import numpy as np
from dataclasses import dataclass, field
from typing import List

from ..gridbox import ScalarField, check_same_grid
from ..kernel import KernelTable
from ..penalty import PenaltyParams, g_sigma_second
from ..functional import (EnergyBreakdown, energy_values, exterior_mask,
                          smooth_gradient, stationarity)
from .line_search import (SolverError, snap_trial, directional_derivative, energy_change,
                          land_on_gamma, armijo_backtracking, MAX_BACKTRACKS)

BB_STEP_RANGE = (1e-2, 1e2)
CONTACT_TOL_FACTOR = 10.0

@dataclass(frozen=True)
class SolveConfig:
    grad_tol: float = 1e-4
    max_iters: int = 20000
    armijo_c1: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: str = "bb"
    clamp_safeguard: bool = True

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError(f"grad_tol must be positive, got {self.grad_tol}")
        if self.max_iters < 0:
            raise ValueError(f"max_iters must be non-negative, got {self.max_iters}")
        if not 0.0 < self.armijo_c1 < 1.0:
            raise ValueError(f"armijo_c1 must lie in (0, 1), got {self.armijo_c1}")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError(f"backtrack_factor must lie in (0, 1), got {self.backtrack_factor}")
        if self.initial_step not in ("bb", "unit"):
            raise ValueError(f"initial_step must be 'bb' or 'unit', got {self.initial_step!r}")

    @property
    def contact_tol(self) -> float:
        """Band around the contact set {u = phi} used to classify residual regions."""
        return CONTACT_TOL_FACTOR * self.grad_tol

    def to_dict(self) -> dict:
        return {"grad_tol": self.grad_tol, "max_iters": self.max_iters,
                "armijo_c1": self.armijo_c1, "backtrack_factor": self.backtrack_factor,
                "initial_step": self.initial_step, "clamp_safeguard": self.clamp_safeguard}


@dataclass
class MinimizeReport:
    params: PenaltyParams
    initial_energy: EnergyBreakdown
    energy: EnergyBreakdown
    iterations: int = 0
    gradient_norm: float = 0.0
    converged: bool = False
    stalled: bool = False
    backtracks: int = 0
    clip_magnitude: float = 0.0
    energy_trace: List[float] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(),
                "initial_energy": self.initial_energy.to_dict(),
                "energy": self.energy.to_dict(),
                "iterations": self.iterations,
                "gradient_norm": self.gradient_norm,
                "converged": self.converged,
                "stalled": self.stalled,
                "backtracks": self.backtracks,
                "clip_magnitude": self.clip_magnitude,
                "warnings": list(self.warnings)}


def _warn(report: MinimizeReport, message: str):
    report.warnings.append(message)
    warnings.warn(message)

def jacobi_diagonal(kernel: KernelTable, u, phi, params: PenaltyParams) -> np.ndarray:
    """Per-cell diagonal of the Hessian of J + int g_sigma."""
    return 4.0 / kernel.c_norm * kernel.diagonal + g_sigma_second(u - phi, params.sigma)

def _bb_step(s, y, precond) -> float:
    sy = float(np.dot(s, y))
    if sy <= 0.0:
        return 1.0
    return float(np.clip(np.dot(s, precond * s) / sy, *BB_STEP_RANGE))

def minimize_fixed_params(kernel: KernelTable, u0: ScalarField, phi: ScalarField,
                          chi_omega: ScalarField, params: PenaltyParams,
                          config: SolveConfig = SolveConfig(), verbose: bool = False):
    """Minimize I_{sigma,delta,eps} at fixed parameters from u0.

    Jacobi-scaled steepest descent on the one-sided stationarity residual
    with a Barzilai-Borwein initial step and Armijo backtracking. Steps stop
    at the kink u = 0 outside Omega and land on V = gamma when they cross it.
    Returns (u, MinimizeReport).
    """
    grid = check_same_grid(kernel.grid, u0, phi, chi_omega)
    hn = grid.cell_volume
    ext = exterior_mask(chi_omega)
    phiv = phi.values
    u = np.array(u0.values, dtype=float)

    Lu = kernel.apply(u)
    energy = energy_values(kernel, u, phiv, ext, params, Lu=Lu)
    if not np.isfinite(energy.total):
        raise SolverError(f"initial energy is not finite: {energy}")
    report = MinimizeReport(params=params, initial_energy=energy, energy=energy,
                            energy_trace=[energy.total])

    prev_u = prev_r = None
    for it in range(config.max_iters + 1):
        precond = jacobi_diagonal(kernel, u, phiv, params)
        stat = stationarity(kernel, u, phiv, ext, params, Lu=Lu, precond=precond)
        report.gradient_norm = stat.norm
        if stat.norm <= config.grad_tol:
            report.converged = True
            break
        if it == config.max_iters:
            break

        a = smooth_gradient(kernel, u, phiv, params, Lu=Lu)
        d = -stat.residual / precond
        pred = directional_derivative(a, d, u, ext, params, stat.h_volume, hn)
        if pred >= 0.0:
            # kink cells can spoil descent when the volume sits on gamma
            kinks = ext & ((u == 0.0) | (u == params.delta))
            d[kinks] = 0.0
            pred = directional_derivative(a, d, u, ext, params, stat.h_volume, hn)
        if pred >= 0.0:
            report.stalled = True
            _warn(report, f"no descent direction at iteration {it} "
                          f"(stationarity {stat.norm:.3g}, params {params})")
            break

        t0 = 1.0
        if config.initial_step == "bb" and prev_u is not None:
            t0 = _bb_step(u - prev_u, stat.residual - prev_r, precond)
        t0 = land_on_gamma(u, d, t0, ext, params, hn)

        t, x, dI, L_step, backtracks = armijo_backtracking(
            lambda x: energy_change(kernel, u, Lu, x, phiv, ext, params),
            lambda t: snap_trial(u, d, t, ext),
            t0, pred, c1=config.armijo_c1, factor=config.backtrack_factor,
            max_backtracks=MAX_BACKTRACKS)

        prev_u, prev_r = u, stat.residual
        u = x
        Lu = kernel.apply(u)
        report.iterations = it + 1
        report.backtracks += backtracks
        report.energy_trace.append(report.energy_trace[-1] + dI)

    if not report.converged and not report.stalled:
        _warn(report, f"not converged after {config.max_iters} iterations "
                      f"(stationarity {report.gradient_norm:.3g} > {config.grad_tol:g})")

    if config.clamp_safeguard:
        clipped = np.clip(u, 0.0, phi.sup_norm)
        report.clip_magnitude = float(np.max(np.abs(clipped - u)))
        if report.clip_magnitude > 10.0 * config.grad_tol:
            _warn(report, f"clamp safeguard moved the field by {report.clip_magnitude:.3g}")
        if report.clip_magnitude > 0.0:
            u = clipped
            Lu = kernel.apply(u)

    report.energy = energy_values(kernel, u, phiv, ext, params, Lu=Lu)
    if not np.isfinite(report.energy.total):
        raise SolverError(f"final energy is not finite: {report.energy}")
    if verbose:
        state = "converged" if report.converged else "stopped"
        print(f"{state} at {params}: {report.iterations} iterations, "
              f"stationarity {report.gradient_norm:.3g}, energy {report.energy.total:.10g}")
    return ScalarField(grid, u), report
