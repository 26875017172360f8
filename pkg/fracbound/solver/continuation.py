import time
import warnings
import numpy as np
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
from tqdm import tqdm

from ..gridbox import ScalarField, check_same_grid
from ..geometry import DomainSpec, exterior_measure
from ..kernel import KernelTable, gagliardo_energy
from ..penalty import PenaltyParams, g_sigma_prime
from ..functional import (EnergyBreakdown, energy_values, exterior_mask, default_tau_pos,
                          threshold_volume, el_residual)
from ..diagnostics import holder_trace, auto_stride, boundary_proximity
from .minimize import SolveConfig, MinimizeReport, minimize_fixed_params

DELTA_RESOLUTION_FACTOR = 0.1 # delta_min >= 0.1 h^alpha

def _geometric(start: float, ratio: float, stop: float) -> List[float]:
    values = [start]
    while values[-1] * ratio >= stop * (1.0 - 1e-12):
        values.append(values[-1] * ratio)
    if values[-1] > stop * (1.0 + 1e-12):
        values.append(stop)
    return values

@dataclass(frozen=True)
class ContinuationSchedule:
    sigma0: float = 0.1
    delta0: float = 0.1
    rho: float = 0.5
    sigma_min: float = 1e-3
    delta_min: float = 1e-3
    epsilon_grid: Tuple[float, ...] = (0.1,)

    def __post_init__(self):
        object.__setattr__(self, "epsilon_grid", tuple(float(e) for e in self.epsilon_grid))
        for name in ("sigma0", "delta0", "rho", "sigma_min", "delta_min"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if self.sigma_min > self.sigma0:
            raise ValueError(f"sigma_min = {self.sigma_min} exceeds sigma0 = {self.sigma0}")
        if self.delta_min > self.delta0:
            raise ValueError(f"delta_min = {self.delta_min} exceeds delta0 = {self.delta0}")
        if not self.epsilon_grid:
            raise ValueError("epsilon_grid must not be empty")
        if not all(0.0 < e < 1.0 for e in self.epsilon_grid):
            raise ValueError(f"epsilon_grid entries must lie in (0, 1), got {self.epsilon_grid}")
        if any(b >= a for a, b in zip(self.epsilon_grid, self.epsilon_grid[1:])):
            raise ValueError(f"epsilon_grid must be strictly decreasing, got {self.epsilon_grid}")

    def sigma_sequence(self) -> List[float]:
        return _geometric(self.sigma0, self.rho, self.sigma_min)

    def delta_sequence(self, delta_floor: float = 0.0) -> List[float]:
        """delta0, delta0 rho, ... down to max(delta_min, delta_floor)."""
        stop = max(self.delta_min, delta_floor)
        if stop >= self.delta0:
            return [self.delta0]
        return _geometric(self.delta0, self.rho, stop)

    def to_dict(self) -> dict:
        return {"sigma0": self.sigma0, "delta0": self.delta0, "rho": self.rho,
                "sigma_min": self.sigma_min, "delta_min": self.delta_min,
                "epsilon_grid": list(self.epsilon_grid)}


@dataclass
class Problem:
    """Everything fixed across a continuation: operator, obstacle, Omega and gamma."""
    kernel: KernelTable
    phi: ScalarField
    chi_omega: ScalarField
    gamma: float
    allow_zero_gamma: bool = False
    domain: Optional[DomainSpec] = None

    def __post_init__(self):
        check_same_grid(self.kernel.grid, self.phi, self.chi_omega)

    @property
    def grid(self):
        return self.kernel.grid

    @property
    def tau_pos(self) -> float:
        return default_tau_pos(self.phi)

    def params(self, sigma, delta, epsilon) -> PenaltyParams:
        return PenaltyParams(sigma, delta, epsilon, self.gamma,
                             allow_zero_gamma=self.allow_zero_gamma)

    def validate(self):
        self.params(0.5, 0.5, 0.5).check_reachable(exterior_measure(self.chi_omega))


@dataclass
class StageRecord:
    stage: str
    minimize: MinimizeReport
    obstacle_violation: float
    sup_g_prime: float
    bound_ratio: float
    threshold_volume: float
    sup_change: float
    restarted: bool = False
    holder: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"stage": self.stage}
        out.update(self.minimize.to_dict())
        out.update({"obstacle_violation": self.obstacle_violation,
                    "sup_g_prime": self.sup_g_prime,
                    "bound_ratio": self.bound_ratio,
                    "threshold_volume": self.threshold_volume,
                    "sup_change": self.sup_change,
                    "restarted": self.restarted})
        if self.holder is not None:
            out["holder"] = self.holder
        return out


@dataclass
class SolveReport:
    epsilon: float
    energy_ceiling: float
    delta_min_effective: float
    stages: List[StageRecord] = field(default_factory=list)
    energy: Optional[EnergyBreakdown] = None
    threshold_volume: float = 0.0
    h_volume: float = 0.0
    residuals: Dict[str, dict] = field(default_factory=dict)
    diagnostics: Dict[str, dict] = field(default_factory=dict)
    volume_tuning: Optional[dict] = None
    warnings: List[str] = field(default_factory=list)
    kernel_seconds: float = 0.0
    kernel_memory_bytes: int = 0
    solve_seconds: float = 0.0

    @property
    def iterations(self) -> int:
        return sum(s.minimize.iterations for s in self.stages)

    @property
    def gradient_norm(self) -> float:
        return self.stages[-1].minimize.gradient_norm if self.stages else 0.0

    @property
    def converged(self) -> bool:
        return all(s.minimize.converged for s in self.stages)

    @property
    def flagged(self) -> bool:
        tuning_failed = self.volume_tuning is not None and not self.volume_tuning["qualified"]
        return not self.converged or tuning_failed

    def sigma_trace(self, key: str) -> List[float]:
        return [getattr(s, key) for s in self.stages if s.stage == "sigma"]

    def warn(self, message: str):
        self.warnings.append(message)
        warnings.warn(message)

    def to_dict(self) -> dict:
        out = {"epsilon": self.epsilon,
               "converged": self.converged,
               "flagged": self.flagged,
               "iterations": self.iterations,
               "gradient_norm": self.gradient_norm,
               "energy": self.energy.to_dict() if self.energy else None,
               "energy_ceiling": self.energy_ceiling,
               "threshold_volume": self.threshold_volume,
               "h_volume": self.h_volume,
               "delta_min_effective": self.delta_min_effective,
               "stages": [s.to_dict() for s in self.stages],
               "residuals": self.residuals}
        if self.volume_tuning is not None:
            out["volume_tuning"] = self.volume_tuning
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        out["warnings"] = list(self.warnings)
        return out

    def timing_dict(self) -> dict:
        return {"kernel_precompute_seconds": self.kernel_seconds,
                "kernel_memory_bytes": self.kernel_memory_bytes,
                "solve_seconds": self.solve_seconds}


def sigma_stage_exponent(alpha: float) -> float:
    """Hoelder exponent tracked along the sigma steps: 1.5 alpha (< 2 alpha) or 1."""
    return 1.5 * alpha if alpha <= 0.5 else 1.0

def continuation_solve(problem: Problem, schedule: ContinuationSchedule,
                       config: SolveConfig = SolveConfig(), epsilon: float = None,
                       verbose: bool = False):
    """Warm-started sweep sigma -> sigma_min at delta0, then delta -> delta_min.

    Returns (u_eps, SolveReport). A warm start whose energy exceeds J_h(phi)
    under the new parameters is replaced by phi.
    """
    start = time.perf_counter()
    problem.validate()
    kernel, phi, chi = problem.kernel, problem.phi, problem.chi_omega
    grid = problem.grid
    epsilon = schedule.epsilon_grid[0] if epsilon is None else epsilon
    ext = exterior_mask(chi)
    tau = problem.tau_pos
    hn = grid.cell_volume

    delta_floor = DELTA_RESOLUTION_FACTOR * grid.spacing ** kernel.alpha
    delta_seq = schedule.delta_sequence(delta_floor)
    report = SolveReport(epsilon=epsilon,
                         energy_ceiling=gagliardo_energy(kernel, phi),
                         delta_min_effective=delta_seq[-1],
                         kernel_seconds=kernel.precompute_seconds,
                         kernel_memory_bytes=kernel.memory_bytes)
    if schedule.delta_min < delta_floor:
        report.warn(f"delta_min = {schedule.delta_min:g} is below the grid resolution, "
                    f"using {delta_seq[-1]:.4g}")

    sigma_seq = schedule.sigma_sequence()
    steps = [("sigma", sigma, schedule.delta0) for sigma in sigma_seq]
    steps += [("delta", sigma_seq[-1], delta) for delta in delta_seq[1:]]
    lam = sigma_stage_exponent(kernel.alpha)
    stride = auto_stride(grid)

    u = phi
    sigma_fields = []
    for k, (stage, sigma, delta) in enumerate(tqdm(steps, desc="continuation",
                                                   disable=not verbose)):
        params = problem.params(sigma, delta, epsilon)
        restarted = False
        warm = energy_values(kernel, u.values, phi.values, ext, params)
        if warm.total > report.energy_ceiling:
            u, restarted = phi, True
        previous = u
        u, rep = minimize_fixed_params(kernel, u, phi, chi, params, config)
        for message in rep.warnings:
            report.warnings.append(message)

        vals = u.values
        sup_g = float(np.max(np.abs(g_sigma_prime(vals - phi.values, sigma))))
        record = StageRecord(
            stage=stage, minimize=rep,
            obstacle_violation=float(np.max(np.clip(phi.values - vals, 0.0, None))),
            sup_g_prime=sup_g,
            bound_ratio=sup_g * epsilon * delta,
            threshold_volume=threshold_volume(vals, ext, tau, hn),
            sup_change=float(np.max(np.abs(vals - previous.values))),
            restarted=restarted)
        if stage == "sigma":
            sigma_fields.append(u)
        report.stages.append(record)

        if k == len(sigma_seq) - 1:
            report.residuals["sigma-delta"] = el_residual(
                kernel, u, phi, chi, params, "sigma-delta", tol=config.contact_tol,
                tau_pos=tau).to_dict()

    for record, est in zip(report.stages, holder_trace(sigma_fields, lam, stride)):
        record.holder = {"lambda": est.lam, "seminorm": est.seminorm}

    final = report.stages[-1].minimize.params
    report.energy = energy_values(kernel, u.values, phi.values, ext, final)
    report.threshold_volume = threshold_volume(u.values, ext, tau, hn)
    report.h_volume = report.energy.measured_h_volume
    for stage in ("delta", "limit"):
        report.residuals[stage] = el_residual(kernel, u, phi, chi, final, stage,
                                              tol=config.contact_tol, tau_pos=tau).to_dict()
    if boundary_proximity(u, tau) < 2.0 * grid.spacing:
        report.warn("positivity set comes within 2h of the computational box; "
                    "increase the half width")
    if not report.converged:
        report.warn("continuation finished with unconverged stages")
    report.solve_seconds = time.perf_counter() - start
    if verbose:
        print(f"epsilon = {epsilon:g}: {report.iterations} iterations, "
              f"volume {report.threshold_volume:.6g} (target {problem.gamma:g}), "
              f"energy {report.energy.total:.10g}")
    return u, report

def volume_tune_epsilon(problem: Problem, schedule: ContinuationSchedule,
                        config: SolveConfig = SolveConfig(), vol_tol: float = 0.05,
                        verbose: bool = False):
    """Scan the epsilon grid downwards and return the first epsilon whose
    threshold volume is within vol_tol * gamma of gamma.

    Returns (epsilon_star, u, report). When no epsilon qualifies the run with
    the smallest volume error is returned and the report is flagged. With
    gamma = 0 the error is absolute and the result is always flagged.
    """
    if not vol_tol > 0:
        raise ValueError(f"vol_tol must be positive, got {vol_tol}")
    trace, best = [], None
    for epsilon in schedule.epsilon_grid:
        u, report = continuation_solve(problem, schedule, config, epsilon, verbose=verbose)
        if problem.gamma > 0:
            error = abs(report.threshold_volume - problem.gamma) / problem.gamma
        else:
            error = report.threshold_volume
        trace.append({"epsilon": epsilon, "volume": report.threshold_volume,
                      "error": error, "converged": report.converged})
        if best is None or error < best[2]:
            best = (epsilon, u, error, report)
        if error <= vol_tol:
            best = (epsilon, u, error, report)
            break

    epsilon, u, error, report = best
    qualified = error <= vol_tol and problem.gamma > 0
    report.volume_tuning = {"vol_tol": vol_tol, "selected_epsilon": epsilon,
                            "error": error, "qualified": qualified,
                            "absolute_error": problem.gamma == 0, "trace": trace}
    if problem.gamma == 0:
        report.warn("gamma = 0 is degenerate; volume error measured in absolute terms")
    elif not qualified:
        report.warn(f"no epsilon in {list(schedule.epsilon_grid)} attains the volume "
                    f"within {vol_tol:g}; best error {error:.3g} at epsilon = {epsilon:g}")
    return epsilon, u, report
