import os
from .. import ensure_output_dir, resolve_output_dir
from ..config import ScenarioConfig, save_metrics
from ..solver import continuation_solve
from .solve import EXIT_OK, EXIT_FLAGGED

def sweep(config: ScenarioConfig, problem, verbose: bool = False) -> list:
    """One continuation per epsilon in the grid, without early stopping."""
    trace = []
    for epsilon in config.schedule.epsilon_grid:
        _, report = continuation_solve(problem, config.schedule, config.solver, epsilon,
                                       verbose=verbose)
        if config.gamma > 0:
            error = abs(report.threshold_volume - config.gamma) / config.gamma
        else:
            error = report.threshold_volume
        trace.append({"epsilon": epsilon,
                      "threshold_volume": report.threshold_volume,
                      "h_volume": report.h_volume,
                      "error": error,
                      "energy": report.energy.total,
                      "iterations": report.iterations,
                      "converged": report.converged})
    return trace

def run_with(config: ScenarioConfig, name: str = "sweep", output_dir: str = None,
             verbose: bool = True) -> int:
    """Volume error against epsilon over the whole grid; writes <name>.sweep.yaml."""
    save_dir = ensure_output_dir(resolve_output_dir(output_dir, config.output_dir))
    problem = config.build_problem(verbose=verbose)
    trace = sweep(config, problem, verbose=verbose)

    errors = [t["error"] for t in trace]
    non_increasing = all(b <= a for a, b in zip(errors, errors[1:]))
    attained = [t["epsilon"] for t in trace if t["error"] <= config.vol_tol]
    report = {"gamma": config.gamma, "vol_tol": config.vol_tol, "trace": trace,
              "non_increasing": non_increasing,
              "first_qualifying_epsilon": attained[0] if attained else None}

    path = os.path.join(save_dir, f"{name}.sweep.yaml")
    save_metrics(report, path, kind="sweep-epsilon")
    if verbose:
        for t in trace:
            print(f"epsilon = {t['epsilon']:g}: volume {t['threshold_volume']:.6g}, "
                  f"error {t['error']:.3g}")
        print(f"Sweep saved to: {path}")
    ok = attained and config.gamma > 0 and all(t["converged"] for t in trace)
    return EXIT_OK if ok else EXIT_FLAGGED
