import os
from .. import ensure_output_dir, resolve_output_dir
from ..config import (ScenarioConfig, save_field, save_metrics, save_timing,
                      save_diagnostics_rows)
from ..functional import variational_inequality_scan, admissibility_check
from ..diagnostics import diagnostics_summary
from ..solver import volume_tune_epsilon

EXIT_OK, EXIT_ERROR, EXIT_FLAGGED = 0, 1, 2

# the variational inequality is checked against 50 grad_tol
VI_TOL_FACTOR = 50.0

def attach_diagnostics(config: ScenarioConfig, problem, u, report):
    """Run the diagnostics summary on a solver output and store it in the report."""
    summary, rows = diagnostics_summary(
        u, problem.phi, problem.chi_omega, config.alpha, problem.tau_pos,
        domain=config.domain, radii=config.diagnostics.radii(config.grid),
        shrink=config.diagnostics.harnack_shrink,
        contact_tol=config.solver.contact_tol)
    final = report.stages[-1].minimize.params
    summary["variational_inequality"] = variational_inequality_scan(
        problem.kernel, u, problem.phi, problem.chi_omega, final, seed=config.seed,
        tol=VI_TOL_FACTOR * config.solver.grad_tol)
    summary["admissibility"] = admissibility_check(
        problem.kernel, u, problem.phi, problem.chi_omega, config.gamma, problem.tau_pos)
    report.diagnostics = summary
    return rows

def run_with(config: ScenarioConfig, name: str = "solve", output_dir: str = None,
             verbose: bool = True) -> int:
    """Solve a scenario and write <name>.field.csv and <name>.metrics.yaml.

    The epsilon grid is always scanned through volume_tune_epsilon; with a
    single entry this is one continuation plus the volume check. Returns 0
    when every stage converged with the volume within tolerance, 2 otherwise.
    """
    save_dir = ensure_output_dir(resolve_output_dir(output_dir, config.output_dir))
    problem = config.build_problem(verbose=verbose)
    epsilon, u, report = volume_tune_epsilon(problem, config.schedule, config.solver,
                                             config.vol_tol, verbose=verbose)

    rows = attach_diagnostics(config, problem, u, report) if config.diagnostics.enabled else None

    field_path = os.path.join(save_dir, f"{name}.field.csv")
    metrics_path = os.path.join(save_dir, f"{name}.metrics.yaml")
    save_field(u, field_path)
    save_metrics({"config": config.to_dict(), "result": report.to_dict()},
                 metrics_path, kind="solve")
    save_timing(report.timing_dict(), metrics_path)
    if rows is not None:
        save_diagnostics_rows(rows, config.grid.dimension,
                              os.path.join(save_dir, f"{name}.diagnostics.csv"))

    if verbose:
        print(f"Field saved to: {field_path}")
        print(f"Metrics saved to: {metrics_path}")
        print(f"epsilon = {epsilon:g}, converged = {report.converged}, "
              f"flagged = {report.flagged}")
    return EXIT_FLAGGED if report.flagged else EXIT_OK
