import os
from .. import ensure_output_dir, resolve_output_dir, find_field
from ..config import ScenarioConfig, load_field, save_metrics, save_diagnostics_rows
from ..geometry import indicator_omega, sample_obstacle
from ..functional import default_tau_pos
from ..diagnostics import diagnostics_summary
from .solve import EXIT_OK, EXIT_FLAGGED

# a-priori bounds are accepted up to 10 grad_tol
BOUNDS_TOL_FACTOR = 10.0

def run_with(config: ScenarioConfig, field_path: str, name: str = None,
             output_dir: str = None, verbose: bool = True) -> int:
    """Diagnose a saved field; flags a field outside 0 <= u <= sup phi.

    field_path may also be the name of an earlier run, looked up as
    <name>.field.csv under the output folder.
    """
    if not os.path.exists(field_path):
        found = find_field(field_path, resolve_output_dir(output_dir, config.output_dir))
        if found is None:
            raise FileNotFoundError(f"no field file or run named {field_path!r}")
        field_path = found
    u = load_field(field_path, config.grid)
    phi = sample_obstacle(config.obstacle, config.grid, config.domain)
    chi = indicator_omega(config.domain, config.grid)
    summary, rows = diagnostics_summary(
        u, phi, chi, config.alpha, default_tau_pos(phi), domain=config.domain,
        radii=config.diagnostics.radii(config.grid),
        shrink=config.diagnostics.harnack_shrink,
        contact_tol=config.solver.contact_tol)

    if name is None:
        name = os.path.basename(field_path).split(".")[0]
    save_dir = ensure_output_dir(resolve_output_dir(output_dir, config.output_dir))
    summary_path = os.path.join(save_dir, f"{name}.summary.yaml")
    rows_path = os.path.join(save_dir, f"{name}.diagnostics.csv")
    save_metrics({"field": os.path.abspath(field_path), "summary": summary},
                 summary_path, kind="diagnose")
    save_diagnostics_rows(rows, config.grid.dimension, rows_path)

    bounds = summary["bounds"]
    tol = BOUNDS_TOL_FACTOR * config.solver.grad_tol
    flagged = bounds["lower_violation"] > tol or bounds["upper_violation"] > tol
    if verbose:
        print(f"Diagnostics summary saved to: {summary_path}")
        print(f"Boundary points saved to: {rows_path}")
    return EXIT_FLAGGED if flagged else EXIT_OK
