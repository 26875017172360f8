import os
from .. import ensure_output_dir, resolve_output_dir
from ..config import ScenarioConfig, save_metrics
from ..kernel import constant_field_check, profile_check, symbol_check
from .solve import EXIT_OK, EXIT_FLAGGED

def run_with(config: ScenarioConfig, name: str = "kernel", output_dir: str = None,
             verbose: bool = True) -> int:
    """Constant-field, profile and Fourier-symbol checks of the discrete operator.

    The constant-field check runs on the scenario grid, the two refinement
    checks on their own 1D resolutions at the scenario's alpha.
    """
    save_dir = ensure_output_dir(resolve_output_dir(output_dir, config.output_dir))
    report = {"alpha": config.alpha,
              "constant_field": constant_field_check(config.grid, config.alpha),
              "profile": profile_check(config.alpha, verbose=verbose),
              "symbol": symbol_check(config.alpha, verbose=verbose)}
    passed = all(report[key]["passed"] for key in ("constant_field", "profile", "symbol"))
    report["passed"] = passed

    report_path = os.path.join(save_dir, f"{name}.kernel.yaml")
    save_metrics(report, report_path, kind="validate-kernel")
    if verbose:
        for key in ("constant_field", "profile", "symbol"):
            print(f"{key}: {'passed' if report[key]['passed'] else 'FAILED'}")
        print(f"Kernel report saved to: {report_path}")
    return EXIT_OK if passed else EXIT_FLAGGED
