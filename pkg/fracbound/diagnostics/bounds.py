import numpy as np

from ..gridbox import ScalarField, check_same_grid

def bounds_check(u: ScalarField, phi: ScalarField) -> dict:
    """Compare u with the a-priori range 0 <= u <= sup phi."""
    check_same_grid(u, phi)
    vals = u.values
    return {"min": float(np.min(vals)),
            "max": float(np.max(vals)),
            "lower_violation": float(max(0.0, -np.min(vals))),
            "upper_violation": float(max(0.0, np.max(vals) - phi.sup_norm))}

def positivity_volume(u: ScalarField, chi_omega: ScalarField, tau_pos: float) -> float:
    """|{u > tau_pos} \\ Omega|_h, counted in cells."""
    grid = check_same_grid(u, chi_omega)
    if tau_pos < 0:
        raise ValueError(f"tau_pos must be non-negative, got {tau_pos}")
    outside = chi_omega.values == 0.0
    return float(np.count_nonzero((u.values > tau_pos) & outside)) * grid.cell_volume

def boundary_proximity(u: ScalarField, tau_pos: float) -> float:
    """Distance from {u > tau_pos} to the edge of the computational box."""
    grid = u.grid
    positive = u.values > tau_pos
    if not np.any(positive):
        return np.inf
    reach = np.max(np.abs(grid.points()[positive]))
    return float(grid.half_width - reach)
