import numpy as np

from ..gridbox import ScalarField, check_same_grid
from ..geometry import DomainSpec
from .bounds import bounds_check, positivity_volume, boundary_proximity
from .holder import holder_seminorm, auto_stride
from .free_boundary import free_boundary_extract
from .growth import nondegeneracy_scan, density_check, default_radii
from .harnack import harnack_ratio
from ..functional import CONTACT_TOL

SECTIONS = ("bounds", "volume", "holder", "nondegeneracy", "density", "harnack",
            "free_boundary")

def diagnostics_summary(u: ScalarField, phi: ScalarField, chi_omega: ScalarField,
                        alpha: float, tau_pos: float, domain: DomainSpec = None,
                        radii=None, shrink: float = 0.25, stride: int = None,
                        contact_tol: float = CONTACT_TOL):
    """Run every diagnostic on a field.

    Returns (summary, rows): summary maps each of SECTIONS to a dict, rows
    holds one (coordinates, slope, min_density_pos, min_density_zero) tuple
    per free-boundary point. contact_tol separates the contact set from the
    Harnack region inside Omega.
    """
    grid = check_same_grid(u, phi, chi_omega)
    radii = default_radii(grid) if radii is None else radii
    stride = auto_stride(grid) if stride is None else stride

    extract = free_boundary_extract(u, tau_pos, domain)
    scan = nondegeneracy_scan(u, extract, radii, alpha, domain)
    density = density_check(u, extract, radii, tau_pos)
    try:
        harnack = harnack_ratio(u, phi, chi_omega, tau_pos, shrink, contact_tol).to_dict()
    except ValueError as err:
        harnack = {"ratio": None, "flagged": True, "error": str(err)}

    summary = {
        "bounds": bounds_check(u, phi),
        "volume": {"threshold_volume": positivity_volume(u, chi_omega, tau_pos),
                   "tau_pos": tau_pos,
                   "box_clearance": boundary_proximity(u, tau_pos)},
        "holder": {"optimal": holder_seminorm(u, alpha, stride).to_dict(),
                   "above_optimal": holder_seminorm(u, 0.5 * (alpha + 1.0), stride).to_dict(),
                   "stride": stride},
        "nondegeneracy": scan.to_dict(),
        "density": density.to_dict(),
        "harnack": harnack,
        "free_boundary": extract.to_dict(),
    }
    rows = [(tuple(float(c) for c in x), float(s), float(dp), float(dz))
            for x, s, dp, dz in zip(scan.points, scan.slopes,
                                    density.min_density_pos, density.min_density_zero)]
    return summary, rows
