"""Growth of u away from its free boundary: fitted log-log slope of
sup_{B_r} u and the densities of the positive and zero sets in B_r."""
import numpy as np
from dataclasses import dataclass
from shapely.geometry import Point

from ..gridbox import ScalarField, ball_indices
from ..geometry import DomainSpec
from .free_boundary import FreeBoundaryExtract

DEFAULT_RADII_CELLS = (3, 4, 6, 8, 12, 16)

def default_radii(grid, cells=DEFAULT_RADII_CELLS):
    return [k * grid.spacing for k in cells]

def _admissible_distance(grid, points: np.ndarray, domain: DomainSpec = None) -> np.ndarray:
    """Distance to the nearest of the box edge and the boundary of Omega."""
    dist = grid.half_width - np.max(np.abs(points), axis=1)
    if domain is not None:
        geom = domain.to_geometry().boundary
        to_omega = np.array([geom.distance(Point(p[0], p[1] if len(p) > 1 else 0.0))
                             for p in points])
        dist = np.minimum(dist, to_omega)
    return dist

@dataclass
class NondegeneracyScan:
    points: np.ndarray
    slopes: np.ndarray
    min_ratio: np.ndarray
    radii_used: np.ndarray
    regions: np.ndarray

    @property
    def flagged(self) -> np.ndarray:
        return ~np.isfinite(self.slopes)

    @property
    def median_slope(self) -> float:
        finite = self.slopes[np.isfinite(self.slopes)]
        return float(np.median(finite)) if finite.size else float("nan")

    def to_dict(self) -> dict:
        out = {"points": int(len(self.points)),
               "median_slope": self.median_slope,
               "flagged_points": int(np.count_nonzero(self.flagged))}
        finite = self.min_ratio[np.isfinite(self.min_ratio)]
        out["min_ratio"] = float(np.min(finite)) if finite.size else float("nan")
        fitted = self.radii_used[~self.flagged]
        out["min_radii_used"] = int(np.min(fitted)) if fitted.size else 0
        for region in ("interior", "exterior"):
            mask = (self.regions == region) & np.isfinite(self.slopes)
            if np.any(mask):
                out[f"{region}_median_slope"] = float(np.median(self.slopes[mask]))
        return out


def nondegeneracy_scan(u: ScalarField, boundary: FreeBoundaryExtract, radii, alpha: float,
                       domain: DomainSpec = None) -> NondegeneracyScan:
    """Least-squares slope of log sup_{B_r(x0)} u against log r at each boundary point.

    Only radii in (2h, d/2) enter the fit, d being the distance from x0 to the
    nearest of the box edge and the boundary of Omega; points with fewer than
    three such radii, or with sup u <= 0 on some ball, get slope NaN.
    """
    radii = np.asarray(sorted(radii), dtype=float)
    if len(radii) < 3:
        raise ValueError(f"at least 3 radii are needed for a slope fit, got {len(radii)}")
    grid = u.grid
    h = grid.spacing
    pts = grid.points()[boundary.boundary_points]
    dist = _admissible_distance(grid, pts, domain)
    regions = boundary.regions if boundary.regions is not None \
        else np.full(len(pts), "unlabelled")

    slopes = np.full(len(pts), np.nan)
    min_ratio = np.full(len(pts), np.nan)
    used = np.zeros(len(pts), dtype=int)
    for k, (x0, d) in enumerate(zip(pts, dist)):
        rs = radii[(radii > 2 * h) & (radii < 0.5 * d)]
        used[k] = len(rs)
        if len(rs) < 3:
            continue
        sups = np.array([np.max(u.values[ball_indices(grid, x0, r)]) for r in rs])
        if np.any(sups <= 0.0):
            continue
        slopes[k] = np.polyfit(np.log(rs), np.log(sups), 1)[0]
        min_ratio[k] = float(np.min(sups / rs ** alpha))
    return NondegeneracyScan(points=pts, slopes=slopes, min_ratio=min_ratio,
                             radii_used=used, regions=regions)


@dataclass
class DensityScan:
    points: np.ndarray
    min_density_pos: np.ndarray
    min_density_zero: np.ndarray

    @property
    def flagged(self) -> np.ndarray:
        return (self.min_density_pos <= 0.0) | (self.min_density_zero <= 0.0)

    def to_dict(self) -> dict:
        def lowest(values):
            return float(np.min(values)) if values.size else float("nan")
        return {"points": int(len(self.points)),
                "min_density_pos": lowest(self.min_density_pos),
                "min_density_zero": lowest(self.min_density_zero),
                "flagged_points": int(np.count_nonzero(self.flagged))}


def density_check(u: ScalarField, boundary: FreeBoundaryExtract, radii,
                  tau_pos: float) -> DensityScan:
    """min over r of |{u > tau} cap B_r| / r^n and |{u <= tau} cap B_r| / r^n per boundary point."""
    grid = u.grid
    radii = np.asarray(radii, dtype=float)
    if np.any(radii < 3 * grid.spacing * (1.0 - 1e-12)):
        raise ValueError(f"density radii must be >= 3h = {3 * grid.spacing:.4g}")
    pts = grid.points()[boundary.boundary_points]
    positive = u.values > tau_pos
    n, hn = grid.dimension, grid.cell_volume
    dens_pos = np.full(len(pts), np.inf)
    dens_zero = np.full(len(pts), np.inf)
    for k, x0 in enumerate(pts):
        for r in radii:
            idx = ball_indices(grid, x0, r)
            inside = np.count_nonzero(positive[idx])
            dens_pos[k] = min(dens_pos[k], inside * hn / r ** n)
            dens_zero[k] = min(dens_zero[k], (len(idx) - inside) * hn / r ** n)
    return DensityScan(points=pts, min_density_pos=dens_pos, min_density_zero=dens_zero)
