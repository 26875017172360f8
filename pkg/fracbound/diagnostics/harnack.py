import numpy as np
from dataclasses import dataclass
from scipy.ndimage import distance_transform_edt

from ..gridbox import ScalarField, check_same_grid
from ..functional import CONTACT_TOL

@dataclass(frozen=True)
class HarnackResult:
    ratio: float
    flagged: bool
    inradius: float
    cells: int
    contact_tol: float = CONTACT_TOL

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "flagged": self.flagged,
                "inradius": self.inradius, "cells": self.cells,
                "contact_tol": self.contact_tol}


def harnack_ratio(u: ScalarField, phi: ScalarField, chi_omega: ScalarField, tau_pos: float,
                  shrink: float = 0.25, tol: float = CONTACT_TOL) -> HarnackResult:
    """sup u / inf u over D' = {x in D : dist(x, D^c) > shrink * inradius(D)}.

    D = (Omega cap {u > phi + tol}) cup ({u > tau_pos} \\ Omega); cells outside
    the box count as outside D. A non-positive infimum gives an infinite,
    flagged ratio.
    """
    grid = check_same_grid(u, phi, chi_omega)
    if not 0.0 < shrink < 1.0:
        raise ValueError(f"shrink must lie in (0, 1), got {shrink}")
    vals = u.values
    omega = chi_omega.values != 0.0
    region = (omega & (vals > phi.values + tol)) | (~omega & (vals > tau_pos))

    padded = np.pad(region.reshape(grid.shape), 1, constant_values=False)
    dist = distance_transform_edt(padded, sampling=grid.spacing)
    dist = dist[(slice(1, -1),) * grid.dimension].ravel()
    inradius = float(np.max(dist[region])) if np.any(region) else 0.0
    core = region & (dist > shrink * inradius)
    if not np.any(core):
        raise ValueError("Harnack subdomain D' is empty")

    lo, hi = float(np.min(vals[core])), float(np.max(vals[core]))
    cells = int(np.count_nonzero(core))
    if lo <= 0.0:
        return HarnackResult(ratio=np.inf, flagged=True, inradius=inradius,
                             cells=cells, contact_tol=tol)
    return HarnackResult(ratio=hi / lo, flagged=False, inradius=inradius,
                         cells=cells, contact_tol=tol)
