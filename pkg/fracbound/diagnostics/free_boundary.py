import warnings
import numpy as np
from dataclasses import dataclass, field
from typing import List, Optional
from shapely.geometry import LineString, box as shapely_box
from shapely.ops import unary_union, linemerge

from ..gridbox import ScalarField
from ..geometry import DomainSpec

@dataclass
class FreeBoundaryExtract:
    """Grid faces separating {u > tau_pos} from its complement.

    faces holds flat index pairs (positive cell, non-positive cell);
    boundary_points are the non-positive cells touching a face.
    """
    faces: np.ndarray
    boundary_points: np.ndarray
    face_measure: float
    measure_estimate: float
    components: List[dict] = field(default_factory=list)
    regions: Optional[np.ndarray] = None

    @property
    def empty(self) -> bool:
        return len(self.faces) == 0

    def to_dict(self) -> dict:
        out = {"face_count": int(len(self.faces)),
               "boundary_points": int(len(self.boundary_points)),
               "face_measure": self.face_measure,
               "measure_estimate": self.measure_estimate,
               "components": self.components}
        if self.regions is not None:
            out["interior_points"] = int(np.count_nonzero(self.regions == "interior"))
            out["exterior_points"] = int(np.count_nonzero(self.regions == "exterior"))
        return out


def _faces(positive: np.ndarray, shape) -> np.ndarray:
    flat = np.arange(positive.size).reshape(shape)
    pos = positive.reshape(shape)
    pairs = []
    for axis in range(len(shape)):
        lo = [slice(None)] * len(shape)
        hi = [slice(None)] * len(shape)
        lo[axis], hi[axis] = slice(0, -1), slice(1, None)
        a, b = pos[tuple(lo)], pos[tuple(hi)]
        ia, ib = flat[tuple(lo)], flat[tuple(hi)]
        forward = a & ~b
        backward = ~a & b
        pairs.append(np.column_stack((ia[forward], ib[forward])))
        pairs.append(np.column_stack((ib[backward], ia[backward])))
    out = np.concatenate(pairs).astype(int)
    return out[np.lexsort((out[:, 1], out[:, 0]))] if len(out) else out.reshape(0, 2)

def _components(u: ScalarField, positive: np.ndarray, domain: Optional[DomainSpec]) -> List[dict]:
    grid = u.grid
    h = grid.spacing
    pts = grid.points()[positive]
    if grid.dimension == 1:
        cells = [LineString([(x - h / 2, 0.0), (x + h / 2, 0.0)]) for x in pts[:, 0]]
        merged = linemerge(unary_union(cells))
    else:
        cells = [shapely_box(x - h / 2, y - h / 2, x + h / 2, y + h / 2) for x, y in pts]
        merged = unary_union(cells)
    omega = domain.to_geometry() if domain is not None else None

    comps = []
    for geom in getattr(merged, "geoms", [merged]):
        item = {"centroid": [float(c) for c in geom.centroid.coords[0][:grid.dimension]],
                "measure": float(geom.length if grid.dimension == 1 else geom.area)}
        if grid.dimension == 2:
            item["perimeter"] = float(geom.length)
        if omega is not None:
            item["distance_to_omega"] = float(geom.distance(omega))
            item["region"] = "interior" if omega.contains(geom.centroid) else "exterior"
        comps.append(item)
    comps.sort(key=lambda c: c["centroid"])
    return comps

def free_boundary_extract(u: ScalarField, tau_pos: float,
                          domain: DomainSpec = None) -> FreeBoundaryExtract:
    """Faces of the {u > tau_pos} level set along the grid axes.

    The measure estimate is face count * h^{n-1}, times pi/4 in 2D to turn
    the staircase length into an isotropic length estimate.
    """
    grid = u.grid
    positive = u.values > tau_pos
    faces = _faces(positive, grid.shape)
    boundary = np.unique(faces[:, 1]) if len(faces) else np.zeros(0, dtype=int)
    face_measure = len(faces) * grid.spacing ** (grid.dimension - 1)
    isotropy = np.pi / 4.0 if grid.dimension == 2 else 1.0

    edge = np.zeros(grid.shape, dtype=bool)
    for axis in range(grid.dimension):
        index = [slice(None)] * grid.dimension
        index[axis] = [0, -1]
        edge[tuple(index)] = True
    if np.any(positive & edge.ravel()):
        warnings.warn("positivity set touches the edge of the computational box; "
                      "its free boundary is only partially extracted")
    if len(faces) == 0:
        warnings.warn("free boundary extract is empty")

    regions = None
    if domain is not None and len(boundary):
        inside = domain.contains(grid.points()[boundary])
        regions = np.where(inside, "interior", "exterior")
    components = _components(u, positive, domain) if np.any(positive) else []
    return FreeBoundaryExtract(faces=faces, boundary_points=boundary,
                               face_measure=float(face_measure),
                               measure_estimate=float(face_measure * isotropy),
                               components=components, regions=regions)
