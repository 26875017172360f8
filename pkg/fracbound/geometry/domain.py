import numpy as np
from dataclasses import dataclass
from typing import Tuple, Union
from shapely.geometry import Point, LineString, box as shapely_box
from shapely.ops import unary_union

from ..gridbox import GridSpec, ScalarField

MAX_PRIMITIVES = 4
TRUNCATION_MARGIN = 4 # in grid spacings

def _as_point(values) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.atleast_1d(values))

@dataclass(frozen=True)
class Ball:
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")

    @property
    def dimension(self) -> int:
        return len(self.center)

    def contains(self, points: np.ndarray) -> np.ndarray:
        d2 = np.sum((points - np.asarray(self.center)) ** 2, axis=1)
        return d2 < self.radius ** 2

    def distance(self, points: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(points - np.asarray(self.center), axis=1)
        return np.maximum(d - self.radius, 0.0)

    def extent(self) -> Tuple[np.ndarray, np.ndarray]:
        c = np.asarray(self.center)
        return c - self.radius, c + self.radius

    def contains_ball(self, center, radius) -> bool:
        gap = np.linalg.norm(np.asarray(center) - np.asarray(self.center))
        return gap + radius < self.radius

    def to_geometry(self):
        if self.dimension == 1:
            c = self.center[0]
            return LineString([(c - self.radius, 0.), (c + self.radius, 0.)])
        return Point(self.center).buffer(self.radius, quad_segs=64)

    def to_dict(self) -> dict:
        return {"shape": "ball", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Box:
    corner_lo: Tuple[float, ...]
    corner_hi: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "corner_lo", _as_point(self.corner_lo))
        object.__setattr__(self, "corner_hi", _as_point(self.corner_hi))
        if len(self.corner_lo) != len(self.corner_hi):
            raise ValueError("box corners have different dimensions")
        if not all(lo < hi for lo, hi in zip(self.corner_lo, self.corner_hi)):
            raise ValueError(f"box corners must satisfy lo < hi, got {self.corner_lo}, {self.corner_hi}")

    @property
    def dimension(self) -> int:
        return len(self.corner_lo)

    def contains(self, points: np.ndarray) -> np.ndarray:
        lo, hi = np.asarray(self.corner_lo), np.asarray(self.corner_hi)
        return np.all((points > lo) & (points < hi), axis=1)

    def distance(self, points: np.ndarray) -> np.ndarray:
        lo, hi = np.asarray(self.corner_lo), np.asarray(self.corner_hi)
        gap = np.maximum(np.maximum(lo - points, points - hi), 0.0)
        return np.linalg.norm(gap, axis=1)

    def extent(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.corner_lo), np.asarray(self.corner_hi)

    def contains_ball(self, center, radius) -> bool:
        c = np.asarray(center)
        return bool(np.all(c - radius > np.asarray(self.corner_lo)) and
                    np.all(c + radius < np.asarray(self.corner_hi)))

    def to_geometry(self):
        if self.dimension == 1:
            return LineString([(self.corner_lo[0], 0.), (self.corner_hi[0], 0.)])
        return shapely_box(self.corner_lo[0], self.corner_lo[1],
                           self.corner_hi[0], self.corner_hi[1])

    def to_dict(self) -> dict:
        return {"shape": "box", "corner_lo": list(self.corner_lo),
                "corner_hi": list(self.corner_hi)}


Primitive = Union[Ball, Box]

@dataclass(frozen=True)
class DomainSpec:
    """The container Omega: a union of at most four balls and boxes."""
    primitives: Tuple[Primitive, ...]

    def __post_init__(self):
        prims = tuple(self.primitives)
        object.__setattr__(self, "primitives", prims)
        if not 1 <= len(prims) <= MAX_PRIMITIVES:
            raise ValueError(f"domain needs 1 to {MAX_PRIMITIVES} primitives, got {len(prims)}")
        if len({p.dimension for p in prims}) != 1:
            raise ValueError("domain primitives have mixed dimensions")

    @property
    def dimension(self) -> int:
        return self.primitives[0].dimension

    def contains(self, points: np.ndarray) -> np.ndarray:
        inside = np.zeros(len(points), dtype=bool)
        for prim in self.primitives:
            inside |= prim.contains(points)
        return inside

    def distance(self, points: np.ndarray) -> np.ndarray:
        """Euclidean distance to Omega (zero inside)."""
        return np.min([p.distance(points) for p in self.primitives], axis=0)

    def contains_ball(self, center, radius) -> bool:
        return any(p.contains_ball(center, radius) for p in self.primitives)

    def to_geometry(self):
        return unary_union([p.to_geometry() for p in self.primitives])

    def check_inside(self, grid: GridSpec):
        """Require dist(Omega, boundary of the box) >= 4h."""
        if self.dimension != grid.dimension:
            raise ValueError(f"domain is {self.dimension}D but grid is {grid.dimension}D")
        limit = grid.half_width - TRUNCATION_MARGIN * grid.spacing
        for prim in self.primitives:
            lo, hi = prim.extent()
            if np.any(lo < -limit) or np.any(hi > limit):
                raise ValueError(f"{prim} is closer than {TRUNCATION_MARGIN}h "
                                 f"to the computational box [-{grid.half_width}, {grid.half_width}]^n")

    def to_list(self) -> list:
        return [p.to_dict() for p in self.primitives]

    @classmethod
    def from_list(cls, items) -> "DomainSpec":
        prims = []
        for item in items:
            shape = item.get("shape")
            if shape == "ball":
                prims.append(Ball(item["center"], float(item["radius"])))
            elif shape == "box":
                prims.append(Box(item["corner_lo"], item["corner_hi"]))
            else:
                raise ValueError(f"unknown domain shape {shape!r}, expected 'ball' or 'box'")
        return cls(tuple(prims))


def indicator_omega(domain: DomainSpec, grid: GridSpec) -> ScalarField:
    """0/1 field of Omega; the complement indicator is 1 - chi."""
    domain.check_inside(grid)
    return ScalarField(grid, domain.contains(grid.points()).astype(float))

def counted_measure(chi_omega: ScalarField) -> float:
    """|Omega|_h: number of cells inside Omega times h^n."""
    return float(np.sum(chi_omega.values)) * chi_omega.grid.cell_volume

def exterior_measure(chi_omega: ScalarField) -> float:
    """|box \\ Omega|_h, the largest volume the constraint can reach."""
    grid = chi_omega.grid
    return grid.size * grid.cell_volume - counted_measure(chi_omega)
