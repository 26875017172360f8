import numpy as np
from dataclasses import dataclass
from typing import Tuple

from ..gridbox import GridSpec, ScalarField
from .domain import DomainSpec, _as_point

@dataclass(frozen=True)
class ObstacleSpec:
    """Smooth bump A*exp(1 - 1/(1 - |x-c|^2/r^2)) supported in B_r(c)."""
    amplitude: float
    center: Tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        if not self.amplitude > 0:
            raise ValueError(f"obstacle amplitude must be positive, got {self.amplitude}")
        if not self.radius > 0:
            raise ValueError(f"obstacle radius must be positive, got {self.radius}")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        s2 = np.sum((points - np.asarray(self.center)) ** 2, axis=1) / self.radius ** 2
        out = np.zeros(len(points))
        inside = s2 < 1.0
        out[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - s2[inside]))
        return out

    def to_dict(self) -> dict:
        return {"amplitude": self.amplitude, "center": list(self.center),
                "radius": self.radius}


def sample_obstacle(spec: ObstacleSpec, grid: GridSpec, domain: DomainSpec) -> ScalarField:
    """Sample phi on the grid; the support B_r(c) must lie inside Omega."""
    if len(spec.center) != grid.dimension:
        raise ValueError(f"obstacle center {spec.center} does not match a {grid.dimension}D grid")
    c = np.asarray(spec.center)
    if np.any(np.abs(c) + spec.radius >= grid.half_width):
        raise ValueError(f"obstacle support B_{spec.radius}({spec.center}) leaves the computational box")
    if not domain.contains_ball(spec.center, spec.radius):
        raise ValueError(f"obstacle support B_{spec.radius}({spec.center}) is not contained in Omega")
    return ScalarField(grid, spec.evaluate(grid.points()))
