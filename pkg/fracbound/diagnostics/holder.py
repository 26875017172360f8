import numpy as np
from dataclasses import dataclass
from typing import List

from ..gridbox import GridSpec, ScalarField

# rows of the pair table evaluated at once
PAIR_BLOCK = 512

@dataclass(frozen=True)
class HolderEstimate:
    lam: float
    seminorm: float
    pair_count: int

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "seminorm": self.seminorm, "pair_count": self.pair_count}


def auto_stride(grid: GridSpec, max_points: int = 4096) -> int:
    """Smallest per-axis stride that keeps the sampled set under max_points."""
    per_axis = max_points ** (1.0 / grid.dimension)
    return max(1, int(np.ceil(grid.points_per_axis / per_axis)))

def _sample(u: ScalarField, stride: int):
    grid = u.grid
    take = np.arange(0, grid.points_per_axis, stride)
    if grid.dimension == 1:
        idx = take
    else:
        ii, jj = np.meshgrid(take, take, indexing="ij")
        idx = np.ravel_multi_index((ii.ravel(), jj.ravel()), grid.shape)
    return grid.points()[idx], u.values[idx]

def holder_seminorm(u: ScalarField, lam: float, stride: int = 1) -> HolderEstimate:
    """sup |u(x) - u(y)| / |x - y|^lam over pairs of grid points sampled
    every `stride` points per axis."""
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lambda must lie in (0, 1], got {lam}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    pts, vals = _sample(u, stride)
    m = len(vals)
    best = 0.0
    for start in range(0, m, PAIR_BLOCK):
        rows = np.arange(start, min(start + PAIR_BLOCK, m))
        diff = pts[rows, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(diff ** 2, axis=2))
        upper = np.arange(m)[None, :] > rows[:, None]
        if not np.any(upper):
            continue
        ratio = np.abs(vals[rows, None] - vals[None, :])[upper] / dist[upper] ** lam
        best = max(best, float(np.max(ratio)))
    return HolderEstimate(lam=lam, seminorm=best, pair_count=m * (m - 1) // 2)

def holder_trace(fields: List[ScalarField], lam: float, stride: int = 1) -> List[HolderEstimate]:
    """Seminorm of each field of a continuation, for boundedness along the sweep."""
    return [holder_seminorm(f, lam, stride) for f in fields]
