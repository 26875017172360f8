import numpy as np
from dataclasses import dataclass, field
from typing import Tuple, Union

@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on the box [-L, L]^n, n in {1, 2}.

    Points are x_i = -L + i*h with h = 2L/(N-1). Multi-dimensional fields
    are stored flat in row-major ("ij") order.
    """
    dimension: int
    half_width: float
    points_per_axis: int

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.points_per_axis < 3:
            raise ValueError(f"points_per_axis must be >= 3, got {self.points_per_axis}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")

    def __repr__(self):
        return (f"GridSpec(dimension={self.dimension}, L={self.half_width}, "
                f"N={self.points_per_axis}, h={self.spacing})")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dimension

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dimension

    def axis(self) -> np.ndarray:
        i = np.arange(self.points_per_axis, dtype=float)
        return -self.half_width + i * self.spacing

    def points(self) -> np.ndarray:
        """All grid points, shape (N^n, n), row-major."""
        ax = self.axis()
        if self.dimension == 1:
            return ax[:, None]
        xx, yy = np.meshgrid(ax, ax, indexing="ij")
        return np.column_stack((xx.ravel(), yy.ravel()))

    def to_dict(self) -> dict:
        return {"dimension": self.dimension,
                "half_width": self.half_width,
                "points_per_axis": self.points_per_axis}


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real values on every point of a grid, zero outside the box."""
    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size != self.grid.size:
            raise ValueError(f"field has {values.size} values, grid has {self.grid.size} points")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains NaN or inf")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __repr__(self):
        return (f"ScalarField({self.grid!r}, min={self.values.min():.6g}, "
                f"max={self.values.max():.6g})")

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def with_values(self, values) -> "ScalarField":
        return ScalarField(self.grid, values)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros(grid.size))

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> "ScalarField":
        """Sample func(points) where points has shape (N^n, n)."""
        return cls(grid, func(grid.points()))


def build_grid(dimension: int, L: float, N: int) -> GridSpec:
    return GridSpec(dimension=int(dimension), half_width=float(L),
                    points_per_axis=int(N))

def check_same_grid(*items: Union[ScalarField, GridSpec]) -> GridSpec:
    grids = [it.grid if isinstance(it, ScalarField) else it for it in items]
    for g in grids[1:]:
        if g != grids[0]:
            raise ValueError(f"grid mismatch: {grids[0]!r} vs {g!r}")
    return grids[0]

def ball_indices(grid: GridSpec, center, radius: float) -> np.ndarray:
    """Flat indices of the grid points with |x_i - center| <= radius."""
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    center = np.atleast_1d(np.asarray(center, dtype=float))
    dist = np.linalg.norm(grid.points() - center, axis=1)
    # absorb rounding so that radius = k*h picks up the k-th neighbor
    return np.flatnonzero(dist <= radius + 1e-12 * grid.spacing)
