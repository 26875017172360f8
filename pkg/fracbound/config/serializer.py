import os
import yaml
import numpy as np

from ..gridbox import GridSpec, ScalarField

METRICS_SCHEMA_VERSION = 1
FIELD_FORMAT = "%.17g"

def _plain(obj):
    """Convert numpy scalars/arrays and tuples into types yaml.safe_dump accepts."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj

# --- fields ---

def field_header(dimension: int) -> str:
    return "x,value" if dimension == 1 else "x,y,value"

def save_field(field: ScalarField, filepath: str):
    """One grid point per row in row-major order, header x[,y],value."""
    table = np.column_stack((field.grid.points(), field.values))
    np.savetxt(filepath, table, delimiter=",", fmt=FIELD_FORMAT,
               header=field_header(field.grid.dimension), comments="")

def load_field(filepath: str, grid: GridSpec) -> ScalarField:
    if not os.path.exists(filepath):
        raise FileNotFoundError(f"File not found: {filepath}")
    with open(filepath, "r") as f:
        header = f.readline().strip()
    if header != field_header(grid.dimension):
        raise ValueError(f"field header {header!r} does not match a {grid.dimension}D grid "
                         f"(expected {field_header(grid.dimension)!r})")
    table = np.loadtxt(filepath, delimiter=",", skiprows=1, ndmin=2)
    if table.shape != (grid.size, grid.dimension + 1):
        raise ValueError(f"field shape mismatch: {filepath} has {table.shape[0]} rows, "
                         f"the grid has {grid.size} points ({grid!r})")
    if not np.allclose(table[:, :-1], grid.points(), rtol=0.0, atol=1e-9 * grid.spacing):
        raise ValueError(f"coordinates in {filepath} do not match {grid!r}")
    return ScalarField(grid, table[:, -1])

# --- metrics ---

def save_metrics(report: dict, filepath: str, kind: str):
    out = {"schema_version": METRICS_SCHEMA_VERSION, "kind": kind}
    out.update(_plain(report))
    with open(filepath, "w") as f:
        yaml.safe_dump(out, f, default_flow_style=False, sort_keys=False)

def load_metrics(filepath: str) -> dict:
    if not os.path.exists(filepath):
        raise FileNotFoundError(f"File not found: {filepath}")
    with open(filepath, "r") as f:
        return yaml.safe_load(f)

def timing_path(metrics_path: str) -> str:
    """out/run.metrics.yaml -> out/run.timing.yaml"""
    stem = metrics_path[:-len(".metrics.yaml")] if metrics_path.endswith(".metrics.yaml") \
        else os.path.splitext(metrics_path)[0]
    return f"{stem}.timing.yaml"

def save_timing(timing: dict, metrics_path: str) -> str:
    path = timing_path(metrics_path)
    with open(path, "w") as f:
        yaml.safe_dump(_plain(timing), f, default_flow_style=False, sort_keys=False)
    return path

# --- diagnostics rows ---

def save_diagnostics_rows(rows, dimension: int, filepath: str):
    """Per boundary point: coordinates, growth slope and the two density minima."""
    coords = "x" if dimension == 1 else "x,y"
    with open(filepath, "w") as f:
        f.write(f"{coords},slope,min_density_pos,min_density_zero\n")
        for point, slope, dens_pos, dens_zero in rows:
            values = list(point) + [slope, dens_pos, dens_zero]
            f.write(",".join(FIELD_FORMAT % v for v in values) + "\n")
