"""Scenario files: YAML sections merged over the packaged defaults.yaml."""
import yaml
from dataclasses import dataclass
from importlib.resources import files
from typing import Optional, Tuple

from ..gridbox import GridSpec, build_grid
from ..geometry import (DomainSpec, ObstacleSpec, indicator_omega, sample_obstacle,
                        exterior_measure)
from ..kernel import KernelTable
from ..penalty import PenaltyParams
from ..solver import ContinuationSchedule, SolveConfig, Problem

SCHEMA_VERSION = 1

class ConfigError(ValueError):
    """All constraint violations found in a scenario, one entry per offending field."""
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("invalid scenario configuration:\n" +
                         "\n".join(f"  - {issue}" for issue in self.issues))


class ConfigSyntaxError(ConfigError):
    def __init__(self, problem: str, line: int, column: int):
        self.line, self.column = line, column
        super().__init__([f"syntax error at line {line}, column {column}: {problem}"])


@dataclass(frozen=True)
class DiagnosticsConfig:
    enabled: bool = True
    harnack_shrink: float = 0.25
    radii_cells: Tuple[int, ...] = (3, 4, 6, 8, 12, 16)

    def radii(self, grid: GridSpec):
        return [k * grid.spacing for k in self.radii_cells]

    def to_dict(self) -> dict:
        return {"enabled": self.enabled, "harnack_shrink": self.harnack_shrink,
                "radii_cells": list(self.radii_cells)}


@dataclass(frozen=True)
class ScenarioConfig:
    grid: GridSpec
    domain: DomainSpec
    obstacle: ObstacleSpec
    alpha: float
    gamma: float
    schedule: ContinuationSchedule
    solver: SolveConfig
    vol_tol: float = 0.05
    diagnostics: DiagnosticsConfig = DiagnosticsConfig()
    allow_zero_gamma: bool = False
    output_dir: Optional[str] = None
    seed: int = 0

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION,
                "grid": self.grid.to_dict(),
                "domain": self.domain.to_list(),
                "obstacle": self.obstacle.to_dict(),
                "alpha": self.alpha,
                "gamma": self.gamma,
                "allow_zero_gamma": self.allow_zero_gamma,
                "schedule": self.schedule.to_dict(),
                "solver": self.solver.to_dict(),
                "tuning": {"vol_tol": self.vol_tol},
                "diagnostics": self.diagnostics.to_dict(),
                "output_dir": self.output_dir,
                "seed": self.seed}

    def build_problem(self, verbose: bool = False) -> Problem:
        """Sample phi and chi_Omega and precompute the kernel table."""
        chi = indicator_omega(self.domain, self.grid)
        phi = sample_obstacle(self.obstacle, self.grid, self.domain)
        kernel = KernelTable(self.grid, self.alpha, verbose=verbose)
        problem = Problem(kernel, phi, chi, self.gamma,
                          allow_zero_gamma=self.allow_zero_gamma, domain=self.domain)
        problem.validate()
        return problem


def load_defaults() -> dict:
    path = files("fracbound.config") / "defaults.yaml"
    if not path.is_file():
        raise FileNotFoundError(f"'defaults.yaml' not found at: {path}")
    return yaml.safe_load(path.read_text())

def merge_sections(base: dict, override: dict) -> dict:
    """Mappings merge key by key; any other value replaces the default."""
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge_sections(out[key], value)
        else:
            out[key] = value
    return out


def _interval(lo, hi, lo_open, hi_open) -> str:
    left = "(" if lo_open else "["
    right = ")" if hi_open else "]"
    return f"{left}{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}{right}"

class _Reader:
    """Pulls typed values out of the merged mapping and collects every issue."""

    def __init__(self, raw: dict, defaults: dict):
        self.raw = raw
        self.issues = []
        self._unknown_keys(raw, defaults, "")

    def _unknown_keys(self, raw, defaults, prefix):
        for key, value in raw.items():
            name = f"{prefix}{key}"
            if key not in defaults:
                self.issues.append(f"{name}: unknown key")
            elif isinstance(defaults[key], dict):
                if isinstance(value, dict):
                    self._unknown_keys(value, defaults[key], f"{name}.")
                else:
                    self.issues.append(f"{name}: must be a mapping, got {value!r}")

    def lookup(self, path: str):
        node = self.raw
        for key in path.split("."):
            if not isinstance(node, dict):
                raise KeyError(path)
            node = node[key]
        return node

    def number(self, path, lo=None, hi=None, lo_open=True, hi_open=True, integer=False):
        try:
            value = self.lookup(path)
        except KeyError:
            return None
        kind = "an integer" if integer else "a number"
        if isinstance(value, bool) or value is None:
            self.issues.append(f"{path}: must be {kind}, got {value!r}")
            return None
        try:
            # yaml reads 1e-3 (no dot) as a string
            value = int(value) if integer and float(value).is_integer() else float(value)
        except (TypeError, ValueError):
            self.issues.append(f"{path}: must be {kind}, got {value!r}")
            return None
        if integer and not isinstance(value, int):
            self.issues.append(f"{path}: must be {kind}, got {value!r}")
            return None
        below = lo is not None and (value <= lo if lo_open else value < lo)
        above = hi is not None and (value >= hi if hi_open else value > hi)
        if below or above:
            self.issues.append(f"{path} = {value} outside {_interval(lo, hi, lo_open, hi_open)}")
            return None
        return value

    def unit(self, path):
        return self.number(path, 0.0, 1.0)

    def flag(self, path):
        value = self.lookup(path)
        if not isinstance(value, bool):
            self.issues.append(f"{path}: must be true or false, got {value!r}")
            return None
        return value

    def vector(self, path):
        value = self.lookup(path)
        if not isinstance(value, list) or not value:
            self.issues.append(f"{path}: must be a non-empty list, got {value!r}")
            return None
        try:
            return tuple(float(v) for v in value)
        except (TypeError, ValueError):
            self.issues.append(f"{path}: entries must be numbers, got {value!r}")
            return None

    def build(self, path, factory, *args):
        """Run a constructor whose own checks report under the section name."""
        try:
            return factory(*args)
        except (ValueError, KeyError, TypeError) as err:
            self.issues.append(f"{path}: {err}")
            return None


def _read_grid(r: _Reader):
    dimension = r.number("grid.dimension", 1, 2, False, False, integer=True)
    half_width = r.number("grid.half_width", 0.0)
    points = r.number("grid.points_per_axis", 3, None, False, integer=True)
    if None in (dimension, half_width, points):
        return None
    return build_grid(dimension, half_width, points)

def _read_domain(r: _Reader):
    items = r.lookup("domain")
    if not isinstance(items, list):
        r.issues.append(f"domain: must be a list of primitives, got {items!r}")
        return None
    return r.build("domain", DomainSpec.from_list, items)

def _read_obstacle(r: _Reader):
    amplitude = r.number("obstacle.amplitude", 0.0)
    center = r.vector("obstacle.center")
    radius = r.number("obstacle.radius", 0.0)
    if None in (amplitude, center, radius):
        return None
    return ObstacleSpec(amplitude, center, radius)

def _read_schedule(r: _Reader):
    values = {name: r.unit(f"schedule.{name}")
              for name in ("sigma0", "delta0", "rho", "sigma_min", "delta_min")}
    grid = r.vector("schedule.epsilon_grid")
    if grid is not None:
        bad = [e for e in grid if not 0.0 < e < 1.0]
        if bad:
            r.issues.append(f"schedule.epsilon_grid: entries {bad} outside (0, 1)")
            grid = None
    if grid is None or None in values.values():
        return None
    return r.build("schedule", ContinuationSchedule, *values.values(), grid)

def _read_solver(r: _Reader):
    grad_tol = r.number("solver.grad_tol", 0.0)
    max_iters = r.number("solver.max_iters", 0, None, False, integer=True)
    c1 = r.unit("solver.armijo_c1")
    factor = r.unit("solver.backtrack_factor")
    initial = r.lookup("solver.initial_step")
    if initial not in ("bb", "unit"):
        r.issues.append(f"solver.initial_step: must be 'bb' or 'unit', got {initial!r}")
        initial = None
    clamp = r.flag("solver.clamp_safeguard")
    if None in (grad_tol, max_iters, c1, factor, initial, clamp):
        return None
    return SolveConfig(grad_tol, max_iters, c1, factor, initial, clamp)

def _read_diagnostics(r: _Reader):
    enabled = r.flag("diagnostics.enabled")
    shrink = r.unit("diagnostics.harnack_shrink")
    cells = r.lookup("diagnostics.radii_cells")
    if (not isinstance(cells, list) or len(cells) < 3 or
            not all(isinstance(k, int) and not isinstance(k, bool) and k >= 3 for k in cells)):
        r.issues.append(f"diagnostics.radii_cells: need at least 3 integers >= 3, got {cells!r}")
        cells = None
    if None in (enabled, shrink, cells):
        return None
    return DiagnosticsConfig(enabled, shrink, tuple(sorted(cells)))

def _check_geometry(r: _Reader, grid, domain, obstacle, gamma):
    if grid is None or domain is None:
        return
    count = len(r.issues)
    r.build("domain", domain.check_inside, grid)
    if len(r.issues) > count:
        return
    if obstacle is not None:
        r.build("obstacle", sample_obstacle, obstacle, grid, domain)
    if gamma is None:
        return
    params = PenaltyParams(0.5, 0.5, 0.5, gamma, allow_zero_gamma=True)
    r.build("gamma", params.check_reachable, exterior_measure(indicator_omega(domain, grid)))


def config_from_dict(raw: dict, defaults: dict = None) -> ScenarioConfig:
    defaults = load_defaults() if defaults is None else defaults
    r = _Reader(raw, defaults)
    if r.issues:
        raise ConfigError(r.issues)

    version = r.lookup("schema_version")
    if version != SCHEMA_VERSION:
        r.issues.append(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    grid = _read_grid(r)
    domain = _read_domain(r)
    obstacle = _read_obstacle(r)
    alpha = r.unit("alpha")
    allow_zero = r.flag("allow_zero_gamma")
    gamma = r.number("gamma", 0.0, lo_open=False)
    if gamma == 0.0 and allow_zero is False:
        r.issues.append("gamma = 0 is degenerate; set allow_zero_gamma: true to accept it")
        gamma = None
    schedule = _read_schedule(r)
    solver = _read_solver(r)
    vol_tol = r.number("tuning.vol_tol", 0.0)
    diagnostics = _read_diagnostics(r)
    output_dir = r.lookup("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        r.issues.append(f"output_dir: must be a path or null, got {output_dir!r}")
    seed = r.number("seed", 0, None, False, integer=True)
    _check_geometry(r, grid, domain, obstacle, gamma)

    if r.issues:
        raise ConfigError(r.issues)
    return ScenarioConfig(grid=grid, domain=domain, obstacle=obstacle, alpha=alpha,
                          gamma=gamma, schedule=schedule, solver=solver, vol_tol=vol_tol,
                          diagnostics=diagnostics, allow_zero_gamma=allow_zero,
                          output_dir=output_dir, seed=seed)

def parse_config(text: str) -> ScenarioConfig:
    """Parse a scenario document; missing sections and keys take the documented defaults."""
    try:
        user = yaml.safe_load(text)
    except yaml.YAMLError as err:
        mark = getattr(err, "problem_mark", None)
        line, column = (mark.line + 1, mark.column + 1) if mark is not None else (0, 0)
        raise ConfigSyntaxError(getattr(err, "problem", None) or str(err), line, column) from err
    if user is None:
        user = {}
    if not isinstance(user, dict):
        raise ConfigError([f"top level must be a mapping of sections, got {type(user).__name__}"])
    defaults = load_defaults()
    return config_from_dict(merge_sections(defaults, user), defaults)

def load_config(path) -> ScenarioConfig:
    with open(path, "r") as f:
        return parse_config(f.read())

def serialize_config(config: ScenarioConfig) -> str:
    return yaml.safe_dump(config.to_dict(), default_flow_style=False, sort_keys=False)
