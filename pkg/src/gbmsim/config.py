"""Sectioned key=value run configuration.

The format is deliberately plain: ``[section]`` headers, one ``key = value``
per line, ``#`` comments.  Unknown sections and unknown keys are hard errors
(a silently ignored typo is the classic way to invalidate a sweep), and every
error carries the offending line number.

Sections and keys::

    [mesh]    xmin xmax ymin ymax n_sub
    [params]  kappa1 alpha beta1 beta2 gamma delta
    [ic]      scenario (ring|surface) tumor_center_x tumor_center_y
              tumor_radius tumor_peak necrosis_level vasculature_level
              zone_base_level zone1..zoneN ("cx, cy, radius, level")
              ode_tumor ode_necrosis ode_vasculature
    [solver]  dt t_final cg_tolerance cg_max_iterations
              snapshot_every metrics_every
    [output]  theta vtk

An empty file resolves to the ring-width preset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .errors import ConfigError, InvalidParameterError, SimulationError
from .experiments import (
    DEFAULT_BOUNDS,
    DEFAULT_BUMP,
    DEFAULT_N_SUB,
    DEFAULT_PARAMETERS,
    DEFAULT_UNIFORM_LEVEL,
    DEFAULT_ZONE_BASE,
    DEFAULT_ZONES,
    BumpSpec,
    Scenario,
    UniformVasculature,
    ZonedVasculature,
    ZoneSpec,
)
from .kinetics import DimensionlessParameters, FieldTriple
from .metrics import DEFAULT_THRESHOLD
from .solver import SolverConfig

__all__ = ["RunConfig", "parse_config"]

_ZONE_KEY = re.compile(r"zone(\d+)$")


@dataclass
class RunConfig:
    """Fully resolved configuration for one run/sweep/ode invocation."""

    scenario: str = "ring"
    bounds: tuple[float, float, float, float] = DEFAULT_BOUNDS
    n_sub: int = DEFAULT_N_SUB
    params: DimensionlessParameters = DEFAULT_PARAMETERS
    tumor_center: tuple[float, float] = DEFAULT_BUMP["center"]
    tumor_radius: float = DEFAULT_BUMP["radius"]
    tumor_peak: float = DEFAULT_BUMP["peak"]
    necrosis_level: float = 0.0
    vasculature_level: float = DEFAULT_UNIFORM_LEVEL
    zone_base_level: float = DEFAULT_ZONE_BASE
    zones: tuple[ZoneSpec, ...] | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    theta: float = DEFAULT_THRESHOLD
    vtk: bool = False
    ode_initial: FieldTriple = field(
        default_factory=lambda: FieldTriple(0.1, 0.0, 0.5)
    )

    def to_scenario(self) -> Scenario:
        if self.scenario == "ring":
            vasculature = UniformVasculature(self.vasculature_level)
        else:
            zones = self.zones if self.zones is not None else DEFAULT_ZONES
            vasculature = ZonedVasculature(
                base_level=self.zone_base_level, zones=zones
            )
        return Scenario(
            bounds=self.bounds,
            n_sub=self.n_sub,
            params=self.params,
            tumor_ic=BumpSpec(
                center=self.tumor_center,
                radius=self.tumor_radius,
                peak=self.tumor_peak,
            ),
            vasculature_ic=vasculature,
            necrosis_level=self.necrosis_level,
            solver=self.solver,
        )


def _parse_float(text: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}", line=line) from None


def _parse_int(text: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}", line=line) from None


def _parse_bool(text: str, line: int) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}", line=line)


def _parse_zone(text: str, line: int) -> ZoneSpec:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 4:
        raise ConfigError(
            f"zone needs 'cx, cy, radius, level', got {text!r}", line=line
        )
    cx, cy, radius, level = (_parse_float(part, line) for part in parts)
    try:
        return ZoneSpec(center=(cx, cy), radius=radius, level=level)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc), line=line) from None


_MESH_KEYS = {"xmin", "xmax", "ymin", "ymax", "n_sub"}
_PARAM_KEYS = {"kappa1", "alpha", "beta1", "beta2", "gamma", "delta"}
_IC_KEYS = {
    "scenario",
    "tumor_center_x",
    "tumor_center_y",
    "tumor_radius",
    "tumor_peak",
    "necrosis_level",
    "vasculature_level",
    "zone_base_level",
    "ode_tumor",
    "ode_necrosis",
    "ode_vasculature",
}
_SOLVER_KEYS = {
    "dt",
    "t_final",
    "cg_tolerance",
    "cg_max_iterations",
    "snapshot_every",
    "metrics_every",
}
_OUTPUT_KEYS = {"theta", "vtk"}
_SECTIONS = {
    "mesh": _MESH_KEYS,
    "params": _PARAM_KEYS,
    "ic": _IC_KEYS,
    "solver": _SOLVER_KEYS,
    "output": _OUTPUT_KEYS,
}


def parse_config(text: str) -> RunConfig:
    """Parse configuration text into a fully resolved :class:`RunConfig`.

    Raises :class:`ConfigError` with a line number for syntax errors, unknown
    sections/keys, duplicates, and out-of-range values.
    """
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    zone_entries: list[tuple[int, str, int]] = []
    section: str | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError(f"malformed section header {raw!r}", line=line_no)
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", line=line_no)
            section = name
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected key=value, got {raw!r}", line=line_no)
        if section is None:
            raise ConfigError("key=value before any [section]", line=line_no)
        key, value = (part.strip() for part in stripped.split("=", 1))
        zone_match = _ZONE_KEY.match(key) if section == "ic" else None
        if zone_match:
            zone_entries.append((int(zone_match.group(1)), value, line_no))
            continue
        if key not in _SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]", line=line_no)
        if (section, key) in entries:
            raise ConfigError(f"duplicate key {key!r} in [{section}]", line=line_no)
        entries[(section, key)] = (value, line_no)

    config = RunConfig()

    def take(section: str, key: str):
        return entries.pop((section, key), None)

    # [mesh]
    bounds = list(config.bounds)
    for i, key in enumerate(("xmin", "xmax", "ymin", "ymax")):
        item = take("mesh", key)
        if item is not None:
            bounds[i] = _parse_float(*item)
    config.bounds = tuple(bounds)
    item = take("mesh", "n_sub")
    if item is not None:
        n_sub = _parse_int(*item)
        if n_sub < 1:
            raise ConfigError("n_sub must be >= 1", line=item[1])
        config.n_sub = n_sub

    # [params]
    overrides = {}
    for key in _PARAM_KEYS:
        item = take("params", key)
        if item is not None:
            overrides[key] = _parse_float(*item)
    if overrides:
        try:
            config.params = replace(config.params, **overrides)
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from None

    # [ic]
    item = take("ic", "scenario")
    if item is not None:
        value, line_no = item
        if value not in ("ring", "surface"):
            raise ConfigError(
                f"scenario must be 'ring' or 'surface', got {value!r}", line=line_no
            )
        config.scenario = value
    center = list(config.tumor_center)
    for i, key in enumerate(("tumor_center_x", "tumor_center_y")):
        item = take("ic", key)
        if item is not None:
            center[i] = _parse_float(*item)
    config.tumor_center = tuple(center)
    for attr, key in (
        ("tumor_radius", "tumor_radius"),
        ("tumor_peak", "tumor_peak"),
        ("necrosis_level", "necrosis_level"),
        ("vasculature_level", "vasculature_level"),
        ("zone_base_level", "zone_base_level"),
    ):
        item = take("ic", key)
        if item is not None:
            setattr(config, attr, _parse_float(*item))
    ode = [
        config.ode_initial.t_density,
        config.ode_initial.n_density,
        config.ode_initial.phi_density,
    ]
    for i, key in enumerate(("ode_tumor", "ode_necrosis", "ode_vasculature")):
        item = take("ic", key)
        if item is not None:
            ode[i] = _parse_float(*item)
    config.ode_initial = FieldTriple(*ode)

    if zone_entries:
        if config.scenario != "surface":
            raise ConfigError(
                "zone keys require scenario=surface", line=zone_entries[0][2]
            )
        seen: set[int] = set()
        zones = []
        for number, value, line_no in sorted(zone_entries):
            if number in seen:
                raise ConfigError(f"duplicate key 'zone{number}'", line=line_no)
            seen.add(number)
            zones.append(_parse_zone(value, line_no))
        config.zones = tuple(zones)

    # [solver]
    solver_kwargs = {}
    for key, parser in (
        ("dt", _parse_float),
        ("t_final", _parse_float),
        ("cg_tolerance", _parse_float),
        ("cg_max_iterations", _parse_int),
        ("snapshot_every", _parse_int),
        ("metrics_every", _parse_int),
    ):
        item = take("solver", key)
        if item is not None:
            solver_kwargs[key] = parser(*item)
    if solver_kwargs:
        try:
            config.solver = replace(config.solver, **solver_kwargs)
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from None

    # [output]
    item = take("output", "theta")
    if item is not None:
        theta = _parse_float(*item)
        if not theta > 0.0:
            raise ConfigError("theta must be positive", line=item[1])
        config.theta = theta
    item = take("output", "vtk")
    if item is not None:
        config.vtk = _parse_bool(*item)

    # Range checks that only make sense once everything is resolved.
    try:
        config.to_scenario()
    except SimulationError as exc:
        raise ConfigError(str(exc)) from None

    return config
