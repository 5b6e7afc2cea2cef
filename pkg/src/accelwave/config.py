"""JSON scenario configs: material constants, optional simulation and sweep
blocks.  All values are SI.  Parsing is strict: unknown keys are rejected so
typos surface as config errors instead of silently-ignored settings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .materials import (
    FluidParams,
    MaterialModel,
    MooneyRivlin,
    Newtonian,
    PowerLaw,
    QuadraticCubic,
    RegularizedPowerLaw,
    SolidParams,
)
from .wavefront import Grid, KinkIC

__all__ = [
    "ConfigError",
    "SimConfig",
    "SweepConfig",
    "ScenarioConfig",
    "material_from_dict",
    "material_to_dict",
    "scenario_from_dict",
    "scenario_to_dict",
    "load_scenario",
    "bundled_config_path",
    "apply_sweep_value",
]


class ConfigError(ValueError):
    pass


def _number(block: dict, key: str, where: str, *, optional: bool = False):
    if key not in block:
        if optional:
            return None
        raise ConfigError(f"missing required key '{key}' in {where}")
    val = block[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"'{key}' in {where} must be a number, got {val!r}")
    return float(val)


def _check_keys(block: dict, allowed: set[str], where: str) -> None:
    extra = set(block) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)} in {where}")


def material_from_dict(d: dict) -> MaterialModel:
    """Build a material model from its JSON dictionary form."""
    if not isinstance(d, dict):
        raise ConfigError("material config must be a JSON object")
    kind = d.get("kind")
    if kind == "solid":
        _check_keys(d, {"kind", "solid"}, "material config")
        block = d.get("solid")
        if not isinstance(block, dict):
            raise ConfigError("solid material needs a 'solid' object")
        _check_keys(block, {"rho_star", "E1", "E2", "tau0", "nu_bar", "elastic"},
                    "'solid'")
        el = block.get("elastic")
        if not isinstance(el, dict):
            raise ConfigError("'solid' needs an 'elastic' object")
        ekind = el.get("kind")
        if ekind == "quadratic_cubic":
            _check_keys(el, {"kind", "R"}, "'elastic'")
            elastic = QuadraticCubic(R=_number(el, "R", "'elastic'"))
        elif ekind == "mooney_rivlin":
            _check_keys(el, {"kind", "C1", "C2", "k_bulk", "nu_bar"}, "'elastic'")
            elastic = MooneyRivlin(
                C1=_number(el, "C1", "'elastic'"),
                C2=_number(el, "C2", "'elastic'"),
                k_bulk=_number(el, "k_bulk", "'elastic'"),
                nu_bar=_number(el, "nu_bar", "'elastic'"),
            )
        else:
            raise ConfigError(f"unknown elastic kind {ekind!r} "
                              "(expected 'quadratic_cubic' or 'mooney_rivlin')")
        try:
            return SolidParams(
                rho_star=_number(block, "rho_star", "'solid'"),
                E2=_number(block, "E2", "'solid'"),
                tau0=_number(block, "tau0", "'solid'"),
                elastic=elastic,
                E1=_number(block, "E1", "'solid'", optional=True),
                nu_bar=_number(block, "nu_bar", "'solid'", optional=True),
            )
        except ValueError as exc:
            raise ConfigError(f"non-physical solid constants: {exc}") from exc
    if kind == "fluid":
        _check_keys(d, {"kind", "fluid"}, "material config")
        block = d.get("fluid")
        if not isinstance(block, dict):
            raise ConfigError("fluid material needs a 'fluid' object")
        _check_keys(block, {"rho_star", "R_gas", "tau0", "mu0", "production"},
                    "'fluid'")
        pr = block.get("production", {"kind": "newtonian"})
        if not isinstance(pr, dict):
            raise ConfigError("'production' must be an object")
        pkind = pr.get("kind")
        if pkind == "newtonian":
            _check_keys(pr, {"kind"}, "'production'")
            prod = Newtonian()
        elif pkind == "power_law":
            _check_keys(pr, {"kind", "k_cons", "m"}, "'production'")
            prod = PowerLaw(k_cons=_number(pr, "k_cons", "'production'"),
                            m=_number(pr, "m", "'production'"))
        elif pkind == "regularized":
            _check_keys(pr, {"kind", "k_cons", "m", "eps"}, "'production'")
            prod = RegularizedPowerLaw(k_cons=_number(pr, "k_cons", "'production'"),
                                       m=_number(pr, "m", "'production'"),
                                       eps=_number(pr, "eps", "'production'"))
        else:
            raise ConfigError(f"unknown production kind {pkind!r} (expected "
                              "'newtonian', 'power_law' or 'regularized')")
        try:
            return FluidParams(
                rho_star=_number(block, "rho_star", "'fluid'"),
                R_gas=_number(block, "R_gas", "'fluid'"),
                tau0=_number(block, "tau0", "'fluid'"),
                mu0=_number(block, "mu0", "'fluid'"),
                production=prod,
            )
        except ValueError as exc:
            raise ConfigError(f"non-physical fluid constants: {exc}") from exc
    raise ConfigError(f"material 'kind' must be 'solid' or 'fluid', got {kind!r}")


def material_to_dict(m: MaterialModel) -> dict:
    """Canonical JSON dictionary form of a material (round-trips exactly)."""
    if isinstance(m, SolidParams):
        if isinstance(m.elastic, QuadraticCubic):
            el = {"kind": "quadratic_cubic", "R": m.elastic.R}
            solid = {"rho_star": m.rho_star, "E1": m.E1, "E2": m.E2,
                     "tau0": m.tau0, "nu_bar": m.nu_bar, "elastic": el}
        else:
            el = {"kind": "mooney_rivlin", "C1": m.elastic.C1, "C2": m.elastic.C2,
                  "k_bulk": m.elastic.k_bulk, "nu_bar": m.elastic.nu_bar}
            solid = {"rho_star": m.rho_star, "E2": m.E2, "tau0": m.tau0,
                     "nu_bar": m.nu_bar, "elastic": el}
        return {"kind": "solid", "solid": solid}
    pr = m.production
    if isinstance(pr, Newtonian):
        prod = {"kind": "newtonian"}
    elif isinstance(pr, PowerLaw):
        prod = {"kind": "power_law", "k_cons": pr.k_cons, "m": pr.m}
    else:
        prod = {"kind": "regularized", "k_cons": pr.k_cons, "m": pr.m, "eps": pr.eps}
    return {"kind": "fluid",
            "fluid": {"rho_star": m.rho_star, "R_gas": m.R_gas, "tau0": m.tau0,
                      "mu0": m.mu0, "production": prod}}


@dataclass(frozen=True)
class SimConfig:
    x_min: float
    x_max: float
    n_cells: int
    cfl: float
    x_front: float
    pi0: float
    ramp_width: float    # defaults to 10% of the domain when omitted
    t_end: float
    output_every: float | None = None

    def grid(self) -> Grid:
        return Grid(x_min=self.x_min, x_max=self.x_max,
                    n_cells=self.n_cells, cfl=self.cfl)

    def kink(self) -> KinkIC:
        return KinkIC(x_front=self.x_front, pi0=self.pi0,
                      ramp_width=self.ramp_width)


@dataclass(frozen=True)
class SweepConfig:
    param: str        # dotted path into the material dict, e.g. "solid.tau0"
    min: float
    max: float
    count: int
    scale: str = "linear"   # or "log"


@dataclass(frozen=True)
class ScenarioConfig:
    material: MaterialModel
    sim: SimConfig | None = None
    sweep: SweepConfig | None = None
    pi0: float | None = None
    out: str | None = None


def _sim_from_dict(d: dict) -> SimConfig:
    _check_keys(d, {"x_min", "x_max", "n_cells", "cfl", "x_front", "pi0",
                    "ramp_width", "t_end", "output_every"}, "'sim'")
    n_cells = d.get("n_cells")
    if not isinstance(n_cells, int) or isinstance(n_cells, bool):
        raise ConfigError("'n_cells' in 'sim' must be an integer")
    x_min = _number(d, "x_min", "'sim'")
    x_max = _number(d, "x_max", "'sim'")
    ramp = _number(d, "ramp_width", "'sim'", optional=True)
    if ramp is None:
        ramp = 0.1 * (x_max - x_min)
    try:
        cfg = SimConfig(
            x_min=x_min,
            x_max=x_max,
            n_cells=n_cells,
            cfl=_number(d, "cfl", "'sim'"),
            x_front=_number(d, "x_front", "'sim'"),
            pi0=_number(d, "pi0", "'sim'"),
            ramp_width=ramp,
            t_end=_number(d, "t_end", "'sim'"),
            output_every=_number(d, "output_every", "'sim'", optional=True),
        )
        cfg.grid()
        cfg.kink()
    except ValueError as exc:
        raise ConfigError(f"invalid 'sim' block: {exc}") from exc
    return cfg


def _sweep_from_dict(d: dict, material_dict: dict) -> SweepConfig:
    _check_keys(d, {"param", "min", "max", "count", "scale"}, "'sweep'")
    param = d.get("param")
    if not isinstance(param, str) or not param:
        raise ConfigError("'sweep' needs a string 'param'")
    count = d.get("count")
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ConfigError("'count' in 'sweep' must be a positive integer")
    scale = d.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigError(f"'scale' must be 'linear' or 'log', got {scale!r}")
    cfg = SweepConfig(param=param, min=_number(d, "min", "'sweep'"),
                      max=_number(d, "max", "'sweep'"), count=count, scale=scale)
    _resolve_param(material_dict, param)  # existence check
    if cfg.scale == "log" and (cfg.min <= 0.0 or cfg.max <= 0.0):
        raise ConfigError("log-scale sweeps need positive bounds")
    return cfg


def _resolve_param(material_dict: dict, dotted: str) -> tuple[dict, str]:
    node = material_dict
    parts = dotted.split(".")
    for p in parts[:-1]:
        if not isinstance(node, dict) or p not in node:
            raise ConfigError(f"sweep parameter '{dotted}' not found in the material schema")
        node = node[p]
    leaf = parts[-1]
    if not isinstance(node, dict) or leaf not in node:
        raise ConfigError(f"sweep parameter '{dotted}' not found in the material schema")
    if not isinstance(node[leaf], (int, float)) or isinstance(node[leaf], bool):
        raise ConfigError(f"sweep parameter '{dotted}' is not numeric")
    return node, leaf


def apply_sweep_value(material_dict: dict, dotted: str, value: float) -> MaterialModel:
    """Material with the dotted parameter replaced by the given value."""
    patched = json.loads(json.dumps(material_dict))
    node, leaf = _resolve_param(patched, dotted)
    node[leaf] = value
    return material_from_dict(patched)


def scenario_from_dict(d: dict) -> ScenarioConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(d, {"kind", "solid", "fluid", "sim", "sweep", "pi0", "out"},
                "config")
    material_dict = {k: v for k, v in d.items() if k in ("kind", "solid", "fluid")}
    material = material_from_dict(material_dict)
    sim = _sim_from_dict(d["sim"]) if "sim" in d else None
    sweep = _sweep_from_dict(d["sweep"], material_dict) if "sweep" in d else None
    pi0 = _number(d, "pi0", "config", optional=True)
    out = d.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("'out' must be a string path")
    return ScenarioConfig(material=material, sim=sim, sweep=sweep, pi0=pi0, out=out)


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    d = material_to_dict(cfg.material)
    if cfg.sim is not None:
        sim = {"x_min": cfg.sim.x_min, "x_max": cfg.sim.x_max,
               "n_cells": cfg.sim.n_cells, "cfl": cfg.sim.cfl,
               "x_front": cfg.sim.x_front, "pi0": cfg.sim.pi0,
               "ramp_width": cfg.sim.ramp_width, "t_end": cfg.sim.t_end}
        if cfg.sim.output_every is not None:
            sim["output_every"] = cfg.sim.output_every
        d["sim"] = sim
    if cfg.sweep is not None:
        d["sweep"] = {"param": cfg.sweep.param, "min": cfg.sweep.min,
                      "max": cfg.sweep.max, "count": cfg.sweep.count,
                      "scale": cfg.sweep.scale}
    if cfg.pi0 is not None:
        d["pi0"] = cfg.pi0
    if cfg.out is not None:
        d["out"] = cfg.out
    return d


def bundled_config_path(name: str) -> Path:
    """Path of a config that ships with the package (e.g. 'rubber.json')."""
    path = resources.files("accelwave.configs").joinpath(name)
    with resources.as_file(path) as concrete:
        if not concrete.exists():
            raise ConfigError(f"no bundled config named {name!r}")
        return Path(concrete)


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load a scenario config from disk; bare bundled names are resolved."""
    p = Path(path)
    if not p.exists() and p.name == str(path):
        try:
            p = bundled_config_path(p.name)
        except ConfigError:
            pass
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(p, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {p}: {exc}") from exc
    return scenario_from_dict(data)
