"""Run configuration: JSON schema, validation, and hashing.

The CLI reads one JSON object (all keys optional, defaults below) and
flag overrides are applied on top:

    {
      "market": {"tau": 288000, "r": 0.000109589, "a": 1.1, "beta": 0.01},
      "pair":   {"lambda_a": 5.0, "lambda_b": 5.0},
      "dist":   {"type": "power_law", "z_min": 0.001}
                | {"type": "uniform", "z_max": 1.0}
                | {"type": "constant", "z": 0.5},
      "topology": "pairs" | "star",
      "world": "with_lightning" | "no_lightning" | "both",
      "phi_grid": [0.001, ...] | {"start": 1e-6, "stop": 1.0, "num": 50,
                                  "spacing": "log" | "linear"},
      "n_grid": ..., "w_grid": ...   (same grid forms),
      "seed": 12345,
      "replications": 30,            (null: use the protocol's budget)
      "scaled_down": true,           (desk-scale simulation protocol)
      "output_dir": "out"
    }
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import (
    Constant,
    MarketParams,
    PairParams,
    ParameterError,
    PowerLaw,
    TransferSizeDist,
    Uniform,
    World,
)

__all__ = ["ConfigError", "Topology", "RunConfig", "load_config", "config_sha256"]


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


class Topology(enum.Enum):
    PAIRS = "pairs"
    STAR = "star"


_DEFAULTS: dict = {
    "market": {"tau": 288_000.0, "r": 0.04 / 365.0, "a": 1.1, "beta": 0.01},
    "pair": {"lambda_a": 5.0, "lambda_b": 5.0},
    "dist": {"type": "power_law", "z_min": 0.001},
    "topology": "pairs",
    "world": "both",
    "phi_grid": {"start": 1e-6, "stop": 1.0, "num": 50, "spacing": "log"},
    "n_grid": {"start": 1e5, "stop": 1e8, "num": 50, "spacing": "log"},
    "w_grid": {"start": 10.0, "stop": 200.0, "num": 20, "spacing": "linear"},
    "seed": 20_240_117,
    "replications": None,
    "scaled_down": True,
    "output_dir": "out",
}


@dataclass(frozen=True)
class RunConfig:
    market: MarketParams
    pair: PairParams
    dist: TransferSizeDist
    topology: Topology
    world: World | None  # None means both worlds
    phi_grid: tuple[float, ...]
    n_grid: tuple[float, ...]
    w_grid: tuple[float, ...]
    seed: int
    replications: int | None
    scaled_down: bool
    output_dir: str
    raw: dict = field(compare=False)

    def worlds(self) -> tuple[World, ...]:
        if self.world is None:
            return (World.NO_LIGHTNING, World.WITH_LIGHTNING)
        return (self.world,)


def _grid(spec, name: str) -> tuple[float, ...]:
    if isinstance(spec, (int, float)):
        return (float(spec),)
    if isinstance(spec, (list, tuple)):
        vals = [float(v) for v in spec]
        if not vals:
            raise ConfigError(f"{name}: grid must not be empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError(f"{name}: grid must be strictly increasing")
        return tuple(vals)
    if isinstance(spec, dict):
        try:
            start, stop = float(spec["start"]), float(spec["stop"])
            num = int(spec.get("num", 20))
            spacing = spec.get("spacing", "log")
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: bad grid spec {spec!r}") from exc
        if num < 1 or stop <= start:
            raise ConfigError(f"{name}: need stop > start and num >= 1")
        if spacing == "log":
            if start <= 0:
                raise ConfigError(f"{name}: log spacing needs start > 0")
            return tuple(np.geomspace(start, stop, num))
        if spacing == "linear":
            return tuple(np.linspace(start, stop, num))
        raise ConfigError(f"{name}: spacing must be 'log' or 'linear'")
    raise ConfigError(f"{name}: expected number, list, or grid object")


def _dist(spec, name: str) -> TransferSizeDist:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"{name}: expected an object with a 'type' key")
    kind = spec["type"]
    try:
        if kind == "power_law":
            return PowerLaw(z_min=float(spec["z_min"]))
        if kind == "uniform":
            return Uniform(z_max=float(spec["z_max"]))
        if kind == "constant":
            return Constant(z=float(spec["z"]))
    except KeyError as exc:
        raise ConfigError(f"{name}: missing field {exc} for type {kind!r}") from exc
    except (TypeError, ValueError, ParameterError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc
    raise ConfigError(f"{name}: unknown type {kind!r}")


def load_config(source: dict | str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from defaults, an optional JSON file or dict, and
    CLI overrides, validating each field."""
    merged = json.loads(json.dumps(_DEFAULTS))  # deep copy
    if source is not None:
        if isinstance(source, (str, Path)):
            path = Path(source)
            if not path.exists():
                raise ConfigError(f"config file not found: {path}")
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {path}: invalid JSON ({exc})") from exc
        else:
            data = source
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        unknown = set(data) - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key, value in data.items():
            if key in ("market", "pair") and isinstance(value, dict):
                merged[key] = {**merged[key], **value}
            else:
                merged[key] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    try:
        market = MarketParams(**{k: float(v) for k, v in merged["market"].items()})
    except (TypeError, ValueError, ParameterError) as exc:
        raise ConfigError(f"market: {exc}") from exc
    try:
        pair = PairParams(**{k: float(v) for k, v in merged["pair"].items()})
    except (TypeError, ValueError, ParameterError) as exc:
        raise ConfigError(f"pair: {exc}") from exc
    dist = _dist(merged["dist"], "dist")

    topology_raw = merged["topology"]
    try:
        topology = Topology(topology_raw)
    except ValueError as exc:
        raise ConfigError(f"topology: unknown value {topology_raw!r}") from exc

    world_raw = merged["world"]
    if world_raw == "both":
        world = None
    else:
        try:
            world = World(world_raw)
        except ValueError as exc:
            raise ConfigError(f"world: unknown value {world_raw!r}") from exc

    seed = merged["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError(f"seed: expected a nonnegative integer, got {seed!r}")
    reps = merged["replications"]
    if reps is not None:
        if not isinstance(reps, int) or isinstance(reps, bool) or reps < 1:
            raise ConfigError(f"replications: expected a positive integer, got {reps!r}")
    scaled = merged["scaled_down"]
    if not isinstance(scaled, bool):
        raise ConfigError(f"scaled_down: expected true/false, got {scaled!r}")
    out_dir = merged["output_dir"]
    if not isinstance(out_dir, str) or not out_dir:
        raise ConfigError(f"output_dir: expected a nonempty string, got {out_dir!r}")

    return RunConfig(
        market=market,
        pair=pair,
        dist=dist,
        topology=topology,
        world=world,
        phi_grid=_grid(merged["phi_grid"], "phi_grid"),
        n_grid=_grid(merged["n_grid"], "n_grid"),
        w_grid=_grid(merged["w_grid"], "w_grid"),
        seed=seed,
        replications=reps,
        scaled_down=scaled,
        output_dir=out_dir,
        raw=merged,
    )


def config_sha256(config: RunConfig) -> str:
    """Hash of the fully-resolved configuration, for the run manifest."""
    canonical = json.dumps(config.raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
