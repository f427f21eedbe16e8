"""Engine configuration and its flat key=value file format.

Lists are comma separated. Unknown keys are rejected so typos fail fast.
The TRAILFINDER_STORE environment variable overrides store_dir when set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .engine import Params
from .gain import STRATEGIES
from .scoring import SCORING_FUNCTIONS


@dataclass(frozen=True)
class EngineConfig:
    params: Params = field(default_factory=Params)
    scoring: tuple[str, ...] = ("sum_distinct", "weighted")
    strategy: str = "mu_pg"
    k: int = 10
    dmax: int = 8
    hub_iterations: int = 30
    store_dir: str = ""
    listen: str = "127.0.0.1:8080"
    workers: int = 1
    # caps applied to per-request overrides
    max_k: int = 50
    max_iterations: int = 500
    max_m: int = 5

    def __post_init__(self) -> None:
        if not self.scoring:
            raise ValueError("scoring set must not be empty")
        for name in self.scoring:
            if name not in SCORING_FUNCTIONS:
                raise ValueError(f"unknown scoring function {name!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.k < 1 or self.dmax < 1 or self.workers < 1 or self.hub_iterations < 1:
            raise ValueError("k, dmax, workers and hub_iterations must be >= 1")


_PARAM_KEYS = {
    "iexplore": ("i_explore", int),
    "iconverge": ("i_converge", int),
    "m": ("m", int),
    "df": ("df", float),
    "gamma": ("gamma", float),
    "delta": ("delta", float),
    "c": ("c", float),
    "depth_cap": ("depth_cap", int),
    "seed": ("rng_seed", int),
}

_CONFIG_KEYS = {
    "strategy": ("strategy", str),
    "k": ("k", int),
    "dmax": ("dmax", int),
    "hub_iterations": ("hub_iterations", int),
    "store_dir": ("store_dir", str),
    "listen": ("listen", str),
    "workers": ("workers", int),
    "max_k": ("max_k", int),
    "max_iterations": ("max_iterations", int),
    "max_m": ("max_m", int),
}


def parse_kv(text: str) -> dict[str, str]:
    """Parse flat key=value lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def config_from_pairs(pairs: dict[str, str], base: EngineConfig | None = None) -> EngineConfig:
    config = base or EngineConfig()
    param_updates: dict[str, object] = {}
    config_updates: dict[str, object] = {}
    for key, value in pairs.items():
        if key in _PARAM_KEYS:
            name, cast = _PARAM_KEYS[key]
            param_updates[name] = cast(value)
        elif key in _CONFIG_KEYS:
            name, cast = _CONFIG_KEYS[key]
            config_updates[name] = cast(value)
        elif key == "scoring":
            config_updates["scoring"] = tuple(v.strip() for v in value.split(",") if v.strip())
        else:
            raise ValueError(f"unknown config key {key!r}")
    params = replace(config.params, **param_updates) if param_updates else config.params
    return replace(config, params=params, **config_updates)


def load_config(path: str | Path, base: EngineConfig | None = None) -> EngineConfig:
    return config_from_pairs(parse_kv(Path(path).read_text(encoding="utf-8")), base)


def dump_config(config: EngineConfig) -> str:
    p = config.params
    lines = [
        f"iexplore={p.i_explore}",
        f"iconverge={p.i_converge}",
        f"m={p.m}",
        f"df={p.df}",
        f"gamma={p.gamma}",
        f"delta={p.delta}",
        f"c={p.c}",
        f"depth_cap={p.depth_cap}",
        f"seed={p.rng_seed}",
        f"scoring={','.join(config.scoring)}",
    ]
    for key, (name, _) in _CONFIG_KEYS.items():
        lines.append(f"{key}={getattr(config, name)}")
    return "\n".join(lines) + "\n"


def apply_store_env(config: EngineConfig) -> EngineConfig:
    store = os.environ.get("TRAILFINDER_STORE")
    if store:
        return replace(config, store_dir=store)
    return config
