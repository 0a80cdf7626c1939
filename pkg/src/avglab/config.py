"""Run configuration: JSON file plus AVGLAB_* environment overrides."""
from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import List, Mapping, Optional

STAGES = ("integrals", "pipeline", "wronskian", "certificates", "ect", "sharpness",
          "zero-count", "simulation")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    out_dir: str = "avglab-out"
    seed: int = 0
    stages: List[str] = field(default_factory=lambda: list(STAGES))
    stop_on_failure: bool = True
    emit_svg: bool = True
    # integral table
    integral_points: int = 40
    integral_tol: float = 1e-10
    # pipeline equivalence
    pipeline_sets: int = 200
    pipeline_tol: float = 1e-8
    # Wronskians
    wronskian_points: int = 25
    wronskian_tol: float = 1e-7
    # certificates
    cert_r_lo: float = 1e-3
    cert_r_hi: float = 1e3
    head_tail: bool = True
    # realization and zero counts
    sharpness_random: int = 100
    zero_vectors: int = 1000
    # simulation
    epsilon: float = 1e-3
    sim_r_min: float = 0.2
    sim_r_max: float = 9.0
    cycle_distance_factor: float = 5.0
    identity_tol: float = 1e-11

    TOLERANCES = ("integral_tol", "pipeline_tol", "wronskian_tol", "epsilon", "identity_tol",
                  "cycle_distance_factor")

    def validate(self) -> "RunConfig":
        for name in self.TOLERANCES:
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.cert_r_lo < self.cert_r_hi:
            raise ConfigError("need 0 < cert_r_lo < cert_r_hi")
        if not 0 < self.sim_r_min < self.sim_r_max:
            raise ConfigError("need 0 < sim_r_min < sim_r_max")
        unknown = [s for s in self.stages if s not in STAGES]
        if unknown:
            raise ConfigError(f"unknown stage(s) {unknown}; known: {list(STAGES)}")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def hash(self) -> str:
        """Digest of the settings that influence results (out_dir excluded)."""
        d = self.to_dict()
        d.pop("out_dir")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def meta(self) -> dict:
        return {"config_hash": self.hash(), "seed": self.seed}


def _parse(value: str, default):
    if isinstance(default, bool):
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"cannot read {value!r} as a boolean")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    if isinstance(default, list):
        return [s.strip() for s in value.split(",") if s.strip()]
    return value


def load_config(path: Optional[str] = None, env: Optional[Mapping[str, str]] = None,
                **overrides) -> RunConfig:
    """Defaults <- JSON file <- AVGLAB_<FIELD> variables <- keyword overrides."""
    cfg = RunConfig()
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    if path:
        with open(path) as fh:
            data = json.load(fh)
        bad = set(data) - fields
        if bad:
            raise ConfigError(f"unknown config keys {sorted(bad)}")
        for k, v in data.items():
            setattr(cfg, k, v)
    env = os.environ if env is None else env
    for name in fields:
        key = "AVGLAB_" + name.upper()
        if key in env:
            setattr(cfg, name, _parse(env[key], getattr(RunConfig(), name)))
    for k, v in overrides.items():
        if v is None:
            continue
        if k not in fields:
            raise ConfigError(f"unknown config key {k!r}")
        setattr(cfg, k, v)
    return cfg.validate()
