"""Config parsing and deterministic report writing.

Configs are plain key-value text (``key = value`` lines, ``#`` comments).
Reports are JSON with sorted keys and CSV with repr-formatted floats, so a
given (config, seed) pair produces byte-identical files on every run and
worker count.
"""

import json
import math
import os
from dataclasses import dataclass, field, asdict

REPORT_SCHEMA = 1


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


class PartialResultsError(RuntimeError):
    """A stage failed after earlier stages wrote output; see the manifest."""

    def __init__(self, message, manifest_path):
        super().__init__(message)
        self.manifest_path = manifest_path


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _parse_schedule(text: str):
    try:
        vals = [int(v) for v in str(text).replace(",", " ").split()]
    except ValueError as e:
        raise ConfigError(f"bad n_schedule {text!r}: {e}") from None
    if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"n_schedule must be strictly increasing, got {vals}")
    return vals


@dataclass
class ExperimentConfig:
    system: str = "billiard"
    beta: float = 3.0
    s_max: float = 1.0
    arc_radius: float = 1.0
    alpha: float | None = None
    b: float = 1.3
    observable: str = "(0.2 + sin(theta))*exp(-10*x)"
    eta: float = 1.0
    n_schedule: list = field(default_factory=lambda: [1000, 10000])
    replicas: int = 200
    seed: int = 0
    outdir: str = "out"
    workers: int = 1
    path_samples: int = 4
    excursion_cap: int = 10**7
    graze_tol: float = 1e-12
    burn_in: int = 1000
    gridsize: int = 1024
    class_tol: float | None = None
    refinement: int = 128

    def __post_init__(self):
        if self.system not in ("billiard", "lsv", "afn"):
            raise ConfigError(f"system must be billiard, lsv or afn, got {self.system!r}")
        if isinstance(self.n_schedule, str):
            self.n_schedule = _parse_schedule(self.n_schedule)
        if any(b <= a for a, b in zip(self.n_schedule, self.n_schedule[1:])):
            raise ConfigError(f"n_schedule must be strictly increasing, got {self.n_schedule}")
        if self.system == "billiard":
            derived = self.beta / (self.beta - 1.0)
            if self.alpha is not None and not math.isclose(self.alpha, derived, rel_tol=0, abs_tol=1e-12):
                raise ConfigError(
                    f"alpha={self.alpha} conflicts with the value {derived!r} derived from "
                    f"beta={self.beta}; remove alpha from the config"
                )
            self.alpha = derived
        else:
            if self.alpha is None:
                raise ConfigError(f"system {self.system!r} requires alpha")
            if not 1.0 < self.alpha < 2.0:
                raise ConfigError(f"alpha must lie in (1,2), got {self.alpha}")
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


_FIELD_TYPES = {
    "system": str, "beta": float, "s_max": float, "arc_radius": float,
    "alpha": float, "b": float, "observable": str, "eta": float,
    "n_schedule": str, "replicas": int, "seed": int, "outdir": str,
    "workers": int, "path_samples": int, "excursion_cap": int,
    "graze_tol": float, "burn_in": int, "gridsize": int,
    "class_tol": float, "refinement": int,
}


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    kwargs = {}
    for key, raw in mapping.items():
        if raw is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        caster = _FIELD_TYPES[key]
        try:
            kwargs[key] = caster(raw)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad value for {key}: {raw!r} ({e})") from None
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as e:
        raise ConfigError(str(e)) from None


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    mapping = {}
    if path:
        with open(path, "r", encoding="utf-8") as f:
            mapping.update(parse_config_text(f.read()))
    if overrides:
        mapping.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(mapping)


def _json_default(obj):
    import numpy as np

    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_json(path: str, payload: dict):
    body = dict(payload)
    body.setdefault("schema", REPORT_SCHEMA)
    text = json.dumps(body, sort_keys=True, indent=2, default=_json_default)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text + "\n")


def write_csv(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join("" if v is None else (repr(float(v)) if isinstance(v, float) else str(v)) for v in row) + "\n")


def write_manifest(outdir: str, completed: list, failed_stage: str, error: str) -> str:
    path = os.path.join(outdir, "manifest.json")
    write_json(path, {
        "completed_stages": completed,
        "failed_stage": failed_stage,
        "error": error,
    })
    return path
