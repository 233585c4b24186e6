"""Experiment configuration: a small key=value sectioned text format with
JSON accepted as an alternate encoding of the same schema."""

from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    """Malformed or incomplete configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    seed: int
    oracle: str = "exact"          # exact | monte_carlo
    n_draws: int | None = None     # monte_carlo only
    params: dict = field(default_factory=dict)
    out: str | None = None

    def __post_init__(self):
        if not self.experiment_id:
            raise ConfigError("experiment_id is mandatory")
        if self.oracle not in ("exact", "monte_carlo"):
            raise ConfigError(f"unknown oracle {self.oracle!r}")
        if self.seed is None:
            raise ConfigError("seed is mandatory")


def parse_scalar(text: str):
    """int | float | comma-list | bare string, in that priority."""
    s = text.strip()
    if "," in s:
        return [parse_scalar(t) for t in s.split(",") if t.strip() != ""]
    for cast in (int, float):
        try:
            return cast(s)
        except ValueError:
            pass
    if s.lower() in ("true", "false"):
        return s.lower() == "true"
    return s


def load_params(path: str | Path) -> dict:
    """Flat key=value parameter file (JSON object accepted)."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"bad JSON params: {e}") from e
        if not isinstance(obj, dict):
            raise ConfigError("JSON params must be an object")
        return obj
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(("#", ";")) or line.startswith("["):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        out[key.strip()] = parse_scalar(val)
    return out


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    """Sectioned key=value (or equivalent JSON) -> ExperimentConfig."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"bad JSON config: {e}") from e
        section = obj.get("experiment", obj)
    else:
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as e:
            raise ConfigError(f"bad config: {e}") from e
        if "experiment" not in cp:
            raise ConfigError("missing [experiment] section")
        section = {k: parse_scalar(v) for k, v in cp["experiment"].items()}
    try:
        return ExperimentConfig(
            experiment_id=str(section["id"]),
            seed=int(section["seed"]),
            oracle=str(section.get("oracle", "exact")),
            n_draws=(int(section["samples"]) if "samples" in section else None),
            params={k: v for k, v in section.items()
                    if k not in ("id", "seed", "oracle", "samples", "out")},
            out=section.get("out"))
    except KeyError as e:
        raise ConfigError(f"missing config key {e}") from e
