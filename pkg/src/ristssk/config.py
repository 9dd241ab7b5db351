"""Simulation configuration: the ``SystemConfig`` type and its document form.

A config document is YAML (JSON also parses) with these keys:

    Nt, Nr, N, L        required integers (Nt and L powers of two)
    snr_grid_db         required, strictly increasing list of dB values,
                        or a mapping {start, stop, step} (stop inclusive)
    seed                master seed, 0 <= seed < 2**64 (default 0);
                        ``master_seed`` is accepted as an alias
    phase_policy        "optimal" | "blind" or {mode, target_rx_antenna}
                        (default optimal, target 1)
    detector            "lc" | "ml" (default lc)
    trial_policy        {fixed_trials: n} or {min_block_errors: n, max_trials: n}
                        (default min_block_errors 200, max_trials 1e7)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Union

import numpy as np
import yaml

from .channel import PhaseMode, PhasePolicy
from .errors import InvalidParameterError, is_power_of_two
from .mapping import bits_per_symbol


class ConfigError(ValueError):
    """A config document failed validation. The message names the key."""


class Detector(str, Enum):
    LC = "lc"
    ML = "ml"


@dataclass(frozen=True)
class FixedTrials:
    fixed_trials: int

    def __post_init__(self):
        _positive_int("trial_policy.fixed_trials", self.fixed_trials)

    @property
    def max_trials(self) -> int:
        return self.fixed_trials


@dataclass(frozen=True)
class MinBlockErrors:
    min_block_errors: int = 200
    max_trials: int = 10**7

    def __post_init__(self):
        _positive_int("trial_policy.min_block_errors", self.min_block_errors)
        _positive_int("trial_policy.max_trials", self.max_trials)


TrialPolicy = Union[FixedTrials, MinBlockErrors]

MAX_SEED = 2**64


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidParameterError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise InvalidParameterError(f"{name}={value} must be >= 1")
    return int(value)


@dataclass(frozen=True)
class SystemConfig:
    Nt: int
    Nr: int
    N: int
    L: int
    snr_grid_db: tuple[float, ...]
    phase_policy: PhasePolicy = field(default_factory=PhasePolicy)
    trial_policy: TrialPolicy = field(default_factory=MinBlockErrors)
    detector: Detector = Detector.LC
    master_seed: int = 0

    def __post_init__(self):
        for name in ("Nt", "Nr", "N", "L"):
            _positive_int(name, getattr(self, name))
        for name in ("Nt", "L"):
            if not is_power_of_two(getattr(self, name)):
                raise InvalidParameterError(f"{name}={getattr(self, name)} must be a power of two")
        if self.Nt * self.L < 2:
            raise InvalidParameterError("Nt=1 with L=1 carries no information bits")
        grid = tuple(float(x) for x in self.snr_grid_db)
        if not grid:
            raise InvalidParameterError("snr_grid_db must not be empty")
        if any(math.isnan(x) or x == -math.inf for x in grid):
            raise InvalidParameterError("snr_grid_db must not contain NaN or -inf")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidParameterError("snr_grid_db must be strictly increasing")
        object.__setattr__(self, "snr_grid_db", grid)
        object.__setattr__(self, "detector", Detector(self.detector))
        if self.phase_policy.target_rx_antenna > self.Nr:
            raise InvalidParameterError(
                f"phase_policy.target_rx_antenna={self.phase_policy.target_rx_antenna} exceeds Nr={self.Nr}"
            )
        if isinstance(self.master_seed, bool) or not isinstance(self.master_seed, (int, np.integer)):
            raise InvalidParameterError(f"seed must be an integer, got {self.master_seed!r}")
        if not 0 <= self.master_seed < MAX_SEED:
            raise InvalidParameterError(f"seed={self.master_seed} must be an unsigned 64-bit integer")
        object.__setattr__(self, "master_seed", int(self.master_seed))

    @property
    def bits_per_symbol(self) -> int:
        return bits_per_symbol(self.Nt, self.L)

    def with_overrides(self, **changes) -> SystemConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_REQUIRED = ("Nt", "Nr", "N", "L", "snr_grid_db")
_OPTIONAL = ("seed", "master_seed", "phase_policy", "detector", "trial_policy")


def _expect_int(key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key}: expected an integer, got {type(value).__name__} {value!r}")
    return value


def _parse_grid(value) -> tuple[float, ...]:
    if isinstance(value, dict):
        unknown = set(value) - {"start", "stop", "step"}
        if unknown:
            raise ConfigError(f"snr_grid_db: unknown keys {sorted(unknown)}")
        try:
            start, stop, step = (float(value[k]) for k in ("start", "stop", "step"))
        except KeyError as exc:
            raise ConfigError(f"snr_grid_db: missing key {exc.args[0]!r}") from None
        if step <= 0:
            raise ConfigError("snr_grid_db.step: must be > 0")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 12) for k in range(count))
    if not isinstance(value, list):
        raise ConfigError(f"snr_grid_db: expected a list of numbers, got {type(value).__name__}")
    out = []
    for x in value:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ConfigError(f"snr_grid_db: expected numbers, got {x!r}")
        out.append(float(x))
    return tuple(out)


def _parse_phase(value) -> PhasePolicy:
    if isinstance(value, str):
        value = {"mode": value}
    if not isinstance(value, dict):
        raise ConfigError("phase_policy: expected 'optimal', 'blind' or a mapping")
    unknown = set(value) - {"mode", "target_rx_antenna"}
    if unknown:
        raise ConfigError(f"phase_policy: unknown keys {sorted(unknown)}")
    mode = str(value.get("mode", "optimal")).lower()
    if mode not in {m.value for m in PhaseMode}:
        raise ConfigError(f"phase_policy.mode: expected 'optimal' or 'blind', got {mode!r}")
    target = _expect_int("phase_policy.target_rx_antenna", value.get("target_rx_antenna", 1))
    return PhasePolicy(PhaseMode(mode), target)


def _parse_trials(value) -> TrialPolicy:
    if not isinstance(value, dict):
        raise ConfigError("trial_policy: expected a mapping")
    keys = set(value)
    if keys == {"fixed_trials"}:
        return FixedTrials(_expect_int("trial_policy.fixed_trials", value["fixed_trials"]))
    if "min_block_errors" in keys and keys <= {"min_block_errors", "max_trials"}:
        max_trials = value.get("max_trials", MinBlockErrors.max_trials)
        if isinstance(max_trials, float) and max_trials.is_integer():
            max_trials = int(max_trials)
        return MinBlockErrors(
            _expect_int("trial_policy.min_block_errors", value["min_block_errors"]),
            _expect_int("trial_policy.max_trials", max_trials),
        )
    raise ConfigError(
        f"trial_policy: expected {{fixed_trials}} or {{min_block_errors, max_trials}}, got keys {sorted(keys)}"
    )


def config_from_dict(doc: dict[str, Any]) -> SystemConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping at the top level")
    unknown = sorted(set(doc) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    if "seed" in doc and "master_seed" in doc:
        raise ConfigError("seed: give either 'seed' or 'master_seed', not both")

    kwargs: dict[str, Any] = {name: _expect_int(name, doc[name]) for name in ("Nt", "Nr", "N", "L")}
    kwargs["snr_grid_db"] = _parse_grid(doc["snr_grid_db"])
    seed_key = "master_seed" if "master_seed" in doc else "seed"
    if seed_key in doc:
        kwargs["master_seed"] = _expect_int(seed_key, doc[seed_key])
    if "phase_policy" in doc:
        kwargs["phase_policy"] = _parse_phase(doc["phase_policy"])
    if "detector" in doc:
        det = str(doc["detector"]).lower()
        if det not in {d.value for d in Detector}:
            raise ConfigError(f"detector: expected 'lc' or 'ml', got {doc['detector']!r}")
        kwargs["detector"] = Detector(det)
    if "trial_policy" in doc:
        try:
            kwargs["trial_policy"] = _parse_trials(doc["trial_policy"])
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from None

    try:
        return SystemConfig(**kwargs)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(source: str) -> SystemConfig:
    """Parse and validate a YAML/JSON config document given as text."""
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML/JSON: {exc}") from None
    if doc is None:
        raise ConfigError("config document is empty")
    return config_from_dict(doc)


def config_to_dict(config: SystemConfig) -> dict[str, Any]:
    tp = config.trial_policy
    trials = (
        {"fixed_trials": tp.fixed_trials}
        if isinstance(tp, FixedTrials)
        else {"min_block_errors": tp.min_block_errors, "max_trials": tp.max_trials}
    )
    return {
        "Nt": config.Nt,
        "Nr": config.Nr,
        "N": config.N,
        "L": config.L,
        "snr_grid_db": list(config.snr_grid_db),
        "seed": config.master_seed,
        "phase_policy": {
            "mode": config.phase_policy.mode.value,
            "target_rx_antenna": config.phase_policy.target_rx_antenna,
        },
        "detector": config.detector.value,
        "trial_policy": trials,
    }


def dump_config(config: SystemConfig) -> str:
    return yaml.safe_dump(config_to_dict(config), sort_keys=False)
