"""Run configuration: one dataclass, one JSON loader.

A config file is a flat JSON object; every key is optional and unknown keys
are rejected.  Matrices (the action generators) are given as nested lists
whose innermost entries are either plain numbers or two-element [re, im]
pairs:

    {
      "dim": 2,
      "action_kind": "unitary",
      "generator": [[1.0, [0.0, -0.5]], [[0.0, 0.5], -1.0]],
      "seed": 7,
      "suites": ["exact-sequence-line"]
    }
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

ACTION_KINDS = ("trivial", "unitary", "nilpotent")


@dataclass(frozen=True)
class TestInputSpec:
    """Envelope parameters for the random test inputs.

    Line inputs are sums of polynomial-times-Gaussian terms; the defaults
    keep all mass well inside the truncated domain so the decay guards
    never fire.  Circle inputs are trigonometric polynomials with
    geometrically decaying coefficients.
    """

    __test__ = False  # not a pytest class, despite the name

    sigma: float = 0.5
    degree: int = 3
    terms: int = 3
    norm_cap: float = 1.0
    center_spread: float = 1.25
    harmonics: int = 6
    coefficient_decay: float = 0.5


@dataclass(frozen=True)
class LabConfig:
    half_width: float = 10.0
    points: int = 512
    circle_points: int = 128
    dim: int = 2
    action_kind: str = "unitary"
    generator: np.ndarray | None = None
    circle_generator: np.ndarray | None = None
    generator_norm: float = 1.0
    seed: int = 42
    trials: int = 20
    suites: tuple[str, ...] = ()  # empty means: every registered suite
    input: TestInputSpec = field(default_factory=TestInputSpec)
    tolerances: dict = field(default_factory=dict)
    bump_sharpness: float = 9.0
    bump_harmonic_order: int = 8
    oracle: bool = False

    def __post_init__(self):
        if self.action_kind not in ACTION_KINDS:
            raise ConfigError(
                f"action_kind must be one of {ACTION_KINDS}, got {self.action_kind!r}"
            )
        if self.dim < 1:
            raise ConfigError("dim must be a positive integer")
        if self.trials < 1:
            raise ConfigError("trials must be a positive integer")

    def replace(self, **changes) -> "LabConfig":
        return dataclasses.replace(self, **changes)


def _parse_complex(entry):
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, list) and len(entry) == 2 and all(
        isinstance(v, (int, float)) for v in entry
    ):
        return complex(entry[0], entry[1])
    raise ConfigError(f"matrix entry must be a number or [re, im], got {entry!r}")


def _parse_matrix(rows, key: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{key} must be a list of rows")
    try:
        mat = np.array([[_parse_complex(e) for e in row] for row in rows], dtype=complex)
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError(f"could not parse {key}: {e}") from e
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigError(f"{key} must be square, got shape {mat.shape}")
    return mat


_SCALARS = {
    "half_width": float,
    "points": int,
    "circle_points": int,
    "dim": int,
    "action_kind": str,
    "generator_norm": float,
    "seed": int,
    "trials": int,
    "bump_sharpness": float,
    "bump_harmonic_order": int,
    "oracle": bool,
}

_INPUT_FIELDS = {f.name: f.type for f in dataclasses.fields(TestInputSpec)}


def load_config(path: str) -> LabConfig:
    """Parse a JSON config file, rejecting unknown keys."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    kwargs = {}
    for key, value in raw.items():
        if key in _SCALARS:
            want = _SCALARS[key]
            if want is bool:
                if not isinstance(value, bool):
                    raise ConfigError(f"{key} must be true or false")
                kwargs[key] = value
            elif want is str:
                if not isinstance(value, str):
                    raise ConfigError(f"{key} must be a string")
                kwargs[key] = value
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"{key} must be a number")
                if want is int and int(value) != value:
                    raise ConfigError(f"{key} must be an integer")
                kwargs[key] = want(value)
        elif key in ("generator", "circle_generator"):
            kwargs[key] = _parse_matrix(value, key)
        elif key == "suites":
            if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
                raise ConfigError("suites must be a list of suite names")
            kwargs[key] = tuple(value)
        elif key == "tolerances":
            if not isinstance(value, dict) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool)
                for v in value.values()
            ):
                raise ConfigError("tolerances must map check names to numbers")
            kwargs[key] = {k: float(v) for k, v in value.items()}
        elif key == "input":
            if not isinstance(value, dict):
                raise ConfigError("input must be an object")
            unknown = set(value) - set(_INPUT_FIELDS)
            if unknown:
                raise ConfigError(f"unknown input keys: {sorted(unknown)}")
            kwargs[key] = TestInputSpec(**value)
        else:
            raise ConfigError(f"unknown config key {key!r}")

    for gkey in ("generator", "circle_generator"):
        mat = kwargs.get(gkey)
        if mat is None:
            continue
        if "dim" not in kwargs:
            kwargs["dim"] = mat.shape[0]
        elif mat.shape[0] != kwargs["dim"]:
            raise ConfigError(f"{gkey} is {mat.shape[0]}x{mat.shape[0]} but dim={kwargs['dim']}")

    return LabConfig(**kwargs)
