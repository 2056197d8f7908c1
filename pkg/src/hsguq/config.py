"""Run configuration: flat ``key = value`` text files with ``#`` comments."""

import dataclasses
import hashlib
import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .initial import DEFAULTS

MODELS = ("euler", "m1")
METHODS = ("hsg", "sg", "split", "ipmm", "mc")


@dataclass(frozen=True)
class RunConfig:
    model: str
    method: str
    initial: str
    cells: int
    t_end: float
    K: int = 0
    Q: int = None
    x_left: float = None
    x_right: float = None
    cfl: float = 0.95
    gamma: float = 1.4
    sigma_a: float = 0.0
    sigma_s: float = 1.0
    left_state: tuple = None
    right_state: tuple = None
    interface: float = 0.5
    interface_spread: float = 0.0
    samples: int = 2000
    seed: int = 42
    output_dir: str = "output"
    closure_table: str = None
    closure_size: int = 2001

    def replace(self, **changes):
        return make_config(**{**dataclasses.asdict(self), **changes})

    def fingerprint(self):
        text = ";".join(f"{k}={v!r}" for k, v in sorted(dataclasses.asdict(self).items())
                        if k != "output_dir")
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def items(self):
        return dataclasses.asdict(self).items()


_INT = {"K", "Q", "cells", "samples", "seed", "closure_size"}
_FLOAT = {"t_end", "x_left", "x_right", "cfl", "gamma", "sigma_a", "sigma_s",
          "interface", "interface_spread"}
_VECTOR = {"left_state", "right_state"}
_STR = {"model", "method", "initial", "output_dir", "closure_table"}
KEYS = _INT | _FLOAT | _VECTOR | _STR
REQUIRED = ("method", "initial", "cells", "t_end")


def _convert(key, text):
    try:
        if key in _INT:
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        if key in _FLOAT:
            return float(text)
        if key in _VECTOR:
            return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        kind = "an integer" if key in _INT else "a number" if key in _FLOAT else "a list of numbers"
        raise ConfigError(f"{key}: expected {kind}, got {text!r}") from None
    return text


def make_config(**values):
    """Validate and complete keyword settings into a :class:`RunConfig`."""
    unknown = set(values) - KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    values = {k: v for k, v in values.items() if v is not None}
    for key in REQUIRED:
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    initial = values["initial"]
    if initial not in DEFAULTS:
        raise ConfigError(f"initial: unknown initial condition {initial!r}, expected one of {sorted(DEFAULTS)}")
    defaults = DEFAULTS[initial]
    model = values.setdefault("model", defaults["model"])
    if model is None:
        raise ConfigError("model: required for custom initial data")
    if model not in MODELS:
        raise ConfigError(f"model: expected one of {MODELS}, got {model!r}")
    if defaults["model"] is not None and model != defaults["model"]:
        raise ConfigError(f"initial condition {initial!r} belongs to model {defaults['model']!r}")
    if values["method"] not in METHODS:
        raise ConfigError(f"method: expected one of {METHODS}, got {values['method']!r}")
    values.setdefault("x_left", defaults["x_left"])
    values.setdefault("x_right", defaults["x_right"])
    K = values.setdefault("K", 0)
    if K < 0:
        raise ConfigError(f"K: truncation order must satisfy K >= 0, got {K}")
    Q = values.setdefault("Q", 2 * (K + 1))
    if Q < 1:
        raise ConfigError(f"Q: need at least one quadrature node, got {Q}")
    if Q < K + 1:
        warnings.warn(f"Q={Q} < K+1={K + 1}: the quadrature does not resolve the basis", stacklevel=2)
    if values["cells"] < 3:
        raise ConfigError(f"cells: need I >= 3, got {values['cells']}")
    if not values["t_end"] > 0:
        raise ConfigError(f"t_end: must be positive, got {values['t_end']}")
    cfl = values.get("cfl", 0.95)
    if not 0 < cfl <= 1:
        raise ConfigError(f"cfl: must lie in (0, 1], got {cfl}")
    if not values["x_right"] > values["x_left"]:
        raise ConfigError("x_right must exceed x_left")
    if values.get("samples", 1) < 1:
        raise ConfigError("samples: need at least one sample")
    if values.get("gamma", 1.4) <= 1:
        raise ConfigError("gamma: adiabatic constant must exceed 1")
    if values.get("sigma_a", 0) < 0 or values.get("sigma_s", 0) < 0:
        raise ConfigError("sigma_a, sigma_s: must be nonnegative")
    size = values.get("closure_size", 2001)
    if size < 3 or size % 2 == 0:
        raise ConfigError(f"closure_size: must be odd and >= 3, got {size}")
    if initial == "custom":
        dim = 3 if model == "euler" else 2
        for key in ("left_state", "right_state"):
            state = values.get(key)
            if state is None or len(state) != dim:
                raise ConfigError(f"{key}: custom initial data needs {dim} components")
            values[key] = tuple(float(v) for v in state)
    return RunConfig(**values)


def parse_config_text(text, source="<string>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r} in line {raw.strip()!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _convert(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    try:
        return make_config(**values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_config(path):
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text(), source=str(path))


def bundled_config(name):
    """Path of a configuration shipped with the package."""
    return Path(__file__).parent / "configs" / name
