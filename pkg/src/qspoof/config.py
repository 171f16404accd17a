"""Scenario configuration: JSON schema, validation, and round-tripping.

A scenario names its hypothesis pair either explicitly (matrix literals
plus cost weights) or through radar parameters.  Grids, seeds and output
destinations have defaults; physics parameters never default silently.
Validation errors always name the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .detection import HypothesisPair
from .operators import DensityOperator
from .radar import RadarParams, default_tau_grid
from .serialize import matrix_from_literal, matrix_to_literal


class ConfigError(ValueError):
    """Configuration rejected; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


DEFAULT_VERIFY_LAMBDAS = (0.5, 1.0, 2.0, 5.0)


@dataclass(frozen=True)
class VerifyOptions:
    instances: int = 50
    max_dim: int = 6
    lambdas: tuple = DEFAULT_VERIFY_LAMBDAS
    commuting_only: bool = False
    channel_instances: int = 50

    def to_dict(self) -> dict:
        return {
            "instances": self.instances,
            "max_dim": self.max_dim,
            "lambdas": list(self.lambdas),
            "commuting_only": self.commuting_only,
            "channel_instances": self.channel_instances,
        }


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Validated scenario: exactly one of ``explicit`` or ``radar`` is set."""

    explicit: HypothesisPair | None = None
    radar: RadarParams | None = None
    c0: float | None = None
    c1: float | None = None
    lambdas: tuple = ()
    tau: float | None = None
    tau_grid: tuple | None = None
    l_values: tuple | None = None
    out_path: str | None = None
    out_format: str | None = None
    seed: int = 0
    verify: VerifyOptions = field(default_factory=VerifyOptions)

    def build_pair(self) -> HypothesisPair:
        if self.explicit is not None:
            return self.explicit
        from .radar import build_radar_pair

        return build_radar_pair(self.radar, self.c0, self.c1)

    def effective_tau(self) -> float:
        """Sweep threshold: explicit ``sweep.tau`` wins, else derived from the cost weights."""
        if self.tau is not None:
            return self.tau
        return self.build_pair().tau

    def effective_tau_grid(self) -> np.ndarray:
        if self.tau_grid is not None:
            return np.asarray(self.tau_grid, dtype=float)
        return default_tau_grid()

    def effective_l_values(self) -> tuple:
        if self.l_values is not None:
            return self.l_values
        if self.radar is None:
            raise ConfigError("sweep.l_values", "required for an explicit-pair scenario")
        return tuple(range(0, max(self.radar.k, self.radar.l) + 4))

    def to_dict(self) -> dict:
        out: dict = {}
        if self.explicit is not None:
            out["explicit"] = {
                "rho0": matrix_to_literal(self.explicit.rho0.matrix),
                "rho1": matrix_to_literal(self.explicit.rho1.matrix),
                "c0": self.explicit.c0,
                "c1": self.explicit.c1,
            }
        if self.radar is not None:
            out["radar"] = {
                "n_b": self.radar.n_b,
                "x": self.radar.x,
                "k": self.radar.k,
                "l": self.radar.l,
                "c0": self.c0,
                "c1": self.c1,
            }
        if self.lambdas:
            out["attack"] = {"lambdas": list(self.lambdas)}
        sweep: dict = {}
        if self.tau is not None:
            sweep["tau"] = self.tau
        if self.tau_grid is not None:
            sweep["tau_grid"] = list(self.tau_grid)
        if self.l_values is not None:
            sweep["l_values"] = list(self.l_values)
        if sweep:
            out["sweep"] = sweep
        output: dict = {}
        if self.out_path is not None:
            output["path"] = self.out_path
        if self.out_format is not None:
            output["format"] = self.out_format
        if output:
            out["output"] = output
        out["seed"] = self.seed
        out["verify"] = self.verify.to_dict()
        return out


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}.{key}", "missing required field")
    return obj[key]


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    return float(value)


def _nonneg_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigError(where, f"expected a nonnegative integer, got {value!r}")
    return value


def _priors(obj: dict, where: str) -> tuple[float, float]:
    c0 = _real(_require(obj, "c0", where), f"{where}.c0")
    c1 = _real(_require(obj, "c1", where), f"{where}.c1")
    if c0 < 0 or c1 < 0:
        raise ConfigError(f"{where}.c0", "cost weights must be nonnegative")
    if abs(c0 + c1 - 1.0) > 1e-12:
        raise ConfigError(f"{where}.c0", f"cost weights must sum to 1, got {c0 + c1!r}")
    if c0 == 0:
        raise ConfigError(f"{where}.c0", "must be positive so the threshold c1/c0 is finite")
    return c0, c1


def parse_config(obj: dict) -> ScenarioConfig:
    if not isinstance(obj, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    known = {"explicit", "radar", "attack", "sweep", "output", "seed", "verify"}
    for key in obj:
        if key not in known:
            raise ConfigError(key, "unknown field")

    has_explicit = "explicit" in obj
    has_radar = "radar" in obj
    if has_explicit == has_radar:
        raise ConfigError("explicit|radar", "exactly one scenario block is required")

    explicit = None
    radar = None
    if has_explicit:
        block = obj["explicit"]
        if not isinstance(block, dict):
            raise ConfigError("explicit", "must be an object")
        for key in block:
            if key not in {"rho0", "rho1", "c0", "c1"}:
                raise ConfigError(f"explicit.{key}", "unknown field")
        c0, c1 = _priors(block, "explicit")
        try:
            rho0 = DensityOperator(matrix_from_literal(_require(block, "rho0", "explicit"), "explicit.rho0"))
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError("explicit.rho0", str(exc)) from exc
        try:
            rho1 = DensityOperator(matrix_from_literal(_require(block, "rho1", "explicit"), "explicit.rho1"))
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError("explicit.rho1", str(exc)) from exc
        try:
            explicit = HypothesisPair(rho0, rho1, c0, c1)
        except ValueError as exc:
            raise ConfigError("explicit", str(exc)) from exc
    else:
        block = obj["radar"]
        if not isinstance(block, dict):
            raise ConfigError("radar", "must be an object")
        for key in block:
            if key not in {"n_b", "x", "k", "l", "c0", "c1"}:
                raise ConfigError(f"radar.{key}", "unknown field")
        c0, c1 = _priors(block, "radar")
        try:
            radar = RadarParams(
                n_b=_real(_require(block, "n_b", "radar"), "radar.n_b"),
                x=_real(_require(block, "x", "radar"), "radar.x"),
                k=_nonneg_int(_require(block, "k", "radar"), "radar.k"),
                l=_nonneg_int(_require(block, "l", "radar"), "radar.l"),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError("radar", str(exc)) from exc

    lambdas: tuple = ()
    if "attack" in obj:
        block = obj["attack"]
        if not isinstance(block, dict):
            raise ConfigError("attack", "must be an object")
        raw = _require(block, "lambdas", "attack")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("attack.lambdas", "expected a nonempty list of positive numbers")
        vals = []
        for i, v in enumerate(raw):
            val = _real(v, f"attack.lambdas[{i}]")
            if val <= 0:
                raise ConfigError(f"attack.lambdas[{i}]", f"distortion price must be positive, got {val!r}")
            vals.append(val)
        lambdas = tuple(vals)

    tau = None
    tau_grid = None
    l_values = None
    if "sweep" in obj:
        block = obj["sweep"]
        if not isinstance(block, dict):
            raise ConfigError("sweep", "must be an object")
        for key in block:
            if key not in {"tau", "tau_grid", "l_values"}:
                raise ConfigError(f"sweep.{key}", "unknown field")
        if "tau" in block:
            tau = _real(block["tau"], "sweep.tau")
            if tau <= 0:
                raise ConfigError("sweep.tau", f"threshold must be positive, got {tau!r}")
        if "tau_grid" in block:
            raw = block["tau_grid"]
            if not isinstance(raw, list) or not raw:
                raise ConfigError("sweep.tau_grid", "expected a nonempty list")
            grid = [_real(v, f"sweep.tau_grid[{i}]") for i, v in enumerate(raw)]
            if any(v <= 0 for v in grid):
                raise ConfigError("sweep.tau_grid", "thresholds must be positive")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ConfigError("sweep.tau_grid", "thresholds must be strictly increasing")
            tau_grid = tuple(grid)
        if "l_values" in block:
            raw = block["l_values"]
            if not isinstance(raw, list) or not raw:
                raise ConfigError("sweep.l_values", "expected a nonempty list")
            l_values = tuple(_nonneg_int(v, f"sweep.l_values[{i}]") for i, v in enumerate(raw))

    out_path = None
    out_format = None
    if "output" in obj:
        block = obj["output"]
        if not isinstance(block, dict):
            raise ConfigError("output", "must be an object")
        for key in block:
            if key not in {"path", "format"}:
                raise ConfigError(f"output.{key}", "unknown field")
        if "path" in block:
            if not isinstance(block["path"], str) or not block["path"]:
                raise ConfigError("output.path", "expected a nonempty string")
            out_path = block["path"]
        if "format" in block:
            if block["format"] not in ("csv", "json"):
                raise ConfigError("output.format", f"expected 'csv' or 'json', got {block['format']!r}")
            out_format = block["format"]

    seed = 0
    if "seed" in obj:
        seed = _nonneg_int(obj["seed"], "seed")

    verify = VerifyOptions()
    if "verify" in obj:
        block = obj["verify"]
        if not isinstance(block, dict):
            raise ConfigError("verify", "must be an object")
        for key in block:
            if key not in {"instances", "max_dim", "lambdas", "commuting_only", "channel_instances"}:
                raise ConfigError(f"verify.{key}", "unknown field")
        kwargs = {}
        if "instances" in block:
            kwargs["instances"] = _nonneg_int(block["instances"], "verify.instances")
        if "max_dim" in block:
            md = _nonneg_int(block["max_dim"], "verify.max_dim")
            if md < 2:
                raise ConfigError("verify.max_dim", "must be at least 2")
            kwargs["max_dim"] = md
        if "lambdas" in block:
            raw = block["lambdas"]
            if not isinstance(raw, list) or not raw:
                raise ConfigError("verify.lambdas", "expected a nonempty list of positive numbers")
            vals = []
            for i, v in enumerate(raw):
                val = _real(v, f"verify.lambdas[{i}]")
                if val <= 0:
                    raise ConfigError(f"verify.lambdas[{i}]", "distortion price must be positive")
                vals.append(val)
            kwargs["lambdas"] = tuple(vals)
        if "commuting_only" in block:
            if not isinstance(block["commuting_only"], bool):
                raise ConfigError("verify.commuting_only", "expected true or false")
            kwargs["commuting_only"] = block["commuting_only"]
        if "channel_instances" in block:
            kwargs["channel_instances"] = _nonneg_int(block["channel_instances"], "verify.channel_instances")
        verify = VerifyOptions(**kwargs)

    return ScenarioConfig(
        explicit=explicit,
        radar=radar,
        c0=explicit.c0 if explicit is not None else c0,
        c1=explicit.c1 if explicit is not None else c1,
        lambdas=lambdas,
        tau=tau,
        tau_grid=tau_grid,
        l_values=l_values,
        out_path=out_path,
        out_format=out_format,
        seed=seed,
        verify=verify,
    )


def load_config(path: str) -> ScenarioConfig:
    """Read and validate a scenario file.

    OSError (unreadable path) propagates to the caller as an I/O failure;
    malformed JSON or schema violations raise ConfigError with the line or
    field that caused the rejection.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<config>", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(obj)
