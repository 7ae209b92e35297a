"""Configuration models for the Gini alarm toolkit."""

import os
from pathlib import Path
from typing import Any, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .engine.errors import BadConfig
from .engine.logging import get_logger

Regime = Literal["fair_exchange", "rich_get_richer"]

RICH_ENTRY_MODES = ("staggered", "all")

_REGIME_PARAMS: dict[str, set[str]] = {
    "fair_exchange": set(),
    "rich_get_richer": {"base_weight", "entry"},
}


class NewtonOptions(BaseModel):
    """Stopping rules for the Boltzmann multiplier solve."""

    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(
        default=1e-10, gt=0, description="Relative residual target for both constraints"
    )
    max_iterations: int = Field(default=200, ge=1, description="Iteration cap")


class SimConfig(BaseModel):
    """Configuration of one simulation run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    agents: int = Field(ge=2, description="Number of agents N")
    total_income: float = Field(gt=0, description="Total income Π")
    steps: int = Field(ge=0, description="Number of exchange or award steps")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Seed of the PCG64 stream")
    regime: Regime = Field(default="fair_exchange", description="Income-generating regime")
    regime_params: dict[str, Union[float, str]] = Field(
        default_factory=dict, description="Named regime parameters (e.g. base_weight)"
    )
    snapshot_every: Optional[int] = Field(
        default=None, ge=1, description="Snapshot cadence in steps (default steps // 100)"
    )
    burn_in_fraction: float = Field(
        default=0.5, ge=0, lt=1, description="Leading share of snapshots dropped as burn-in"
    )

    @model_validator(mode="after")
    def _check_regime_params(self) -> "SimConfig":
        allowed = _REGIME_PARAMS[self.regime]
        unknown = sorted(set(self.regime_params) - allowed)
        if unknown:
            raise ValueError(f"unknown parameters for {self.regime}: {', '.join(unknown)}")

        if self.regime == "rich_get_richer":
            weight = self.regime_params.get("base_weight", 1.0)
            if isinstance(weight, str) or not weight > 0:
                raise ValueError(f"base_weight must be a positive number, got {weight!r}")
            entry = self.regime_params.get("entry", "staggered")
            if entry not in RICH_ENTRY_MODES:
                raise ValueError(f"entry must be one of {RICH_ENTRY_MODES}, got {entry!r}")
            if self.steps < 1:
                raise ValueError("rich_get_richer needs at least one step")
        return self

    @property
    def cadence(self) -> int:
        return self.snapshot_every or max(1, self.steps // 100)

    def param(self, name: str, default: Any = None) -> Any:
        return self.regime_params.get(name, default)


class EngineSettings(BaseModel):
    """Process-wide defaults, overridable from the environment."""

    enumeration_cap: int = Field(default=10**7, ge=1)
    significance: float = Field(default=0.05, gt=0, lt=1)
    sigmas: float = Field(default=2.0, gt=0)
    decimals: int = Field(default=6, ge=0)
    histogram_bins: int = Field(default=10, ge=1)


_ENV_SETTINGS = {
    "GINI_ALARM_ENUMERATION_CAP": "enumeration_cap",
    "GINI_ALARM_SIGNIFICANCE": "significance",
    "GINI_ALARM_SIGMAS": "sigmas",
    "GINI_ALARM_DECIMALS": "decimals",
}


def get_settings() -> EngineSettings:
    """Build settings from defaults and GINI_ALARM_* environment variables."""
    values: dict[str, Any] = {}
    for env_name, field_name in _ENV_SETTINGS.items():
        raw = os.environ.get(env_name)
        if raw:
            values[field_name] = raw
    try:
        return EngineSettings(**values)
    except ValidationError as e:
        get_logger().warning(f"Ignoring invalid GINI_ALARM_* settings: {e}")
        return EngineSettings()


def _coerce_scalar(raw: str) -> Any:
    value = yaml.safe_load(raw) if raw.strip() else None
    if isinstance(value, str):
        # YAML 1.1 reads "1e6" as a string
        for cast in (int, float):
            try:
                return cast(value)
            except ValueError:
                continue
    return value


def parse_key_value(text: str) -> dict[str, Any]:
    """Parse flat ``key=value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadConfig(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = line.split("=", 1)
        values[key.strip()] = _coerce_scalar(raw.strip())
    return values


def _arrange(flat: dict[str, Any]) -> dict[str, Any]:
    """Route keys to SimConfig fields or regime_params."""
    fields = set(SimConfig.model_fields)
    data: dict[str, Any] = {}
    params: dict[str, Any] = {}
    for key, value in flat.items():
        if value is None:
            continue
        if key == "regime_params" and isinstance(value, dict):
            params.update(value)
        elif key.startswith("regime_params."):
            params[key.split(".", 1)[1]] = value
        elif key in fields:
            data[key] = value
        else:
            params[key] = value
    if params:
        data["regime_params"] = params
    return data


def load_sim_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[dict[str, Any]] = None,
) -> SimConfig:
    """Load a SimConfig from a key=value or YAML file plus explicit overrides.

    Args:
        path: ``.yaml``/``.yml`` files are read as YAML mappings, anything
            else as flat ``key=value`` pairs. None means overrides only.
        overrides: Values taking precedence over the file (None values are
            ignored, so unset CLI flags can be passed straight through).

    Raises:
        BadConfig: The file is unreadable or the merged config is invalid.
    """
    flat: dict[str, Any] = {}
    if path is not None:
        config_path = Path(path)
        try:
            text = config_path.read_text(encoding="utf-8")
        except OSError as e:
            raise BadConfig(f"cannot read config file {config_path}: {e}") from e

        if config_path.suffix.lower() in (".yaml", ".yml"):
            try:
                loaded = yaml.safe_load(text) or {}
            except yaml.YAMLError as e:
                raise BadConfig(f"invalid YAML in {config_path}: {e}") from e
            if not isinstance(loaded, dict):
                raise BadConfig(f"{config_path} must hold a mapping")
            flat.update(loaded)
        else:
            flat.update(parse_key_value(text))

    data = _arrange(flat)
    if overrides:
        extra = _arrange(overrides)
        params = {**data.get("regime_params", {}), **extra.pop("regime_params", {})}
        data.update(extra)
        if params:
            data["regime_params"] = params

    try:
        config = SimConfig.model_validate(data)
    except ValidationError as e:
        raise BadConfig(str(e)) from e

    get_logger().info(f"Loaded simulation config: {config.model_dump()}")
    return config
