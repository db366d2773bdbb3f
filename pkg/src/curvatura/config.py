"""Run configuration: tolerances, steps and the manifold to check."""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import UsageError

logger = logging.getLogger(__name__)

COMMANDS = ("invariants", "el-check", "first-variation", "tube", "austere", "cp-check", "report-all")


class Tolerances(BaseModel):
    frame: float = 1e-10
    symmetry: float = 1e-7
    route: float = 1e-8
    fast_reference: float = 1e-13
    invariant: float = 1e-6
    binomial: float = 1e-9
    spaceform: float = 1e-6
    el: float = 1e-5
    cp: float = 1e-5
    cp_negative: float = 1e-2
    first_variation_rel: float = 1e-3
    first_variation_abs: float = 1e-6
    austerity: float = 1e-6
    austere_sign: float = 1e-8
    tubular: float = 1e-5
    tube_derivative: float = 1e-4
    tube_oracle: float = 1e-3
    reference: float = 1e-4

    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class Steps(BaseModel):
    """Differentiation steps, each relative to the chart or patch scale."""

    fd_step: float = Field(default=1e-5, gt=0)
    jet_step: float = Field(default=1e-4, gt=0)
    t_step: float = Field(default=1e-3, gt=0)
    stencil_step: float = Field(default=1e-3, gt=0)

    model_config = ConfigDict(extra="forbid")


class ManifoldSpec(BaseModel):
    """A zoo name with parameters, or a dotted path to a patch factory."""

    name: Optional[str] = None
    factory: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _one_source(self) -> "ManifoldSpec":
        if (self.name is None) == (self.factory is None):
            raise ValueError("Give exactly one of manifold 'name' or 'factory'")
        return self

    @property
    def label(self) -> str:
        return self.name or self.factory or ""


class RunConfig(BaseModel):
    command: Literal[COMMANDS]  # type: ignore[valid-type]
    manifold: ManifoldSpec
    p: Optional[List[int]] = None
    resolution: Optional[int] = Field(default=None, ge=4)
    variation_resolution: Optional[int] = Field(default=None, ge=4)
    seed: int = 0
    fields: int = Field(default=1, ge=1)
    radii: Optional[List[float]] = None
    xi_samples: int = Field(default=100, ge=1)
    sphere_resolution: int = Field(default=16, ge=4)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    steps: Steps = Field(default_factory=Steps)
    out: Optional[Path] = None
    format: Literal["json", "csv"] = "json"

    model_config = ConfigDict(extra="forbid")


def load_run_config(payload: Dict[str, Any]) -> RunConfig:
    """Validate a nested mapping into a RunConfig; validation problems are usage errors."""
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as e:
        raise UsageError(f"Invalid run configuration: {e}") from e


def merge_payloads(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; values in ``override`` win, None values are skipped."""
    merged = dict(base)
    for key, value in override.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_payloads(merged[key], value)
        else:
            merged[key] = value
    return merged


def parse_overrides(pairs: Iterable[str]) -> Dict[str, float]:
    """``key=value`` strings to a tolerance mapping; unknown keys are usage errors."""
    known = set(Tolerances.model_fields)
    overrides: Dict[str, float] = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        key = key.strip()
        if not sep:
            raise UsageError(f"Tolerance override must look like key=value, got {pair!r}")
        if key not in known:
            raise UsageError(f"Unknown tolerance '{key}'. Known tolerances: {sorted(known)}")
        try:
            overrides[key] = float(raw)
        except ValueError as e:
            raise UsageError(f"Tolerance '{key}' needs a number, got {raw!r}") from e
    return overrides


def parse_int_list(text: str) -> List[int]:
    """'0,1,2' or '0-2' to [0, 1, 2]."""
    values: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part[1:]:
                lo, hi = part.split("-", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
    except ValueError as e:
        raise UsageError(f"Expected a list like '0,1,2' or '0-2', got {text!r}") from e
    return values
