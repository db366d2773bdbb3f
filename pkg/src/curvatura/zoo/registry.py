"""Registry mapping manifold names to patch factories."""

import inspect
import logging
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, get_type_hints

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, create_model

from ..errors import NumericError, UsageError
from ..frames import local_geometry
from ..immersion import ImmersionPatch

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-7
FRAME_TOLERANCE = 1e-10

Reference = Callable[..., Dict[str, float]]


class ZooParameters(BaseModel):
    """Base class of the parameter models generated from factory signatures."""

    model_config = ConfigDict(extra="forbid", frozen=True)


def _parameter_class_from_signature(func: Callable[..., Any], model_name: Optional[str] = None) -> type:
    """Build a ZooParameters subclass whose fields match the factory's keyword parameters."""
    sig = inspect.signature(func)
    try:
        hints = get_type_hints(func)
    except Exception:
        hints = {}
    fields: Dict[str, Tuple[type, Any]] = {}
    for name, param in sig.parameters.items():
        ann = hints.get(name, Any)
        if param.default is inspect.Parameter.empty:
            fields[name] = (ann, ...)
        else:
            fields[name] = (ann, Field(default=param.default))
    name = model_name or f"{func.__name__}Parameters"
    model = create_model(name, __base__=ZooParameters, **fields)
    model.__module__ = getattr(func, "__module__", __name__)
    return model


class ZooEntry(BaseModel):
    """A named patch factory with its validated parameters and known reference values."""

    name: str
    factory: Callable[..., ImmersionPatch]
    parameter_class: type
    reference: Optional[Reference] = None
    tags: Tuple[str, ...] = ()
    default_resolution: int = 12

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def summary(self) -> str:
        doc = inspect.getdoc(self.factory) or ""
        return doc.splitlines()[0] if doc else ""

    def parameters(self, **overrides: Any) -> ZooParameters:
        try:
            return self.parameter_class(**overrides)
        except ValidationError as e:
            raise UsageError(f"Invalid parameters for manifold '{self.name}': {e}") from e

    def references(self, **overrides: Any) -> Dict[str, float]:
        if self.reference is None:
            return {}
        return dict(self.reference(**self.parameters(**overrides).model_dump()))

    def build(self, check: bool = True, **overrides: Any) -> ImmersionPatch:
        """Construct the patch and, unless disabled, check its frame at the domain centre."""
        patch = self.factory(**self.parameters(**overrides).model_dump())
        if check:
            self._check(patch)
        return patch

    def _check(self, patch: ImmersionPatch) -> None:
        centre = 0.5 * (np.asarray(patch.domain.lower) + np.asarray(patch.domain.upper))
        geometry = local_geometry(patch, centre, j_adapted=patch.holomorphic and patch.ambient.is_complex)
        if geometry.frame.gram_residual > FRAME_TOLERANCE:
            raise NumericError(
                f"Manifold '{self.name}' has frame Gram residual {geometry.frame.gram_residual:.3e}"
            )
        if geometry.sff.symmetry_residual > SYMMETRY_TOLERANCE:
            raise NumericError(
                f"Manifold '{self.name}' has asymmetric second fundamental form "
                f"(residual {geometry.sff.symmetry_residual:.3e})"
            )
        logger.debug("Manifold %s passed construction checks", self.name)

    def describe(self) -> Dict[str, Any]:
        patch = self.build(check=False)
        return {
            "name": self.name,
            "n": patch.n,
            "m": patch.m,
            "ambient": patch.ambient.describe(),
            "parameters": self.parameters().model_dump(),
            "reference": self.references(),
            "tags": list(self.tags),
            "summary": self.summary,
        }


class ManifoldZoo:
    """In-memory registry of zoo entries, keyed by name."""

    def __init__(self, entries: Optional[Sequence[ZooEntry]] = None) -> None:
        self.entries: Dict[str, ZooEntry] = {}
        for entry in entries or []:
            self.register(entry)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __iter__(self) -> Iterator[ZooEntry]:
        return iter(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> List[str]:
        return sorted(self.entries)

    def register(self, entry: ZooEntry) -> None:
        if entry.name in self.entries and self.entries[entry.name] != entry:
            raise UsageError(f"Manifold '{entry.name}' is already registered")
        self.entries[entry.name] = entry

    def deregister(self, name: str) -> None:
        self.entries.pop(name, None)

    def get(self, name: str) -> ZooEntry:
        try:
            return self.entries[name]
        except KeyError as e:
            raise UsageError(f"Unknown manifold '{name}'. Available manifolds: {self.names()}") from e

    def build(self, name: str, **parameters: Any) -> ImmersionPatch:
        return self.get(name).build(**parameters)

    def manifold(
        self,
        name: str,
        reference: Optional[Reference] = None,
        tags: Sequence[str] = (),
        default_resolution: int = 12,
    ):
        """
        Decorator that registers a patch factory under ``name``. The factory's
        keyword parameters become a validated parameter model, so callers can do:
          zoo.build("sphere", n=3, r=2.0)
        The factory itself is returned unchanged.
        """

        def decorator(func: Callable[..., ImmersionPatch]) -> Callable[..., ImmersionPatch]:
            entry = ZooEntry(
                name=name,
                factory=func,
                parameter_class=_parameter_class_from_signature(func),
                reference=reference,
                tags=tuple(tags),
                default_resolution=default_resolution,
            )
            self.register(entry)
            return func

        return decorator
