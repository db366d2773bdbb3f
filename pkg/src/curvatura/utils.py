"""Dynamic attribute loading and ordered per-node fan-out."""

import importlib
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Optional, TypeVar

from .errors import UsageError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV_VAR = "CURVATURA_WORKERS"


class ModuleImporter:
    """Imports a module by path and provides access to its attributes by name."""

    def __init__(self, module_path: str) -> None:
        self._module_path = module_path
        try:
            self._module = importlib.import_module(module_path)
        except ImportError as e:
            raise UsageError(f"Cannot import module '{module_path}': {e}") from e

    def get_attribute(self, name: str) -> Any:
        """Return the attribute named name from the module."""
        try:
            return getattr(self._module, name)
        except AttributeError as e:
            available = [x for x in dir(self._module) if not x.startswith("_")]
            raise UsageError(
                f"'{name}' not found in module '{self._module_path}'. "
                f"Available attributes: {available}"
            ) from e

    @classmethod
    def resolve(cls, dotted_path: str) -> Any:
        """Resolve ``package.module.attribute`` in one step."""
        module_path, _, name = dotted_path.rpartition(".")
        if not module_path or not name:
            raise UsageError(
                f"Expected a fully qualified name (e.g. mypkg.shapes.make_patch), got {dotted_path!r}"
            )
        return cls(module_path).get_attribute(name)


def worker_count(environ: Optional[dict] = None) -> int:
    """Worker count from CURVATURA_WORKERS; 1 when unset."""
    raw = (environ if environ is not None else os.environ).get(WORKERS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1
    try:
        workers = int(raw)
    except ValueError as e:
        raise UsageError(f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}") from e
    if workers < 1:
        raise UsageError(f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}")
    return workers


def map_nodes(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: Optional[int] = None,
) -> List[R]:
    """Apply fn to every item, returning results in input order."""
    items = list(items)
    workers = workers or 1
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    logger.debug("Fanning %d evaluations over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
