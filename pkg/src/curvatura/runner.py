"""Asynchronous runner: builds the manifold, dispatches check handlers, assembles the report."""

import logging
from typing import Any, Dict, List, Optional, Tuple

from .checks import ALL_COMMANDS, CheckRouter, router as default_router
from .config import RunConfig
from .errors import PreconditionError, UsageError
from .immersion import ImmersionPatch, build_mesh
from .interfaces import CheckContext, ReportWriter
from .reports.base import Report
from .utils import ModuleImporter, worker_count
from .zoo import ManifoldZoo, ZooEntry, zoo as default_zoo

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_FACTORY_RESOLUTION = 12


class CheckRunner:
    """
    Resolves the configured manifold, meshes it and awaits every handler the
    router holds for the command. A writer, when given, receives the report.

    router and zoo default to the module-level instances, so handlers and
    manifolds registered with the decorators are picked up automatically.
    """

    def __init__(
        self,
        router: Optional[CheckRouter] = None,
        zoo: Optional[ManifoldZoo] = None,
        writer: Optional[ReportWriter] = None,
    ) -> None:
        self.router = router if router is not None else default_router
        self.zoo = zoo if zoo is not None else default_zoo
        self.writer = writer

    def _resolve(self, config: RunConfig) -> Tuple[ImmersionPatch, Optional[ZooEntry], Dict[str, Any]]:
        spec = config.manifold
        if spec.name is not None:
            entry = self.zoo.get(spec.name)
            parameters = entry.parameters(**spec.parameters).model_dump()
            return entry.build(**parameters), entry, parameters
        factory = ModuleImporter.resolve(spec.factory)
        if not callable(factory):
            raise UsageError(f"Manifold factory {spec.factory!r} is not callable")
        try:
            patch = factory(**spec.parameters)
        except TypeError as e:
            raise UsageError(f"Cannot call manifold factory {spec.factory!r}: {e}") from e
        if not isinstance(patch, ImmersionPatch):
            raise UsageError(f"Manifold factory {spec.factory!r} returned {type(patch).__name__}, not an ImmersionPatch")
        return patch, None, dict(spec.parameters)

    @staticmethod
    def _apply_steps(patch: ImmersionPatch, config: RunConfig) -> ImmersionPatch:
        ambient = patch.ambient.model_copy(update={"fd_step": config.steps.fd_step})
        return patch.model_copy(update={"ambient": ambient, "jet_step": config.steps.jet_step})

    @staticmethod
    def _p_values(patch: ImmersionPatch, config: RunConfig) -> List[int]:
        bound = patch.n // 2
        if config.p is None:
            return list(range(bound + 1))
        p_values = sorted(set(config.p))
        bad = [p for p in p_values if p < 0 or p > bound]
        if bad:
            raise UsageError(f"p values {bad} are outside [0, {bound}] for n = {patch.n}")
        return p_values

    def _context(self, config: RunConfig) -> Tuple[CheckContext, Dict[str, Any]]:
        patch, entry, parameters = self._resolve(config)
        patch = self._apply_steps(patch, config)
        p_values = self._p_values(patch, config)
        if config.resolution is not None:
            resolution = config.resolution
        else:
            resolution = entry.default_resolution if entry is not None else DEFAULT_FACTORY_RESOLUTION
        workers = worker_count()
        mesh = build_mesh(patch, resolution, workers)
        logger.info(
            "Built %s (n=%d, m=%d, %s) on %d nodes with %d workers",
            config.manifold.label, patch.n, patch.m, patch.ambient.describe(), mesh.size, workers,
        )
        context = CheckContext(
            config=config, patch=patch, mesh=mesh, p_values=p_values, workers=workers, entry=entry
        )
        settings = {
            "tolerances": config.tolerances.model_dump(),
            "steps": config.steps.model_dump(),
            "seed": config.seed,
            "resolution": resolution,
            "p": p_values,
            "fields": config.fields,
            "xi_samples": config.xi_samples,
            "sphere_resolution": config.sphere_resolution,
        }
        if config.variation_resolution is not None:
            settings["variation_resolution"] = config.variation_resolution
        if config.radii is not None:
            settings["radii"] = list(config.radii)
        return context, {"parameters": parameters, "settings": settings}

    async def run(self, config: RunConfig) -> Tuple[Report, int]:
        """Run the configured command; the exit code is 0 iff every verdict passed."""
        context, meta = self._context(config)
        patch = context.patch
        report = Report(
            command=config.command,
            manifold=config.manifold.label,
            parameters=meta["parameters"],
            n=patch.n,
            m=patch.m,
            ambient=patch.ambient.describe(),
            settings=meta["settings"],
        )
        entries = self.router.get_handlers_for_command(config.command)
        logger.info("%d handlers found for command %s", len(entries), config.command)
        if not entries:
            raise UsageError(f"No check registered for command '{config.command}'")

        for entry in entries:
            handler = entry.handler_instance()
            if not handler.applies(context):
                if config.command != ALL_COMMANDS:
                    raise PreconditionError(
                        f"Command '{config.command}' does not apply to {config.manifold.label} "
                        f"({patch.ambient.describe()})"
                    )
                logger.info("Skipping %s for %s", entry.command, config.manifold.label)
                continue
            outcome = await handler(context)
            report.merge(outcome)
            logger.info("Dispatched %s to %s handler", config.command, entry.handler_class.__name__)

        for verdict in report.failures:
            logger.warning(
                "Verdict %s failed: value %.3e, tolerance %.3e %s",
                verdict.name, verdict.value, verdict.tolerance, verdict.detail,
            )
        if self.writer is not None:
            self.writer.write(report)
        return report, EXIT_OK if report.passed else EXIT_FAILED
