"""Tests for the check router and its handlers."""

import pytest

from curvatura.checks import ALL_COMMANDS, CheckRouter, CheckRouterEntry, router
from curvatura.config import COMMANDS, load_run_config
from curvatura.immersion import build_mesh
from curvatura.interfaces import CheckContext, CheckHandler
from curvatura.reports import CheckOutcome, Verdict
from curvatura.zoo import zoo


class SampleHandler(CheckHandler):
    command = "invariants"

    def process(self, context: CheckContext) -> CheckOutcome:
        return CheckOutcome(command=self.command, totals={"nodes": float(context.mesh.size)})


class AsyncSampleHandler(CheckHandler):
    command = "tube"

    async def process(self, context: CheckContext) -> CheckOutcome:
        return CheckOutcome(command=self.command, verdicts=[Verdict.flag("async", True)])


def make_context(command: str = "invariants", name: str = "sphere", resolution: int = 4, p=(0, 1)) -> CheckContext:
    config = load_run_config({"command": command, "manifold": {"name": name}, "resolution": resolution})
    entry = zoo.get(name)
    patch = entry.build()
    return CheckContext(
        config=config, patch=patch, mesh=build_mesh(patch, resolution), p_values=list(p), entry=entry
    )


def test_router_register_and_get_handlers():
    local = CheckRouter()
    local.register("invariants", SampleHandler)
    entries = local.get_handlers_for_command("invariants")
    assert len(entries) == 1
    assert entries[0].handler_class is SampleHandler
    assert local.get_handlers_for_command("tube") == []


def test_router_register_is_idempotent():
    local = CheckRouter()
    local.register("invariants", SampleHandler)
    local.register("invariants", SampleHandler)
    assert len(local.handlers) == 1


def test_router_deregister():
    local = CheckRouter()
    local.register("invariants", SampleHandler)
    local.deregister("invariants", SampleHandler)
    assert local.get_handlers_for_command("invariants") == []


def test_report_all_matches_every_entry():
    local = CheckRouter()
    local.register("invariants", SampleHandler)
    local.register("tube", AsyncSampleHandler)
    assert len(local.get_handlers_for_command(ALL_COMMANDS)) == 2


def test_router_entry_handler_instance():
    entry = CheckRouterEntry(command="invariants", handler_class=SampleHandler)
    assert isinstance(entry.handler_instance(), SampleHandler)


def test_check_decorator_builds_a_handler_class():
    """@router.check() wraps a function in a CheckHandler subclass and registers it."""
    local = CheckRouter()

    @local.check("tube", applies=lambda context: context.patch.closed)
    def my_check(context: CheckContext) -> CheckOutcome:
        """Counts nodes."""
        return CheckOutcome(command="tube", totals={"nodes": float(context.mesh.size)})

    entry = local.get_handlers_for_command("tube")[0]
    assert entry.handler_class.__name__ == "my_check_Handler"
    assert entry.handler_class.__doc__ == "Counts nodes."
    assert issubclass(entry.handler_class, CheckHandler)
    handler = entry.handler_instance()
    assert handler.command == "tube"
    assert handler.applies(make_context())
    assert my_check(make_context()).totals["nodes"] == 16.0


def test_default_router_covers_every_command():
    commands = {entry.command for entry in router.handlers}
    assert commands == set(COMMANDS) - {ALL_COMMANDS}


def test_applicability_predicates():
    sphere = make_context()
    quadric = make_context(name="linear-cp1-cp2")
    by_command = {entry.command: entry.handler_instance() for entry in router.handlers}
    assert by_command["tube"].applies(sphere)
    assert not by_command["tube"].applies(quadric)
    assert not by_command["cp-check"].applies(sphere)
    assert by_command["cp-check"].applies(quadric)
    assert by_command["first-variation"].applies(sphere)
    assert by_command["first-variation"].applies(quadric)
    assert by_command["invariants"].applies(quadric)


@pytest.mark.asyncio
async def test_sync_and_async_handlers_are_awaited():
    context = make_context()
    outcome = await SampleHandler()(context)
    assert outcome.totals["nodes"] == 16.0
    outcome = await AsyncSampleHandler()(context)
    assert outcome.verdicts[0].passed


@pytest.mark.asyncio
async def test_invariants_handler_on_a_sphere():
    context = make_context(resolution=8)
    handler = router.get_handlers_for_command("invariants")[0].handler_instance()
    outcome = await handler(context)
    names = {verdict.name for verdict in outcome.verdicts}
    assert {"frame_gram", "sff_symmetry", "normal_integral_route", "intrinsic_relation", "fast_vs_reference"} <= names
    assert {"reference.volume", "reference.k2"} <= names
    assert all(verdict.passed for verdict in outcome.verdicts), [v for v in outcome.verdicts if not v.passed]
    assert len(outcome.tables["points"].rows) == 64
    assert outcome.tables["points"].columns[:3] == ["u0", "u1", "dV"]


@pytest.mark.asyncio
async def test_cp_check_negative_control():
    context = make_context(command="cp-check", name="perturbed-cp1-cp2", p=(0,))
    handler = router.get_handlers_for_command("cp-check")[0].handler_instance()
    outcome = await handler(context)
    assert [v.name for v in outcome.verdicts] == ["negative_control"]
    assert outcome.verdicts[0].passed
