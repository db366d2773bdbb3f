"""End-to-end runs through CheckRunner with an in-memory writer."""

import math

import pytest

from curvatura.checks import CheckRouter
from curvatura.config import load_run_config
from curvatura.errors import PreconditionError, UsageError
from curvatura.interfaces import CheckContext, CheckHandler
from curvatura.reports import CheckOutcome, InMemoryReportWriter, Verdict
from curvatura.runner import EXIT_FAILED, EXIT_OK, CheckRunner


def run_config(command: str, name: str = "sphere", **extra):
    payload = {"command": command, "manifold": {"name": name}}
    payload.update(extra)
    return load_run_config(payload)


@pytest.mark.asyncio
async def test_invariants_on_the_unit_sphere():
    writer = InMemoryReportWriter()
    report, code = await CheckRunner(writer=writer).run(run_config("invariants", resolution=8))

    assert code == EXIT_OK
    assert report.passed
    assert report.n == 2 and report.m == 1
    assert math.isclose(report.totals["volume"], 4 * math.pi, rel_tol=1e-6)
    assert math.isclose(report.totals["total_k2"], 4 * math.pi, rel_tol=1e-6)
    assert len(report.tables["points"].rows) == 64
    assert report.settings["resolution"] == 8
    assert report.settings["p"] == [0, 1]
    assert writer.last == report


@pytest.mark.asyncio
async def test_invariants_on_the_clifford_torus():
    report, code = await CheckRunner().run(run_config("invariants", "clifford-torus-s3", resolution=8))
    assert code == EXIT_OK, report.failures
    assert report.verdict("intrinsic_relation").passed
    assert math.isclose(report.totals["volume"], 2 * math.pi**2, rel_tol=1e-6)


@pytest.mark.parametrize("name", ["clifford-torus-s3", "great-sphere-s3", "geodesic-sphere-h3"])
@pytest.mark.asyncio
async def test_binomial_relation_holds_to_round_off(name):
    report, _ = await CheckRunner().run(run_config("invariants", name, resolution=6))
    verdict = report.verdict("intrinsic_relation")
    assert verdict.tolerance == 1e-9
    assert verdict.passed, verdict
    assert verdict.value <= 1e-9


@pytest.mark.slow
@pytest.mark.asyncio
async def test_first_variation_refines_a_coarse_mesh():
    report, code = await CheckRunner().run(
        run_config("first-variation", "ellipsoid", resolution=6, p=[0, 1], fields=5)
    )
    assert code == EXIT_OK, report.failures
    assert len(report.verdicts) == 10
    rows = report.tables["fields"].rows
    assert {row[2] for row in rows} == {32}
    assert report.settings["resolution"] == 6


@pytest.mark.asyncio
async def test_tube_on_the_sphere():
    report, code = await CheckRunner().run(run_config("tube", resolution=8, radii=[0.25, 0.5]))
    assert code == EXIT_OK
    assert [v.name for v in report.verdicts] == ["tube_oracle.r0", "tube_oracle.r1"]
    rows = report.tables["radii"].rows
    assert math.isclose(rows[1][1], 10 * math.pi, rel_tol=1e-6)


@pytest.mark.asyncio
async def test_el_check_reports_every_order():
    report, _ = await CheckRunner().run(run_config("el-check", resolution=6))
    names = {v.name for v in report.verdicts}
    assert {"spaceform_shortcut.p0", "spaceform_shortcut.p1", "fast_vs_reference"} <= names
    assert "vanishes.p0" not in names
    assert math.isclose(report.totals["max_el0"], 2.0, rel_tol=1e-4)


@pytest.mark.slow
@pytest.mark.asyncio
async def test_cp_check_on_a_complex_curve():
    report, code = await CheckRunner().run(run_config("cp-check", "linear-cp1-cp2", resolution=4, p=[0, 1]))
    assert code == EXIT_OK, report.failures
    assert report.verdict("sff_j_residual").passed


@pytest.mark.asyncio
async def test_single_command_that_does_not_apply():
    with pytest.raises(PreconditionError, match="does not apply"):
        await CheckRunner().run(run_config("cp-check", resolution=4))


@pytest.mark.slow
@pytest.mark.asyncio
async def test_report_all_skips_what_does_not_apply():
    report, _ = await CheckRunner().run(run_config("report-all", resolution=6, p=[0]))
    names = [v.name for v in report.verdicts]
    assert any(name.startswith("invariants.") for name in names)
    assert "tube.tube_oracle.r0" in names
    assert not any(name.startswith("cp-check.") for name in names)
    assert "invariants.volume" in report.totals


@pytest.mark.asyncio
async def test_p_values_out_of_range():
    with pytest.raises(UsageError, match="outside"):
        await CheckRunner().run(run_config("invariants", resolution=4, p=[2]))


@pytest.mark.asyncio
async def test_unknown_manifold():
    with pytest.raises(UsageError, match="Unknown manifold"):
        await CheckRunner().run(run_config("invariants", "no-such-manifold"))


@pytest.mark.asyncio
async def test_manifold_from_a_factory_path():
    config = load_run_config(
        {
            "command": "invariants",
            "manifold": {"factory": "curvatura.zoo.catalog.sphere", "parameters": {"r": 2.0}},
            "resolution": 8,
        }
    )
    report, code = await CheckRunner().run(config)
    assert code == EXIT_OK
    assert report.manifold == "curvatura.zoo.catalog.sphere"
    assert math.isclose(report.totals["volume"], 16 * math.pi, rel_tol=1e-6)
    assert not any(v.name.startswith("reference.") for v in report.verdicts)


@pytest.mark.asyncio
async def test_factory_that_is_not_a_patch():
    config = load_run_config({"command": "invariants", "manifold": {"factory": "builtins.dict"}})
    with pytest.raises(UsageError, match="not an ImmersionPatch"):
        await CheckRunner().run(config)


@pytest.mark.asyncio
async def test_workers_do_not_change_the_report(monkeypatch):
    config = run_config("invariants", resolution=6)
    serial, _ = await CheckRunner().run(config)
    monkeypatch.setenv("CURVATURA_WORKERS", "2")
    parallel, _ = await CheckRunner().run(config)
    assert parallel.totals == serial.totals
    assert parallel.tables["points"].rows == serial.tables["points"].rows


@pytest.mark.asyncio
async def test_bad_worker_count(monkeypatch):
    monkeypatch.setenv("CURVATURA_WORKERS", "zero")
    with pytest.raises(UsageError, match="CURVATURA_WORKERS"):
        await CheckRunner().run(run_config("invariants", resolution=4))


@pytest.mark.asyncio
async def test_failed_verdict_gives_exit_code_one():
    class FailingHandler(CheckHandler):
        command = "austere"

        async def process(self, context: CheckContext) -> CheckOutcome:
            return CheckOutcome(command=self.command, verdicts=[Verdict.flag("always_fails", False)])

    local = CheckRouter()
    local.register("austere", FailingHandler)
    writer = InMemoryReportWriter()
    report, code = await CheckRunner(router=local, writer=writer).run(run_config("austere", resolution=4))
    assert code == EXIT_FAILED
    assert [v.name for v in report.failures] == ["always_fails"]
    assert len(writer.reports) == 1


@pytest.mark.asyncio
async def test_command_without_handlers():
    with pytest.raises(UsageError, match="No check registered"):
        await CheckRunner(router=CheckRouter()).run(run_config("invariants", resolution=4))
