"""Per-command check handlers and the router that maps commands to them."""

import inspect
import logging
import re
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .frames import frame_curvature_of, local_geometry
from .immersion import build_mesh, integrate, random_deformation_field, sample_nodes
from .interfaces import CheckContext, CheckHandler, CheckRouterInterface
from .invariants import (
    h2p1_at,
    h2p1_reference,
    h2p1_via_normal_integral,
    intrinsic_from_relative,
    intrinsic_invariants,
    k2p_at,
    k2p_reference,
    k2p_via_normal_integral,
)
from .reports.base import CheckOutcome, Verdict
from .tubes import austerity_check, tube_report, tubular_minimality_report
from .variational import (
    cpn_checks,
    el_complex_cp_at,
    el_samples_at,
    el_spaceform_at,
    first_variation_check,
    q_tensor_at,
    q_tensor_reference,
    variation_resolution,
    w_vector_at,
    w_vector_reference,
)

logger = logging.getLogger(__name__)

ALL_COMMANDS = "report-all"
_REFERENCE_KEY = re.compile(r"^(total_)?([kh])(\d+)(_intrinsic)?$")

Applies = Callable[[CheckContext], bool]


def _gap(value: Any, expected: Any) -> float:
    return float(np.max(np.abs(np.asarray(value, dtype=float) - np.asarray(expected, dtype=float)), initial=0.0))


def _relative_gap(value: Any, expected: Any) -> float:
    scale = max(float(np.max(np.abs(np.asarray(expected, dtype=float)), initial=0.0)), 1.0)
    return _gap(value, expected) / scale


def _j_adapted(context: CheckContext) -> bool:
    return context.patch.holomorphic and context.patch.ambient.is_complex


def _chart_columns(n: int) -> List[str]:
    return [f"u{i}" for i in range(n)]


class CheckRouterEntry(BaseModel):
    """Binds a command name to a handler class."""

    command: str
    handler_class: type

    model_config = ConfigDict(arbitrary_types_allowed=True)

    def handler_instance(self) -> CheckHandler:
        return self.handler_class()


class CheckRouter(CheckRouterInterface):
    """In-memory router of commands to check handlers; ``report-all`` matches every entry."""

    def __init__(self, entries: Optional[List[CheckRouterEntry]] = None) -> None:
        self.handlers: List[CheckRouterEntry] = entries or []

    def get_handlers_for_command(self, command: str) -> List[CheckRouterEntry]:
        if command == ALL_COMMANDS:
            return list(self.handlers)
        return [entry for entry in self.handlers if entry.command == command]

    def register(self, command: str, handler_class: type) -> None:
        entry = CheckRouterEntry(command=command, handler_class=handler_class)
        if entry not in self.handlers:
            self.handlers.append(entry)

    def deregister(self, command: str, handler_class: type) -> None:
        entry = CheckRouterEntry(command=command, handler_class=handler_class)
        for i, v in enumerate(self.handlers):
            if v == entry:
                self.handlers.pop(i)
                return

    def check(self, command: str, applies: Optional[Applies] = None):
        """
        Decorator that wraps ``func(context) -> CheckOutcome`` in a CheckHandler
        registered for ``command``. ``applies`` decides whether report-all runs it
        for a given manifold. The function is returned unchanged.
        """

        def decorator(func: Callable[[CheckContext], Any]) -> Callable[[CheckContext], Any]:
            def process(self: Any, context: CheckContext) -> Any:
                return func(context)

            attributes: Dict[str, Any] = {"command": command, "process": process}
            if applies is not None:
                attributes["applies"] = lambda self, context: bool(applies(context))
            handler_class = type(f"{func.__name__}_Handler", (CheckHandler,), attributes)
            handler_class.__doc__ = inspect.getdoc(func)
            self.register(command, handler_class)
            return func

        return decorator


router = CheckRouter()


def _has_space_form(context: CheckContext) -> bool:
    return context.patch.ambient.sectional_constant is not None


def _is_complex_ambient(context: CheckContext) -> bool:
    return context.patch.ambient.is_complex


def _supports_variation(context: CheckContext) -> bool:
    return context.patch.closed or not all(context.patch.domain.periodic)


def _reference_verdicts(
    context: CheckContext,
    pointwise: Dict[str, np.ndarray],
    totals: Dict[str, float],
) -> List[Verdict]:
    """Compare catalog reference values with what was measured.

    Keys like ``k2`` or ``h3_intrinsic`` are pointwise and must hold at every
    node; ``total_*`` keys and ``volume``/``area`` are integrals.
    """
    tol = context.tolerances
    verdicts = []
    for key, expected in sorted(context.references.items()):
        if key in ("volume", "area"):
            verdicts.append(
                Verdict.at_most(
                    f"reference.{key}",
                    _relative_gap(totals["volume"], expected),
                    tol.reference,
                    detail=f"measured {totals['volume']!r}, expected {expected!r}",
                )
            )
            continue
        match = _REFERENCE_KEY.match(key)
        if match is None:
            logger.warning("Ignoring unrecognized reference value %s", key)
            continue
        total, kind, order, intrinsic = match.groups()
        name = f"{kind}{order}{intrinsic or ''}"
        if total:
            if f"total_{name}" not in totals:
                continue
            measured = totals[f"total_{name}"]
            verdicts.append(
                Verdict.at_most(
                    f"reference.{key}",
                    _relative_gap(measured, expected),
                    tol.reference,
                    detail=f"measured {measured!r}, expected {expected!r}",
                )
            )
        elif name in pointwise:
            verdicts.append(
                Verdict.at_most(f"reference.{key}", _gap(pointwise[name], expected), tol.invariant)
            )
    return verdicts


@router.check("invariants")
def check_invariants(context: CheckContext) -> CheckOutcome:
    """K_2p and H_2p+1 at every node by two independent routes, plus their intrinsic versions."""
    patch, mesh, p_values, tol = context.patch, context.mesh, context.p_values, context.tolerances
    n = patch.n
    c = patch.ambient.sectional_constant

    def evaluate(u: np.ndarray) -> Tuple[float, float, float, List[float]]:
        geometry = local_geometry(patch, u)
        relcurv, sff = geometry.relcurv, geometry.sff
        tangent = frame_curvature_of(patch, geometry)
        route = spaceform = 0.0
        row: List[float] = []
        for p in p_values:
            k, h = k2p_at(relcurv, p), h2p1_at(relcurv, sff, p)
            route = max(
                route,
                abs(k - k2p_via_normal_integral(sff, p)),
                _gap(h, h2p1_via_normal_integral(sff, p)),
            )
            k_int, h_int = intrinsic_invariants(relcurv, sff, tangent, p)
            if c is not None:
                k_pred, h_pred = intrinsic_from_relative(relcurv, sff, c, p)
                spaceform = max(spaceform, abs(k_int - k_pred), _gap(h_int, h_pred))
            row += [k, float(np.linalg.norm(h)), k_int, float(np.linalg.norm(h_int))]
        return geometry.frame.gram_residual, sff.symmetry_residual, route, row + [spaceform]

    rows = sample_nodes(patch, mesh, evaluate, context.workers)
    values = np.array([row[3] for row in rows])
    outcome = CheckOutcome(command="invariants")
    columns = _chart_columns(n) + ["dV"]
    for p in p_values:
        columns += [f"k{2 * p}", f"h{2 * p + 1}", f"k{2 * p}_intrinsic", f"h{2 * p + 1}_intrinsic"]
    table = outcome.table("points", columns)
    for u, dv, row in zip(mesh.nodes, mesh.volume_element, values):
        table.add(*u, dv, *row[:-1])

    outcome.totals["volume"] = float(np.sum(mesh.measure))
    pointwise: Dict[str, np.ndarray] = {}
    for k, p in enumerate(p_values):
        block = values[:, 4 * k : 4 * k + 4]
        pointwise[f"k{2 * p}"], pointwise[f"h{2 * p + 1}"] = block[:, 0], block[:, 1]
        pointwise[f"k{2 * p}_intrinsic"], pointwise[f"h{2 * p + 1}_intrinsic"] = block[:, 2], block[:, 3]
        outcome.totals[f"total_k{2 * p}"] = float(integrate(mesh, block[:, 0]))
        outcome.totals[f"total_k{2 * p}_intrinsic"] = float(integrate(mesh, block[:, 2]))

    outcome.verdicts.append(Verdict.at_most("frame_gram", max(row[0] for row in rows), tol.frame))
    outcome.verdicts.append(Verdict.at_most("sff_symmetry", max(row[1] for row in rows), tol.symmetry))
    outcome.verdicts.append(
        Verdict.at_most(
            "normal_integral_route", max(row[2] for row in rows), tol.route,
            detail="Kronecker contraction vs sphere-moment integral",
        )
    )
    if c is not None:
        outcome.verdicts.append(
            Verdict.at_most(
                "intrinsic_relation", float(values[:, -1].max()), tol.binomial,
                detail=f"binomial relation with c={c!r}",
            )
        )

    first = local_geometry(patch, mesh.nodes[0])
    fast_gap = 0.0
    for p in p_values:
        fast_gap = max(
            fast_gap,
            _relative_gap(k2p_at(first.relcurv, p), k2p_reference(first.relcurv, p)),
            _relative_gap(h2p1_at(first.relcurv, first.sff, p), h2p1_reference(first.relcurv, first.sff, p)),
        )
    outcome.verdicts.append(
        Verdict.at_most("fast_vs_reference", fast_gap, tol.fast_reference, detail="first mesh node")
    )
    outcome.verdicts += _reference_verdicts(context, pointwise, outcome.totals)
    return outcome


@router.check("el-check")
def check_euler_lagrange(context: CheckContext) -> CheckOutcome:
    """General Euler–Lagrange operator at every node against the closed forms that apply."""
    patch, mesh, p_values, tol = context.patch, context.mesh, context.p_values, context.tolerances
    n, m = patch.n, patch.m
    ambient = patch.ambient
    j_adapted = _j_adapted(context)
    stencil_step = context.config.steps.stencil_step
    has_space_form = ambient.sectional_constant is not None

    def evaluate(u: np.ndarray) -> List[float]:
        geometry = local_geometry(patch, u, j_adapted=j_adapted)
        samples = el_samples_at(
            patch, u, p_values, stencil_step=stencil_step, j_adapted=j_adapted, geometry=geometry
        )
        row: List[float] = []
        for p in p_values:
            sample = samples[p]
            expected = np.zeros(n + m)
            gap = complex_gap = 0.0
            if has_space_form:
                expected[n:] = el_spaceform_at(geometry.relcurv, geometry.sff, ambient, p)
                gap = _gap(sample.coefficients, expected)
            if j_adapted:
                expected[n:] = el_complex_cp_at(geometry.relcurv, geometry.sff, ambient, p)
                complex_gap = _gap(sample.coefficients, expected)
            row += [
                sample.norm,
                float(np.linalg.norm(sample.h)),
                float(np.linalg.norm(sample.w)),
                float(np.linalg.norm(sample.qtilde)),
                gap,
                complex_gap,
            ]
        return row

    values = np.array(sample_nodes(patch, mesh, evaluate, context.workers))
    outcome = CheckOutcome(command="el-check")
    columns = _chart_columns(n)
    for p in p_values:
        columns += [f"el{2 * p}", f"h{2 * p + 1}", f"w{2 * p - 1}", f"qtilde{2 * p - 2}"]
        if has_space_form:
            columns.append(f"el{2 * p}_spaceform_gap")
    table = outcome.table("points", columns)
    for u, row in zip(mesh.nodes, values):
        cells: List[float] = []
        for k in range(len(p_values)):
            block = row[6 * k : 6 * k + 6]
            cells += list(block[:4]) + ([block[4]] if has_space_form else [])
        table.add(*u, *cells)

    for k, p in enumerate(p_values):
        block = values[:, 6 * k : 6 * k + 6]
        outcome.totals[f"max_el{2 * p}"] = float(block[:, 0].max())
        if has_space_form:
            outcome.verdicts.append(
                Verdict.at_most(
                    f"spaceform_shortcut.p{p}", float(block[:, 4].max()), tol.spaceform,
                    detail="general operator vs -(n-2p)H_2p+1 + 2cpH_2p-1",
                )
            )
        if j_adapted:
            outcome.verdicts.append(
                Verdict.at_most(f"complex_shortcut.p{p}", float(block[:, 5].max()), tol.cp)
            )
        if j_adapted or "relatively-minimal" in context.tags:
            outcome.verdicts.append(Verdict.at_most(f"vanishes.p{p}", float(block[:, 0].max()), tol.el))

    first = local_geometry(patch, mesh.nodes[0], j_adapted=j_adapted)
    curvature = frame_curvature_of(patch, first)
    fast_gap = 0.0
    for p in p_values:
        fast_gap = max(
            fast_gap,
            _relative_gap(
                w_vector_at(first.relcurv, first.sff, curvature, p),
                w_vector_reference(first.relcurv, first.sff, curvature, p),
            ),
            _relative_gap(
                q_tensor_at(first.relcurv, first.sff, curvature, p),
                q_tensor_reference(first.relcurv, first.sff, curvature, p),
            ),
        )
    outcome.verdicts.append(
        Verdict.at_most("fast_vs_reference", fast_gap, tol.fast_reference, detail="W and Q at the first mesh node")
    )
    return outcome


@router.check("first-variation", applies=_supports_variation)
def check_first_variation(context: CheckContext) -> CheckOutcome:
    """Finite-difference derivative of the total mean curvature against the Euler–Lagrange pairing."""
    config, tol, patch = context.config, context.tolerances, context.patch
    outcome = CheckOutcome(command="first-variation")
    resolution = config.variation_resolution or variation_resolution(patch.n, min(context.mesh.shape))
    mesh = context.mesh
    if tuple(mesh.shape) != (resolution,) * patch.n:
        mesh = build_mesh(patch, resolution, context.workers)
        logger.info("First variation of %s on %d nodes (resolution %d)", patch.name, mesh.size, resolution)
    table = outcome.table("fields", ["seed", "p", "resolution", "lhs", "rhs", "abs_gap", "rel_gap"])
    for seed in range(config.seed, config.seed + config.fields):
        field = random_deformation_field(patch, seed=seed)
        for p in context.p_values:
            result = first_variation_check(
                patch,
                field,
                p,
                mesh,
                t_step=config.steps.t_step,
                rel_tol=tol.first_variation_rel,
                abs_tol=tol.first_variation_abs,
                workers=context.workers,
            )
            table.add(seed, p, resolution, result.lhs, result.rhs, result.abs_gap, result.rel_gap)
            outcome.verdicts.append(
                Verdict(
                    name=f"first_variation.p{p}.seed{seed}",
                    value=result.rel_gap,
                    tolerance=tol.first_variation_rel,
                    passed=result.passed,
                    detail=f"lhs={result.lhs!r} rhs={result.rhs!r} abs_gap={result.abs_gap!r}",
                )
            )
    return outcome


@router.check("tube", applies=_has_space_form)
def check_tube(context: CheckContext) -> CheckOutcome:
    """Tube volumes from the totals, checked against direct normal-sphere quadrature in Euclidean space."""
    config, patch = context.config, context.patch
    report = tube_report(
        patch, context.mesh, radii=config.radii, resolution=config.sphere_resolution, workers=context.workers
    )
    outcome = CheckOutcome(command="tube")
    for p, total in report.totals.items():
        outcome.totals[f"total_k{2 * p}"] = float(total)
    if np.isfinite(report.max_radius):
        outcome.totals["focal_radius"] = float(report.max_radius)
    columns = ["r", "formula"] + [f"term{2 * p}" for p in sorted(report.contributions)]
    if report.numeric is not None:
        columns += ["numeric", "rel_gap"]
    table = outcome.table("radii", columns)
    for i, r in enumerate(report.radii):
        row = [r, report.formula[i]] + [report.contributions[p][i] for p in sorted(report.contributions)]
        if report.numeric is not None:
            row += [report.numeric[i], report.rel_gaps[i]]
        table.add(*row)
    if report.rel_gaps is not None:
        for i, gap in enumerate(report.rel_gaps):
            outcome.verdicts.append(
                Verdict.at_most(
                    f"tube_oracle.r{i}", gap, context.tolerances.tube_oracle,
                    detail=f"r={report.radii[i]!r}",
                )
            )
    return outcome


@router.check("austere")
def check_austere(context: CheckContext) -> CheckOutcome:
    """Austerity of the shape operators, its consequences and the tubular-minimality conditions."""
    config, patch, tol = context.config, context.patch, context.tolerances
    report = austerity_check(
        patch,
        context.mesh,
        samples=config.xi_samples,
        seed=config.seed,
        tolerance=tol.austerity,
        workers=context.workers,
    )
    outcome = CheckOutcome(command="austere")
    outcome.totals["pairing_residual"] = report.max_residual
    if context.entry is not None:
        expected = "austere" in context.tags
        outcome.verdicts.append(
            Verdict.flag(
                "austerity_matches_catalog",
                report.austere == expected,
                detail=f"measured {'austere' if report.austere else 'not austere'}, "
                f"catalog says {'austere' if expected else 'not austere'}",
            )
        )
    if report.austere:
        for p in sorted(report.k_sign_min):
            outcome.verdicts.append(
                Verdict.at_least(f"k_sign.p{p}", report.k_sign_min[p], -tol.austere_sign)
            )
            outcome.verdicts.append(Verdict.at_most(f"h_odd.p{p}", report.h_odd_max[p], tol.austerity))

    if patch.ambient.sectional_constant is not None:
        tubular = tubular_minimality_report(
            patch,
            context.mesh,
            seed=config.seed,
            t_step=config.steps.t_step,
            tolerance=tol.tubular,
            derivative_tolerance=tol.tube_derivative,
            workers=context.workers,
        )
        table = outcome.table("tubular", ["p", "h_norm", "intrinsic_h_norm", "el_norm"])
        for p in tubular.p_values:
            table.add(p, tubular.h_norms[p], tubular.intrinsic_h_norms[p], tubular.el_norms[p])
        radii = outcome.table("tube_derivatives", ["r", "derivative"])
        for r, derivative in zip(tubular.radii, tubular.volume_derivatives):
            radii.add(r, derivative)
        for name, value in sorted(tubular.flags.items()):
            outcome.totals[f"flag.{name}"] = 1.0 if value else 0.0
        outcome.verdicts.append(
            Verdict.flag("tubular_conditions_unanimous", tubular.unanimous, detail=str(tubular.flags))
        )
        if report.austere:
            outcome.verdicts.append(
                Verdict.flag("tubular_minimal", all(tubular.flags.values()), detail=str(tubular.flags))
            )
    return outcome


_CP_RESIDUALS = (
    "curvature_residual",
    "sff_j_residual",
    "sff_anti_residual",
    "wedge_j_residual",
    "h_norm",
    "el_norm",
    "w_identity_residual",
)


@router.check("cp-check", applies=_is_complex_ambient)
def check_complex_projective(context: CheckContext) -> CheckOutcome:
    """Kähler identities of complex submanifolds; non-complex patches must visibly fail them."""
    config, patch, tol = context.config, context.patch, context.tolerances

    def evaluate(u: np.ndarray) -> List[List[float]]:
        reports = [
            cpn_checks(patch, u, p, seed=config.seed, tolerance=tol.cp, stencil_step=config.steps.stencil_step)
            for p in context.p_values
        ]
        return [[getattr(report, name) for name in _CP_RESIDUALS] for report in reports]

    values = np.array(sample_nodes(patch, context.mesh, evaluate, context.workers))
    outcome = CheckOutcome(command="cp-check")
    table = outcome.table("points", _chart_columns(patch.n) + ["p"] + list(_CP_RESIDUALS))
    for u, per_p in zip(context.mesh.nodes, values):
        for p, row in zip(context.p_values, per_p):
            table.add(*u, p, *row)
    worst = values.max(axis=(0, 1))
    for name, value in zip(_CP_RESIDUALS, worst):
        outcome.totals[f"max_{name}"] = float(value)
    if patch.holomorphic:
        for name, value in zip(_CP_RESIDUALS, worst):
            outcome.verdicts.append(Verdict.at_most(name, value, tol.cp))
    else:
        outcome.verdicts.append(
            Verdict.at_least(
                "negative_control", float(worst[_CP_RESIDUALS.index("sff_j_residual")]), tol.cp_negative,
                detail="a non-complex submanifold must break the J-commutation of the second fundamental form",
            )
        )
    return outcome
