"""Euler–Lagrange operator of the total 2p-th mean curvature and its checks.

Curvature tensors passed around here are ambient R_ABCD in an adapted
frame with tangent indices 0..n-1 followed by normal indices n..n+m-1.
The fast paths collapse the (2p−1)! (resp. (2p−2)!) orderings of the lower
Kronecker tuple into one signed term per choice of the free lower slots;
the ``*_reference`` functions keep the literal permutation sums.
"""

import logging
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .ambient import AmbientSpace
from .errors import PreconditionError, StencilError
from .frames import LocalGeometry, RelCurvTensor, SffTensor, frame_curvature_of, local_geometry
from .immersion import (
    DeformationField,
    ImmersionPatch,
    SubmanifoldMesh,
    deform,
    effective_deformation,
    integrate,
    sample_nodes,
)
from .invariants import (
    h2p1_at,
    k2p_at,
    kronecker_symbol,
    ordered_tuples,
    permutation_sign,
    two_form_stack,
    wedge_batch,
    wedge_eval,
    wedge_eval_vectors,
)

logger = logging.getLogger(__name__)

DEFAULT_T_STEP = 1e-3
DEFAULT_STENCIL_STEP = 1e-3
MIN_STENCIL_FRACTION = 1e-3

# Smallest per-axis resolution at which first-variation totals resolve a
# random field to well below the relative tolerance.
VARIATION_RESOLUTION = {1: 96, 2: 32, 3: 16}
DEFAULT_VARIATION_RESOLUTION = 8


class ELSample(BaseModel):
    """Euler–Lagrange ingredients at one point, in adapted-frame coefficients.

    ``w``, ``qtilde`` and ``coefficients`` have n + m entries (tangent block
    first); ``h`` is the normal vector H_2p+1 and ``q`` holds Q^i_α.
    ``chart`` is the same operator as a chart vector.
    """

    p: int
    h: np.ndarray
    w: np.ndarray
    q: np.ndarray
    qtilde: np.ndarray
    coefficients: np.ndarray
    chart: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))


class FirstVariationReport(BaseModel):
    p: int
    field: str
    t_step: float
    lhs: float
    rhs: float
    abs_gap: float
    rel_gap: float
    passed: bool


class CpReport(BaseModel):
    """Residuals of the complex-projective identities at one point."""

    p: int
    frame: str
    curvature_residual: float
    sff_j_residual: float
    sff_anti_residual: float
    wedge_j_residual: float
    h_norm: float
    el_norm: float
    w_identity_residual: float
    passed: bool


@lru_cache(maxsize=None)
def _drop_one(k: int) -> Tuple[Tuple[int, Tuple[int, ...], int], ...]:
    """(s, remaining positions, sign of moving position s to the end)."""
    rows = []
    for s in range(k):
        rest = tuple(t for t in range(k) if t != s)
        rows.append((s, rest, permutation_sign(rest + (s,))))
    return tuple(rows)


@lru_cache(maxsize=None)
def _drop_two(k: int) -> Tuple[Tuple[int, int, Tuple[int, ...], int], ...]:
    rows = []
    for s, s2 in permutations(range(k), 2):
        rest = tuple(t for t in range(k) if t not in (s, s2))
        rows.append((s, s2, rest, permutation_sign(rest + (s, s2))))
    return tuple(rows)


def _w_coefficient(n: int, p: int) -> float:
    return factorial(n - 2 * p) / (factorial(2 * p - 1) * factorial(n))


def _q_coefficient(n: int, p: int) -> float:
    return factorial(n - 2 * p) / (factorial(2 * p - 2) * factorial(n))


def _check_p(n: int, p: int) -> None:
    if p < 0 or 2 * p > n:
        raise PreconditionError(f"Order 2p = {2 * p} is outside [0, n = {n}]")


def w_vector_at(relcurv: RelCurvTensor, sff: SffTensor, curvature: np.ndarray, p: int) -> np.ndarray:
    """W_2p−1 in frame coefficients (tangent block, then normal block)."""
    n, m = sff.n, sff.m
    out = np.zeros(n + m)
    _check_p(n, p)
    if p == 0:
        return out
    omega, h, r = relcurv.omega, sff.h, np.asarray(curvature)
    scale = _w_coefficient(n, p) * factorial(2 * p - 1)

    # Upper tuple (I_{2p−2}, i_{2p−1}, i); i is the curvature slot.
    tuples = ordered_tuples(n, 2 * p)
    forms = two_form_stack(omega, tuples[:, : 2 * p - 2])
    last = tuples[:, 2 * p - 2]
    free = tuples[:, 2 * p - 1]
    for s, rest, sign in _drop_one(2 * p):
        lower = tuples[:, list(rest)]
        picked = tuples[:, s]
        for beta in range(m):
            values = wedge_batch(forms, h[beta][last][:, None, :], lower)
            out[n:] += 2.0 * scale * sign * (values @ r[free, n + beta, picked, n:])
            out[:n] -= 2.0 * scale * sign * (values @ r[free, n + beta, :n, picked])

    # Upper tuple (I_{2p−2}, i_{2p−1}, i, i'); i is the output slot.
    if 2 * p + 1 <= n:
        wide = ordered_tuples(n, 2 * p + 1)
        wide_forms = two_form_stack(omega, wide[:, : 2 * p - 2])
        wide_last = wide[:, 2 * p - 2]
        target = wide[:, 2 * p - 1]
        source = wide[:, 2 * p]
        tangent = np.zeros(n)
        for s, s2, rest, sign in _drop_two(2 * p + 1):
            lower = wide[:, list(rest)]
            for alpha in range(m):
                values = wedge_batch(wide_forms, h[alpha][wide_last][:, None, :], lower)
                np.add.at(tangent, target, sign * values * r[source, n + alpha, wide[:, s], wide[:, s2]])
        out[:n] += scale * tangent
    return out


def w_vector_reference(relcurv: RelCurvTensor, sff: SffTensor, curvature: np.ndarray, p: int) -> np.ndarray:
    n, m = sff.n, sff.m
    out = np.zeros(n + m)
    _check_p(n, p)
    if p == 0:
        return out
    omega, h, r = relcurv.omega, sff.h, np.asarray(curvature)
    coef = _w_coefficient(n, p)
    for upper in permutations(range(n), 2 * p):
        forms = [omega[upper[2 * t], upper[2 * t + 1]] for t in range(p - 1)]
        last, free = upper[2 * p - 2], upper[2 * p - 1]
        for lower in permutations(upper):
            sign = kronecker_symbol(upper, lower)
            for beta in range(m):
                value = sign * wedge_eval(forms, lower[:-1], one_forms=h[beta][last])
                out[n:] += 2.0 * coef * value * r[free, n + beta, lower[-1], n:]
                out[:n] -= 2.0 * coef * value * r[free, n + beta, :n, lower[-1]]
    if 2 * p + 1 <= n:
        for upper in permutations(range(n), 2 * p + 1):
            forms = [omega[upper[2 * t], upper[2 * t + 1]] for t in range(p - 1)]
            last, target, source = upper[2 * p - 2], upper[2 * p - 1], upper[2 * p]
            for lower in permutations(upper):
                sign = kronecker_symbol(upper, lower)
                for alpha in range(m):
                    value = wedge_eval(forms, lower[:-2], one_forms=h[alpha][last])
                    out[target] += coef * sign * value * r[source, n + alpha, lower[-2], lower[-1]]
    return out


def q_tensor_at(relcurv: RelCurvTensor, sff: SffTensor, curvature: np.ndarray, p: int) -> np.ndarray:
    """Q^i_2p−2 as an (n, m) array: row i holds the normal coefficients of Q^i."""
    n, m = sff.n, sff.m
    out = np.zeros((n, m))
    _check_p(n, p)
    if p == 0:
        return out
    omega, h, r = relcurv.omega, sff.h, np.asarray(curvature)
    scale = _q_coefficient(n, p) * factorial(2 * p - 2)

    # Upper tuple (I_{2p−2}, i, i').
    tuples = ordered_tuples(n, 2 * p)
    forms = two_form_stack(omega, tuples[:, : 2 * p - 2])
    inner = two_form_stack(omega, tuples[:, : 2 * p - 4]) if p >= 2 else None
    target = tuples[:, 2 * p - 2]
    source = tuples[:, 2 * p - 1]
    for s, s2, rest, sign in _drop_two(2 * p):
        lower = tuples[:, list(rest)]
        j, j2 = tuples[:, s], tuples[:, s2]
        values = wedge_batch(forms, None, lower)
        np.add.at(out, target, scale * sign * values[:, None] * r[source, n:, j, j2])
        if p < 2:
            continue
        for alpha in range(m):
            for beta in range(m):
                singles = np.stack(
                    [h[alpha][tuples[:, 2 * p - 4]], h[beta][tuples[:, 2 * p - 3]]], axis=1
                )
                mixed = wedge_batch(inner, singles, lower)
                np.add.at(
                    out[:, alpha],
                    target,
                    2.0 * (p - 1) * scale * sign * mixed * r[source, n + beta, j, j2],
                )
    return out


def q_tensor_reference(relcurv: RelCurvTensor, sff: SffTensor, curvature: np.ndarray, p: int) -> np.ndarray:
    n, m = sff.n, sff.m
    out = np.zeros((n, m))
    _check_p(n, p)
    if p == 0:
        return out
    omega, h, r = relcurv.omega, sff.h, np.asarray(curvature)
    coef = _q_coefficient(n, p)
    for upper in permutations(range(n), 2 * p):
        forms = [omega[upper[2 * t], upper[2 * t + 1]] for t in range(p - 1)]
        inner = forms[: p - 2] if p >= 2 else []
        target, source = upper[2 * p - 2], upper[2 * p - 1]
        for lower in permutations(upper):
            sign = kronecker_symbol(upper, lower)
            head, j, j2 = lower[:-2], lower[-2], lower[-1]
            out[target] += coef * sign * wedge_eval(forms, head) * r[source, n:, j, j2]
            if p < 2:
                continue
            for alpha in range(m):
                for beta in range(m):
                    singles = [h[alpha][upper[2 * p - 4]], h[beta][upper[2 * p - 3]]]
                    value = wedge_eval(inner, head, one_forms=singles)
                    out[target, alpha] += 2.0 * (p - 1) * coef * sign * value * r[source, n + beta, j, j2]
    return out


def _axis_steps(patch: ImmersionPatch, u: np.ndarray, step: float) -> np.ndarray:
    """Per-axis stencil steps, shrunk near a non-periodic face to half the distance to it."""
    steps = np.full(patch.n, float(step))
    domain = patch.domain
    for k, periodic in enumerate(domain.periodic):
        if periodic:
            continue
        room = float(min(u[k] - domain.lower[k], domain.upper[k] - u[k]))
        steps[k] = min(step, 0.5 * room)
        if room <= 0.0 or steps[k] < MIN_STENCIL_FRACTION * step:
            raise StencilError(
                f"Stencil around {np.asarray(u).tolist()!r} of {patch.name!r} leaves the parameter domain "
                f"on axis {k} (step {step!r}, room {room!r})"
            )
    return steps


def _stencil_points(patch: ImmersionPatch, u: np.ndarray, steps: np.ndarray) -> List[np.ndarray]:
    """u ± steps[k]·e_k for every parameter axis, in the order (k, +), (k, −)."""
    points = []
    for k in range(patch.n):
        for sign in (1.0, -1.0):
            v = np.array(u, dtype=float)
            v[k] += sign * steps[k]
            points.append(v)
    return points


def _q_of(patch: ImmersionPatch, geometry: LocalGeometry, p: int) -> np.ndarray:
    return q_tensor_at(geometry.relcurv, geometry.sff, frame_curvature_of(patch, geometry), p)


def _qtilde_many(
    patch: ImmersionPatch,
    center: LocalGeometry,
    p_values: Sequence[int],
    step: float,
    j_adapted: bool = False,
) -> Dict[int, np.ndarray]:
    """Q̃_2p−2 for several p from one shared central-difference stencil."""
    n, m = patch.n, patch.m
    frame = center.frame
    result = {p: np.zeros(n + m) for p in p_values if p == 0}
    active = [p for p in p_values if p > 0]
    if not active:
        return result

    steps = _axis_steps(patch, center.u, step)
    neighbours = [
        local_geometry(patch, v, pivot=frame.pivot, seeds=frame.seeds, j_adapted=j_adapted)
        for v in _stencil_points(patch, center.u, steps)
    ]
    g = frame.metric
    gam = patch.ambient.christoffels_at(center.jet.value)
    conn = np.einsum("cab,ka->kcb", gam, center.jet.first)
    coeffs = frame.coefficients

    def covariant(centre_rows: np.ndarray, rows: List[np.ndarray]) -> np.ndarray:
        # ∇_{e_i} of row-vector fields, shape (n, rows, dim).
        d = np.stack([(rows[2 * k] - rows[2 * k + 1]) / (2.0 * steps[k]) for k in range(n)])
        along_axes = d + np.einsum("kcb,rb->krc", conn, centre_rows)
        return np.einsum("ik,krc->irc", coeffs, along_axes)

    nabla_frame = covariant(frame.vectors, [nb.frame.vectors for nb in neighbours])

    for p in active:
        q = _q_of(patch, center, p)
        q_rows = [_q_of(patch, nb, p) for nb in neighbours]
        first = np.einsum("ia,ac,cd,iAd->A", q, frame.normal, g, nabla_frame)
        y_centre = q.T @ frame.tangent
        y_rows = [qn.T @ nb.frame.tangent for qn, nb in zip(q_rows, neighbours)]
        nabla_y = covariant(y_centre, y_rows)
        divergence = np.einsum("iac,cd,id->a", nabla_y, g, frame.tangent)
        qtilde = first.copy()
        qtilde[n:] -= divergence
        result[p] = qtilde
        logger.debug("Q-tilde at u=%s, p=%d: %s", center.u.tolist(), p, qtilde)
    return result


def qtilde_at(
    patch: ImmersionPatch,
    u: np.ndarray,
    p: int,
    stencil_step: Optional[float] = None,
    pivot: Optional[Sequence[int]] = None,
    geometry: Optional[LocalGeometry] = None,
) -> np.ndarray:
    """Q̃_2p−2 at u in frame coefficients, by central differences of the frame and Q."""
    _check_p(patch.n, p)
    center = geometry if geometry is not None else local_geometry(patch, u, pivot=pivot)
    step = (stencil_step or DEFAULT_STENCIL_STEP) * patch.scale
    return _qtilde_many(patch, center, [p], step)[p]


def el_samples_at(
    patch: ImmersionPatch,
    u: np.ndarray,
    p_values: Sequence[int],
    pivot: Optional[Sequence[int]] = None,
    seeds: Optional[Sequence[int]] = None,
    stencil_step: Optional[float] = None,
    j_adapted: bool = False,
    geometry: Optional[LocalGeometry] = None,
) -> Dict[int, ELSample]:
    """L_2p = −(n−2p) H_2p+1 + p W_2p−1 + p Q̃_2p−2 for every requested p."""
    n, m = patch.n, patch.m
    for p in p_values:
        _check_p(n, p)
    center = geometry or local_geometry(patch, u, pivot=pivot, seeds=seeds, j_adapted=j_adapted)
    curvature = frame_curvature_of(patch, center)
    step = (stencil_step or DEFAULT_STENCIL_STEP) * patch.scale
    qtildes = _qtilde_many(patch, center, p_values, step, j_adapted=j_adapted)
    samples = {}
    for p in p_values:
        h = h2p1_at(center.relcurv, center.sff, p)
        w = w_vector_at(center.relcurv, center.sff, curvature, p)
        q = q_tensor_at(center.relcurv, center.sff, curvature, p)
        coefficients = p * w + p * qtildes[p]
        coefficients[n:] -= (n - 2 * p) * h
        samples[p] = ELSample(
            p=p,
            h=h,
            w=w,
            q=q,
            qtilde=qtildes[p],
            coefficients=coefficients,
            chart=center.frame.to_chart(coefficients),
        )
    return samples


def el_operator_at(
    patch: ImmersionPatch,
    u: np.ndarray,
    p: int,
    pivot: Optional[Sequence[int]] = None,
    seeds: Optional[Sequence[int]] = None,
    stencil_step: Optional[float] = None,
) -> ELSample:
    return el_samples_at(patch, u, [p], pivot=pivot, seeds=seeds, stencil_step=stencil_step)[p]


def el_spaceform_at(relcurv: RelCurvTensor, sff: SffTensor, ambient: AmbientSpace, p: int) -> np.ndarray:
    """Closed form −(n−2p) H_2p+1 + 2cp H_2p−1 for constant sectional curvature c."""
    c = ambient.sectional_constant
    if c is None:
        raise PreconditionError(f"{ambient.describe()} has no constant sectional curvature")
    n = sff.n
    _check_p(n, p)
    return -(n - 2 * p) * h2p1_at(relcurv, sff, p) + 2.0 * c * p * h2p1_at(relcurv, sff, p - 1)


def el_complex_cp_at(relcurv: RelCurvTensor, sff: SffTensor, ambient: AmbientSpace, p: int) -> np.ndarray:
    """Closed form for complex submanifolds of CP^N with holomorphic curvature c (n real)."""
    if not ambient.is_complex:
        raise PreconditionError(f"{ambient.describe()} is not a complex projective space")
    n = sff.n
    _check_p(n, p)
    c = ambient.c
    coef = c * p * (n - 2 * p) / (2.0 * (n - 2 * p + 1))
    return -(n - 2 * p) * h2p1_at(relcurv, sff, p) + coef * h2p1_at(relcurv, sff, p - 1)


def _node_invariants(patch: ImmersionPatch, mesh: SubmanifoldMesh, p_values: Sequence[int], workers):
    def evaluate(u: np.ndarray) -> np.ndarray:
        geometry = local_geometry(patch, u)
        return np.array([geometry.volume_element] + [k2p_at(geometry.relcurv, p) for p in p_values])

    return np.array(sample_nodes(patch, mesh, evaluate, workers))


def total_mean_curvatures(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    p_values: Sequence[int],
    workers: Optional[int] = None,
) -> Dict[int, float]:
    """∫ K_2p dV for each p; the volume element is recomputed for ``patch``."""
    table = _node_invariants(patch, mesh, p_values, workers)
    moved = mesh.model_copy(update={"volume_element": table[:, 0]})
    return {p: integrate(moved, table[:, 1 + k]) for k, p in enumerate(p_values)}


def total_mean_curvature(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    p: int,
    workers: Optional[int] = None,
) -> float:
    return total_mean_curvatures(patch, mesh, [p], workers)[p]


def variation_resolution(n: int, resolution: Optional[int] = None) -> int:
    """Per-axis node count for first-variation meshes: the finer of ``resolution`` and the floor for n."""
    floor = VARIATION_RESOLUTION.get(n, DEFAULT_VARIATION_RESOLUTION)
    return floor if resolution is None else max(resolution, floor)


def variation_gap(lhs: float, rhs: float, rel_tol: float, abs_tol: float) -> Tuple[float, float, bool]:
    """Absolute gap, relative gap and verdict for a first-variation comparison.

    The absolute tolerance only applies when the predicted side is itself
    below it; otherwise the relative gap decides.
    """
    abs_gap = abs(lhs - rhs)
    rel_gap = abs_gap / max(abs(lhs), abs(rhs), np.finfo(float).tiny)
    if abs(rhs) <= abs_tol:
        return abs_gap, rel_gap, abs_gap <= abs_tol or rel_gap <= rel_tol
    return abs_gap, rel_gap, rel_gap <= rel_tol


def first_variation_check(
    patch: ImmersionPatch,
    field: DeformationField,
    p: int,
    mesh: SubmanifoldMesh,
    t_step: Optional[float] = None,
    rel_tol: float = 1e-3,
    abs_tol: float = 1e-6,
    workers: Optional[int] = None,
) -> FirstVariationReport:
    """Compare d/dt ∫K_2p(f_t) at t = 0 with ∫⟨L_2p, ν⟩ dV.

    The derivative uses the five-point Richardson stencil in t.
    """
    if not (patch.closed or field.compact_support):
        raise PreconditionError(
            f"First variation of {patch.name!r} needs a closed patch or a compactly supported field"
        )
    _check_p(patch.n, p)
    h = (t_step or DEFAULT_T_STEP) * patch.scale
    totals = {
        t: total_mean_curvature(deform(patch, field, t), mesh, p, workers)
        for t in (-2.0 * h, -h, h, 2.0 * h)
    }
    lhs = (totals[-2.0 * h] - 8.0 * totals[-h] + 8.0 * totals[h] - totals[2.0 * h]) / (12.0 * h)

    def pairing(u: np.ndarray) -> float:
        geometry = local_geometry(patch, u)
        sample = el_samples_at(patch, u, [p], geometry=geometry)[p]
        nu = effective_deformation(patch, field, u)
        return float(sample.chart @ geometry.frame.metric @ nu)

    rhs = integrate(mesh, sample_nodes(patch, mesh, pairing, workers))
    abs_gap, rel_gap, passed = variation_gap(lhs, rhs, rel_tol, abs_tol)
    logger.info(
        "First variation of %s (p=%d, field %s): lhs=%.10g rhs=%.10g rel gap %.3e",
        patch.name, p, field.name, lhs, rhs, rel_gap,
    )
    return FirstVariationReport(
        p=p,
        field=field.name,
        t_step=h,
        lhs=float(lhs),
        rhs=float(rhs),
        abs_gap=float(abs_gap),
        rel_gap=float(rel_gap),
        passed=bool(passed),
    )


def cpn_checks(
    patch: ImmersionPatch,
    u: np.ndarray,
    p: int,
    seed: int = 0,
    samples: int = 4,
    require_complex: bool = False,
    tolerance: float = 1e-5,
    stencil_step: Optional[float] = None,
) -> CpReport:
    """Check the Kähler identities for a submanifold of CP^N at one point.

    Holomorphic patches are checked in a J-adapted frame. Other patches in
    a complex ambient get a Gram–Schmidt frame and are expected to fail.
    """
    ambient = patch.ambient
    if not ambient.is_complex:
        raise PreconditionError(f"{patch.name!r} does not live in a complex projective space")
    if require_complex and not patch.holomorphic:
        raise PreconditionError(f"{patch.name!r} is not a complex submanifold")
    n = patch.n
    _check_p(n, p)
    j_adapted = patch.holomorphic
    geometry = local_geometry(patch, u, j_adapted=j_adapted)
    frame = geometry.frame
    vectors = frame.vectors
    jgram = vectors @ ambient.j_matrix.T @ frame.metric @ vectors.T
    jt, jn = jgram[:n, :n], jgram[n:, n:]
    r = frame_curvature_of(patch, geometry)

    mixed = float(np.max(np.abs(r[:n, n:, :n, :n]), initial=0.0))
    expected = 0.25 * ambient.c * (
        np.einsum("ij,ab->iajb", np.eye(n), np.eye(patch.m)) + np.einsum("ij,ab->iajb", jt, jn)
    )
    curvature_residual = max(mixed, float(np.max(np.abs(r[:n, n:, :n, n:] - expected))))

    h = geometry.sff.h
    sff_j = float(np.max(np.abs(np.einsum("kj,aij->aik", jt, h) - np.einsum("ba,bik->aik", jn, h))))
    sff_anti = float(np.max(np.abs(h + np.einsum("ia,xab,kb->xik", jt, h, jt))))

    wedge_j = 0.0
    if p > 0:
        rng = np.random.default_rng(seed)
        omega = geometry.relcurv.omega
        for _ in range(samples):
            picked = rng.permutation(n)[: 2 * p]
            forms = [omega[picked[2 * t], picked[2 * t + 1]] for t in range(p)]
            x = rng.normal(size=(2 * p, n))
            total = 0.0
            for s in range(2 * p):
                turned = x.copy()
                turned[s] = x[s] @ jt
                total += wedge_eval_vectors(forms, turned)
            wedge_j = max(wedge_j, abs(total))

    sample = el_samples_at(
        patch, u, [p], stencil_step=stencil_step, j_adapted=j_adapted, geometry=geometry
    )[p]
    h_norm = float(np.linalg.norm(sample.h))
    w_expected = np.zeros(n + patch.m)
    if p > 0:
        coef = ambient.c * (n - 2 * p) / (2.0 * (n - 2 * p + 1))
        w_expected[n:] = coef * h2p1_at(geometry.relcurv, geometry.sff, p - 1)
    w_identity = float(np.linalg.norm(sample.w - w_expected))

    residuals = [curvature_residual, sff_j, sff_anti, wedge_j, h_norm, sample.norm, w_identity]
    passed = all(value <= tolerance for value in residuals)
    logger.info(
        "CP checks for %s at u=%s (p=%d, %s frame): %s",
        patch.name, np.asarray(u).tolist(), p, "J-adapted" if j_adapted else "Gram-Schmidt",
        "pass" if passed else "fail",
    )
    return CpReport(
        p=p,
        frame="j-adapted" if j_adapted else "gram-schmidt",
        curvature_residual=curvature_residual,
        sff_j_residual=sff_j,
        sff_anti_residual=sff_anti,
        wedge_j_residual=wedge_j,
        h_norm=h_norm,
        el_norm=sample.norm,
        w_identity_residual=w_identity,
        passed=passed,
    )
