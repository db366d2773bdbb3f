"""Parametrized immersions, quadrature meshes and deformation families."""

import logging
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .ambient import AmbientSpace, Jet
from .errors import ImmersionDegeneracyError, NumericError, PreconditionError
from .utils import map_nodes

logger = logging.getLogger(__name__)

ModelMap = Callable[[np.ndarray], np.ndarray]
ModelJet = Callable[[np.ndarray], Jet]


class ParameterDomain(BaseModel):
    """Axis-aligned parameter box with per-axis periodicity."""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    periodic: Tuple[bool, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _consistent_axes(self) -> "ParameterDomain":
        if not len(self.lower) == len(self.upper) == len(self.periodic):
            raise ValueError("lower, upper and periodic must have the same length")
        for lo, hi in zip(self.lower, self.upper):
            if not hi > lo:
                raise ValueError(f"Empty parameter interval [{lo}, {hi}]")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def lengths(self) -> np.ndarray:
        return np.asarray(self.upper) - np.asarray(self.lower)

    def wrap(self, u: np.ndarray) -> np.ndarray:
        u = np.array(u, dtype=float)
        for axis, periodic in enumerate(self.periodic):
            if periodic:
                lo, length = self.lower[axis], self.lengths[axis]
                u[axis] = lo + np.mod(u[axis] - lo, length)
        return u

    def contains(self, u: np.ndarray) -> bool:
        """True when every non-periodic coordinate lies inside its interval."""
        u = np.asarray(u, dtype=float)
        for axis, periodic in enumerate(self.periodic):
            if not periodic and not self.lower[axis] <= u[axis] <= self.upper[axis]:
                return False
        return True


class ImmersionPatch(BaseModel):
    """A map from a parameter box into an ambient space.

    ``model_map`` and ``model_jet`` work in the ambient's model coordinates
    (the chart itself for flat and complex ambients, R^{D+1} for curved
    space forms). When ``model_jet`` is missing, jets come from central
    differences with step ``jet_step * scale``.
    """

    name: str
    ambient: AmbientSpace
    n: int = Field(gt=0)
    domain: ParameterDomain
    model_map: ModelMap
    model_jet: Optional[ModelJet] = None
    closed: bool = False
    holomorphic: bool = False
    scale: float = Field(default=1.0, gt=0)
    jet_step: float = Field(default=1e-4, gt=0)
    rank_threshold: float = Field(default=1e-8, gt=0)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _dimensions(self) -> "ImmersionPatch":
        if self.domain.dim != self.n:
            raise ValueError(
                f"Parameter domain has {self.domain.dim} axes but n = {self.n}"
            )
        if self.n >= self.ambient.dim:
            raise ValueError(
                f"Submanifold dimension {self.n} must be below ambient dimension {self.ambient.dim}"
            )
        return self

    @property
    def m(self) -> int:
        return self.ambient.dim - self.n


class SubmanifoldMesh(BaseModel):
    """Tensor-product quadrature nodes with weights and induced volume element."""

    nodes: np.ndarray
    weights: np.ndarray
    volume_element: np.ndarray
    shape: Tuple[int, ...]

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def measure(self) -> np.ndarray:
        return self.weights * self.volume_element


class DeformationField(BaseModel):
    """A variation direction ν given through its 2-jet in model coordinates."""

    name: str
    evaluator: Callable[[np.ndarray, Jet], Jet]
    tangent_to_model: bool = False
    compact_support: bool = False

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def product_jet(factors: np.ndarray, first: np.ndarray, second: np.ndarray) -> Jet:
    """Jet of y_a(u) = Π_b φ_ab(u_b) from per-axis values and derivatives, each (D, n)."""
    factors = np.atleast_2d(np.asarray(factors, dtype=float))
    first = np.atleast_2d(np.asarray(first, dtype=float))
    second = np.atleast_2d(np.asarray(second, dtype=float))
    dim, n = factors.shape
    value = np.prod(factors, axis=1)
    d1 = np.empty((n, dim))
    d2 = np.empty((n, n, dim))
    for i in range(n):
        others = np.prod(np.delete(factors, i, axis=1), axis=1)
        d1[i] = first[:, i] * others
        d2[i, i] = second[:, i] * others
        for j in range(i + 1, n):
            rest = np.prod(np.delete(factors, [i, j], axis=1), axis=1)
            d2[i, j] = d2[j, i] = first[:, i] * first[:, j] * rest
    return Jet(value, d1, d2)


def central_difference_jet(fn: ModelMap, u: np.ndarray, h: float) -> Jet:
    u = np.asarray(u, dtype=float)
    n = u.size

    def evaluate(v: np.ndarray) -> np.ndarray:
        return np.asarray(fn(v), dtype=float)

    value = evaluate(u)
    eye = np.eye(n) * h
    plus = [evaluate(u + eye[i]) for i in range(n)]
    minus = [evaluate(u - eye[i]) for i in range(n)]
    first = np.array([(plus[i] - minus[i]) / (2.0 * h) for i in range(n)])
    second = np.empty((n, n) + value.shape)
    for i in range(n):
        second[i, i] = (plus[i] - 2.0 * value + minus[i]) / h**2
        for j in range(i + 1, n):
            mixed = (
                evaluate(u + eye[i] + eye[j])
                - evaluate(u + eye[i] - eye[j])
                - evaluate(u - eye[i] + eye[j])
                + evaluate(u - eye[i] - eye[j])
            ) / (4.0 * h**2)
            second[i, j] = second[j, i] = mixed
    return Jet(value, first, second)


def model_jet_at(patch: ImmersionPatch, u: np.ndarray) -> Jet:
    """2-jet of the patch in model coordinates at u (periodic wrap applied)."""
    u = patch.domain.wrap(u)
    if patch.model_jet is not None:
        value, first, second = patch.model_jet(u)
        return Jet(np.asarray(value, float), np.asarray(first, float), np.asarray(second, float))
    return central_difference_jet(patch.model_map, u, patch.jet_step * patch.scale)


def induced_metric(patch: ImmersionPatch, jet: Jet) -> np.ndarray:
    g = patch.ambient.metric_at(jet.value)
    return jet.first @ g @ jet.first.T


def jet_at(patch: ImmersionPatch, u: np.ndarray) -> Jet:
    """Chart 2-jet (value, ∂f/∂u_i, ∂²f/∂u_i∂u_j) with a rank check."""
    jet = patch.ambient.chart_jet(model_jet_at(patch, u))
    induced = induced_metric(patch, jet)
    smallest = float(np.linalg.eigvalsh(induced)[0])
    if not np.isfinite(smallest) or smallest <= (patch.rank_threshold * patch.scale) ** 2:
        raise ImmersionDegeneracyError(
            f"Immersion {patch.name!r} is degenerate at u={np.asarray(u).tolist()!r} "
            f"(smallest induced eigenvalue {smallest!r})",
            point=u,
        )
    return jet


def _axis_rule(lower: float, upper: float, periodic: bool, count: int):
    if periodic:
        nodes = lower + (upper - lower) * np.arange(count) / count
        weights = np.full(count, (upper - lower) / count)
        return nodes, weights
    x, w = np.polynomial.legendre.leggauss(count)
    return lower + 0.5 * (upper - lower) * (x + 1.0), 0.5 * (upper - lower) * w


def volume_element_at(patch: ImmersionPatch, u: np.ndarray) -> float:
    return float(np.sqrt(np.linalg.det(induced_metric(patch, jet_at(patch, u)))))


def build_mesh(
    patch: ImmersionPatch,
    resolution: Union[int, Sequence[int]],
    workers: Optional[int] = None,
) -> SubmanifoldMesh:
    """Trapezoidal nodes on periodic axes, Gauss–Legendre nodes elsewhere."""
    counts = [resolution] * patch.n if isinstance(resolution, int) else list(resolution)
    if len(counts) != patch.n:
        raise PreconditionError(f"Expected {patch.n} resolutions, got {len(counts)}")
    if min(counts) < 4:
        raise PreconditionError(f"Resolution must be at least 4 per axis, got {counts}")
    rules = [
        _axis_rule(lo, hi, per, count)
        for lo, hi, per, count in zip(
            patch.domain.lower, patch.domain.upper, patch.domain.periodic, counts
        )
    ]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    nodes = np.stack([g.reshape(-1) for g in grids], axis=1)
    weights = np.prod(np.stack([w.reshape(-1) for w in wgrids], axis=1), axis=1)
    logger.debug("Meshing %s with %s nodes", patch.name, counts)
    dv = np.array(map_nodes(lambda u: volume_element_at(patch, u), nodes, workers))
    return SubmanifoldMesh(nodes=nodes, weights=weights, volume_element=dv, shape=tuple(counts))


def remesh(mesh: SubmanifoldMesh, patch: ImmersionPatch, workers: Optional[int] = None) -> SubmanifoldMesh:
    """Same nodes and weights, volume element recomputed for ``patch``."""
    dv = np.array(map_nodes(lambda u: volume_element_at(patch, u), mesh.nodes, workers))
    return mesh.model_copy(update={"volume_element": dv})


def integrate(mesh: SubmanifoldMesh, field: Union[Sequence[float], np.ndarray]) -> Union[float, np.ndarray]:
    """Σ weight·dV·field with numpy's pairwise reduction along the node axis."""
    values = np.asarray(field, dtype=float)
    if values.shape[0] != mesh.size:
        raise PreconditionError(f"Field has {values.shape[0]} values for {mesh.size} nodes")
    finite = np.isfinite(values).reshape(mesh.size, -1).all(axis=1)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise NumericError(
            f"Non-finite field value at node {bad} (u={mesh.nodes[bad].tolist()!r})"
        )
    weighted = mesh.measure.reshape((-1,) + (1,) * (values.ndim - 1)) * values
    if values.ndim == 1:
        return float(np.sum(weighted))
    return np.ascontiguousarray(np.moveaxis(weighted, 0, -1)).sum(axis=-1)


def field_jet_at(
    patch: ImmersionPatch,
    field: DeformationField,
    u: np.ndarray,
    base: Optional[Jet] = None,
) -> Jet:
    u = patch.domain.wrap(u)
    base = base if base is not None else model_jet_at(patch, u)
    jet = field.evaluator(u, base)
    if field.tangent_to_model:
        jet = patch.ambient.project_to_model_tangent(base, jet)
    return jet


def deform(patch: ImmersionPatch, field: DeformationField, t: float) -> ImmersionPatch:
    """The family member f_t: model point moved by t·ν, then retracted onto the model."""
    if t == 0:
        return patch
    ambient = patch.ambient

    def moved_jet(u: np.ndarray) -> Jet:
        base = model_jet_at(patch, u)
        nu = field_jet_at(patch, field, u, base)
        return ambient.retract_jet(
            Jet(base.value + t * nu.value, base.first + t * nu.first, base.second + t * nu.second)
        )

    return patch.model_copy(
        update={
            "name": f"{patch.name}[{field.name} t={t:g}]",
            "model_map": lambda u: moved_jet(u).value,
            "model_jet": moved_jet,
        }
    )


def effective_deformation(patch: ImmersionPatch, field: DeformationField, u: np.ndarray) -> np.ndarray:
    """ν_eff = ∂f_t/∂t at t = 0 as a chart vector."""
    base = model_jet_at(patch, u)
    nu = field_jet_at(patch, field, u, base)
    dm = base.value.size
    velocity = Jet(base.value, nu.value[None, :], np.zeros((1, 1, dm)))
    return patch.ambient.chart_jet(patch.ambient.retract_jet(velocity)).first[0]


def _bump_jet(patch: ImmersionPatch, u: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    lengths = patch.domain.lengths
    f = np.ones(patch.n)
    f1 = np.zeros(patch.n)
    f2 = np.zeros(patch.n)
    for axis, periodic in enumerate(patch.domain.periodic):
        if periodic:
            continue
        s = (u[axis] - patch.domain.lower[axis]) / lengths[axis]
        k = np.pi / lengths[axis]
        f[axis] = np.sin(np.pi * s) ** 2
        f1[axis] = k * np.sin(2.0 * np.pi * s)
        f2[axis] = 2.0 * k**2 * np.cos(2.0 * np.pi * s)
    jet = product_jet(f[None, :], f1[None, :], f2[None, :])
    return float(jet.value[0]), jet.first[:, 0], jet.second[:, :, 0]


# Largest phase swing w_k·(y - c) of a random field mode across a patch.
FIELD_BANDWIDTH = 1.5


def patch_extent(patch: ImmersionPatch, samples: int = 5) -> Tuple[np.ndarray, float]:
    """Centroid and radius of the patch image over a coarse parameter grid."""
    axes = [np.linspace(lo, hi, samples) for lo, hi in zip(patch.domain.lower, patch.domain.upper)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, patch.n)
    points = np.array([np.asarray(patch.model_map(u), dtype=float) for u in grid])
    center = points.mean(axis=0)
    extent = float(np.linalg.norm(points - center, axis=1).max())
    if not np.isfinite(extent) or extent <= 0.0:
        extent = patch.scale
    return center, extent


def random_deformation_field(
    patch: ImmersionPatch,
    seed: int = 0,
    modes: int = 3,
    amplitude: float = 0.5,
) -> DeformationField:
    """Seeded smooth field ν(u) = V(f(u)) with V(y) = A·(y - c)/ρ + Σ_k b_k sin(w_k·(y - c) + φ_k).

    c and ρ are the centroid and radius of the patch image. Every frequency
    has |w_k|·ρ ≤ FIELD_BANDWIDTH, so the field oscillates at most about a
    quarter turn across the patch whatever its size.

    Non-closed patches get a bump factor vanishing to second order on every
    non-periodic boundary face; curved space forms get the field projected
    onto the model's tangent spaces.
    """
    rng = np.random.default_rng(seed)
    dm = patch.ambient.model_dim
    center, extent = patch_extent(patch)
    linear = rng.normal(size=(dm, dm)) / extent
    coef = rng.normal(size=(modes, dm))
    direction = rng.normal(size=(modes, dm))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    freq = direction * rng.uniform(0.5, 1.0, size=(modes, 1)) * (FIELD_BANDWIDTH / extent)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=modes)
    bumped = not patch.closed and not all(patch.domain.periodic)
    curved = patch.ambient.model_dim != patch.ambient.dim

    def evaluator(u: np.ndarray, base: Jet) -> Jet:
        y, dy, d2y = base
        y = y - center
        theta = freq @ y + phase
        sin, cos = np.sin(theta), np.cos(theta)
        v = amplitude * (linear @ y + coef.T @ sin)
        dv = amplitude * (linear + np.einsum("k,ka,kb->ab", cos, coef, freq))
        d2v = -amplitude * np.einsum("k,ka,kb,kc->abc", sin, coef, freq, freq)
        v1 = dy @ dv.T
        v2 = np.einsum("abc,ib,jc->ija", d2v, dy, dy) + np.einsum("ab,ijb->ija", dv, d2y)
        if not bumped:
            return Jet(v, v1, v2)
        b, b1, b2 = _bump_jet(patch, u)
        return Jet(
            b * v,
            np.outer(b1, v) + b * v1,
            np.einsum("ij,a->ija", b2, v)
            + np.einsum("i,ja->ija", b1, v1)
            + np.einsum("j,ia->ija", b1, v1)
            + b * v2,
        )

    return DeformationField(
        name=f"fourier-{seed}",
        evaluator=evaluator,
        tangent_to_model=curved,
        compact_support=bumped,
    )


def sample_nodes(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    fn: Callable[[np.ndarray], object],
    workers: Optional[int] = None,
) -> List[object]:
    """Evaluate fn at every mesh node in mesh order."""
    return map_nodes(fn, mesh.nodes, workers)
