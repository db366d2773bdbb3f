"""Tube volumes, austerity and tubular minimality."""

import logging
from math import comb, factorial, pi
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import minimize

from .errors import FocalRadiusError, NumericError, PreconditionError
from .frames import frame_curvature_of, local_geometry
from .immersion import ImmersionPatch, SubmanifoldMesh, deform, random_deformation_field, sample_nodes
from .invariants import h2p1_at, intrinsic_invariants, k2p_at, sigma_sphere_integral, sphere_volume
from .variational import el_spaceform_at, total_mean_curvatures

logger = logging.getLogger(__name__)

COMPLEX_RESIDUE = 1e-12
DEFAULT_SPHERE_RESOLUTION = 16
DEFAULT_RADIUS_FRACTIONS = (0.25, 0.5, 0.75)
FOCAL_SPHERE_RESOLUTION = 8
FOCAL_SAMPLES = 256


class TubeReport(BaseModel):
    radii: List[float]
    max_radius: float
    totals: Dict[int, float]
    formula: List[float]
    numeric: Optional[List[float]] = None
    rel_gaps: Optional[List[float]] = None
    contributions: Dict[int, List[float]] = Field(default_factory=dict)
    sphere_constants: Dict[int, float] = Field(default_factory=dict)


class AusterityReport(BaseModel):
    """Eigenvalue pairing of S_ξ over sampled unit normals, with its consequences."""

    samples: int
    nodes: int
    max_residual: float
    tolerance: float
    austere: bool
    k_sign_min: Dict[int, float]
    h_odd_max: Dict[int, float]


class TubularMinimalityReport(BaseModel):
    p_values: List[int]
    h_norms: Dict[int, float]
    intrinsic_h_norms: Dict[int, float]
    el_norms: Dict[int, float]
    radii: List[float]
    volume_derivatives: List[float]
    flags: Dict[str, bool]
    unanimous: bool
    tolerance: float
    derivative_tolerance: float


def weyl_gray_volume(totals: Dict[int, float], n: int, m: int, c: float, r: float) -> float:
    """Volume of the tube boundary at radius r from the totals ∫K_2p dV.

    sin and cos are evaluated at r√c as complex functions, which covers c < 0;
    c = 0 uses the limits cos → 1 and sin(r√c)/√c → r.
    """
    return float(sum(_weyl_gray_terms(totals, n, m, c, r).values()))


def _weyl_gray_terms(totals: Dict[int, float], n: int, m: int, c: float, r: float) -> Dict[int, float]:
    if r <= 0:
        raise PreconditionError(f"Tube radius must be positive, got {r!r}")
    if c == 0:
        cos, sin = 1.0 + 0j, complex(r)
    else:
        root = np.sqrt(complex(c))
        cos, sin = np.cos(r * root), np.sin(r * root) / root
    terms = {}
    for p in range(n // 2 + 1):
        k = m + 2 * p - 1
        constant = sphere_volume(k) / (4.0**p * pi**p * factorial(p)) * comb(n, 2 * p) * factorial(2 * p)
        value = constant * totals.get(p, 0.0) * cos ** (n - 2 * p) * sin**k
        if abs(value.imag) > COMPLEX_RESIDUE * max(1.0, abs(value.real)):
            raise NumericError(
                f"Tube term p={p} keeps an imaginary part {value.imag!r} at r={r!r}, c={c!r}"
            )
        terms[p] = float(value.real)
    return terms


def normal_sphere_quadrature(m: int, resolution: int = DEFAULT_SPHERE_RESOLUTION) -> Tuple[np.ndarray, np.ndarray]:
    """Points on S^{m−1} (rows) and weights summing to its volume, for m ≤ 3."""
    if m == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if m == 2:
        angles = 2.0 * pi * np.arange(resolution) / resolution
        return np.stack([np.cos(angles), np.sin(angles)], axis=1), np.full(resolution, 2.0 * pi / resolution)
    if m == 3:
        z, wz = np.polynomial.legendre.leggauss(resolution)
        phi = 2.0 * pi * np.arange(2 * resolution) / (2 * resolution)
        zz, pp = np.meshgrid(z, phi, indexing="ij")
        ring = np.sqrt(1.0 - zz**2)
        points = np.stack([ring * np.cos(pp), ring * np.sin(pp), zz], axis=-1).reshape(-1, 3)
        weights = np.repeat(wz * pi / resolution, 2 * resolution)
        return points, weights
    raise PreconditionError(f"No sphere quadrature grid for codimension {m}; use the moment expansion")


def largest_principal_curvature(h: np.ndarray) -> float:
    """max over unit normals ξ of the spectral radius of S_ξ = Σ_α ξ_α h^α.

    Exact for m = 1 and n = 1. Otherwise the best direction of a normal
    sphere grid is polished with Nelder–Mead and capped by sqrt(Σ_α ‖h^α‖²),
    which bounds the maximum from above.
    """
    cap = float(np.sqrt(sum(np.linalg.norm(block, 2) ** 2 for block in h)))
    m, n = h.shape[0], h.shape[1]
    if m == 1:
        return float(np.abs(np.linalg.eigvalsh(h[0])).max())
    if n == 1 or cap == 0.0:
        return cap

    def spectral(xi: np.ndarray) -> float:
        norm = float(np.linalg.norm(xi))
        if norm == 0.0:
            return 0.0
        return float(np.abs(np.linalg.eigvalsh(np.tensordot(xi / norm, h, axes=1))).max())

    if m <= 3:
        directions = normal_sphere_quadrature(m, FOCAL_SPHERE_RESOLUTION)[0]
    else:
        directions = np.random.default_rng(0).normal(size=(FOCAL_SAMPLES, m))
    values = [spectral(xi) for xi in directions]
    start = directions[int(np.argmax(values))]
    polished = minimize(lambda xi: -spectral(xi), start, method="Nelder-Mead",
                        options={"xatol": 1e-10, "fatol": 1e-14 * cap})
    return min(max(max(values), -float(polished.fun)), cap)


def focal_radius(patch: ImmersionPatch, mesh: SubmanifoldMesh, workers: Optional[int] = None) -> float:
    """1 / max over nodes and unit normals of the spectral radius of S_ξ."""

    def bound(u: np.ndarray) -> float:
        return largest_principal_curvature(local_geometry(patch, u).sff.h)

    kappa = max(sample_nodes(patch, mesh, bound, workers))
    return float("inf") if kappa == 0.0 else 1.0 / kappa


def tube_totals(patch: ImmersionPatch, mesh: SubmanifoldMesh, workers: Optional[int] = None) -> Dict[int, float]:
    """(∫K_0, ∫K_2, …) over the mesh, the inputs of the tube formula."""
    return total_mean_curvatures(patch, mesh, list(range(patch.n // 2 + 1)), workers)


def _require_euclidean(patch: ImmersionPatch) -> None:
    if patch.ambient.sectional_constant != 0.0 or patch.ambient.model_dim != patch.ambient.dim:
        raise PreconditionError(
            f"The numeric tube volume needs a Euclidean ambient, got {patch.ambient.describe()}"
        )


def tube_volume_numeric(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    r: float,
    resolution: int = DEFAULT_SPHERE_RESOLUTION,
    max_radius: Optional[float] = None,
    workers: Optional[int] = None,
) -> float:
    """Σ weight·dV·dσ(ξ)·r^{m−1}·det(I − r S_ξ) over mesh nodes and unit normals."""
    _require_euclidean(patch)
    if r <= 0:
        raise PreconditionError(f"Tube radius must be positive, got {r!r}")
    bound = max_radius if max_radius is not None else focal_radius(patch, mesh, workers)
    if r >= bound:
        raise FocalRadiusError(r, bound)
    n, m = patch.n, patch.m
    grid = normal_sphere_quadrature(m, resolution) if m <= 3 else None

    def element(u: np.ndarray) -> float:
        sff = local_geometry(patch, u).sff
        if grid is None:
            return sum((-r) ** k * sigma_sphere_integral(sff, k) for k in range(n + 1))
        points, weights = grid
        shapes = np.einsum("qa,aij->qij", points, sff.h)
        dets = np.linalg.det(np.eye(n)[None] - r * shapes)
        return float(weights @ dets)

    values = np.array(sample_nodes(patch, mesh, element, workers))
    return float(r ** (m - 1) * np.sum(mesh.measure * values))


def tube_report(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    radii: Optional[Sequence[float]] = None,
    resolution: int = DEFAULT_SPHERE_RESOLUTION,
    workers: Optional[int] = None,
) -> TubeReport:
    """Formula volumes at each radius, plus the numeric oracle for Euclidean ambients.

    Without explicit radii, fractions of the focal bound are used.
    """
    c = patch.ambient.sectional_constant
    if c is None:
        raise PreconditionError(f"The tube formula needs a space-form ambient, got {patch.ambient.describe()}")
    n, m = patch.n, patch.m
    bound = focal_radius(patch, mesh, workers)
    cap = bound if np.isfinite(bound) else patch.scale
    radii = [f * cap for f in DEFAULT_RADIUS_FRACTIONS] if radii is None else list(radii)
    totals = tube_totals(patch, mesh, workers)
    contributions: Dict[int, List[float]] = {p: [] for p in totals}
    formula = []
    for r in radii:
        terms = _weyl_gray_terms(totals, n, m, c, r)
        for p, value in terms.items():
            contributions[p].append(value)
        formula.append(sum(terms.values()))
    numeric = gaps = None
    if c == 0.0 and patch.ambient.model_dim == patch.ambient.dim:
        numeric = [tube_volume_numeric(patch, mesh, r, resolution, bound, workers) for r in radii]
        gaps = [abs(a - b) / max(abs(a), abs(b), np.finfo(float).tiny) for a, b in zip(formula, numeric)]
    logger.info("Tube volumes of %s at radii %s: %s", patch.name, radii, formula)
    return TubeReport(
        radii=radii,
        max_radius=bound,
        totals=totals,
        formula=formula,
        numeric=numeric,
        rel_gaps=gaps,
        contributions=contributions,
        sphere_constants={m + 2 * p - 1: sphere_volume(m + 2 * p - 1) for p in totals},
    )


def _unit_normals(m: int, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=(samples, m))
    return xi / np.linalg.norm(xi, axis=1, keepdims=True)


def austerity_check(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    samples: int = 100,
    seed: int = 0,
    tolerance: float = 1e-6,
    workers: Optional[int] = None,
) -> AusterityReport:
    """Pairing residual max_k |λ_k + λ_{n+1−k}| of S_ξ for the same ξ samples at every node."""
    n = patch.n
    normals = _unit_normals(patch.m, samples, seed)
    p_values = list(range(n // 2 + 1))

    def evaluate(u: np.ndarray) -> Tuple[float, List[float], List[float]]:
        geometry = local_geometry(patch, u)
        shapes = np.einsum("qa,aij->qij", normals, geometry.sff.h)
        eig = np.linalg.eigvalsh(shapes)
        residual = float(np.max(np.abs(eig + eig[:, ::-1])))
        signs = [(-1) ** p * k2p_at(geometry.relcurv, p) for p in p_values]
        odd = [float(np.linalg.norm(h2p1_at(geometry.relcurv, geometry.sff, p))) for p in p_values]
        return residual, signs, odd

    rows = sample_nodes(patch, mesh, evaluate, workers)
    max_residual = max(row[0] for row in rows)
    signs = np.array([row[1] for row in rows])
    odd = np.array([row[2] for row in rows])
    austere = max_residual < tolerance
    logger.info("Austerity of %s: residual %.3e (%s)", patch.name, max_residual, "austere" if austere else "not austere")
    return AusterityReport(
        samples=samples,
        nodes=mesh.size,
        max_residual=max_residual,
        tolerance=tolerance,
        austere=austere,
        k_sign_min={p: float(signs[:, k].min()) for k, p in enumerate(p_values)},
        h_odd_max={p: float(odd[:, k].max()) for k, p in enumerate(p_values)},
    )


def tubular_minimality_report(
    patch: ImmersionPatch,
    mesh: SubmanifoldMesh,
    seed: int = 0,
    radius_fractions: Sequence[float] = DEFAULT_RADIUS_FRACTIONS,
    t_step: float = 1e-3,
    tolerance: float = 1e-5,
    derivative_tolerance: float = 1e-4,
    workers: Optional[int] = None,
) -> TubularMinimalityReport:
    """Evaluate the four equivalent tubular-minimality conditions and check they agree.

    The conditions: odd mean curvature vectors vanish, their intrinsic
    versions vanish, every Euler–Lagrange operator vanishes, and tube
    volumes are stationary under a random variation.
    """
    c = patch.ambient.sectional_constant
    if c is None:
        raise PreconditionError(f"Tubular minimality needs a space-form ambient, got {patch.ambient.describe()}")
    n, m = patch.n, patch.m
    p_values = list(range(n // 2 + 1))

    def evaluate(u: np.ndarray) -> np.ndarray:
        geometry = local_geometry(patch, u)
        relcurv, sff = geometry.relcurv, geometry.sff
        tangent = frame_curvature_of(patch, geometry)
        row = []
        for p in p_values:
            row.append(np.linalg.norm(h2p1_at(relcurv, sff, p)))
            row.append(np.linalg.norm(intrinsic_invariants(relcurv, sff, tangent, p)[1]))
            row.append(np.linalg.norm(el_spaceform_at(relcurv, sff, patch.ambient, p)))
        return np.array(row)

    table = np.array(sample_nodes(patch, mesh, evaluate, workers)).max(axis=0).reshape(len(p_values), 3)
    h_norms = {p: float(table[k, 0]) for k, p in enumerate(p_values)}
    intrinsic = {p: float(table[k, 1]) for k, p in enumerate(p_values)}
    el_norms = {p: float(table[k, 2]) for k, p in enumerate(p_values)}

    bound = focal_radius(patch, mesh, workers)
    cap = bound if np.isfinite(bound) else patch.scale
    if c > 0:
        cap = min(cap, 0.5 * pi / np.sqrt(c))
    radii = [f * cap for f in radius_fractions]
    field = random_deformation_field(patch, seed=seed)
    h = t_step * patch.scale
    volumes = {}
    for t in (-2.0 * h, -h, h, 2.0 * h):
        totals = tube_totals(deform(patch, field, t), mesh, workers)
        volumes[t] = np.array([weyl_gray_volume(totals, n, m, c, r) for r in radii])
    derivatives = (volumes[-2.0 * h] - 8.0 * volumes[-h] + 8.0 * volumes[h] - volumes[2.0 * h]) / (12.0 * h)

    flags = {
        "odd_mean_curvatures_vanish": max(h_norms.values()) <= tolerance,
        "intrinsic_odd_mean_curvatures_vanish": max(intrinsic.values()) <= tolerance,
        "euler_lagrange_vanishes": max(el_norms.values()) <= tolerance,
        "tube_volume_stationary": bool(np.max(np.abs(derivatives)) <= derivative_tolerance),
    }
    unanimous = len(set(flags.values())) == 1
    if not unanimous:
        logger.warning("Tubular minimality flags disagree for %s: %s", patch.name, flags)
    return TubularMinimalityReport(
        p_values=p_values,
        h_norms=h_norms,
        intrinsic_h_norms=intrinsic,
        el_norms=el_norms,
        radii=radii,
        volume_derivatives=[float(d) for d in derivatives],
        flags=flags,
        unanimous=unanimous,
        tolerance=tolerance,
        derivative_tolerance=derivative_tolerance,
    )
