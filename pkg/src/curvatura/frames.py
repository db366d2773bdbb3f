"""Adapted orthonormal frames, second fundamental forms and relative curvature."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .ambient import Jet
from .errors import FrameDegeneracyError, PreconditionError
from .immersion import ImmersionPatch, jet_at

logger = logging.getLogger(__name__)

SEED_TOLERANCE = 1e-2
UNIT_TOLERANCE = 1e-8


class AdaptedFrame(BaseModel):
    """Orthonormal tangent and normal chart vectors at f(u).

    ``coefficients`` expresses the tangent frame in the coordinate basis:
    e_i = Σ_k coefficients[i, k] ∂f/∂u_k.
    """

    point: np.ndarray
    metric: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    coefficients: np.ndarray
    pivot: Tuple[int, ...]
    seeds: Tuple[int, ...]
    gram_residual: float

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def n(self) -> int:
        return int(self.tangent.shape[0])

    @property
    def m(self) -> int:
        return int(self.normal.shape[0])

    @property
    def vectors(self) -> np.ndarray:
        """All frame vectors as rows: tangent first, then normal."""
        return np.vstack([self.tangent, self.normal])

    def to_chart(self, coefficients: np.ndarray) -> np.ndarray:
        return np.asarray(coefficients) @ self.vectors


class SffTensor(BaseModel):
    """h[α, i, j] = ⟨∇_{e_i} e_j, e_α⟩."""

    h: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def m(self) -> int:
        return int(self.h.shape[0])

    @property
    def n(self) -> int:
        return int(self.h.shape[1])

    @property
    def symmetry_residual(self) -> float:
        return float(np.max(np.abs(self.h - np.swapaxes(self.h, 1, 2)), initial=0.0))

    def rotated(self, tangent_rotation: np.ndarray, normal_rotation: Optional[np.ndarray] = None) -> "SffTensor":
        """Components in the frame e'_i = Σ O[i,k] e_k, e'_β = Σ P[β,α] e_α."""
        o = np.asarray(tangent_rotation, dtype=float)
        p = np.eye(self.m) if normal_rotation is None else np.asarray(normal_rotation, dtype=float)
        return SffTensor(h=np.einsum("ba,ik,akl,jl->bij", p, o, self.h, o))


class RelCurvTensor(BaseModel):
    """omega[i, j, k, l] = Ω_ij(e_k, e_l)."""

    omega: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def n(self) -> int:
        return int(self.omega.shape[0])


class LocalGeometry(BaseModel):
    """Everything computed at one parameter point."""

    u: np.ndarray
    jet: Jet
    frame: AdaptedFrame
    sff: SffTensor
    relcurv: RelCurvTensor

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def volume_element(self) -> float:
        induced = self.jet.first @ self.frame.metric @ self.jet.first.T
        return float(np.sqrt(np.linalg.det(induced)))


def _orthonormalize(vector: np.ndarray, basis: List[np.ndarray], g: np.ndarray) -> Tuple[np.ndarray, float]:
    """Project out basis (twice, for stability) and return the unit remainder and its norm."""
    v = np.array(vector, dtype=float)
    for _ in range(2):
        for b in basis:
            v = v - (b @ g @ v) * b
    norm = float(np.sqrt(max(v @ g @ v, 0.0)))
    return (v / norm if norm > 0 else v), norm


def _tangent_coefficients(tangent: np.ndarray, first: np.ndarray, g: np.ndarray) -> np.ndarray:
    return tangent @ g @ first.T @ np.linalg.inv(first @ g @ first.T)


def _gram_residual(vectors: np.ndarray, g: np.ndarray) -> float:
    return float(np.max(np.abs(vectors @ g @ vectors.T - np.eye(vectors.shape[0]))))


def _normal_completion(
    basis: List[np.ndarray],
    g: np.ndarray,
    m: int,
    seeds: Optional[Sequence[int]],
    paired: Optional[np.ndarray] = None,
) -> Tuple[List[np.ndarray], Tuple[int, ...]]:
    dim = g.shape[0]
    fixed = seeds is not None
    order = list(seeds) if fixed else list(range(dim))
    normals: List[np.ndarray] = []
    used: List[int] = []
    for k in order:
        if len(normals) == m:
            break
        seed = np.zeros(dim)
        seed[k] = 1.0
        v, norm = _orthonormalize(seed, basis + normals, g)
        if norm < SEED_TOLERANCE * np.sqrt(g[k, k]):
            if fixed:
                raise FrameDegeneracyError(
                    f"Fixed normal seed {k} became dependent (relative norm {norm:.3e})",
                    seeds_tried=order,
                )
            logger.debug("Skipping near-dependent normal seed %d", k)
            continue
        normals.append(v)
        used.append(k)
        if paired is not None:
            jv, _ = _orthonormalize(paired @ v, basis + normals, g)
            normals.append(jv)
    if len(normals) != m:
        raise FrameDegeneracyError(
            f"Normal completion found {len(normals)} of {m} vectors", seeds_tried=order
        )
    return normals, tuple(used)


def adapted_frame_at(
    patch: ImmersionPatch,
    u: np.ndarray,
    pivot: Optional[Sequence[int]] = None,
    seeds: Optional[Sequence[int]] = None,
    jet: Optional[Jet] = None,
) -> AdaptedFrame:
    """Gram–Schmidt of ∂f/∂u in pivot order, then completion from standard basis seeds."""
    jet = jet if jet is not None else jet_at(patch, u)
    g = patch.ambient.metric_at(jet.value)
    pivot = tuple(range(patch.n)) if pivot is None else tuple(pivot)
    if sorted(pivot) != list(range(patch.n)):
        raise PreconditionError(f"Pivot order {pivot} is not a permutation of 0..{patch.n - 1}")
    tangent: List[np.ndarray] = []
    for k in pivot:
        v, norm = _orthonormalize(jet.first[k], tangent, g)
        if norm <= patch.rank_threshold * patch.scale:
            raise FrameDegeneracyError(f"Tangent pivot {k} is dependent at u={np.asarray(u).tolist()!r}")
        tangent.append(v)
    normals, used = _normal_completion(tangent, g, patch.m, seeds)
    t = np.array(tangent)
    nrm = np.array(normals).reshape(patch.m, patch.ambient.dim)
    residual = _gram_residual(np.vstack([t, nrm]), g)
    if residual > 1e-12:
        logger.warning("Frame Gram residual %.3e at u=%s", residual, np.asarray(u).tolist())
    return AdaptedFrame(
        point=jet.value,
        metric=g,
        tangent=t,
        normal=nrm,
        coefficients=_tangent_coefficients(t, jet.first, g),
        pivot=pivot,
        seeds=used,
        gram_residual=residual,
    )


def j_adapted_frame_at(
    patch: ImmersionPatch,
    u: np.ndarray,
    seeds: Optional[Sequence[int]] = None,
    jet: Optional[Jet] = None,
) -> AdaptedFrame:
    """Frame with e_{2a+1} = J e_{2a} in the tangent and in the normal part."""
    ambient = patch.ambient
    if not ambient.is_complex:
        raise PreconditionError("A J-adapted frame needs a complex ambient")
    if patch.n % 2:
        raise PreconditionError(f"A J-adapted frame needs even n, got {patch.n}")
    jet = jet if jet is not None else jet_at(patch, u)
    g = ambient.metric_at(jet.value)
    j = ambient.j_matrix
    tangent: List[np.ndarray] = []
    for k in range(0, patch.n, 2):
        v, norm = _orthonormalize(jet.first[k], tangent, g)
        if norm <= patch.rank_threshold * patch.scale:
            raise FrameDegeneracyError(f"Tangent pivot {k} is dependent at u={np.asarray(u).tolist()!r}")
        tangent.append(v)
        jv, _ = _orthonormalize(j @ v, tangent, g)
        tangent.append(jv)
    normals, used = _normal_completion(tangent, g, patch.m, seeds, paired=j)
    t = np.array(tangent)
    nrm = np.array(normals).reshape(patch.m, ambient.dim)
    return AdaptedFrame(
        point=jet.value,
        metric=g,
        tangent=t,
        normal=nrm,
        coefficients=_tangent_coefficients(t, jet.first, g),
        pivot=tuple(range(patch.n)),
        seeds=used,
        gram_residual=_gram_residual(np.vstack([t, nrm]), g),
    )


def second_fundamental_form(
    patch: ImmersionPatch,
    u: np.ndarray,
    frame: AdaptedFrame,
    jet: Optional[Jet] = None,
) -> SffTensor:
    jet = jet if jet is not None else jet_at(patch, u)
    gam = patch.ambient.christoffels_at(jet.value)
    hessian = jet.second + np.einsum("cab,ia,jb->ijc", gam, jet.first, jet.first)
    normal_parts = np.einsum("ijc,cd,ad->aij", hessian, frame.metric, frame.normal)
    c = frame.coefficients
    return SffTensor(h=np.einsum("ik,akl,jl->aij", c, normal_parts, c))


def shape_operator(sff: SffTensor, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (sff.m,):
        raise PreconditionError(f"Normal direction needs {sff.m} components, got shape {xi.shape}")
    if abs(float(np.linalg.norm(xi)) - 1.0) > UNIT_TOLERANCE:
        raise PreconditionError(f"Normal direction must be a unit vector, |ξ| = {np.linalg.norm(xi)!r}")
    return np.einsum("a,aij->ij", xi, sff.h)


def relative_curvature(sff: SffTensor) -> RelCurvTensor:
    h = sff.h
    return RelCurvTensor(
        omega=np.einsum("aik,ajl->ijkl", h, h) - np.einsum("ail,ajk->ijkl", h, h)
    )


def local_geometry(
    patch: ImmersionPatch,
    u: np.ndarray,
    pivot: Optional[Sequence[int]] = None,
    seeds: Optional[Sequence[int]] = None,
    j_adapted: bool = False,
) -> LocalGeometry:
    u = patch.domain.wrap(u)
    jet = jet_at(patch, u)
    if j_adapted:
        frame = j_adapted_frame_at(patch, u, seeds=seeds, jet=jet)
    else:
        frame = adapted_frame_at(patch, u, pivot=pivot, seeds=seeds, jet=jet)
    sff = second_fundamental_form(patch, u, frame, jet=jet)
    return LocalGeometry(u=u, jet=jet, frame=frame, sff=sff, relcurv=relative_curvature(sff))


def frame_curvature_of(patch: ImmersionPatch, geometry: LocalGeometry) -> np.ndarray:
    """Ambient R_ABCD in the adapted frame (tangent indices first)."""
    return patch.ambient.frame_curvature(geometry.jet.value, geometry.frame.vectors)
