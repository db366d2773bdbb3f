"""Higher-order relative mean curvatures K_2p and H_2p+1 and their intrinsic versions."""

import logging
from itertools import permutations
from math import comb, factorial
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import PreconditionError
from ..frames import RelCurvTensor, SffTensor
from .kronecker import ordered_tuples
from .wedge import two_form_stack, wedge_batch, wedge_eval

logger = logging.getLogger(__name__)


class InvariantSample(BaseModel):
    """Per-point invariants keyed by p."""

    k: Dict[int, float] = Field(default_factory=dict)
    h: Dict[int, np.ndarray] = Field(default_factory=dict)
    k_intrinsic: Dict[int, float] = Field(default_factory=dict)
    h_intrinsic: Dict[int, np.ndarray] = Field(default_factory=dict)

    model_config = ConfigDict(arbitrary_types_allowed=True)


def _check_order(n: int, p: int) -> None:
    if p < 0 or 2 * p > n:
        raise PreconditionError(f"Order 2p = {2 * p} is outside [0, n = {n}]")


def k2p_at(relcurv: RelCurvTensor, p: int) -> float:
    """K_2p = ((n−2p)!/n!) Σ over ordered distinct 2p-tuples of (Ω ∧ … ∧ Ω)(e_I)."""
    n = relcurv.n
    _check_order(n, p)
    if p == 0:
        return 1.0
    idx = ordered_tuples(n, 2 * p)
    values = wedge_batch(two_form_stack(relcurv.omega, idx), None, idx)
    return float(np.sum(values)) * factorial(n - 2 * p) / factorial(n)


def h2p1_at(relcurv: RelCurvTensor, sff: SffTensor, p: int) -> np.ndarray:
    """Normal-frame coefficients of H_2p+1; zero whenever 2p+1 is outside [1, n]."""
    n, m = sff.n, sff.m
    if p < 0 or 2 * p + 1 > n:
        return np.zeros(m)
    idx = ordered_tuples(n, 2 * p + 1)
    forms = two_form_stack(relcurv.omega, idx[:, : 2 * p])
    out = np.empty(m)
    for alpha in range(m):
        theta = sff.h[alpha][idx[:, 2 * p]][:, None, :]
        out[alpha] = np.sum(wedge_batch(forms, theta, idx))
    return out * factorial(n - 2 * p - 1) / factorial(n)


def k2p_reference(relcurv: RelCurvTensor, p: int) -> float:
    n = relcurv.n
    _check_order(n, p)
    if p == 0:
        return 1.0
    omega = relcurv.omega
    total = 0.0
    for tup in permutations(range(n), 2 * p):
        total += wedge_eval([omega[tup[2 * t], tup[2 * t + 1]] for t in range(p)], tup)
    return total * factorial(n - 2 * p) / factorial(n)


def h2p1_reference(relcurv: RelCurvTensor, sff: SffTensor, p: int) -> np.ndarray:
    n, m = sff.n, sff.m
    if p < 0 or 2 * p + 1 > n:
        return np.zeros(m)
    omega = relcurv.omega
    out = np.zeros(m)
    for tup in permutations(range(n), 2 * p + 1):
        forms = [omega[tup[2 * t], tup[2 * t + 1]] for t in range(p)]
        for alpha in range(m):
            out[alpha] += wedge_eval(forms, tup, one_forms=sff.h[alpha][tup[-1]])
    return out * factorial(n - 2 * p - 1) / factorial(n)


def intrinsic_invariants(
    relcurv: RelCurvTensor,
    sff: SffTensor,
    tangent_curvature: np.ndarray,
    p: int,
) -> Tuple[float, np.ndarray]:
    """(K^M_2p, H^M_2p+1) from Ω^M = Ω + R restricted to the tangent frame."""
    n = relcurv.n
    intrinsic = RelCurvTensor(omega=relcurv.omega + np.asarray(tangent_curvature)[:n, :n, :n, :n])
    return k2p_at(intrinsic, p), h2p1_at(intrinsic, sff, p)


def intrinsic_from_relative(
    relcurv: RelCurvTensor,
    sff: SffTensor,
    c: float,
    p: int,
) -> Tuple[float, np.ndarray]:
    """Space-form prediction Σ_k c^{p−k} C(p,k) (K_2k, H_2k+1)."""
    _check_order(relcurv.n, p)
    k_total = sum(c ** (p - k) * comb(p, k) * k2p_at(relcurv, k) for k in range(p + 1))
    h_total = sum(c ** (p - k) * comb(p, k) * h2p1_at(relcurv, sff, k) for k in range(p + 1))
    return float(k_total), np.asarray(h_total, dtype=float)


def elementary_symmetric(matrix: np.ndarray, k: int) -> float:
    """k-th elementary symmetric function of the eigenvalues (Faddeev–LeVerrier)."""
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if k < 0 or k > n:
        raise PreconditionError(f"Order k = {k} is outside [0, {n}]")
    if k == 0:
        return 1.0
    coefficients = [1.0]
    power = np.zeros_like(a)
    identity = np.eye(n)
    for step in range(1, k + 1):
        power = a @ power + coefficients[-1] * identity
        coefficients.append(-float(np.trace(a @ power)) / step)
    return (-1) ** k * coefficients[k]


def normalized_symmetric(matrix: np.ndarray, k: int) -> float:
    """M_k = σ_k / C(n, k)."""
    n = np.asarray(matrix).shape[0]
    return elementary_symmetric(matrix, k) / comb(n, k)


def invariant_sample(
    relcurv: RelCurvTensor,
    sff: SffTensor,
    p_values,
    tangent_curvature: Optional[np.ndarray] = None,
) -> InvariantSample:
    sample = InvariantSample()
    for p in p_values:
        sample.k[p] = k2p_at(relcurv, p)
        sample.h[p] = h2p1_at(relcurv, sff, p)
        if tangent_curvature is not None:
            sample.k_intrinsic[p], sample.h_intrinsic[p] = intrinsic_invariants(
                relcurv, sff, tangent_curvature, p
            )
    return sample
