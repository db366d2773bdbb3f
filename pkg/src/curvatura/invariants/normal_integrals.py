"""Integral formulas over the unit normal sphere, evaluated exactly by moments.

M_k(ξ) = σ_k(S_ξ)/C(n, k) is a homogeneous polynomial of degree k in ξ, so
its integral over S^{m−1} reduces to monomial moments, computed from the
Wick pairing table.
"""

from collections import Counter
from functools import lru_cache
from itertools import permutations
from math import comb, factorial, pi
from typing import Sequence, Tuple

import numpy as np
from scipy.special import gamma, gammaln

from ..frames import SffTensor
from .kronecker import ordered_tuples, permutation_sign

MAX_PAIRING_DEGREE = 8


def sphere_volume(k: int) -> float:
    """C_k = 2π^{(k+1)/2} / Γ((k+1)/2), the volume of the unit k-sphere."""
    return float(2.0 * pi ** ((k + 1) / 2.0) / gamma((k + 1) / 2.0))


@lru_cache(maxsize=None)
def pairings(k: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """All perfect matchings of 0..k-1 (empty for odd k)."""
    if k % 2:
        return ()
    if k == 0:
        return ((),)
    result = []
    for partner in range(1, k):
        rest = [i for i in range(1, k) if i != partner]
        relabel = {new: old for new, old in enumerate(rest)}
        for sub in pairings(k - 2):
            result.append(((0, partner),) + tuple((relabel[a], relabel[b]) for a, b in sub))
    return tuple(result)


def sphere_monomial_moment(exponents: Sequence[int]) -> float:
    """∫_{S^{m−1}} Π ξ_i^{a_i} dξ by the Gamma closed form."""
    a = np.asarray(exponents, dtype=float)
    if np.any(np.asarray(exponents) % 2):
        return 0.0
    m = a.size
    log_value = np.sum(gammaln((a + 1.0) / 2.0)) - gammaln((a.sum() + m) / 2.0)
    return float(2.0 * np.exp(log_value))


@lru_cache(maxsize=None)
def _sorted_moment(counts: Tuple[int, ...], m: int) -> float:
    degree = sum(counts)
    if any(c % 2 for c in counts):
        return 0.0
    if degree > MAX_PAIRING_DEGREE:
        return sphere_monomial_moment(list(counts) + [0] * (m - len(counts)))
    labels = [label for label, c in enumerate(counts) for _ in range(c)]
    matched = sum(
        1 for pairing in pairings(degree) if all(labels[a] == labels[b] for a, b in pairing)
    )
    denominator = 1.0
    for j in range(degree // 2):
        denominator *= m + 2 * j
    return sphere_volume(m - 1) * matched / denominator


def sphere_moment(labels: Sequence[int], m: int) -> float:
    """∫_{S^{m−1}} ξ_{l_1} ⋯ ξ_{l_k} dξ via Wick pairings."""
    counts = tuple(sorted(Counter(labels).values(), reverse=True))
    return _sorted_moment(counts, m)


def _polarized_sigma(h: np.ndarray, k: int) -> np.ndarray:
    """P with σ_k(Σ ξ_α h^α) = Σ P[α_1..α_k] ξ_{α_1}⋯ξ_{α_k}; shape (m,)*k."""
    m, n = h.shape[0], h.shape[1]
    if k == 0:
        return np.array(1.0)
    idx = ordered_tuples(n, k)
    total = np.zeros((m,) * k)
    for perm in permutations(range(k)):
        term = h[:, idx[:, 0], idx[:, perm[0]]]
        for a in range(1, k):
            factor = h[:, idx[:, a], idx[:, perm[a]]]
            term = term[..., None, :] * factor.reshape((1,) * a + (m, -1))
        total += permutation_sign(perm) * term.sum(axis=-1)
    return total / factorial(k)


def _moment_contraction(tensor: np.ndarray, m: int, extra: int = -1) -> float:
    total = 0.0
    for labels in np.ndindex(*tensor.shape):
        coefficient = tensor[labels]
        if coefficient == 0.0:
            continue
        full = labels + ((extra,) if extra >= 0 else ())
        total += coefficient * sphere_moment(full, m)
    return total


def k2p_via_normal_integral(sff: SffTensor, p: int) -> float:
    """K_2p = (2^{2p} π^p p! / (C_{m+2p−1} (2p)!)) ∫_{S^{m−1}} M_2p(ξ) dξ."""
    n, m = sff.n, sff.m
    k = 2 * p
    polarized = _polarized_sigma(sff.h, k) / comb(n, k)
    if k == 0:
        integral = sphere_volume(m - 1)
    else:
        integral = _moment_contraction(polarized, m)
    constant = 4.0**p * pi**p * factorial(p) / (sphere_volume(m + k - 1) * factorial(k))
    return constant * integral


def h2p1_via_normal_integral(sff: SffTensor, p: int) -> np.ndarray:
    """H_2p+1 = (2^{2p} π^p p! (m+2p) / (C_{m+2p−1} (2p+1)!)) ∫ ξ M_{2p+1}(ξ) dξ."""
    n, m = sff.n, sff.m
    k = 2 * p + 1
    if p < 0 or k > n:
        return np.zeros(m)
    polarized = _polarized_sigma(sff.h, k) / comb(n, k)
    constant = (
        4.0**p * pi**p * factorial(p) * (m + 2 * p)
        / (sphere_volume(m + 2 * p - 1) * factorial(k))
    )
    return np.array([constant * _moment_contraction(polarized, m, extra=beta) for beta in range(m)])


def sigma_sphere_integral(sff: SffTensor, k: int) -> float:
    """∫_{S^{m−1}} σ_k(S_ξ) dξ, exact through the moment table."""
    if k == 0:
        return sphere_volume(sff.m - 1)
    return _moment_contraction(_polarized_sigma(sff.h, k), sff.m)
