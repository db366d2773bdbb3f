"""Generalized Kronecker symbols and the cached index tables built on them."""

from functools import lru_cache
from itertools import permutations
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of 0..k-1, by cycle decomposition."""
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def kronecker_symbol(upper: Sequence[int], lower: Sequence[int]) -> int:
    """δ^{upper}_{lower}: sign of the rearrangement when both are distinct and share a set, else 0."""
    upper, lower = tuple(upper), tuple(lower)
    if len(upper) != len(lower):
        return 0
    if len(set(upper)) != len(upper) or set(upper) != set(lower):
        return 0
    position = {index: slot for slot, index in enumerate(upper)}
    return permutation_sign([position[index] for index in lower])


class KroneckerSymbol(BaseModel):
    upper: Tuple[int, ...]
    lower: Tuple[int, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _same_length(self) -> "KroneckerSymbol":
        if len(self.upper) != len(self.lower):
            raise ValueError("upper and lower index tuples must have equal length")
        return self

    @property
    def value(self) -> int:
        return kronecker_symbol(self.upper, self.lower)


@lru_cache(maxsize=None)
def ordered_tuples(n: int, k: int) -> np.ndarray:
    """All ordered k-tuples of distinct indices from 0..n-1, shape (count, k)."""
    rows = list(permutations(range(n), k))
    table = np.array(rows, dtype=np.intp).reshape(len(rows), k)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def shuffle_table(two_forms: int, one_forms: int) -> Tuple[np.ndarray, np.ndarray]:
    """Permutations with increasing 2-form slot pairs, and their signs.

    Restricting to σ(2t) < σ(2t+1) collapses the 2^q equal terms of the full
    permutation sum, so summing over this table equals the 1/2^q-normalized sum.
    """
    k = 2 * two_forms + one_forms
    rows = [
        perm
        for perm in permutations(range(k))
        if all(perm[2 * t] < perm[2 * t + 1] for t in range(two_forms))
    ]
    perms = np.array(rows, dtype=np.intp).reshape(len(rows), k)
    signs = np.array([permutation_sign(p) for p in rows], dtype=float)
    perms.setflags(write=False)
    signs.setflags(write=False)
    return perms, signs
