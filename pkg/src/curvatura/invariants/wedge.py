"""Evaluation of wedge products of 2-forms and 1-forms on tangent vectors.

Convention: for 2-forms F_1..F_q and 1-forms ψ_1..ψ_r, k = 2q + r,

    (F_1 ∧ … ∧ F_q ∧ ψ_1 ∧ … ∧ ψ_r)(v_1, …, v_k)
        = 2^{-q} Σ_{σ ∈ S_k} sgn σ Π_t F_t(v_σ(2t), v_σ(2t+1)) Π_s ψ_s(v_σ(2q+s)).
"""

from itertools import permutations
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import PreconditionError
from .kronecker import permutation_sign, shuffle_table

OneForms = Union[np.ndarray, Sequence[np.ndarray]]


def _as_one_forms(one_forms: Optional[OneForms]) -> list:
    if one_forms is None:
        return []
    arr = np.asarray(one_forms, dtype=float)
    if arr.ndim == 1:
        return [arr]
    return list(arr)


def wedge_eval_vectors(
    two_forms: Sequence[np.ndarray],
    vectors: np.ndarray,
    one_forms: Optional[OneForms] = None,
) -> float:
    """Literal permutation sum on arbitrary vectors given in frame coefficients."""
    singles = _as_one_forms(one_forms)
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    k = vectors.shape[0]
    q = len(two_forms)
    if 2 * q + len(singles) != k:
        raise PreconditionError(
            f"{q} two-forms and {len(singles)} one-forms need {2 * q + len(singles)} vectors, got {k}"
        )
    pairs = [vectors @ np.asarray(f) @ vectors.T for f in two_forms]
    values = [vectors @ psi for psi in singles]
    total = 0.0
    for perm in permutations(range(k)):
        term = float(permutation_sign(perm))
        for t, pair in enumerate(pairs):
            term *= pair[perm[2 * t], perm[2 * t + 1]]
        for s, value in enumerate(values):
            term *= value[perm[2 * q + s]]
        total += term
    return total / 2**q


def wedge_eval(
    two_forms: Sequence[np.ndarray],
    indices: Sequence[int],
    one_forms: Optional[OneForms] = None,
) -> float:
    """Evaluate on the frame vectors e_{i_1}, …, e_{i_k} (reference path)."""
    indices = tuple(int(i) for i in indices)
    if len(set(indices)) != len(indices):
        raise PreconditionError(f"Wedge evaluation needs distinct indices, got {indices}")
    singles = _as_one_forms(one_forms)
    if not two_forms and not singles:
        if indices:
            raise PreconditionError(f"No forms to evaluate on indices {indices}")
        return 1.0
    n = np.asarray(two_forms[0]).shape[0] if two_forms else singles[0].shape[0]
    if indices and (min(indices) < 0 or max(indices) >= n):
        raise PreconditionError(f"Indices {indices} out of range for dimension {n}")
    return wedge_eval_vectors(two_forms, np.eye(n)[list(indices)], one_forms)


def wedge_batch(
    two_forms: Optional[np.ndarray],
    one_forms: Optional[np.ndarray],
    indices: np.ndarray,
) -> np.ndarray:
    """Vectorized wedge evaluation for a batch of index tuples.

    two_forms has shape (B, q, n, n), one_forms (B, r, n), indices (B, k)
    with k = 2q + r; tuple b is evaluated with its own forms.
    """
    indices = np.asarray(indices, dtype=np.intp)
    batch, k = indices.shape
    q = 0 if two_forms is None else two_forms.shape[1]
    r = 0 if one_forms is None else one_forms.shape[1]
    if 2 * q + r != k:
        raise PreconditionError(f"{q} two-forms and {r} one-forms cannot fill {k} slots")
    perms, signs = shuffle_table(q, r)
    slots = indices[:, perms]
    rows = np.arange(batch)[:, None]
    acc = np.tile(signs, (batch, 1))
    for t in range(q):
        acc *= two_forms[rows, t, slots[:, :, 2 * t], slots[:, :, 2 * t + 1]]
    for s in range(r):
        acc *= one_forms[rows, s, slots[:, :, 2 * q + s]]
    return acc.sum(axis=1)


def two_form_stack(omega: np.ndarray, index_rows: np.ndarray) -> Optional[np.ndarray]:
    """(B, q, n, n) stack of Ω_{i_{2t} i_{2t+1}} for each row of index pairs; None when q = 0."""
    index_rows = np.asarray(index_rows, dtype=np.intp)
    q = index_rows.shape[1] // 2
    if q == 0:
        return None
    return np.stack(
        [omega[index_rows[:, 2 * t], index_rows[:, 2 * t + 1]] for t in range(q)], axis=1
    )
