"""Tests for Kronecker symbols and wedge evaluation."""

import numpy as np
import pytest
from pydantic import ValidationError

from curvatura.errors import PreconditionError
from curvatura.invariants import (
    KroneckerSymbol,
    kronecker_symbol,
    ordered_tuples,
    permutation_sign,
    shuffle_table,
    two_form_stack,
    wedge_batch,
    wedge_eval,
    wedge_eval_vectors,
)


def antisymmetric(rng, n):
    a = rng.normal(size=(n, n))
    return a - a.T


@pytest.mark.parametrize(
    "perm, sign",
    [((0, 1, 2), 1), ((1, 0, 2), -1), ((1, 2, 0), 1), ((3, 2, 1, 0), 1), ((0, 2, 1, 3), -1)],
)
def test_permutation_sign(perm, sign):
    assert permutation_sign(perm) == sign


def test_kronecker_symbol():
    assert kronecker_symbol((0, 1, 2), (0, 1, 2)) == 1
    assert kronecker_symbol((0, 1, 2), (1, 0, 2)) == -1
    assert kronecker_symbol((4, 7), (7, 4)) == -1
    assert kronecker_symbol((0, 1), (0, 2)) == 0
    assert kronecker_symbol((0, 0), (0, 0)) == 0
    assert kronecker_symbol((0, 1), (0, 1, 2)) == 0


def test_kronecker_model():
    assert KroneckerSymbol(upper=(2, 5, 9), lower=(5, 2, 9)).value == -1
    with pytest.raises(ValidationError, match="equal length"):
        KroneckerSymbol(upper=(0, 1), lower=(0,))


def test_ordered_tuples():
    table = ordered_tuples(4, 2)
    assert table.shape == (12, 2)
    assert all(row[0] != row[1] for row in table)
    assert ordered_tuples(3, 0).shape == (1, 0)


def test_shuffle_table_keeps_increasing_pairs():
    perms, signs = shuffle_table(1, 1)
    assert perms.shape == (3, 3)
    assert all(row[0] < row[1] for row in perms)
    assert sorted(signs.tolist()) == [-1, 1, 1]


def test_single_two_form_evaluates_to_itself():
    rng = np.random.default_rng(0)
    form = antisymmetric(rng, 3)
    assert wedge_eval([form], (0, 2)) == pytest.approx(form[0, 2])
    v, w = rng.normal(size=(2, 3))
    assert wedge_eval_vectors([form], np.stack([v, w])) == pytest.approx(v @ form @ w)


def test_one_forms_give_a_determinant():
    rng = np.random.default_rng(1)
    psi = rng.normal(size=(3, 3))
    vectors = rng.normal(size=(3, 3))
    expected = np.linalg.det(vectors @ psi.T)
    assert wedge_eval_vectors([], vectors, one_forms=psi) == pytest.approx(expected)


def test_empty_product_is_one():
    assert wedge_eval([], ()) == 1.0


def test_wedge_needs_distinct_indices():
    form = np.zeros((3, 3))
    with pytest.raises(PreconditionError, match="distinct indices"):
        wedge_eval([form], (1, 1))
    with pytest.raises(PreconditionError, match="out of range"):
        wedge_eval([form], (0, 3))
    with pytest.raises(PreconditionError, match="need 3 vectors"):
        wedge_eval_vectors([form], np.eye(3)[:2], one_forms=np.ones(3))


def test_batch_matches_literal_sum():
    rng = np.random.default_rng(2)
    n = 5
    omega = np.stack([[antisymmetric(rng, n) for _ in range(n)] for _ in range(n)])
    theta = rng.normal(size=(n, n))
    idx = ordered_tuples(n, 3)
    forms = two_form_stack(omega, idx[:, :2])
    ones = theta[idx[:, 2]][:, None, :]
    batch = wedge_batch(forms, ones, idx)
    for b in (0, 7, 31, len(idx) - 1):
        row = idx[b]
        expected = wedge_eval([omega[row[0], row[1]]], row, one_forms=theta[row[2]])
        assert batch[b] == pytest.approx(expected)


def test_batch_rejects_wrong_slot_count():
    with pytest.raises(PreconditionError, match="cannot fill"):
        wedge_batch(None, np.zeros((1, 1, 3)), np.array([[0, 1]]))
