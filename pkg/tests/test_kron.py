from __future__ import annotations

from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinlab.kron import KroneckerOperator, OperatorSum, as_sum

PAULI = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]


def _dense(q, factors, coeff=1.0):
    mats = [factors.get(a, np.eye(2)) for a in range(q)]
    return coeff * reduce(np.kron, mats, np.eye(1))


@settings(max_examples=60, deadline=None)
@given(q=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_monomial_path_matches_factorwise(q, seed):
    rng = np.random.default_rng(seed)
    factors = {}
    for ax in range(q):
        if rng.random() < 0.7:
            M = PAULI[rng.integers(4)] * np.exp(1j * rng.uniform(0, 2 * np.pi))
            factors[ax] = M
    op = KroneckerOperator(q, factors, coeff=rng.normal() + 1j * rng.normal())
    v = rng.normal(size=(3, 1 << q)) + 1j * rng.normal(size=(3, 1 << q))
    assert op._monomial()
    np.testing.assert_allclose(op.apply(v), op.apply_factorwise(v), atol=1e-12)
    np.testing.assert_allclose(op.apply(v[0]), _dense(q, factors, op.coeff) @ v[0], atol=1e-12)


def test_general_factors_use_reference_path():
    rng = np.random.default_rng(1)
    factors = {0: rng.normal(size=(2, 2)), 2: rng.normal(size=(2, 2)) + 1j}
    op = KroneckerOperator(3, factors, 0.5)
    assert op._monomial() is False
    v = rng.normal(size=8) + 0j
    np.testing.assert_allclose(op.apply(v), _dense(3, factors, 0.5) @ v, atol=1e-12)


def test_product_adjoint_and_embed():
    rng = np.random.default_rng(2)
    A = KroneckerOperator(3, {0: rng.normal(size=(2, 2)), 1: PAULI[2]}, 2j)
    B = KroneckerOperator(3, {1: PAULI[1], 2: rng.normal(size=(2, 2))}, -1.0)
    np.testing.assert_allclose((A @ B).to_dense(), A.to_dense() @ B.to_dense(), atol=1e-12)
    np.testing.assert_allclose(A.adjoint().to_dense(), A.to_dense().conj().T, atol=1e-12)
    E = A.embed(5, 1)
    np.testing.assert_allclose(E.to_dense(), np.kron(np.kron(np.eye(2), A.to_dense()), np.eye(2)))
    with pytest.raises(ValueError):
        A.embed(3, 1)


def test_operator_sum_algebra():
    rng = np.random.default_rng(3)
    A = KroneckerOperator(2, {0: PAULI[1]}, 1.5)
    B = KroneckerOperator(2, {1: PAULI[3]}, -0.5j)
    S = A + B
    T = S @ A - 2 * B
    dense = (A.to_dense() + B.to_dense()) @ A.to_dense() - 2 * B.to_dense()
    np.testing.assert_allclose(T.to_dense(), dense, atol=1e-12)
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    np.testing.assert_allclose(T.apply(v), dense @ v, atol=1e-12)
    np.testing.assert_allclose(S.adjoint().to_dense(), S.to_dense().conj().T, atol=1e-12)
    assert OperatorSum.zero(2).to_dense().any() == False  # noqa: E712
    assert isinstance(as_sum(A), OperatorSum)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        KroneckerOperator(2, {2: np.eye(2)})
    with pytest.raises(ValueError):
        KroneckerOperator(2, {0: np.eye(3)})
    with pytest.raises(ValueError):
        KroneckerOperator(2).apply(np.ones(3))
