from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinlab.clifford import (Spinor, U_STANDARD, basis_action_oracle, basis_spinor, build_rep,
                              clifford_mul, eps_to_index, form_action, gamma_structure, hermitian,
                              index_to_eps, two_form_dict)


@pytest.mark.parametrize("n", range(1, 13))
def test_anticommutation_is_exact(n):
    G = build_rep(n).dense()
    eye = np.eye(G[0].shape[0])
    for i in range(n):
        for j in range(n):
            target = -2 * eye if i == j else 0 * eye
            assert np.array_equal(G[i] @ G[j] + G[j] @ G[i], target)


@pytest.mark.parametrize("n", range(1, 11))
def test_generators_are_skew_hermitian(n):
    for g in build_rep(n).dense():
        np.testing.assert_allclose(g.conj().T, -g, atol=0)


def test_n2_standard_basis_matrices():
    g1, g2 = build_rep(2).standard_dense()
    np.testing.assert_allclose(g1, np.diag([1j, -1j]), atol=1e-15)
    np.testing.assert_allclose(g2, np.array([[0, 1j], [1j, 0]]), atol=1e-15)
    np.testing.assert_allclose(U_STANDARD.conj().T @ U_STANDARD, np.eye(2), atol=1e-15)


def test_odd_extra_generator_in_standard_basis():
    g = build_rep(3).standard_dense()[2]
    np.testing.assert_allclose(g, np.array([[0, 1], [-1, 0]]), atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_closed_form_basis_action_matches_table(n):
    rep = build_rep(n)
    for idx in range(rep.dim):
        eps = index_to_eps(idx, n // 2)
        assert eps_to_index(eps) == idx
        for p in range(1, n + 1):
            c, flipped = basis_action_oracle(n, p, eps)
            got = clifford_mul(rep, np.eye(n)[p - 1], basis_spinor(n, eps)).coords
            assert np.array_equal(got, c * basis_spinor(n, flipped).coords)


def test_oracle_rejects_odd_dimension():
    with pytest.raises(ValueError):
        basis_action_oracle(3, 1, (1,))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 9), seed=st.integers(0, 2**32 - 1))
def test_clifford_multiplication_properties(n, seed):
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    x = rng.normal(size=n)
    phi = Spinor(n, rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim))
    psi = Spinor(n, rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim))
    xx = clifford_mul(rep, x, clifford_mul(rep, x, phi))
    np.testing.assert_allclose(xx.coords, -(x @ x) * phi.coords, atol=1e-10)
    lhs = hermitian(clifford_mul(rep, x, phi).coords, psi.coords)
    rhs = -hermitian(phi.coords, clifford_mul(rep, x, psi).coords)
    assert abs(lhs - rhs) < 1e-10


def test_hermitian_product_is_linear_in_first_slot():
    a, b = np.array([1.0, 1j]), np.array([2.0, 0])
    assert hermitian(1j * a, b) == pytest.approx(1j * hermitian(a, b))
    assert hermitian(a, 1j * b) == pytest.approx(-1j * hermitian(a, b))


def test_two_form_action_is_sum_of_words():
    rng = np.random.default_rng(4)
    n = 5
    rep = build_rep(n)
    A = rng.normal(size=(n, n))
    A = A - A.T
    G = rep.dense()
    expected = sum(A[i, j] * G[i] @ G[j] for i in range(n) for j in range(i + 1, n))
    np.testing.assert_allclose(form_action(rep, two_form_dict(A)).to_dense(), expected, atol=1e-12)


def test_form_index_validation():
    rep = build_rep(4)
    with pytest.raises(ValueError):
        form_action(rep, {(2, 1): 1.0})
    with pytest.raises(ValueError):
        form_action(rep, {(1, 5): 1.0})


def test_gamma_examples():
    g2 = gamma_structure(2)
    assert g2.factor_pattern == ("alpha",) and g2.kind == "quaternionic"
    u_plus = basis_spinor(2, (1,))
    np.testing.assert_allclose(g2(u_plus).coords, -1j * basis_spinor(2, (-1,)).coords, atol=1e-15)
    assert gamma_structure(8).factor_pattern == ("alpha", "beta", "alpha", "beta")
    assert gamma_structure(8).kind == "real"


@pytest.mark.parametrize("n", range(2, 13))
def test_gamma_square_and_compatibility(n):
    rng = np.random.default_rng(n)
    rep = build_rep(n)
    g = gamma_structure(n)
    v = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
    sign = 1 if n % 8 in (0, 1, 6, 7) else -1
    np.testing.assert_allclose(g.apply(g.apply(v)), sign * v, atol=1e-13)
    # antilinear
    np.testing.assert_allclose(g.apply(1j * v), -1j * g.apply(v), atol=1e-13)
    # commutes with Clifford multiplication for odd n//2, anticommutes for even n//2
    s = 1 if (n // 2) % 2 else -1
    for G in rep.generators:
        np.testing.assert_allclose(g.apply(G.apply(v)), s * G.apply(g.apply(v)), atol=1e-12)


def test_spinor_json_roundtrip():
    phi = Spinor(3, np.array([1 + 2j, -0.5j]))
    back = Spinor.from_json(phi.to_json())
    assert back.n == 3 and np.array_equal(back.coords, phi.coords)


def test_build_rep_rejects_zero():
    with pytest.raises(ValueError):
        build_rep(0)
