from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinlab.forms import (TwoFormPacket, em_tensor, eta_direct, eta_forms, eta_imaginary_max,
                           eta_map, eta_map_hat, hat, killing_vector_components, nu_form,
                           pack_antisymmetric, twisted_dirac_at_point)
from spinlab.spin import pair_list
from spinlab.twisted import TwistedSpinor, TwistSignature, tables

sigs = st.builds(TwistSignature, st.integers(2, 6), st.integers(2, 4), st.integers(1, 2))


def _oracle_eta(phi):
    """Dense Re<(e_i e_j) kappa(f_k f_l) phi, phi>."""
    sig = phi.sig
    tab = tables(sig)
    v = phi.coords
    out = []
    for K in tab.twist_pairs:
        Kd = K.to_dense()
        E = np.zeros((sig.n, sig.n))
        for i in range(sig.n):
            for j in range(sig.n):
                if i != j:
                    M = tab.base[i].to_dense() @ tab.base[j].to_dense() @ Kd
                    E[i, j] = np.vdot(v, M @ v).real
        out.append(E)
    return np.array(out)


@settings(max_examples=25, deadline=None)
@given(sig=sigs, seed=st.integers(0, 2**32 - 1))
def test_eta_packet_against_dense_oracle(sig, seed):
    phi = TwistedSpinor.random(sig, np.random.default_rng(seed))
    packet = eta_forms(phi)
    np.testing.assert_allclose(packet.eta, _oracle_eta(phi), atol=1e-10)
    assert eta_imaginary_max(phi) < 1e-10


def test_eta_map_linear_and_direct():
    sig = TwistSignature(4, 3, 2)
    rng = np.random.default_rng(5)
    phi = TwistedSpinor.random(sig, rng)
    A = rng.normal(size=(3, 3))
    A = A - A.T
    np.testing.assert_allclose(eta_map(phi, A), eta_direct(phi, A), atol=1e-10)
    np.testing.assert_allclose(eta_map_hat(phi, A), eta_map(phi, A).T, atol=0)


def test_packet_accessors():
    sig = TwistSignature(3, 3, 1)
    phi = TwistedSpinor.random(sig, np.random.default_rng(2))
    packet = eta_forms(phi)
    assert isinstance(packet, TwoFormPacket)
    k, l = pair_list(3)[1]
    np.testing.assert_array_equal(packet.matrix(k, l), packet.eta[1])
    np.testing.assert_array_equal(packet.matrix(l, k), -packet.eta[1])
    np.testing.assert_array_equal(packet.hats(), np.swapaxes(packet.eta, -1, -2))


def test_pack_and_hat():
    A = pack_antisymmetric(np.array([1.0, 2.0, 3.0]), 3)
    np.testing.assert_array_equal(A, [[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])
    np.testing.assert_array_equal(hat(A), A.T)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_nu_is_a_three_form_and_killing_components_imaginary(n):
    sig = TwistSignature(n, 2, 1)
    phi = TwistedSpinor.random(sig, np.random.default_rng(n))
    assert nu_form(phi).antisymmetry_defect() < 1e-12
    raw, imag = killing_vector_components(phi)
    assert np.max(np.abs(raw.real)) < 1e-12
    np.testing.assert_array_equal(imag, raw.imag)


def test_em_tensor_of_killing_data():
    # nabla_j phi = mu e_j phi gives Q = -mu Id and D phi = -n mu phi
    sig = TwistSignature(4, 3, 1)
    rng = np.random.default_rng(9)
    phi = TwistedSpinor.random(sig, rng)
    mu = 0.37
    derivs = [mu * g.apply(phi.coords) for g in tables(sig).base]
    em = em_tensor(phi, derivs)
    np.testing.assert_allclose(em.Q, -mu * np.eye(4), atol=1e-12)
    assert em.trace == pytest.approx(-4 * mu)
    np.testing.assert_allclose(twisted_dirac_at_point(phi, derivs), -4 * mu * phi.coords, atol=1e-12)
    with pytest.raises(ValueError):
        em_tensor(phi, derivs[:2])
