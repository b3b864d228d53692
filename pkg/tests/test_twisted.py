from __future__ import annotations

import numpy as np
import pytest

from spinlab.spin import SpinAlgebraElement
from spinlab.twisted import (DimensionCapError, TwistedSpinor, TwistSignature, global_definition_case,
                             grassmannian_parity, joint_action, kappa_r_m, mu_r_a, tables,
                             twist_form_operator)


def test_signature_validation(monkeypatch):
    sig = TwistSignature(5, 3, 2)
    assert (sig.kn, sig.kr, sig.nqubits, sig.dim) == (2, 1, 4, 16)
    for bad in [(0, 3, 1), (3, 1, 1), (3, 3, 0)]:
        with pytest.raises(ValueError):
            TwistSignature(*bad)
    monkeypatch.setenv("SPINLAB_DIM_CAP", "8")
    with pytest.raises(DimensionCapError):
        TwistSignature(5, 3, 2)


@pytest.mark.parametrize("sig", [TwistSignature(3, 2, 2), TwistSignature(4, 3, 2), TwistSignature(2, 5, 1)])
def test_base_and_twist_generators(sig):
    tab = tables(sig)
    base = [g.to_dense() for g in tab.base]
    eye = np.eye(sig.dim)
    for a in range(sig.m):
        tw = [f.to_dense() for f in tab.twist[a]]
        for i, f in enumerate(tw):
            for j, h in enumerate(tw):
                target = -2 * eye if i == j else 0 * eye
                np.testing.assert_allclose(f @ h + h @ f, target, atol=0)
            for e in base:
                np.testing.assert_allclose(e @ f - f @ e, 0, atol=0)


def test_kappa_rm_is_sum_over_factors():
    sig = TwistSignature(3, 4, 3)
    rng = np.random.default_rng(0)
    xi = SpinAlgebraElement(4, rng.normal(size=6))
    phi = TwistedSpinor.random(sig, rng)
    total = kappa_r_m(sig, xi, phi).coords
    beta = {(k + 1, l + 1): xi.as_matrix()[k, l] for k in range(4) for l in range(k + 1, 4)}
    parts = sum(mu_r_a(sig, a, beta, phi).coords for a in range(1, 4))
    np.testing.assert_allclose(total, parts, atol=1e-12)
    with pytest.raises(ValueError):
        mu_r_a(sig, 4, beta, phi)


def test_twist_form_degrees():
    sig = TwistSignature(2, 3, 2)
    op = twist_form_operator(sig, {(): 2.0})
    np.testing.assert_allclose(op.to_dense(), 2 * np.eye(sig.dim))
    with pytest.raises(ValueError):
        twist_form_operator(sig, {(1,): 1.0})
    sig1 = TwistSignature(2, 3, 1)
    f1 = tables(sig1).twist[0][0].to_dense()
    np.testing.assert_allclose(twist_form_operator(sig1, {(1,): 1.0}).to_dense(), f1)


def test_joint_action_factorizes():
    sig = TwistSignature(3, 3, 1)
    rng = np.random.default_rng(1)
    phi = TwistedSpinor.random(sig, rng)
    tab = tables(sig)
    got = joint_action(sig, {(1, 2): 1.0}, {(2, 3): 1.0}, phi).coords
    B = (tab.base[0] @ tab.base[1]).to_dense()
    K = tab.kappa_rm(np.array([[0, 0, 0], [0, 0, 1.0], [0, -1.0, 0]])).to_dense()
    np.testing.assert_allclose(got, K @ B @ phi.coords, atol=1e-12)
    np.testing.assert_allclose(K @ B, B @ K, atol=1e-12)


def test_product_spinor_and_json():
    sig = TwistSignature(2, 2, 2)
    base, f = np.array([1.0, 2j]), np.array([0.5, -1.0])
    phi = TwistedSpinor.product(sig, base, [f, f])
    np.testing.assert_allclose(phi.coords, np.kron(base, np.kron(f, f)))
    back = TwistedSpinor.from_json(phi.to_json())
    assert back.sig == sig and np.array_equal(back.coords, phi.coords)


def test_global_definition_cases():
    assert global_definition_case(False, False, 1) == "spinr"
    assert global_definition_case(True, True, 2) == "product_spin_groups"
    assert global_definition_case(True, False, 2) == "spin_times_SOr"
    assert global_definition_case(True, False, 1) == "undefined"
    assert global_definition_case(False, True, 2) == "undefined"


def test_grassmannian_parity():
    assert grassmannian_parity(2, 3, 3, 2) == (True, 12)
    assert grassmannian_parity(2, 3, 2, 2) == (False, 10)
    with pytest.raises(ValueError):
        grassmannian_parity(0, 1, 1, 1)
