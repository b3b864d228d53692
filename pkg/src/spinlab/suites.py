"""Randomized verification suites with deterministic per-trial seeding."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import curvature as cv
from .clifford import basis_action_oracle, basis_spinor, build_rep, clifford_mul, index_to_eps
from .forms import eta_forms, eta_raw, twist_pair_vectors
from .phi0 import build_phi0, h_invariance_residual, phi0_curvature_consistency, phi0_eta_check
from .spectral import hermitian_spectral_norm
from .torus import (ConstantConnection, SymbolFactory, aux_curvature_of, bracket_residual,
                    spectrum_symmetry_defect)
from .twisted import TwistedSpinor, TwistSignature, tables

TOL_VANISHING = 1e-10
TOL_CURVATURE = 1e-9
TOL_SL = 1e-9


def trial_rng(seed: int, *labels: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the run seed and integer labels."""
    return np.random.default_rng([int(seed) & (2**64 - 1), *[int(x) for x in labels]])


@dataclass
class CheckResult:
    label: str
    residual: float
    tol: float
    inputs: dict = field(default_factory=dict)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual <= self.tol)

    def to_json(self) -> dict:
        return asdict(self)


# -- Clifford representation -------------------------------------------------

def anticommutation_defect(n: int) -> float:
    """Largest entry of kappa(e_i)kappa(e_j) + kappa(e_j)kappa(e_i) + 2 delta_ij Id."""
    G = build_rep(n).dense()
    worst = 0.0
    eye = np.eye(G[0].shape[0])
    for i in range(n):
        for j in range(i, n):
            A = G[i] @ G[j] + G[j] @ G[i] + (2.0 * eye if i == j else 0.0)
            worst = max(worst, float(np.max(np.abs(A))))
    return worst


def oracle_defect(n: int) -> float:
    """Largest mismatch between the closed-form basis action and the operator table."""
    rep = build_rep(n)
    k = rep.k
    worst = 0.0
    for idx in range(rep.dim):
        eps = index_to_eps(idx, k)
        u = basis_spinor(n, eps)
        for p in range(1, n + 1):
            coeff, flipped = basis_action_oracle(n, p, eps)
            expected = coeff * basis_spinor(n, flipped).coords
            got = clifford_mul(rep, np.eye(n)[p - 1], u).coords
            worst = max(worst, float(np.max(np.abs(got - expected))))
    return worst


def clifford_suite(ns=range(2, 13), oracle_ns=(2, 4, 6, 8, 10)) -> list[CheckResult]:
    out = [CheckResult("clifford_anticommutation", anticommutation_defect(n), 0.0, {"n": n}) for n in ns]
    out += [CheckResult("basis_action_closed_form", oracle_defect(n), 0.0, {"n": n}) for n in oracle_ns]
    return out


# -- vanishing identities ---------------------------------------------------------

def vanishing_residuals(phi: TwistedSpinor, X: np.ndarray, Y: np.ndarray) -> dict[str, float]:
    """Residuals of the four pointwise identities for one spinor and two vectors."""
    sig = phi.sig
    v = phi.coords
    tab = tables(sig)
    T = twist_pair_vectors(sig, v)
    twist_real = float(np.max(np.abs((T @ v.conj()).real)))
    Xv = sum(c * g.apply(v) for c, g in zip(X, tab.base))
    Yv = sum(c * g.apply(v) for c, g in zip(Y, tab.base))
    XYv = sum(c * g.apply(Yv) for c, g in zip(X, tab.base)) + float(X @ Y) * v  # (X∧Y) v
    wedge_real = abs(np.vdot(v, XYv).real)
    XY_T = np.stack([sum(c * g.apply(sum(d * h.apply(t) for d, h in zip(Y, tab.base)))
                         for c, g in zip(X, tab.base)) + float(X @ Y) * t for t in T])
    wedge_twist_imag = float(np.max(np.abs((XY_T @ v.conj()).imag)))
    eta_imag = float(np.max(np.abs(eta_raw(sig, v).imag), initial=0.0))
    real_part = abs(np.vdot(Yv, Xv).real - float(X @ Y) * phi.norm2())
    scale = max(1.0, phi.norm2())
    return {
        "twist_action_real_part": twist_real / scale,
        "wedge_action_real_part": wedge_real / scale,
        "wedge_twist_imaginary_part": max(wedge_twist_imag, eta_imag) / scale,
        "clifford_real_part": real_part / scale,
    }


def vanishing_suite(n: int, r: int, m: int, trials: int, seed: int) -> dict[str, float]:
    sig = TwistSignature(n, r, m)
    worst: dict[str, float] = {}
    for t in range(trials):
        rng = trial_rng(seed, n, r, m, t)
        phi = TwistedSpinor.random(sig, rng)
        phi = TwistedSpinor(sig, phi.coords / np.sqrt(phi.norm2()))
        X, Y = rng.normal(size=n), rng.normal(size=n)
        for key, val in vanishing_residuals(phi, X, Y).items():
            worst[key] = max(worst.get(key, 0.0), val)
    return worst


# -- curvature identities ----------------------------------------------------

def curvature_suite(n: int, r: int, m: int, trials: int, seed: int) -> dict[str, float]:
    """Worst relative residuals of the Ricci and scalar identities plus the non-Bianchi control."""
    sig = TwistSignature(n, r, m)
    ricci = scalar = 0.0
    control_hits = 0
    for t in range(trials):
        rng = trial_rng(seed, n, r, m, t, 1)
        omega = cv.random_curvature(n, rng)
        theta = cv.AuxCurvature.random(sig, rng)
        phi = TwistedSpinor.random(sig, rng)
        phi = TwistedSpinor(sig, phi.coords / np.sqrt(phi.norm2()))
        X = rng.normal(size=n)
        ctx = cv.CurvatureContext(omega, theta, phi)
        lhs, rhs = cv.ricci_identity_vectors(ctx, X)
        ricci = max(ricci, float(np.linalg.norm(lhs - rhs)))
        lhs, rhs = cv.scalar_identity_vectors(ctx)
        scalar = max(scalar, float(np.linalg.norm(lhs - rhs)))
        raw = cv.random_curvature(n, rng, project=False)
        ctx_bad = cv.CurvatureContext(raw, theta, phi)
        lhs, rhs = cv.ricci_identity_vectors(ctx_bad, X)
        if np.linalg.norm(lhs - rhs) > 1e-3:
            control_hits += 1
    return {"ricci_contraction_identity": ricci, "scalar_contraction_identity": scalar,
            "non_bianchi_control_fraction": control_hits / trials}


# -- phi_0 -------------------------------------------------------------------

def phi0_suite(n: int, seed: int = 0) -> dict[str, float]:
    p = build_phi0(n)
    out = {"h_invariance": h_invariance_residual(p), "eta_packet": phi0_eta_check(p),
           "norm2_defect": abs(p.norm2 - 2 ** (n // 2))}
    omega = cv.random_curvature(n, trial_rng(seed, n, 0))
    out["curvature_action"], out["ricci_reconstruction"] = phi0_curvature_consistency(omega, p)
    return out


# -- torus -------------------------------------------------------------------

def torus_suite(n: int, r: int, m: int, trials: int, seed: int, mode_radius: int = 3) -> dict[str, float]:
    sig = TwistSignature(n, r, m)
    worst_sl = worst_bracket = 0.0
    abelian_sl = abelian_theta = 0.0
    for t in range(trials):
        rng = trial_rng(seed, n, r, m, t, 2)
        conn = ConstantConnection.random(sig, rng)
        xi = rng.integers(-mode_radius, mode_radius + 1, size=n)
        f = SymbolFactory(conn)
        tt = cv.theta_tilde_dense(aux_curvature_of(conn))
        D = f.dirac(xi)
        worst_sl = max(worst_sl, float(np.linalg.norm(D @ D - f.laplacian(xi) - 0.5 * tt)))
        if t == 0:
            worst_bracket = bracket_residual(conn)
            ab = ConstantConnection.abelian(sig, rng)
            fa = SymbolFactory(ab)
            Da = fa.dirac(xi)
            abelian_theta = float(np.max(np.abs(aux_curvature_of(ab).theta), initial=0.0))
            abelian_sl = float(np.linalg.norm(Da @ Da - fa.laplacian(xi)))
    return {"sl_formula": worst_sl, "bracket_compatibility": worst_bracket,
            "abelian_theta": abelian_theta, "abelian_sl": abelian_sl}


def spectrum_symmetry_suite(n: int, r: int, m: int, trials: int, seed: int) -> float:
    sig = TwistSignature(n, r, m)
    worst = 0.0
    for t in range(trials):
        rng = trial_rng(seed, n, r, m, t, 3)
        conn = ConstantConnection.random(sig, rng)
        worst = max(worst, spectrum_symmetry_defect(conn, rng.integers(-3, 4, size=n)))
    return worst


# -- norm inequality ---------------------------------------------------------

def norm_suite(n: int, r: int, m: int, trials: int, seed: int) -> dict[str, float]:
    """Worst excess of |Theta~^m| over m|Theta~^1| and the pairing residuals."""
    sig = TwistSignature(n, r, m)
    excess = -np.inf
    imag = pair = 0.0
    for t in range(trials):
        rng = trial_rng(seed, n, r, m, t, 4)
        theta = cv.AuxCurvature.random(sig, rng)
        tt = cv.theta_tilde_dense(theta)
        nm = hermitian_spectral_norm(tt)
        n1 = hermitian_spectral_norm(cv.theta_tilde_dense(theta.with_m(1)))
        excess = max(excess, nm - m * n1)
        phi = TwistedSpinor.random(sig, rng)
        phi = TwistedSpinor(sig, phi.coords / np.sqrt(phi.norm2()))
        val = np.vdot(phi.coords, tt @ phi.coords)
        p0, _ = cv.pairings(theta, eta_forms(phi))
        imag = max(imag, abs(val.imag))
        pair = max(pair, abs(val.real - p0))
    return {"norm_excess": float(excess), "pairing_imaginary": imag, "pairing_value": pair}
