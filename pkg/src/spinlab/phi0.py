"""The so(n)-invariant spinor phi_0 in Delta_n ⊗ Delta_n (r = n, m = 1)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curvature import AlgebraicCurvature, AuxCurvature, CurvatureContext, ricci_from_parallel
from .forms import eta_forms
from .spin import pair_list
from .twisted import TwistedSpinor, TwistSignature, tables
from .clifford import index_to_eps


def coefficient(n: int, eps: tuple[int, ...]) -> complex:
    """C(n; eps) = (i if n ≡ 2,3,6,7 mod 8) * (-1)^(n//8 + #{odd positions a with eps_a = +1})."""
    k8 = n // 8
    plus_odd = sum(1 for a in range(0, len(eps), 2) if eps[a] == 1)
    sign = -1 if (k8 + plus_odd) % 2 else 1
    return sign * (1j if n % 8 in (2, 3, 6, 7) else 1)


@dataclass(frozen=True)
class Phi0:
    n: int
    spinor: TwistedSpinor = field(repr=False)
    table: dict = field(repr=False)

    @property
    def norm2(self) -> float:
        return self.spinor.norm2()


def build_phi0(n: int, *, flip: tuple[int, ...] | None = None) -> Phi0:
    """sum_eps C(n; eps) u_eps ⊗ u_{-eps}.

    ``flip`` negates the coefficient of one eps tuple; it exists for negative
    controls of the invariance check.
    """
    if n < 2:
        raise ValueError("phi_0 needs n >= 2")
    sig = TwistSignature(n, n, 1)
    k = n // 2
    d = 1 << k
    v = np.zeros(sig.dim, dtype=complex)
    table = {}
    for idx in range(d):
        eps = index_to_eps(idx, k)
        c = coefficient(n, eps)
        if flip is not None and tuple(flip) == eps:
            c = -c
        table[eps] = c
        v[idx * d + (idx ^ (d - 1))] = c
    return Phi0(n, TwistedSpinor(sig, v), table)


def h_invariance_residual(phi0: Phi0) -> float:
    """max_{p<q} ‖(e_p e_q ⊗ 1 + 1 ⊗ f_p f_q) phi_0‖."""
    sig = phi0.spinor.sig
    tab = tables(sig)
    v = phi0.spinor.coords
    res = 0.0
    for B, K in zip(tab.base_pairs, tab.twist_pairs):
        res = max(res, float(np.linalg.norm(B.apply(v) + K.apply(v))))
    return res


def expected_eta(n: int) -> np.ndarray:
    """2^{n//2} e_p∧e_q for every pair p < q, as a packet array."""
    pairs = pair_list(n)
    out = np.zeros((len(pairs), n, n))
    for p, (a, b) in enumerate(pairs):
        out[p, a, b] = 1 << (n // 2)
        out[p, b, a] = -(1 << (n // 2))
    return out


def phi0_eta_check(phi0: Phi0) -> float:
    packet = eta_forms(phi0.spinor)
    return float(np.max(np.abs(packet.eta - expected_eta(phi0.n))))


def phi0_curvature_consistency(omega: AlgebraicCurvature, phi0: Phi0 | None = None) -> tuple[float, float]:
    """(max ‖R^theta(e_i, e_j) phi_0‖ with Theta := Omega, ‖Ricci reconstruction - Ric‖)."""
    n = omega.n
    phi0 = phi0 or build_phi0(n)
    theta = AuxCurvature.from_riemann(omega, phi0.spinor.sig)
    ctx = CurvatureContext(omega, theta, phi0.spinor)
    A = ctx.frame_actions()
    action = float(np.max(np.linalg.norm(A, axis=-1), initial=0.0))
    rec = ricci_from_parallel(theta, phi0.spinor)
    ricci = float(np.max(np.abs(rec.eta_theta - omega.ricci()), initial=0.0))
    return action, ricci
