"""Fiberwise curvature data and the Ricci / scalar curvature identities.

Conventions.  ``AlgebraicCurvature.op`` is the curvature operator on Λ² in the
lexicographic (i<j) basis.  The Riemann array used internally is

    Rm[a, b, i, j] = Omega_ij(e_a, e_b) = -op[(a,b), (i,j)],

so op = Id has Ric = (n-1) Id and scalar curvature n(n-1).  Antisymmetric
matrices A stand for the 2-form sum_{i<j} A_ij e_i∧e_j, and hat(A) is the
matrix of X -> (X ⌟ A)^♯.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forms import (TwoFormPacket, base_pair_vectors, eta_forms, hat, nu_form,
                    pack_antisymmetric, twist_pair_vectors)
from .clifford import build_rep
from .kron import KroneckerOperator, OperatorSum
from .spectral import hermitian_spectral_norm
from .spin import pair_list
from .twisted import TwistedSpinor, TwistSignature, tables


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def op_to_riemann(op: np.ndarray, n: int) -> np.ndarray:
    pairs = pair_list(n)
    Rm = np.zeros((n, n, n, n))
    for p, (a, b) in enumerate(pairs):
        for q, (i, j) in enumerate(pairs):
            v = -op[p, q]
            Rm[a, b, i, j] = v
            Rm[b, a, i, j] = -v
            Rm[a, b, j, i] = -v
            Rm[b, a, j, i] = v
    return Rm


def riemann_to_op(Rm: np.ndarray) -> np.ndarray:
    n = Rm.shape[0]
    pairs = pair_list(n)
    idx = np.array(pairs).reshape(-1, 2) if pairs else np.zeros((0, 2), int)
    return -Rm[idx[:, 0][:, None], idx[:, 1][:, None], idx[:, 0][None, :], idx[:, 1][None, :]]


def bianchi_part(Rm: np.ndarray) -> np.ndarray:
    """Cyclic sum over the last three slots, divided by 3 (the Λ⁴ component)."""
    return (Rm + Rm.transpose(0, 2, 3, 1) + Rm.transpose(0, 3, 1, 2)) / 3.0


@dataclass(frozen=True)
class AlgebraicCurvature:
    n: int
    op: np.ndarray = field(repr=False)

    def __post_init__(self):
        N = self.n * (self.n - 1) // 2
        op = _frozen(self.op)
        if op.shape != (N, N):
            raise ValueError(f"curvature operator must be {N} x {N}")
        if np.max(np.abs(op - op.T), initial=0.0) > 0:
            raise ValueError("curvature operator must be symmetric")
        object.__setattr__(self, "op", op)

    @classmethod
    def identity(cls, n: int) -> "AlgebraicCurvature":
        return cls(n, np.eye(n * (n - 1) // 2))

    @classmethod
    def zero(cls, n: int) -> "AlgebraicCurvature":
        N = n * (n - 1) // 2
        return cls(n, np.zeros((N, N)))

    def riemann(self) -> np.ndarray:
        return op_to_riemann(self.op, self.n)

    def ricci(self) -> np.ndarray:
        """Ric_ab = sum_i Rm[i, a, b, i]."""
        return np.einsum("iabi->ab", self.riemann())

    def scalar(self) -> float:
        return float(np.trace(self.ricci()))

    def bianchi_defect(self) -> float:
        return float(np.max(np.abs(bianchi_part(self.riemann())), initial=0.0))

    def to_json(self) -> list:
        return self.op.tolist()


def bianchi_project(omega: AlgebraicCurvature) -> AlgebraicCurvature:
    """Remove the Λ⁴ component so the first Bianchi identity holds."""
    Rm = omega.riemann()
    op = riemann_to_op(Rm - bianchi_part(Rm))
    return AlgebraicCurvature(omega.n, 0.5 * (op + op.T))


def random_curvature(n: int, seed, *, project: bool = True) -> AlgebraicCurvature:
    """Random symmetric operator on Λ², Bianchi-projected unless ``project`` is false."""
    if n < 2:
        raise ValueError("random curvature needs n >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    N = n * (n - 1) // 2
    S = rng.normal(size=(N, N))
    omega = AlgebraicCurvature(n, 0.5 * (S + S.T))
    return bianchi_project(omega) if project else omega


@dataclass(frozen=True)
class AuxCurvature:
    """theta[p] is the antisymmetric matrix Theta_kl(e_i, e_j) for the p-th pair k < l."""

    sig: TwistSignature
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        n, r = self.sig.n, self.sig.r
        t = _frozen(self.theta)
        if t.shape != (r * (r - 1) // 2, n, n):
            raise ValueError(f"aux curvature shape {t.shape} does not fit {self.sig}")
        if t.size and np.max(np.abs(t + np.swapaxes(t, 1, 2))) > 0:
            raise ValueError("aux curvature matrices must be antisymmetric")
        object.__setattr__(self, "theta", t)

    @classmethod
    def zero(cls, sig: TwistSignature) -> "AuxCurvature":
        return cls(sig, np.zeros((sig.r * (sig.r - 1) // 2, sig.n, sig.n)))

    @classmethod
    def random(cls, sig: TwistSignature, rng: np.random.Generator) -> "AuxCurvature":
        P = sig.r * (sig.r - 1) // 2
        vals = rng.normal(size=(P, sig.n * (sig.n - 1) // 2))
        return cls(sig, pack_antisymmetric(vals, sig.n))

    @classmethod
    def from_riemann(cls, omega: AlgebraicCurvature, sig: TwistSignature) -> "AuxCurvature":
        """Theta_kl(e_a, e_b) := Omega_kl(e_a, e_b), which needs r = n."""
        if sig.r != omega.n or sig.n != omega.n:
            raise ValueError("reinterpreting Omega as Theta needs n = r")
        Rm = omega.riemann()
        return cls(sig, np.stack([Rm[:, :, k, l] for k, l in pair_list(sig.r)]))

    def with_m(self, m: int) -> "AuxCurvature":
        return AuxCurvature(TwistSignature(self.sig.n, self.sig.r, m), self.theta)

    def hats(self) -> np.ndarray:
        return hat(self.theta)

    def to_json(self) -> list:
        return [{"k": k + 1, "l": l + 1, "matrix": self.theta[p].tolist()}
                for p, (k, l) in enumerate(pair_list(self.sig.r))]


def _check(omega: AlgebraicCurvature | None, theta: AuxCurvature, phi: TwistedSpinor):
    if theta.sig != phi.sig:
        raise ValueError(f"aux curvature {theta.sig} and spinor {phi.sig} differ")
    if omega is not None and omega.n != phi.sig.n:
        raise ValueError("curvature and spinor base dimensions differ")


class CurvatureContext:
    """Precomputed pair actions on one spinor for repeated curvature evaluations."""

    def __init__(self, omega: AlgebraicCurvature, theta: AuxCurvature, phi: TwistedSpinor):
        _check(omega, theta, phi)
        self.sig = phi.sig
        self.phi = phi.coords
        self.Rm = omega.riemann()
        self.ric = np.einsum("iabi->ab", self.Rm)
        self.theta = theta.theta
        self.B = base_pair_vectors(self.sig, self.phi)
        self.T = twist_pair_vectors(self.sig, self.phi)
        n = self.sig.n
        self.pairs_n = pair_list(n)
        iu = tuple(np.array(self.pairs_n).T) if self.pairs_n else (np.zeros(0, int),) * 2
        self._iu = iu
        # coefficient arrays: Omega_ij(e_a, e_b) on i<j, Theta_kl(e_a, e_b)
        self.om_coef = self.Rm[:, :, iu[0], iu[1]]
        self.th_coef = np.moveaxis(self.theta, 0, -1)
        self.gens = tables(self.sig).base

    def action(self, X, Y) -> np.ndarray:
        """R^theta(X, Y) phi."""
        X = np.asarray(X, float)
        Y = np.asarray(Y, float)
        om = np.einsum("a,b,abp->p", X, Y, self.om_coef)
        th = np.einsum("a,b,abp->p", X, Y, self.th_coef)
        return 0.5 * (om @ self.B + th @ self.T)

    def frame_actions(self) -> np.ndarray:
        """A[a, b] = R^theta(e_a, e_b) phi."""
        return 0.5 * (self.om_coef @ self.B + self.th_coef @ self.T)

    def vec(self, x, v) -> np.ndarray:
        out = np.zeros_like(v)
        for c, g in zip(x, self.gens):
            if c != 0:
                out += c * g.apply(v)
        return out


def curvature_action(omega: AlgebraicCurvature, theta: AuxCurvature, X, Y, phi: TwistedSpinor) -> TwistedSpinor:
    """R^theta(X, Y) phi = 1/2 sum Omega_ij(X,Y) e_i e_j phi + 1/2 sum Theta_kl(X,Y) kappa(f_k f_l) phi."""
    ctx = CurvatureContext(omega, theta, phi)
    return TwistedSpinor(phi.sig, ctx.action(X, Y))


def ricci_identity_vectors(ctx: CurvatureContext, X) -> tuple[np.ndarray, np.ndarray]:
    """(sum_i e_i R(X, e_i) phi, -1/2 Ric(X) phi + 1/2 sum (X ⌟ Theta_kl) kappa(f_k f_l) phi)."""
    X = np.asarray(X, float)
    n = ctx.sig.n
    lhs = np.zeros_like(ctx.phi)
    for i in range(n):
        lhs += ctx.gens[i].apply(ctx.action(X, np.eye(n)[i]))
    rhs = -0.5 * ctx.vec(ctx.ric @ X, ctx.phi)
    contr = np.einsum("a,pab->pb", X, ctx.theta)
    for p in range(contr.shape[0]):
        rhs += 0.5 * ctx.vec(contr[p], ctx.T[p])
    return lhs, rhs


def ricci_identity_residual(omega: AlgebraicCurvature, theta: AuxCurvature, X, phi: TwistedSpinor) -> float:
    ctx = CurvatureContext(omega, theta, phi)
    lhs, rhs = ricci_identity_vectors(ctx, X)
    return float(np.linalg.norm(lhs - rhs))


def scalar_identity_vectors(ctx: CurvatureContext) -> tuple[np.ndarray, np.ndarray]:
    """(sum_{i,j} e_i e_j R(e_i, e_j) phi, R/2 phi + sum Theta_kl · kappa(f_k f_l) phi)."""
    n = ctx.sig.n
    A = ctx.frame_actions()
    lhs = np.zeros_like(ctx.phi)
    for i in range(n):
        for j in range(n):
            if i != j:
                lhs += ctx.gens[i].apply(ctx.gens[j].apply(A[i, j]))
    rhs = 0.5 * np.trace(ctx.ric) * ctx.phi
    base_pairs = tables(ctx.sig).base_pairs
    for p in range(ctx.theta.shape[0]):
        for q, (i, j) in enumerate(ctx.pairs_n):
            c = ctx.theta[p, i, j]
            if c != 0:
                rhs += c * base_pairs[q].apply(ctx.T[p])
    return lhs, rhs


def scalar_identity_residual(omega: AlgebraicCurvature, theta: AuxCurvature, phi: TwistedSpinor) -> float:
    ctx = CurvatureContext(omega, theta, phi)
    lhs, rhs = scalar_identity_vectors(ctx)
    return float(np.linalg.norm(lhs - rhs))


# -- Theta tilde and pairings ------------------------------------------------

def theta_tilde_operator(theta: AuxCurvature) -> OperatorSum:
    """sum_{k<l} Theta_kl · kappa^m_{r*}(f_k f_l) on Delta_n ⊗ Delta_r^{⊗m}."""
    sig = theta.sig
    tab = tables(sig)
    total = OperatorSum.zero(sig.nqubits)
    terms = []
    for p, K in enumerate(tab.twist_pairs):
        for q, (i, j) in enumerate(pair_list(sig.n)):
            c = theta.theta[p, i, j]
            if c != 0:
                terms.extend((tab.base_pairs[q] @ t) * c for t in K.terms)
    if terms:
        total = OperatorSum(terms, sig.nqubits)
    return total


def theta_tilde_dense(theta: AuxCurvature) -> np.ndarray:
    """Dense Theta tilde assembled from Kronecker products of base and twist blocks."""
    sig = theta.sig
    tab = tables(sig)
    pairs = pair_list(sig.n)
    out = np.zeros((sig.dim, sig.dim), dtype=complex)
    if not pairs:
        return out
    rep = build_rep(sig.n)
    base_dense = np.stack([rep.pair(i, j).to_dense() for i, j in pairs])
    iu = tuple(np.array(pairs).T)
    qt = sig.m * sig.kr
    for p, K in enumerate(tab.twist_pairs):
        coeffs = theta.theta[p][iu]
        if not np.any(coeffs):
            continue
        form = np.tensordot(coeffs, base_dense, axes=1)
        block = sum(KroneckerOperator(qt, {ax - sig.kn: M for ax, M in t.factors.items()},
                                      t.coeff).to_dense() for t in K.terms)
        out += np.kron(form, block)
    return out


def theta_tilde(theta: AuxCurvature) -> tuple[OperatorSum, float]:
    """(Theta tilde operator, its spectral norm)."""
    op = theta_tilde_operator(theta)
    if theta.sig.dim <= 4096:
        norm = hermitian_spectral_norm(theta_tilde_dense(theta))
    else:
        norm = hermitian_spectral_norm(op)
    return op, norm


def pairings(theta: AuxCurvature, packet: TwoFormPacket) -> tuple[float, float]:
    """(<Theta, eta>_0, <hat Theta, hat eta>_1) with the second = sum tr(hat Theta hat eta^T)."""
    if (theta.sig.n, theta.sig.r) != (packet.sig.n, packet.sig.r):
        raise ValueError("pairing arguments have different shapes")
    n = theta.sig.n
    iu = np.triu_indices(n, 1)
    pair0 = float(np.sum(theta.theta[:, iu[0], iu[1]] * packet.eta[:, iu[0], iu[1]]))
    Th, Eh = hat(theta.theta), hat(packet.eta)
    pair1 = float(np.einsum("pab,pab->", Th, Eh))
    return pair0, pair1


# -- Ricci reconstructions --------------------------------------------------

@dataclass(frozen=True)
class RicciReconstruction:
    ricci: np.ndarray
    eta_theta: np.ndarray
    theta_eta: np.ndarray
    asymmetry: float

    @property
    def scalar(self) -> float:
        return float(np.trace(self.ricci))


def _norm2_checked(phi: TwistedSpinor) -> float:
    n2 = phi.norm2()
    if n2 == 0:
        raise ValueError("Ricci reconstruction needs a nonzero spinor")
    return n2


def _hat_products(theta: AuxCurvature, phi: TwistedSpinor) -> tuple[np.ndarray, np.ndarray, float]:
    if theta.sig != phi.sig:
        raise ValueError("aux curvature and spinor signatures differ")
    n2 = _norm2_checked(phi)
    Eh = eta_forms(phi).hats()
    Th = theta.hats()
    et = np.einsum("pab,pbc->ac", Eh, Th) / n2
    te = np.einsum("pab,pbc->ac", Th, Eh) / n2
    return et, te, n2


def ricci_from_parallel(theta: AuxCurvature, phi: TwistedSpinor) -> RicciReconstruction:
    """(1/|phi|^2) sum hat(eta_kl) hat(Theta_kl); the symmetric part is reported as ``ricci``."""
    et, te, _ = _hat_products(theta, phi)
    return RicciReconstruction(0.5 * (et + te), et, te, float(np.linalg.norm(et - te)))


def ricci_from_killing(theta: AuxCurvature, phi: TwistedSpinor, mu: float) -> RicciReconstruction:
    """4(n-1) mu^2 Id + (1/|phi|^2) sum hat(Theta_kl) hat(eta_kl)."""
    n = theta.sig.n
    et, te, _ = _hat_products(theta, phi)
    shift = 4.0 * (n - 1) * mu * mu * np.eye(n)
    return RicciReconstruction(shift + 0.5 * (et + te), shift + et, shift + te,
                               float(np.linalg.norm(et - te)))


def killing_scalar(theta: AuxCurvature, phi: TwistedSpinor, mu: float) -> float:
    """4n(n-1) mu^2 + (1/|phi|^2) sum tr(hat Theta ∘ hat eta)."""
    n = theta.sig.n
    _, te, _ = _hat_products(theta, phi)
    return float(4.0 * n * (n - 1) * mu * mu + np.trace(te))


@dataclass(frozen=True)
class SymmetricEndo:
    """Symmetric E with optional dE[a, b, :] = (d^∇E)(e_a, e_b) as an n-vector."""

    n: int
    E: np.ndarray = field(repr=False)
    dE: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        E = _frozen(self.E)
        if E.shape != (self.n, self.n):
            raise ValueError("E must be n x n")
        if np.max(np.abs(E - E.T), initial=0.0) > 0:
            raise ValueError("E must be symmetric")
        object.__setattr__(self, "E", E)
        if self.dE is not None:
            d = _frozen(self.dE)
            if d.shape != (self.n,) * 3:
                raise ValueError("dE must be n x n x n")
            if np.max(np.abs(d + d.transpose(1, 0, 2)), initial=0.0) > 0:
                raise ValueError("dE must be antisymmetric in its first two slots")
            object.__setattr__(self, "dE", d)

    def derivative(self) -> np.ndarray:
        return np.zeros((self.n,) * 3) if self.dE is None else np.array(self.dE)


def circ_ast(dE: np.ndarray, nu) -> np.ndarray:
    """((⌟ d^∇E) ⊛ (⌟ nu))_{ts} = sum_{i,j} dE[s, i, j] nu[t, i, j]."""
    values = nu.values if hasattr(nu, "values") else np.asarray(nu)
    dE = np.asarray(dE, float)
    if dE.shape != values.shape or dE.ndim != 3:
        raise ValueError("dE and nu must both be n x n x n")
    return np.einsum("sij,tij->ts", dE, values)


@dataclass(frozen=True)
class GeneralizedKillingRicci:
    ricci: np.ndarray
    raw: np.ndarray
    scalar: float
    asymmetry: float


def ricci_generalized_killing(endo: SymmetricEndo, phi: TwistedSpinor, theta: AuxCurvature) -> GeneralizedKillingRicci:
    """Ric = -4E^2 + 4 tr(E) E - (2/|phi|^2) (⌟dE ⊛ ⌟nu) + (1/|phi|^2) sum hat(eta) hat(Theta).

    ``raw`` is the unsymmetrized matrix; ``ricci`` its symmetric part.
    """
    if endo.n != phi.sig.n:
        raise ValueError("endomorphism and spinor dimensions differ")
    E = endo.E
    et, _, n2 = _hat_products(theta, phi)
    dE = endo.derivative()
    star = circ_ast(dE, nu_form(phi)) if np.any(dE) else np.zeros_like(E)
    raw = -4.0 * E @ E + 4.0 * np.trace(E) * E - 2.0 * star / n2 + et
    sym = 0.5 * (raw + raw.T)
    return GeneralizedKillingRicci(sym, raw, float(np.trace(raw)), float(np.linalg.norm(raw - raw.T)))


def ricci_generalized_killing_direct(endo: SymmetricEndo, phi: TwistedSpinor, theta: AuxCurvature) -> np.ndarray:
    """Ricci matrix read off from the Clifford-level identity by pairing with e_t phi.

    Evaluates LHS_s = sum_{i != s} e_i (dE(e_i, e_s) + E(e_i)E(e_s) - E(e_s)E(e_i)) phi and
    solves -1/2 Ric(e_s) phi + 1/2 sum (e_s ⌟ Theta_kl) kappa(f_k f_l) phi = LHS_s in the
    real pairing against e_t phi.  Independent of the closed form above.
    """
    sig = phi.sig
    n = sig.n
    n2 = _norm2_checked(phi)
    E = endo.E
    dE = endo.derivative()
    gens = tables(sig).base
    v = phi.coords
    T = twist_pair_vectors(sig, v)

    def vec(x, w):
        out = np.zeros_like(w)
        for c, g in zip(x, gens):
            if c != 0:
                out += c * g.apply(w)
        return out

    ev = np.stack([g.apply(v) for g in gens])
    ric = np.zeros((n, n))
    for s in range(n):
        lhs = np.zeros_like(v)
        for i in range(n):
            if i == s:
                continue
            w = vec(dE[i, s], v) + vec(E[:, i], vec(E[:, s], v)) - vec(E[:, s], vec(E[:, i], v))
            lhs += gens[i].apply(w)
        twist = np.zeros_like(v)
        for p in range(T.shape[0]):
            twist += 0.5 * vec(theta.theta[p, s], T[p])
        target = lhs - twist  # equals -1/2 Ric(e_s) phi in the pairing
        for t in range(n):
            ric[t, s] = -2.0 * np.vdot(ev[t], target).real / n2
    return ric
