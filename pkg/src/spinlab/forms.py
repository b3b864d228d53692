"""Real tensors attached to a twisted spinor: 2-form packets, the 3-form nu,
Killing-vector components and the energy-momentum form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .spin import pair_list
from .twisted import TwistedSpinor, TwistSignature, tables


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def pack_antisymmetric(values: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic (i<j) values -> antisymmetric n x n matrix, batched over leading axes."""
    values = np.asarray(values)
    out = np.zeros(values.shape[:-1] + (n, n), dtype=values.dtype)
    for p, (i, j) in enumerate(pair_list(n)):
        out[..., i, j] = values[..., p]
        out[..., j, i] = -values[..., p]
    return out


def hat(A: np.ndarray) -> np.ndarray:
    """Matrix of X -> (X ⌟ A)^♯ in the frame: hat(A)[a, b] = A(e_b, e_a)."""
    return np.swapaxes(np.asarray(A), -1, -2)


@dataclass(frozen=True)
class TwoFormPacket:
    """eta[p] is the antisymmetric matrix eta_{kl}(e_i, e_j) for the p-th pair k < l."""

    sig: TwistSignature
    eta: np.ndarray = field(repr=False)

    def __post_init__(self):
        n, r = self.sig.n, self.sig.r
        e = _frozen(self.eta)
        if e.shape != (r * (r - 1) // 2, n, n):
            raise ValueError(f"packet shape {e.shape} does not fit {self.sig}")
        if e.size and np.max(np.abs(e + np.swapaxes(e, 1, 2))) > 0:
            raise ValueError("packet matrices must be antisymmetric")
        object.__setattr__(self, "eta", e)

    def matrix(self, k: int, l: int) -> np.ndarray:
        """eta_{kl} for zero-based k, l with eta_{lk} = -eta_{kl} and eta_{kk} = 0."""
        if k == l:
            return np.zeros((self.sig.n, self.sig.n))
        a, b = min(k, l), max(k, l)
        M = self.eta[pair_list(self.sig.r).index((a, b))]
        return M.copy() if k < l else -M

    def hats(self) -> np.ndarray:
        return hat(self.eta)

    def to_json(self) -> dict:
        return {"n": self.sig.n, "r": self.sig.r,
                "pairs": [{"k": k + 1, "l": l + 1, "matrix": self.eta[p].tolist()}
                          for p, (k, l) in enumerate(pair_list(self.sig.r))]}


def _coords(phi) -> np.ndarray:
    return phi.coords if isinstance(phi, TwistedSpinor) else np.asarray(phi, dtype=complex)


def base_pair_vectors(sig: TwistSignature, v: np.ndarray) -> np.ndarray:
    """Rows e_i e_j v for lexicographic i < j."""
    tab = tables(sig)
    if not tab.base_pairs:
        return np.zeros((0, sig.dim), dtype=complex)
    return np.stack([op.apply(v) for op in tab.base_pairs])


def twist_pair_vectors(sig: TwistSignature, v: np.ndarray) -> np.ndarray:
    """Rows kappa^m_{r*}(f_k f_l) v for lexicographic k < l."""
    return np.stack([op.apply(v) for op in tables(sig).twist_pairs])


def eta_raw(sig: TwistSignature, v: np.ndarray) -> np.ndarray:
    """Complex values <(e_i∧e_j) kappa(f_k f_l) v, v>, shape (pairs_r, pairs_n).

    Uses (e_i e_j)^† = -e_i e_j, so each entry is -<kappa(f_k f_l) v, e_i e_j v>.
    """
    B = base_pair_vectors(sig, v)
    T = twist_pair_vectors(sig, v)
    return -(T @ B.conj().T)


def eta_forms(phi: TwistedSpinor) -> TwoFormPacket:
    sig = phi.sig
    vals = eta_raw(sig, phi.coords).real
    return TwoFormPacket(sig, pack_antisymmetric(vals, sig.n))


def eta_imaginary_max(phi: TwistedSpinor) -> float:
    """Largest |Im <(e_i∧e_j) kappa(f_k f_l) phi, phi>| over k < l, i < j."""
    vals = eta_raw(phi.sig, phi.coords)
    return float(np.max(np.abs(vals.imag), initial=0.0))


def eta_map(phi: TwistedSpinor, A: np.ndarray) -> np.ndarray:
    """Image of sum_{k<l} A_kl f_k f_l under the linear map f_k f_l -> eta_{kl}."""
    packet = eta_forms(phi)
    coeffs = np.array([A[k, l] for k, l in pair_list(phi.sig.r)])
    return np.tensordot(coeffs, packet.eta, axes=1)


def eta_map_hat(phi: TwistedSpinor, A: np.ndarray) -> np.ndarray:
    """Image of sum_{k<l} A_kl f_k f_l under f_k f_l -> hat(eta_{kl})."""
    return hat(eta_map(phi, A))


def eta_direct(phi: TwistedSpinor, A: np.ndarray) -> np.ndarray:
    """Re<(e_i∧e_j) kappa^m_{r*}(xi) phi, phi> evaluated with the operator for xi itself."""
    sig = phi.sig
    tab = tables(sig)
    w = tab.kappa_rm(np.asarray(A, dtype=float)).apply(phi.coords)
    out = np.zeros((sig.n, sig.n))
    for op, (i, j) in zip(tab.base_pairs, pair_list(sig.n)):
        out[i, j] = np.vdot(phi.coords, op.apply(w)).real
        out[j, i] = -out[i, j]
    return out


@dataclass(frozen=True)
class ThreeForm:
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.n,) * 3:
            raise ValueError("three-form must be n x n x n")
        object.__setattr__(self, "values", v)

    def antisymmetry_defect(self) -> float:
        v = self.values
        return float(max(np.max(np.abs(v + v.transpose(1, 0, 2))),
                         np.max(np.abs(v + v.transpose(0, 2, 1))),
                         np.max(np.abs(v + v.transpose(2, 1, 0)))))


def nu_form(phi: TwistedSpinor) -> ThreeForm:
    """nu(e_t, e_i, e_j) = Re<e_t e_i e_j phi, phi> on all index triples."""
    sig = phi.sig
    gens = tables(sig).base
    v = phi.coords
    first = np.stack([g.apply(v) for g in gens])  # e_j v
    n = sig.n
    vals = np.zeros((n, n, n))
    for i in range(n):
        second = np.stack([gens[i].apply(first[j]) for j in range(n)])  # e_i e_j v
        for t in range(n):
            third = gens[t].apply(second)
            vals[t, i, :] = (third @ v.conj()).real
    nu = ThreeForm(n, vals)
    if nu.antisymmetry_defect() > 1e-9 * max(1.0, phi.norm2()):
        raise ArithmeticError("nu failed the antisymmetry check")
    return nu


def killing_vector_components(phi: TwistedSpinor) -> tuple[np.ndarray, np.ndarray]:
    """(raw_i = <e_i phi, phi>, Im raw_i); raw is purely imaginary."""
    v = phi.coords
    raw = np.array([np.vdot(v, g.apply(v)) for g in tables(phi.sig).base])
    return raw, raw.imag.copy()


@dataclass(frozen=True)
class EMForm:
    n: int
    Q: np.ndarray = field(repr=False)

    def __post_init__(self):
        Q = _frozen(self.Q)
        if Q.shape != (self.n, self.n) or np.max(np.abs(Q - Q.T)) > 0:
            raise ValueError("Q must be a symmetric n x n matrix")
        object.__setattr__(self, "Q", Q)

    def ell(self) -> np.ndarray:
        """Matrix of l(X) = (X ⌟ Q)^♯; columns are l(e_i)."""
        return self.Q.T.copy()

    @property
    def trace(self) -> float:
        return float(np.trace(self.Q))


def em_tensor(phi: TwistedSpinor, derivs: Sequence[TwistedSpinor | np.ndarray]) -> EMForm:
    """Q(e_i, e_j) = 1/2 Re<e_i ∇_j phi + e_j ∇_i phi, phi/|phi|^2>."""
    sig = phi.sig
    n2 = phi.norm2()
    if n2 == 0:
        raise ValueError("energy-momentum tensor needs a nonzero spinor")
    if len(derivs) != sig.n:
        raise ValueError(f"need {sig.n} derivative spinors")
    D = np.stack([_coords(d) for d in derivs])
    gens = tables(sig).base
    # M[i, j] = Re<e_i ∇_j phi, phi>
    M = np.stack([(g.apply(D) @ phi.coords.conj()).real for g in gens])
    Q = 0.5 * (M + M.T) / n2
    return EMForm(sig.n, Q)


def twisted_dirac_at_point(phi: TwistedSpinor, derivs: Sequence) -> np.ndarray:
    """sum_i e_i ∇_i phi from pointwise derivative data."""
    D = np.stack([_coords(d) for d in derivs])
    gens = tables(phi.sig).base
    return sum(g.apply(D[i]) for i, g in enumerate(gens))


__all__ = [
    "TwoFormPacket", "ThreeForm", "EMForm", "eta_forms", "eta_raw", "eta_imaginary_max",
    "eta_map", "eta_map_hat", "eta_direct", "nu_form", "killing_vector_components",
    "em_tensor", "twisted_dirac_at_point", "hat", "pack_antisymmetric",
    "base_pair_vectors", "twist_pair_vectors",
]

