"""Flat torus R^n / (2π Z)^n with a constant so(r) connection.

Every operator is diagonal in Fourier modes xi ∈ Z^n, so the Dirac operator,
the connection Laplacian and the curvature term become finite matrices on
Delta_n ⊗ Delta_r^{⊗m} per mode.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .clifford import build_rep
from .curvature import AuxCurvature, theta_tilde_dense
from .kron import DENSE_CAP, KroneckerOperator
from .spin import pair_list
from .twisted import TwistSignature, tables

TORUS_VOLUME_SIDE = 2 * np.pi


@dataclass(frozen=True)
class ConstantConnection:
    """theta[j] is the antisymmetric r x r connection coefficient in direction e_j."""

    sig: TwistSignature
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.array(self.theta, dtype=float)
        if t.shape != (self.sig.n, self.sig.r, self.sig.r):
            raise ValueError(f"connection needs shape {(self.sig.n, self.sig.r, self.sig.r)}")
        if np.max(np.abs(t + np.swapaxes(t, 1, 2)), initial=0.0) > 0:
            raise ValueError("connection coefficients must be antisymmetric")
        t.setflags(write=False)
        object.__setattr__(self, "theta", t)

    @classmethod
    def random(cls, sig: TwistSignature, rng: np.random.Generator, scale: float = 1.0) -> "ConstantConnection":
        A = rng.normal(size=(sig.n, sig.r, sig.r)) * scale
        return cls(sig, A - np.swapaxes(A, 1, 2))

    @classmethod
    def abelian(cls, sig: TwistSignature, rng: np.random.Generator) -> "ConstantConnection":
        """All theta_j multiples of one so(r) element, so all brackets vanish."""
        G = np.zeros((sig.r, sig.r))
        G[0, 1], G[1, 0] = 1.0, -1.0
        return cls(sig, rng.normal(size=sig.n)[:, None, None] * G)

    @classmethod
    def zero(cls, sig: TwistSignature) -> "ConstantConnection":
        return cls(sig, np.zeros((sig.n, sig.r, sig.r)))

    @property
    def volume(self) -> float:
        return float(TORUS_VOLUME_SIDE ** self.sig.n)

    def to_json(self, mode_radius: int | None = None) -> dict:
        out = {"n": self.sig.n, "r": self.sig.r, "m": self.sig.m, "theta": self.theta.tolist()}
        if mode_radius is not None:
            out["mode_radius"] = mode_radius
        return out


@dataclass(frozen=True)
class ModeLattice:
    n: int
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("mode radius must be nonnegative")

    @property
    def modes(self) -> np.ndarray:
        rng = range(-self.radius, self.radius + 1)
        return np.array(list(itertools.product(rng, repeat=self.n)), dtype=int).reshape(-1, self.n)

    def __len__(self) -> int:
        return (2 * self.radius + 1) ** self.n


def aux_curvature_of(conn: ConstantConnection) -> AuxCurvature:
    """Theta(e_i, e_j) = [theta_j, theta_i], repackaged as Theta_kl(e_i, e_j).

    The order inside the bracket follows from the map theta -> 1/2 sum theta_kl f_k f_l
    reversing brackets, so that the symbol curvature is [hat theta_i, hat theta_j].
    """
    t = conn.theta
    comm = np.einsum("jab,ibc->ijac", t, t) - np.einsum("iab,jbc->ijac", t, t)
    theta = np.stack([comm[:, :, k, l] for k, l in pair_list(conn.sig.r)])
    return AuxCurvature(conn.sig, theta)


def _twist_dense(sig: TwistSignature, A: np.ndarray) -> np.ndarray:
    """Dense kappa^m_{r*}(sum_{k<l} A_kl f_k f_l) on the twist factors only."""
    qt = sig.m * sig.kr
    out = np.zeros((1 << qt, 1 << qt), dtype=complex)
    for t in tables(sig).kappa_rm(A).terms:
        fac = {ax - sig.kn: M for ax, M in t.factors.items()}
        out += KroneckerOperator(qt, fac, t.coeff).to_dense()
    return out


class SymbolFactory:
    """Mode-independent blocks for one connection, reused across modes."""

    def __init__(self, conn: ConstantConnection):
        sig = conn.sig
        if sig.dim > DENSE_CAP:
            raise ValueError(f"per-mode dimension {sig.dim} exceeds dense cap {DENSE_CAP}")
        self.conn = conn
        self.sig = sig
        self.base = build_rep(sig.n).dense()
        self.dt = 1 << (sig.m * sig.kr)
        self.db = 1 << sig.kn
        # theta-hat_j = 1/2 sum_{k<l} (theta_j)_kl kappa(f_k f_l)
        self.theta_hat = [0.5 * _twist_dense(sig, conn.theta[j]) for j in range(sig.n)]

    def covariant(self, xi) -> list[np.ndarray]:
        """Twist-side symbols i xi_j + theta-hat_j."""
        xi = np.asarray(xi, float)
        return [1j * xi[j] * np.eye(self.dt) + self.theta_hat[j] for j in range(self.sig.n)]

    def dirac(self, xi) -> np.ndarray:
        return sum(np.kron(g, c) for g, c in zip(self.base, self.covariant(xi)))

    def laplacian(self, xi) -> np.ndarray:
        s = sum(c @ c for c in self.covariant(xi))
        return -np.kron(np.eye(self.db), s)


def dirac_symbol(conn: ConstantConnection, xi) -> np.ndarray:
    """D(xi) = sum_j kappa(e_j) ⊗ (i xi_j + theta-hat_j)."""
    return SymbolFactory(conn).dirac(xi)


def laplacian_symbol(conn: ConstantConnection, xi) -> np.ndarray:
    """Delta(xi) = -sum_j (i xi_j + theta-hat_j)^2."""
    return SymbolFactory(conn).laplacian(xi)


def sl_residual(conn: ConstantConnection, xi, *, factory: SymbolFactory | None = None,
                theta_tilde: np.ndarray | None = None) -> float:
    """‖D(xi)^2 - Delta(xi) - 1/2 Theta tilde‖ (scalar curvature is zero on the flat torus)."""
    f = factory or SymbolFactory(conn)
    tt = theta_tilde if theta_tilde is not None else theta_tilde_dense(aux_curvature_of(conn))
    D = f.dirac(xi)
    return float(np.linalg.norm(D @ D - f.laplacian(xi) - 0.5 * tt))


def bracket_residual(conn: ConstantConnection) -> float:
    """‖sum_{j<k} e_j e_k ⊗ [hat theta_j, hat theta_k] - 1/2 Theta tilde‖."""
    f = SymbolFactory(conn)
    lhs = np.zeros((conn.sig.dim,) * 2, dtype=complex)
    for j, k in pair_list(conn.sig.n):
        A, B = f.theta_hat[j], f.theta_hat[k]
        lhs += np.kron(f.base[j] @ f.base[k], A @ B - B @ A)
    tt = theta_tilde_dense(aux_curvature_of(conn))
    return float(np.linalg.norm(lhs - 0.5 * tt))


@dataclass(frozen=True)
class Spectrum:
    modes: np.ndarray
    eigenvalues: np.ndarray  # shape (num_modes, dim), ascending per mode

    def merged(self) -> np.ndarray:
        return np.sort(self.eigenvalues.ravel(), kind="stable")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mode", "index", "eigenvalue"])
        for mode, vals in zip(self.modes, self.eigenvalues):
            label = ";".join(str(int(x)) for x in mode)
            for i, v in enumerate(vals):
                w.writerow([label, i, repr(float(v))])
        return buf.getvalue()


def truncated_spectrum(conn: ConstantConnection, lattice: ModeLattice) -> Spectrum:
    if lattice.n != conn.sig.n:
        raise ValueError("lattice and connection dimensions differ")
    f = SymbolFactory(conn)
    modes = lattice.modes
    vals = np.stack([np.linalg.eigvalsh(f.dirac(xi)) for xi in modes])
    return Spectrum(modes, vals)


def spectrum_symmetry_defect(conn: ConstantConnection, xi) -> float:
    """Distance between spec D(xi) and -spec D(-xi)."""
    f = SymbolFactory(conn)
    a = np.sort(np.linalg.eigvalsh(f.dirac(xi)))
    b = np.sort(-np.linalg.eigvalsh(f.dirac(-np.asarray(xi, float))))
    return float(np.max(np.abs(a - b)))


def spectrum_symmetry_expected(n: int, r: int) -> bool:
    """Whether spec D(xi) = -spec D(-xi) for a generic constant connection.

    For even n chirality forces the symmetry, and for n // 2 even so does the
    antilinear structure.  Otherwise odd traces of D(xi) reduce to totally
    antisymmetrized traces of the twist symbols, which are the so(r) invariants
    of degree 3, 7, ..., so the symmetry breaks when n is one of those degrees.
    """
    if n % 4 != 3:
        return True
    top = 2 * r - 3 if r % 2 else 2 * r - 5
    return n > top
