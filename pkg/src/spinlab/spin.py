"""The Lie algebra spin(n) = span{e_i e_j : i < j} and its two actions."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .clifford import CliffordRep
from .kron import OperatorSum


def pair_list(n: int) -> list[tuple[int, int]]:
    """Zero-based pairs (i, j), i < j, in lexicographic order."""
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class SpinAlgebraElement:
    """sum_{i<j} a_ij e_i e_j, coefficients stored on lexicographic pairs."""

    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.n * (self.n - 1) // 2,):
            raise ValueError(f"spin({self.n}) needs {self.n * (self.n - 1) // 2} coefficients")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, n: int, i: int, j: int) -> "SpinAlgebraElement":
        """e_i e_j with zero-based i != j (sign flips for i > j)."""
        if i == j:
            raise ValueError("e_i e_i is a scalar, not in spin(n)")
        c = np.zeros(n * (n - 1) // 2)
        a, b = min(i, j), max(i, j)
        c[pair_list(n).index((a, b))] = 1.0 if i < j else -1.0
        return cls(n, c)

    @classmethod
    def from_antisymmetric(cls, A: np.ndarray) -> "SpinAlgebraElement":
        """sum_{i<j} A_ij e_i e_j."""
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        return cls(n, np.array([A[i, j] for i, j in pair_list(n)]))

    def as_matrix(self) -> np.ndarray:
        """Antisymmetric matrix A with A_ij = a_ij for i < j."""
        A = np.zeros((self.n, self.n))
        for c, (i, j) in zip(self.coeffs, pair_list(self.n)):
            A[i, j], A[j, i] = c, -c
        return A

    def __add__(self, other):
        return SpinAlgebraElement(self.n, self.coeffs + other.coeffs)

    def __mul__(self, s):
        return SpinAlgebraElement(self.n, self.coeffs * float(s))

    __rmul__ = __mul__


def spin_operator(gens, A: np.ndarray) -> OperatorSum:
    """sum_{i<j} A_ij g_i g_j for any list of anticommuting generators."""
    q = gens[0].nqubits
    terms = [(gens[i] @ gens[j]) * A[i, j] for i, j in pair_list(len(gens)) if A[i, j] != 0]
    return OperatorSum(terms, q)


def kappa_star(rep: CliffordRep, xi: SpinAlgebraElement) -> OperatorSum:
    if xi.n != rep.n:
        raise ValueError("algebra element and representation dimensions differ")
    return spin_operator(rep.generators, xi.as_matrix())


def lambda_star(xi: SpinAlgebraElement) -> np.ndarray:
    """e_i e_j -> 2 E_ij, where E_ij = e_i^* ⊗ e_j - e_j^* ⊗ e_i sends e_i to e_j."""
    return 2.0 * xi.as_matrix().T


def spin_coefficients(rep: CliffordRep, M: np.ndarray) -> SpinAlgebraElement:
    """Expand an operator in span{kappa(e_i e_j)} by trace extraction.

    The words kappa(e_i e_j) are orthogonal for the trace form and square to
    -Id, so a_ij = -tr(kappa(e_i e_j) M) / dim.
    """
    M = np.asarray(M)
    c = [-np.trace(rep.pair(i, j).to_dense() @ M) / rep.dim for i, j in pair_list(rep.n)]
    c = np.array(c)
    if np.max(np.abs(c.imag), initial=0.0) > 1e-9:
        raise ValueError("operator has non-real spin(n) coefficients")
    return SpinAlgebraElement(rep.n, c.real)


def clifford_bracket(rep: CliffordRep, xi: SpinAlgebraElement, zeta: SpinAlgebraElement) -> SpinAlgebraElement:
    """[xi, zeta] computed in the Clifford algebra and re-expanded on e_i e_j."""
    X = kappa_star(rep, xi).to_dense()
    Z = kappa_star(rep, zeta).to_dense()
    return spin_coefficients(rep, X @ Z - Z @ X)


def _reunitarize(U: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    drift = np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]))
    if drift > tol:
        U, _ = scipy.linalg.polar(U)
    return U


def group_element(rep: CliffordRep, xi: SpinAlgebraElement, t: float) -> tuple[np.ndarray, np.ndarray]:
    """(exp(t kappa_*(xi)), exp(t lambda_*(xi))), a point of Spin(n) and its rotation."""
    K = kappa_star(rep, xi).to_dense() * t
    L = lambda_star(xi) * t
    return _reunitarize(scipy.linalg.expm(K)), _reunitarize(scipy.linalg.expm(L))

