"""Complex spinor representation of the Clifford algebra Cl_n.

The spinor module is Delta_n = (C^2)^{⊗k}, k = n // 2, and all coordinates are
taken in the unitary basis u_eps (eps_i = +1 -> bit 0, eps_1 the slowest
axis).  In that basis every generator is a signed permutation with entries in
{0, ±1, ±i}, so the Clifford relations hold exactly in floating point.

Hermitian product convention: <a, b> = sum a_i * conj(b_i), linear in the
first slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Mapping, Sequence

import numpy as np

from .kron import KroneckerOperator, OperatorSum

# Per-factor blocks in the u_eps basis.  In the standard basis of C^2 they are
# g1 = diag(i, -i), g2 = [[0, i], [i, 0]], T = [[0, -i], [i, 0]].
G1 = np.array([[0, 1j], [1j, 0]])
G2 = np.array([[0, -1], [1, 0]], dtype=complex)
TT = np.array([[-1, 0], [0, 1]], dtype=complex)

# Columns are u_{+1}, u_{-1} written in the standard basis.
U_STANDARD = np.array([[1, 1], [-1j, 1j]]) / np.sqrt(2)

# Antilinear factor structures: v -> M @ conj(v) in the u_eps basis.
ALPHA = np.array([[0, 1j], [-1j, 0]])
BETA = np.array([[0, 1], [1, 0]], dtype=complex)


def hermitian(a: np.ndarray, b: np.ndarray) -> complex:
    """<a, b>, linear in ``a``, conjugate linear in ``b``."""
    return complex(np.vdot(b, a))


@dataclass(frozen=True)
class CliffordRep:
    n: int
    k: int
    generators: tuple[KroneckerOperator, ...]

    @property
    def dim(self) -> int:
        return 1 << self.k

    def pair(self, i: int, j: int) -> KroneckerOperator:
        """kappa(e_i) kappa(e_j), zero-based indices."""
        return self.generators[i] @ self.generators[j]

    def embedded(self, nqubits: int, offset: int = 0) -> tuple[KroneckerOperator, ...]:
        return tuple(g.embed(nqubits, offset) for g in self.generators)

    def dense(self) -> list[np.ndarray]:
        return [g.to_dense() for g in self.generators]

    def standard_dense(self) -> list[np.ndarray]:
        """Generator matrices in the standard tensor basis of (C^2)^{⊗k}."""
        U = reduce(np.kron, [U_STANDARD] * self.k, np.eye(1))
        return [U @ g @ U.conj().T for g in self.dense()]


@lru_cache(maxsize=None)
def build_rep(n: int) -> CliffordRep:
    """Generator images kappa(e_1), ..., kappa(e_n) as Kronecker factor lists."""
    n = int(n)
    if n < 1:
        raise ValueError(f"invalid dimension n={n}")
    k = n // 2
    gens = []
    for j in range(1, k + 1):
        tail = {ax: TT for ax in range(k - j + 1, k)}
        for g in (G1, G2):
            gens.append(KroneckerOperator(k, {k - j: g, **tail}))
    if n % 2:
        gens.append(KroneckerOperator(k, {ax: TT for ax in range(k)}, 1j))
    return CliffordRep(n, k, tuple(gens))


@dataclass(frozen=True)
class Spinor:
    n: int
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex)
        if c.shape != (1 << (self.n // 2),):
            raise ValueError(f"spinor for n={self.n} needs {1 << (self.n // 2)} coordinates")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def norm2(self) -> float:
        return float(np.vdot(self.coords, self.coords).real)

    def to_standard(self) -> np.ndarray:
        U = reduce(np.kron, [U_STANDARD] * (self.n // 2), np.eye(1))
        return U @ self.coords

    def to_json(self) -> dict:
        return {"n": self.n, "re": self.coords.real.tolist(), "im": self.coords.imag.tolist()}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Spinor":
        return cls(int(obj["n"]), np.asarray(obj["re"], float) + 1j * np.asarray(obj["im"], float))


def eps_to_index(eps: Sequence[int]) -> int:
    idx = 0
    for e in eps:
        if e not in (1, -1):
            raise ValueError("signs must be +1 or -1")
        idx = (idx << 1) | (0 if e == 1 else 1)
    return idx


def index_to_eps(idx: int, k: int) -> tuple[int, ...]:
    return tuple(1 if (idx >> (k - 1 - a)) & 1 == 0 else -1 for a in range(k))


def basis_spinor(n: int, eps: Sequence[int]) -> Spinor:
    k = n // 2
    if len(eps) != k:
        raise ValueError(f"need {k} signs for n={n}")
    c = np.zeros(1 << k, dtype=complex)
    c[eps_to_index(eps)] = 1.0
    return Spinor(n, c)


def _vector(rep: CliffordRep, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (rep.n,):
        raise ValueError(f"vector of length {x.shape} does not match n={rep.n}")
    return x


def vector_operator(gens: Sequence[KroneckerOperator], x) -> OperatorSum:
    return OperatorSum([g * float(c) for g, c in zip(gens, x)], gens[0].nqubits)


def clifford_mul(rep: CliffordRep, x, phi: Spinor) -> Spinor:
    """x · phi = sum_i x_i kappa(e_i) phi."""
    x = _vector(rep, x)
    if phi.n != rep.n:
        raise ValueError("spinor and representation dimensions differ")
    out = np.zeros(rep.dim, dtype=complex)
    for g, c in zip(rep.generators, x):
        if c != 0:
            out += c * g.apply(phi.coords)
    return Spinor(rep.n, out)


def _check_form(n: int, omega: Mapping[tuple[int, ...], float]):
    for idx in omega:
        idx = tuple(idx)
        if any(not 1 <= i <= n for i in idx):
            raise ValueError(f"form index {idx} out of range 1..{n}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise ValueError(f"form index {idx} is not strictly increasing")


def form_operator(gens: Sequence[KroneckerOperator], omega: Mapping[tuple[int, ...], complex],
                  nqubits: int | None = None) -> OperatorSum:
    """Exterior form with 1-based increasing index tuples, as a sum of generator words."""
    n = len(gens)
    _check_form(n, omega)
    q = gens[0].nqubits if gens else nqubits
    terms = []
    for idx, c in omega.items():
        word = KroneckerOperator.identity(q)
        for i in idx:
            word = word @ gens[i - 1]
        terms.append(word * c)
    return OperatorSum(terms, q)


def form_action(rep: CliffordRep, omega: Mapping[tuple[int, ...], complex]) -> OperatorSum:
    """e_{i1}∧...∧e_{ip} acts as kappa(e_{i1})...kappa(e_{ip}), extended linearly."""
    return form_operator(rep.generators, omega)


def two_form_dict(A: np.ndarray) -> dict[tuple[int, int], float]:
    """Antisymmetric matrix A_{ij} = omega(e_i, e_j) as the form sum_{i<j} A_ij e_i∧e_j."""
    n = A.shape[0]
    return {(i + 1, j + 1): float(A[i, j]) for i in range(n) for j in range(i + 1, n) if A[i, j] != 0}


# -- real and quaternionic structures ---------------------------------------

@dataclass(frozen=True)
class AntilinearStructure:
    n: int
    kind: str
    factor_pattern: tuple[str, ...]

    def apply(self, coords: np.ndarray) -> np.ndarray:
        k = len(self.factor_pattern)
        v = np.conj(np.asarray(coords, dtype=complex))
        factors = {ax: ALPHA if p == "alpha" else BETA for ax, p in enumerate(self.factor_pattern)}
        return KroneckerOperator(k, factors).apply_factorwise(v) if k else v

    def __call__(self, phi: Spinor) -> Spinor:
        return Spinor(self.n, self.apply(phi.coords))


def gamma_structure(n: int) -> AntilinearStructure:
    if n < 1:
        raise ValueError(f"invalid dimension n={n}")
    k = n // 2
    pattern = tuple("alpha" if a % 2 == 0 else "beta" for a in range(k))
    kind = "real" if n % 8 in (0, 1, 6, 7) else "quaternionic"
    return AntilinearStructure(n, kind, pattern)


# -- closed-form basis action ------------------------------------------------

def basis_action_oracle(n: int, p: int, eps: Sequence[int]) -> tuple[complex, tuple[int, ...]]:
    """Coefficient c and flipped signs eps' with e_p · u_eps = c · u_eps'.

    Evaluated from the closed-form sign rule for even n, without touching the
    operator tables.
    """
    if n % 2:
        raise ValueError("basis_action_oracle is defined for even n only")
    k = n // 2
    if not 1 <= p <= n:
        raise ValueError(f"index p={p} outside 1..{n}")
    eps = tuple(int(e) for e in eps)
    if len(eps) != k:
        raise ValueError(f"need {k} signs")
    half = (p + 1) // 2
    parity = p - 2 * (p // 2)
    coeff = (1j) ** parity * (-1) ** (half - 1)
    for a in range(k - half + 1 + parity, k + 1):
        coeff *= eps[a - 1]
    pos = k - half + 1
    flipped = list(eps)
    flipped[pos - 1] = -flipped[pos - 1]
    return complex(coeff), tuple(flipped)
