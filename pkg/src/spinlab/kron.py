"""Matrix-free operators on (C^2)^{⊗q} built from per-factor 2x2 blocks.

Every spinor space in this package is a tensor power of C^2, so every
operator we need is a (sum of) Kronecker product(s) of 2x2 matrices.

Axis 0 is the most significant (slowest) tensor factor; a vector of length
2^q is viewed as an array of shape (2,)*q in C order.
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Mapping

import numpy as np

DENSE_CAP = 4096

_ONES2 = np.ones(2, dtype=complex)


def _is_monomial(M: np.ndarray) -> bool:
    nz = M != 0
    return bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))


class KroneckerOperator:
    """``coeff * A_0 ⊗ A_1 ⊗ ... ⊗ A_{q-1}`` with identity factors omitted.

    Parameters
    ----------
    nqubits : number of C^2 tensor factors.
    factors : mapping axis -> 2x2 complex matrix. Missing axes are identity.
    coeff : global scalar.
    """

    __slots__ = ("nqubits", "factors", "coeff", "_mono")

    def __init__(self, nqubits: int, factors: Mapping[int, np.ndarray] | None = None,
                 coeff: complex = 1.0):
        self.nqubits = int(nqubits)
        fac = {}
        for ax, M in (factors or {}).items():
            if not 0 <= ax < self.nqubits:
                raise ValueError(f"factor axis {ax} outside 0..{self.nqubits - 1}")
            M = np.asarray(M, dtype=complex)
            if M.shape != (2, 2):
                raise ValueError("factors must be 2x2")
            M = M.copy()
            M.setflags(write=False)
            fac[int(ax)] = M
        self.factors = dict(sorted(fac.items()))
        self.coeff = complex(coeff)
        self._mono = None

    @property
    def dim(self) -> int:
        return 1 << self.nqubits

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dim, self.dim)

    @classmethod
    def identity(cls, nqubits: int, coeff: complex = 1.0) -> "KroneckerOperator":
        return cls(nqubits, {}, coeff)

    def __repr__(self):
        return f"KroneckerOperator(q={self.nqubits}, axes={list(self.factors)}, coeff={self.coeff})"

    # -- algebra -----------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, OperatorSum):
            return OperatorSum([self]) @ other
        if not isinstance(other, KroneckerOperator):
            return NotImplemented
        if other.nqubits != self.nqubits:
            raise ValueError("operator sizes differ")
        fac = dict(self.factors)
        for ax, M in other.factors.items():
            fac[ax] = fac[ax] @ M if ax in fac else M
        return KroneckerOperator(self.nqubits, fac, self.coeff * other.coeff)

    def __mul__(self, c):
        if np.ndim(c) != 0:
            return NotImplemented
        return KroneckerOperator(self.nqubits, self.factors, self.coeff * complex(c))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __add__(self, other):
        return OperatorSum([self]) + other

    def __sub__(self, other):
        return OperatorSum([self]) + (-1) * other

    def adjoint(self) -> "KroneckerOperator":
        return KroneckerOperator(self.nqubits, {a: M.conj().T for a, M in self.factors.items()},
                                 np.conj(self.coeff))

    def embed(self, nqubits: int, offset: int) -> "KroneckerOperator":
        """The same operator acting on axes ``offset..offset+q-1`` of a larger space."""
        if offset + self.nqubits > nqubits:
            raise ValueError("embedding does not fit")
        return KroneckerOperator(nqubits, {a + offset: M for a, M in self.factors.items()},
                                 self.coeff)

    # -- application -------------------------------------------------------
    def _monomial(self):
        # (mask, phase): (A v)[x ^ mask] = phase[x] * v[x]
        if self._mono is None:
            if all(_is_monomial(M) for M in self.factors.values()):
                mask = 0
                vecs = []
                for ax in range(self.nqubits):
                    M = self.factors.get(ax)
                    if M is None:
                        vecs.append(_ONES2)
                        continue
                    flip = 1 if M[0, 0] == 0 else 0
                    if flip:
                        mask |= 1 << (self.nqubits - 1 - ax)
                    vecs.append(np.array([M[0 ^ flip, 0], M[1 ^ flip, 1]]))
                phase = reduce(np.kron, vecs, np.array([self.coeff]))
                perm = np.arange(self.dim) ^ mask
                self._mono = (mask, phase, perm)
            else:
                self._mono = False
        return self._mono

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Apply to ``v`` of shape ``(..., 2**q)``."""
        v = np.asarray(v)
        if v.shape[-1] != self.dim:
            raise ValueError(f"vector length {v.shape[-1]} != operator dim {self.dim}")
        mono = self._monomial()
        if mono:
            _, phase, perm = mono
            return (v * phase)[..., perm]
        return self.apply_factorwise(v)

    def apply_factorwise(self, v: np.ndarray) -> np.ndarray:
        """Reference path: contract one 2x2 block per axis."""
        v = np.asarray(v, dtype=complex)
        lead = v.shape[:-1]
        w = v.reshape(-1, self.dim)
        b = w.shape[0]
        for ax, M in self.factors.items():
            w = w.reshape(b, 1 << ax, 2, 1 << (self.nqubits - ax - 1))
            w = np.einsum("ij,xajc->xaic", M, w)
        return (self.coeff * w).reshape(*lead, self.dim)

    def to_dense(self) -> np.ndarray:
        if self.dim > DENSE_CAP:
            raise ValueError(f"refusing to densify dim {self.dim} > {DENSE_CAP}")
        eye = np.eye(2, dtype=complex)
        mats = [self.factors.get(ax, eye) for ax in range(self.nqubits)]
        return self.coeff * reduce(np.kron, mats, np.eye(1, dtype=complex))


class OperatorSum:
    """A finite sum of :class:`KroneckerOperator` terms on the same space."""

    __slots__ = ("nqubits", "terms")

    def __init__(self, terms: Iterable[KroneckerOperator], nqubits: int | None = None):
        self.terms = tuple(t for t in terms if t.coeff != 0)
        if nqubits is None:
            if not self.terms:
                raise ValueError("empty OperatorSum needs nqubits")
            nqubits = self.terms[0].nqubits
        self.nqubits = int(nqubits)
        if any(t.nqubits != self.nqubits for t in self.terms):
            raise ValueError("terms act on different spaces")

    @property
    def dim(self) -> int:
        return 1 << self.nqubits

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dim, self.dim)

    @classmethod
    def zero(cls, nqubits: int) -> "OperatorSum":
        return cls([], nqubits)

    def __repr__(self):
        return f"OperatorSum(q={self.nqubits}, terms={len(self.terms)})"

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        if isinstance(other, KroneckerOperator):
            other = OperatorSum([other])
        if not isinstance(other, OperatorSum):
            return NotImplemented
        if other.nqubits != self.nqubits:
            raise ValueError("operator sizes differ")
        return OperatorSum(self.terms + other.terms, self.nqubits)

    __radd__ = __add__

    def __mul__(self, c):
        if np.ndim(c) != 0:
            return NotImplemented
        return OperatorSum([t * c for t in self.terms], self.nqubits)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-1) * other

    def __matmul__(self, other):
        if isinstance(other, KroneckerOperator):
            other = OperatorSum([other])
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return OperatorSum([a @ b for a in self.terms for b in other.terms], self.nqubits)

    def __rmatmul__(self, other):
        if isinstance(other, KroneckerOperator):
            return OperatorSum([other]) @ self
        return NotImplemented

    def adjoint(self) -> "OperatorSum":
        return OperatorSum([t.adjoint() for t in self.terms], self.nqubits)

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[-1] != self.dim:
            raise ValueError(f"vector length {v.shape[-1]} != operator dim {self.dim}")
        out = np.zeros(v.shape, dtype=complex)
        for t in self.terms:
            out += t.apply(v)
        return out

    def to_dense(self) -> np.ndarray:
        if self.dim > DENSE_CAP:
            raise ValueError(f"refusing to densify dim {self.dim} > {DENSE_CAP}")
        out = np.zeros(self.shape, dtype=complex)
        for t in self.terms:
            out += t.to_dense()
        return out


def as_sum(op) -> OperatorSum:
    return op if isinstance(op, OperatorSum) else OperatorSum([op])
