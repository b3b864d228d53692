"""Spectral norms of Hermitian operators: dense below a size cap, Lanczos above."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .kron import DENSE_CAP, KroneckerOperator, OperatorSum


class SpectralError(RuntimeError):
    pass


def _as_linear_operator(op) -> spla.LinearOperator:
    dim = op.dim
    return spla.LinearOperator((dim, dim), matvec=lambda v: op.apply(np.ravel(v)), dtype=complex)


def _dense_norm(H: np.ndarray) -> float:
    """max |eigenvalue|, split along the connected components of the nonzero pattern."""
    if H.shape[0] <= 64:
        return float(np.max(np.abs(np.linalg.eigvalsh(H)), initial=0.0))
    ncomp, labels = connected_components(sp.csr_matrix(H != 0), directed=False)
    if ncomp == 1:
        return float(np.max(np.abs(np.linalg.eigvalsh(H)), initial=0.0))
    worst = 0.0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        worst = max(worst, float(np.max(np.abs(np.linalg.eigvalsh(H[np.ix_(idx, idx)])))))
    return worst


def hermitian_spectral_norm(op, *, tol: float = 1e-10, maxiter: int = 10_000, seed: int = 0) -> float:
    """max |lambda| for a Hermitian operator given densely or in Kronecker form."""
    if isinstance(op, np.ndarray):
        return _dense_norm(op)
    if isinstance(op, OperatorSum) and len(op) == 0:
        return 0.0
    if not isinstance(op, (KroneckerOperator, OperatorSum)):
        raise TypeError(f"unsupported operator type {type(op).__name__}")
    if op.dim <= DENSE_CAP:
        return _dense_norm(op.to_dense())
    v0 = np.random.default_rng(seed).normal(size=op.dim).astype(complex)
    try:
        vals = spla.eigsh(_as_linear_operator(op), k=1, which="LM", v0=v0, tol=tol,
                          maxiter=maxiter, return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        raise SpectralError(f"Lanczos did not converge within {maxiter} iterations") from exc
    return float(np.abs(vals).max())
