"""Twisted spinor spaces Delta_n ⊗ Delta_r^{⊗m} and their Clifford actions.

Qubit layout: the base factor Delta_n occupies axes 0..kn-1 (slowest), then
twist factor a = 1..m occupies kr consecutive axes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping

import numpy as np

from .clifford import build_rep, form_operator
from .kron import KroneckerOperator, OperatorSum
from .spin import SpinAlgebraElement, pair_list, spin_operator

DEFAULT_DIM_CAP = 1 << 20


def dim_cap() -> int:
    raw = os.environ.get("SPINLAB_DIM_CAP")
    return int(raw) if raw else DEFAULT_DIM_CAP


class DimensionCapError(ValueError):
    pass


@dataclass(frozen=True)
class TwistSignature:
    n: int
    r: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"invalid base dimension n={self.n}")
        if self.r < 2:
            raise ValueError(f"twist rank must be >= 2, got r={self.r}")
        if self.m < 1:
            raise ValueError(f"tensor power must be >= 1, got m={self.m}")
        if self.dim > dim_cap():
            raise DimensionCapError(f"dimension {self.dim} exceeds cap {dim_cap()}")

    @property
    def kn(self) -> int:
        return self.n // 2

    @property
    def kr(self) -> int:
        return self.r // 2

    @property
    def nqubits(self) -> int:
        return self.kn + self.m * self.kr

    @property
    def dim(self) -> int:
        return 1 << self.nqubits

    def twist_offset(self, a: int) -> int:
        return self.kn + (a - 1) * self.kr


@lru_cache(maxsize=None)
def _tables(sig: TwistSignature) -> "SignatureTables":
    return SignatureTables(sig)


class SignatureTables:
    """Generator and pair operators for one signature, built once and shared."""

    def __init__(self, sig: TwistSignature):
        self.sig = sig
        q = sig.nqubits
        self.base = build_rep(sig.n).embedded(q, 0)
        rr = build_rep(sig.r)
        self.twist = tuple(rr.embedded(q, sig.twist_offset(a)) for a in range(1, sig.m + 1))

    @cached_property
    def base_pairs(self) -> tuple[KroneckerOperator, ...]:
        """e_i e_j for lexicographic i < j."""
        return tuple(self.base[i] @ self.base[j] for i, j in pair_list(self.sig.n))

    @cached_property
    def twist_pairs(self) -> tuple[OperatorSum, ...]:
        """kappa^m_{r*}(f_k f_l) for lexicographic k < l."""
        out = []
        for k, l in pair_list(self.sig.r):
            out.append(OperatorSum([f[k] @ f[l] for f in self.twist], self.sig.nqubits))
        return tuple(out)

    def kappa_rm(self, A: np.ndarray) -> OperatorSum:
        """Leibniz action of sum_{k<l} A_kl f_k f_l on all m twist factors."""
        total = OperatorSum.zero(self.sig.nqubits)
        for f in self.twist:
            total = total + spin_operator(f, A)
        return total


def tables(sig: TwistSignature) -> SignatureTables:
    return _tables(sig)


@dataclass(frozen=True)
class TwistedSpinor:
    sig: TwistSignature
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex)
        if c.shape != (self.sig.dim,):
            raise ValueError(f"twisted spinor for {self.sig} needs {self.sig.dim} coordinates")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def norm2(self) -> float:
        return float(np.vdot(self.coords, self.coords).real)

    @classmethod
    def random(cls, sig: TwistSignature, rng: np.random.Generator) -> "TwistedSpinor":
        return cls(sig, rng.normal(size=sig.dim) + 1j * rng.normal(size=sig.dim))

    @classmethod
    def product(cls, sig: TwistSignature, base: np.ndarray, factors) -> "TwistedSpinor":
        v = np.asarray(base, dtype=complex)
        for f in factors:
            v = np.kron(v, np.asarray(f, dtype=complex))
        return cls(sig, v)

    def to_json(self) -> dict:
        return {"n": self.sig.n, "r": self.sig.r, "m": self.sig.m,
                "re": self.coords.real.tolist(), "im": self.coords.imag.tolist()}

    @classmethod
    def from_json(cls, obj: Mapping) -> "TwistedSpinor":
        sig = TwistSignature(int(obj["n"]), int(obj["r"]), int(obj["m"]))
        return cls(sig, np.asarray(obj["re"], float) + 1j * np.asarray(obj["im"], float))


def _check(sig: TwistSignature, phi: TwistedSpinor):
    if phi.sig != sig:
        raise ValueError(f"spinor signature {phi.sig} does not match {sig}")


def mu_r_a(sig: TwistSignature, a: int, beta: Mapping[tuple[int, ...], complex],
           phi: TwistedSpinor) -> TwistedSpinor:
    """Clifford action of a form on R^r on the a-th twist factor only."""
    _check(sig, phi)
    if not 1 <= a <= sig.m:
        raise ValueError(f"factor index a={a} outside 1..{sig.m}")
    op = form_operator(tables(sig).twist[a - 1], beta)
    return TwistedSpinor(sig, op.apply(phi.coords))


def kappa_r_m(sig: TwistSignature, xi: SpinAlgebraElement, phi: TwistedSpinor) -> TwistedSpinor:
    """sum_a mu_r^a(xi) phi."""
    _check(sig, phi)
    if xi.n != sig.r:
        raise ValueError(f"expected an element of spin({sig.r}), got spin({xi.n})")
    return TwistedSpinor(sig, tables(sig).kappa_rm(xi.as_matrix()).apply(phi.coords))


def _by_degree(form: Mapping[tuple[int, ...], complex]) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for idx, c in form.items():
        out.setdefault(len(idx), {})[tuple(idx)] = c
    return out


def twist_form_operator(sig: TwistSignature, beta: Mapping[tuple[int, ...], complex]) -> OperatorSum:
    """Operator of a form on R^r: degree 2 via the Leibniz action, degree 0 as a scalar.

    Other degrees have no canonical action on a tensor power and are accepted
    only when m = 1.
    """
    tab = tables(sig)
    q = sig.nqubits
    total = OperatorSum.zero(q)
    for deg, part in sorted(_by_degree(beta).items()):
        if deg == 0:
            total = total + KroneckerOperator.identity(q, complex(part[()]))
        elif deg == 2:
            A = np.zeros((sig.r, sig.r))
            for (k, l), c in part.items():
                if not 1 <= k < l <= sig.r:
                    raise ValueError(f"invalid twist form index {(k, l)}")
                A[k - 1, l - 1], A[l - 1, k - 1] = c, -c
            total = total + tab.kappa_rm(A)
        elif sig.m == 1:
            total = total + form_operator(tab.twist[0], part)
        else:
            raise ValueError(f"degree-{deg} twist forms act only for m = 1")
    return total


def joint_action(sig: TwistSignature, omega: Mapping[tuple[int, ...], complex],
                 beta: Mapping[tuple[int, ...], complex], phi: TwistedSpinor) -> TwistedSpinor:
    """(omega ⊗ beta) · phi; the base form is applied first (the two actions commute)."""
    _check(sig, phi)
    base = form_operator(tables(sig).base, omega, sig.nqubits)
    v = base.apply(phi.coords)
    return TwistedSpinor(sig, twist_form_operator(sig, beta).apply(v))


def global_definition_case(M_spin: bool, F_spin: bool, m: int) -> str:
    """Which global construction of S(TM) ⊗ S(F)^{⊗m} is available."""
    if not M_spin and m % 2 == 1:
        return "spinr"
    if M_spin and F_spin:
        return "product_spin_groups"
    if M_spin and not F_spin and m % 2 == 0:
        return "spin_times_SOr"
    return "undefined"


def grassmannian_parity(k: int, l: int, a: int, b: int) -> tuple[bool, int]:
    """(a ≡ l and b ≡ k mod 2, r = a k + b l) for the oriented Grassmannian example."""
    if min(k, l, a, b) < 1:
        raise ValueError("all arguments must be positive integers")
    return (a - l) % 2 == 0 and (b - k) % 2 == 0, a * k + b * l
