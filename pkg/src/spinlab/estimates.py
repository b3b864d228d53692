"""Harmonic-spinor criteria and eigenvalue / Killing-constant lower bounds.

Integrals over M are sample means times the volume; pointwise minima are
sample minima.  "Strict at a point" means at least one sample exceeds
``STRICT_TOL``, which is sample-level evidence only.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

STRICT_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    bound_name: str
    hypothesis_met: bool
    bound_value: float
    inputs: dict = field(default_factory=dict)
    comparison: float | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.bound_value):
            raise ValueError(f"{self.bound_name}: bound value is not finite")

    def to_json(self) -> dict:
        return asdict(self)


def _samples(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"{name} needs at least one sample")
    return arr


def harmonic_criterion(R_min: float, theta_norm1: float, m: int) -> BoundReport:
    """R >= 2m|Theta~^1| everywhere (strict somewhere) rules out harmonic spinors for m' <= m."""
    if theta_norm1 < 0:
        raise ValueError("operator norm must be nonnegative")
    margin = R_min - 2 * m * theta_norm1
    cascade = [{"m": mm, "met": bool(R_min - 2 * mm * theta_norm1 >= 0),
                "margin": R_min - 2 * mm * theta_norm1} for mm in range(m + 1)]
    return BoundReport(
        "no_harmonic_spinors", bool(margin >= 0), float(margin),
        inputs={"R_min": R_min, "theta_norm1": theta_norm1, "m": m, "norm_used": "m*|Theta~^1|"},
        details={"strict": bool(margin > STRICT_TOL), "cascade": cascade,
                 "conclusion": "ker D^{theta,m'} = 0 for all listed m'" if margin > STRICT_TOL else None},
    )


def power_bound(n: int, r: int) -> float:
    """Largest admissible tensor power (n + 8r - 16) / (r(r - 1))."""
    if r < 2:
        raise ValueError("twist rank must be >= 2")
    return (n + 8 * r - 16) / (r * (r - 1))


def nonharmonic_spinor_criterion(samples: Sequence[float]) -> BoundReport:
    """Samples of R|phi|^2 + 2<Theta, eta>_0: all >= 0 and one > 0 implies D phi != 0."""
    s = _samples(samples, "nonharmonic_spinor_criterion")
    nonneg = bool(np.all(s >= 0))
    strict = bool(np.any(s > STRICT_TOL))
    met = nonneg and strict
    return BoundReport(
        "spinor_not_harmonic", met, float(s.min()),
        inputs={"num_samples": int(s.size), "min": float(s.min()), "max": float(s.max())},
        details={"nonnegative": nonneg, "strict_somewhere": strict,
                 "conclusion": "D phi != 0" if met else None},
    )


def killing_constant_bound(n: int, R_min_minus_2norm_m: float, R_min_minus_2m_norm1: float) -> BoundReport:
    """mu^2 >= min(R - 2|Theta~^m|)/(4n^2) >= min(R - 2m|Theta~^1|)/(4n^2)."""
    strong = R_min_minus_2norm_m / (4 * n * n)
    weak = R_min_minus_2m_norm1 / (4 * n * n)
    return BoundReport(
        "killing_constant", bool(strong >= 0), float(strong),
        inputs={"n": n, "R_min_minus_2norm_m": R_min_minus_2norm_m,
                "R_min_minus_2m_norm1": R_min_minus_2m_norm1},
        details={"strong_variant": {"norm_used": "|Theta~^m|", "bound": strong},
                 "weak_variant": {"norm_used": "m*|Theta~^1|", "bound": weak},
                 "weak_le_strong": bool(weak <= strong),
                 "vacuous": bool(strong < 0),
                 "equality_means": "phi is parallel, mu = 0"},
    )


def killing_lower_bound_integral(n: int, vol: float, scalar_samples: Sequence[float],
                                 pairing_samples: Sequence[float], phi_norm2: float) -> BoundReport:
    """The two integral bounds for a real Killing spinor of constant length.

    ``scalar_samples``: R + (2/|phi|^2)<Theta, eta>_0.
    ``pairing_samples``: 2<Theta, eta>_0 - <hat Theta, hat eta>_1.
    """
    if vol <= 0:
        raise ValueError("volume must be positive")
    if phi_norm2 <= 0:
        raise ValueError("spinor length must be positive")
    s1 = _samples(scalar_samples, "scalar samples")
    s2 = _samples(pairing_samples, "pairing samples")
    int1 = float(s1.mean()) * vol
    int2 = float(s2.mean()) * vol
    b1 = int1 / (4 * n * n * vol)
    b2 = int2 / (4 * n * phi_norm2 * vol)
    return BoundReport(
        "killing_integral", True, float(max(b1, b2)),
        inputs={"n": n, "vol": vol, "phi_norm2": phi_norm2, "num_samples": int(s1.size)},
        details={"scalar_bound": b1, "pairing_bound": b2},
    )


def friedrich_bound(n: int, R_min_minus_2norm: float) -> float:
    """lambda^2 >= n/(4(n-1)) * min(R - 2|Theta~|)."""
    if n < 2:
        raise ValueError("eigenvalue bound needs n >= 2")
    return n * R_min_minus_2norm / (4 * (n - 1))


def friedrich_report(n: int, R_min_minus_2norm_m: float, R_min_minus_2m_norm1: float,
                     observed_lambda2: float | None = None) -> BoundReport:
    strong = friedrich_bound(n, R_min_minus_2norm_m)
    weak = friedrich_bound(n, R_min_minus_2m_norm1)
    killing = None
    if R_min_minus_2norm_m >= 0:
        killing = 0.5 * math.sqrt(R_min_minus_2norm_m / (n * (n - 1)))
    met = True if observed_lambda2 is None else bool(observed_lambda2 >= strong - 1e-9)
    return BoundReport(
        "dirac_eigenvalue", met, float(strong),
        inputs={"n": n, "R_min_minus_2norm_m": R_min_minus_2norm_m,
                "R_min_minus_2m_norm1": R_min_minus_2m_norm1},
        comparison=observed_lambda2,
        details={"strong_variant": {"norm_used": "|Theta~^m|", "bound": strong},
                 "weak_variant": {"norm_used": "m*|Theta~^1|", "bound": weak},
                 "weak_le_strong": bool(weak <= strong),
                 "attaining_killing_constant": killing},
    )


def em_bound(n: int, samples: Sequence[float], observed_lambda2: float | None = None) -> BoundReport:
    """lambda^2 >= min(|l^phi|^2 + R/4 - 1/2|Theta~|) over the samples."""
    s = _samples(samples, "em_bound")
    b = float(s.min())
    met = True if observed_lambda2 is None else bool(observed_lambda2 >= b - 1e-9)
    return BoundReport(
        "energy_momentum", met, b,
        inputs={"n": n, "num_samples": int(s.size)}, comparison=observed_lambda2,
        details={"attainment": "nabla_X phi = -l^phi(X) phi, |phi| constant",
                 "nonnegative": bool(b >= 0)},
    )
