"""JSON readers and writers for spinors, packets, curvature and torus configs."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .curvature import AlgebraicCurvature, AuxCurvature
from .spin import pair_list
from .torus import ConstantConnection
from .twisted import TwistSignature


class InputError(ValueError):
    """Malformed or out-of-range user input."""


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return data


def _require(obj: dict, *keys: str):
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")


def signature_from(obj: dict, default_m: int = 1) -> TwistSignature:
    _require(obj, "n", "r")
    try:
        return TwistSignature(int(obj["n"]), int(obj["r"]), int(obj.get("m", default_m)))
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _pair_matrices(entries, r: int, n: int, what: str) -> np.ndarray:
    pairs = pair_list(r)
    out = np.zeros((len(pairs), n, n))
    for e in entries:
        try:
            k, l = int(e["k"]), int(e["l"])
            M = np.asarray(e["matrix"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{what}: malformed pair entry") from exc
        if not 1 <= k < l <= r:
            raise InputError(f"{what}: pair ({k}, {l}) outside 1 <= k < l <= {r}")
        if M.shape != (n, n):
            raise InputError(f"{what}: matrix for ({k}, {l}) must be {n} x {n}")
        if np.max(np.abs(M + M.T), initial=0.0) > 1e-12:
            raise InputError(f"{what}: matrix for ({k}, {l}) is not antisymmetric")
        out[pairs.index((k - 1, l - 1))] = 0.5 * (M - M.T)
    return out


def curvature_from_json(obj: dict) -> tuple[AlgebraicCurvature, AuxCurvature]:
    """Curvature JSON: n, r, m, riemann_operator (lex (i<j) basis), aux_curvature pairs."""
    sig = signature_from(obj)
    _require(obj, "riemann_operator")
    try:
        op = np.asarray(obj["riemann_operator"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("riemann_operator must be a numeric matrix") from exc
    N = sig.n * (sig.n - 1) // 2
    if op.shape != (N, N):
        raise InputError(f"riemann_operator must be {N} x {N}")
    if np.max(np.abs(op - op.T), initial=0.0) > 1e-12:
        raise InputError("riemann_operator must be symmetric")
    omega = AlgebraicCurvature(sig.n, 0.5 * (op + op.T))
    theta = AuxCurvature(sig, _pair_matrices(obj.get("aux_curvature", []), sig.r, sig.n, "aux_curvature"))
    return omega, theta


def curvature_to_json(omega: AlgebraicCurvature, theta: AuxCurvature) -> dict:
    return {"n": theta.sig.n, "r": theta.sig.r, "m": theta.sig.m,
            "riemann_operator": omega.to_json(), "aux_curvature": theta.to_json()}


def torus_from_json(obj: dict) -> tuple[ConstantConnection, int]:
    sig = signature_from(obj)
    _require(obj, "theta")
    try:
        theta = np.asarray(obj["theta"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("theta must be numeric") from exc
    if theta.shape != (sig.n, sig.r, sig.r):
        raise InputError(f"theta must have shape {(sig.n, sig.r, sig.r)}")
    if np.max(np.abs(theta + np.swapaxes(theta, 1, 2)), initial=0.0) > 1e-12:
        raise InputError("theta matrices must be antisymmetric")
    radius = int(obj.get("mode_radius", 1))
    if radius < 0:
        raise InputError("mode_radius must be nonnegative")
    return ConstantConnection(sig, 0.5 * (theta - np.swapaxes(theta, 1, 2))), radius


def spinor_coords_from_json(obj: dict, sig: TwistSignature) -> np.ndarray:
    _require(obj, "re", "im")
    if (int(obj.get("n", sig.n)), int(obj.get("r", sig.r)), int(obj.get("m", sig.m))) != (sig.n, sig.r, sig.m):
        raise InputError("spinor signature does not match the curvature input")
    try:
        v = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("spinor coordinates must be numeric") from exc
    if v.shape != (sig.dim,):
        raise InputError(f"spinor needs {sig.dim} coordinates")
    return v
