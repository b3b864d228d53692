"""spinlab command-line interface.

Exit codes:
    0  every check within tolerance
    1  a check failed (the report names the first failing identity)
    2  invalid input (malformed JSON, bad signature, dimension cap exceeded)
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import curvature as cv
from . import estimates as est
from .clifford import build_rep, gamma_structure
from .forms import eta_forms
from .io import (InputError, curvature_from_json, dumps, load_json, spinor_coords_from_json,
                 torus_from_json)
from .phi0 import build_phi0
from .suites import (CheckResult, anticommutation_defect, curvature_suite, norm_suite,
                     oracle_defect, phi0_suite, torus_suite, trial_rng, vanishing_suite)
from .torus import (ConstantConnection, ModeLattice, SymbolFactory, aux_curvature_of,
                    bracket_residual, truncated_spectrum)
from .twisted import DimensionCapError, TwistedSpinor, TwistSignature

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _summarize(checks: list[CheckResult], stream=sys.stderr) -> None:
    for c in checks:
        status = "ok  " if c.passed else "FAIL"
        args = " ".join(f"{k}={v}" for k, v in sorted(c.inputs.items()))
        print(f"[{status}] {c.label:<34} residual={c.residual:.3e} tol={c.tol:.1e} {args}", file=stream)


def _finish(command: str, checks: list[CheckResult], extra: dict, args) -> int:
    failing = [c for c in checks if not c.passed]
    report = {
        "command": command,
        "config": {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "csv", "spinor_out")},
        "checks": [c.to_json() for c in checks],
        "passed": not failing,
        "first_failure": failing[0].to_json() if failing else None,
        **extra,
    }
    _emit(report, args.out)
    if not args.quiet:
        _summarize(checks)
    return EXIT_OK if not failing else EXIT_FAIL


# -- commands ----------------------------------------------------------------

def cmd_verify_clifford(args) -> int:
    checks = []
    for n in range(2, args.nmax + 1):
        checks.append(CheckResult("clifford_anticommutation", anticommutation_defect(n), 0.0, {"n": n}))
    for n in range(2, min(args.nmax, 10) + 1, 2):
        checks.append(CheckResult("basis_action_closed_form", oracle_defect(n), 0.0, {"n": n}))
    for n in range(2, args.nmax + 1):
        rng = trial_rng(args.seed, n)
        rep = build_rep(n)
        G = rep.generators
        worst_skew = 0.0
        for _ in range(args.trials):
            x = rng.normal(size=n)
            a = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
            b = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
            xa = sum(c * g.apply(a) for c, g in zip(x, G))
            xb = sum(c * g.apply(b) for c, g in zip(x, G))
            worst_skew = max(worst_skew, abs(np.vdot(b, xa) + np.vdot(xb, a)) / (np.linalg.norm(a) * np.linalg.norm(b)))
        checks.append(CheckResult("clifford_skew_symmetry", worst_skew, 1e-12, {"n": n}))
        g = gamma_structure(n)
        v = rng.normal(size=rep.dim) + 1j * rng.normal(size=rep.dim)
        sign = 1.0 if g.kind == "real" else -1.0
        checks.append(CheckResult("structure_square", float(np.max(np.abs(g.apply(g.apply(v)) - sign * v))),
                                  1e-12, {"n": n, "kind": g.kind}))
    return _finish("verify-clifford", checks, {}, args)


def cmd_verify_identities(args) -> int:
    sig = TwistSignature(args.n, args.r, args.m)
    tol = args.tol
    inputs = {"n": sig.n, "r": sig.r, "m": sig.m}
    checks = []
    for label, val in vanishing_suite(sig.n, sig.r, sig.m, args.trials, args.seed).items():
        checks.append(CheckResult(label, val, min(tol, 1e-10), inputs))
    curv = curvature_suite(sig.n, sig.r, sig.m, args.trials, args.seed)
    checks.append(CheckResult("ricci_contraction_identity", curv["ricci_contraction_identity"], tol, inputs))
    checks.append(CheckResult("scalar_contraction_identity", curv["scalar_contraction_identity"], tol, inputs))
    norms = norm_suite(sig.n, sig.r, sig.m, min(args.trials, 50), args.seed)
    checks.append(CheckResult("twist_curvature_norm_inequality", max(norms["norm_excess"], 0.0), tol, inputs))
    checks.append(CheckResult("twist_curvature_expectation_real", norms["pairing_imaginary"], min(tol, 1e-10), inputs))
    checks.append(CheckResult("twist_curvature_expectation_pairing", norms["pairing_value"], tol, inputs))
    extra = {"non_bianchi_control_fraction": curv["non_bianchi_control_fraction"]}
    if sig.dim <= 4096:
        tor = torus_suite(sig.n, sig.r, sig.m, min(args.trials, 200), args.seed)
        checks.append(CheckResult("torus_sl_formula", tor["sl_formula"], tol, inputs))
        checks.append(CheckResult("torus_bracket_compatibility", tor["bracket_compatibility"], tol, inputs))
    return _finish("verify-identities", checks, extra, args)


def cmd_phi0(args) -> int:
    p = build_phi0(args.n)
    res = phi0_suite(args.n, args.seed)
    inputs = {"n": args.n}
    tols = {"h_invariance": 1e-10, "eta_packet": 1e-9, "norm2_defect": 0.0,
            "curvature_action": 1e-9, "ricci_reconstruction": 1e-9}
    labels = {"h_invariance": "phi0_invariance", "eta_packet": "phi0_two_forms",
              "norm2_defect": "phi0_norm", "curvature_action": "phi0_curvature_annihilation",
              "ricci_reconstruction": "phi0_ricci_reconstruction"}
    checks = [CheckResult(labels[k], res[k], tols[k], inputs) for k in labels]
    spinor = p.spinor.to_json()
    if args.spinor_out:
        Path(args.spinor_out).write_text(dumps(spinor), encoding="utf-8")
    return _finish("phi0", checks, {"spinor": spinor}, args)


def cmd_torus(args) -> int:
    if args.config:
        conn, radius = torus_from_json(load_json(args.config))
    else:
        sig = TwistSignature(args.n, args.r, args.m)
        conn = ConstantConnection.random(sig, trial_rng(args.seed, sig.n, sig.r, sig.m), scale=args.scale)
        radius = 1
    if args.radius is not None:
        radius = args.radius
    sig = conn.sig
    inputs = {"n": sig.n, "r": sig.r, "m": sig.m, "mode_radius": radius}
    lattice = ModeLattice(sig.n, radius)
    spectrum = truncated_spectrum(conn, lattice)
    f = SymbolFactory(conn)
    theta = aux_curvature_of(conn)
    tt = cv.theta_tilde_dense(theta)
    sl = 0.0
    for xi in lattice.modes:
        D = f.dirac(xi)
        sl = max(sl, float(np.linalg.norm(D @ D - f.laplacian(xi) - 0.5 * tt)))
    _, norm_m = cv.theta_tilde(theta)
    lam2 = float(np.min(spectrum.eigenvalues ** 2))
    friedrich = est.friedrich_bound(sig.n, 0.0 - 2 * norm_m) if sig.n >= 2 else 0.0
    checks = [
        CheckResult("torus_sl_formula", sl, args.tol, inputs),
        CheckResult("torus_bracket_compatibility", bracket_residual(conn), args.tol, inputs),
        CheckResult("torus_eigenvalue_lower_bound", max(0.0, friedrich - lam2), args.tol, inputs),
    ]
    if args.csv:
        Path(args.csv).write_text(spectrum.to_csv(), encoding="utf-8")
    extra = {"connection": conn.to_json(radius), "theta_tilde_norm": norm_m,
             "min_eigenvalue_squared": lam2, "eigenvalue_bound": friedrich,
             "num_modes": len(lattice), "num_eigenvalues": int(spectrum.eigenvalues.size)}
    return _finish("torus", checks, extra, args)


def cmd_bounds(args) -> int:
    omega, theta = curvature_from_json(load_json(args.curvature))
    sig = theta.sig
    R = omega.scalar()
    _, norm_m = cv.theta_tilde(theta)
    _, norm_1 = cv.theta_tilde(theta.with_m(1))
    x_m, x_1 = R - 2 * norm_m, R - 2 * sig.m * norm_1
    reports = [
        est.harmonic_criterion(R, norm_1, sig.m),
        est.killing_constant_bound(sig.n, x_m, x_1),
        est.friedrich_report(sig.n, x_m, x_1),
        est.BoundReport("power_bound", bool(R >= 0), est.power_bound(sig.n, sig.r),
                        inputs={"n": sig.n, "r": sig.r}),
    ]
    if args.spinor:
        v = spinor_coords_from_json(load_json(args.spinor), sig)
        phi = TwistedSpinor(sig, v)
        n2 = phi.norm2()
        if n2 == 0:
            raise InputError("spinor must be nonzero")
        p0, p1 = cv.pairings(theta, eta_forms(phi))
        reports.append(est.nonharmonic_spinor_criterion([R * n2 + 2 * p0]))
        vol = (2 * np.pi) ** sig.n
        reports.append(est.killing_lower_bound_integral(sig.n, vol, [R + 2 * p0 / n2], [2 * p0 - p1], n2))
    if args.samples:
        data = load_json(args.samples)
        if "em" in data:
            try:
                em = [float(x) for x in data["em"]]
            except (TypeError, ValueError) as exc:
                raise InputError("em samples must be numbers") from exc
            if not em:
                raise InputError("em samples must be nonempty")
            reports.append(est.em_bound(sig.n, em, data.get("observed_lambda2")))
    violated = [r.bound_name for r in reports if r.comparison is not None and not r.hypothesis_met]
    report = {"command": "bounds", "signature": {"n": sig.n, "r": sig.r, "m": sig.m},
              "scalar_curvature": R, "theta_tilde_norm_m": norm_m, "theta_tilde_norm_1": norm_1,
              "reports": [r.to_json() for r in reports], "violations": violated}
    _emit(report, args.out)
    if not args.quiet:
        for r in reports:
            print(f"[{'met ' if r.hypothesis_met else 'not '}] {r.bound_name:<24} value={r.bound_value:.6g}",
                  file=sys.stderr)
    return EXIT_FAIL if violated else EXIT_OK


# -- parser ------------------------------------------------------------------

def _positive(kind):
    def parse(s):
        v = kind(s)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinlab", description="Twisted spinor identity and bound verification")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--quiet", action="store_true", help="suppress the text summary on stderr")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("verify-clifford", help="Clifford relations, closed-form basis action, structures")
    sp.add_argument("--nmax", type=int, default=12)
    sp.add_argument("--trials", type=_positive(int), default=100)
    common(sp)
    sp.set_defaults(func=cmd_verify_clifford)

    sp = sub.add_parser("verify-identities", help="vanishing, curvature and norm identities for one signature")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--trials", type=_positive(int), default=100)
    sp.add_argument("--tol", type=_positive(float), default=1e-9)
    common(sp)
    sp.set_defaults(func=cmd_verify_identities)

    sp = sub.add_parser("phi0", help="build and verify the invariant spinor phi_0")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--spinor-out", help="also write the spinor JSON to this path")
    common(sp)
    sp.set_defaults(func=cmd_phi0)

    sp = sub.add_parser("torus", help="flat-torus Dirac symbols, SL formula and spectrum")
    sp.add_argument("--config", help="torus JSON (n, r, m, theta, mode_radius)")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--scale", type=float, default=1.0, help="scale of the random connection")
    sp.add_argument("--tol", type=_positive(float), default=1e-9)
    sp.add_argument("--csv", help="write the spectrum CSV here")
    common(sp)
    sp.set_defaults(func=cmd_torus)

    sp = sub.add_parser("bounds", help="evaluate the eigenvalue and Killing-constant bounds")
    sp.add_argument("--curvature", required=True, help="curvature JSON")
    sp.add_argument("--spinor", help="twisted spinor JSON")
    sp.add_argument("--samples", help="JSON with optional 'em' samples and 'observed_lambda2'")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DimensionCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
