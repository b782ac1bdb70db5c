"""Command-line front end: named experiments with machine-readable reports.

Every command computes a row set, writes it as CSV or JSON, evaluates
its tolerance checks, and exits 0 only if all of them pass (1 on a
tolerance failure, with a per-check JSON diagnostic on stderr; 2 on a
usage error).  Output is a pure function of the configuration and seed:
fixed float formatting, no timestamps, byte-stable reruns.

Commands
--------
generators    Lie-algebra audits (orthonormality, closure, unitarity)
flow          classical cross-check: exact flow vs reduced RK4 integration
metric-audit  reduction-geometry identities on random chart points
n2            two-particle projections against the closed forms
n3-tables     three-particle sector tables against the built-in references
residual      assembled three-particle eigenfunction residuals
selftest      numerics-kernel oracles
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import angular3, geometry, matrixflow, separation, spectra2
from .liealg import (
    SymmetryClass,
    adjoint_matrix,
    build_generator_basis,
    defining_rep,
    group_element,
    rep_structure_constants,
    structure_constants,
)
from .numerics import bessel_j, digamma, gauss_legendre, sym_eig

_FLOAT_FMT = ".12g"


def _fmt(value):
    if isinstance(value, float):
        return format(value, _FLOAT_FMT)
    return str(value)


def write_report(rows: list, fmt: str, path: str) -> None:
    """Write rows (list of dicts with shared keys) as CSV or JSON.

    CSV uses a header row, '.' decimals, and %.12g floats; JSON is an
    indented array of objects with sorted keys.  Byte-stable for fixed
    inputs.
    """
    if fmt == "csv":
        lines = []
        if rows:
            keys = list(rows[0].keys())
            lines.append(",".join(keys))
            for row in rows:
                lines.append(",".join(_fmt(row[k]) for k in keys))
        else:
            lines.append("")
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        canon = [{k: v for k, v in row.items()} for row in rows]
        text = json.dumps(canon, sort_keys=True, indent=2, default=_fmt) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _check(name, value, tol, larger_is_fail=True):
    passed = value < tol if larger_is_fail else value > tol
    return {"check": name, "value": float(value), "tol": float(tol), "passed": bool(passed)}


# ---------------------------------------------------------------------------
# commands


def _cmd_generators(args):
    sym = SymmetryClass(args.klass, args.n)
    basis = build_generator_basis(sym)
    f = structure_constants(basis)
    rng = np.random.default_rng(args.seed)
    mats = basis.matrices
    nd = len(mats)

    ortho_dev = max(
        abs(float((-2.0 * np.trace(mats[a] @ mats[b])).real) - (1.0 if a == b else 0.0))
        for a in range(nd) for b in range(nd))
    dense = f.dense_closed()
    jac = np.einsum("abm,mcn->abcn", dense, dense)
    jacobi_dev = float(np.max(np.abs(jac + np.transpose(jac, (1, 2, 0, 3))
                                     + np.transpose(jac, (2, 0, 1, 3)))))
    rep = defining_rep(sym)
    rep_dev = float(np.max(np.abs(rep_structure_constants(rep) - dense)))
    unit_dev = 0.0
    inv_dev = 0.0
    for _ in range(20):
        a = rng.normal(size=sym.dim)
        a *= 0.8 / np.linalg.norm(a)
        u = group_element(basis, a)
        unit_dev = max(unit_dev, float(np.max(np.abs(u.conj().T @ u - np.eye(sym.n)))))
        inv_dev = max(inv_dev, float(np.max(np.abs(
            group_element(basis, -a) @ u - np.eye(sym.n)))))
    checks = [
        _check("trace_orthonormality", ortho_dev, args.tol),
        _check("jacobi_identity", jacobi_dev, args.tol),
        _check("defining_rep_commutators", rep_dev, args.tol),
        _check("group_element_unitarity", unit_dev, args.tol),
        _check("group_element_inverse", inv_dev, args.tol),
    ]
    return checks, checks


def _cmd_flow(args):
    sym = SymmetryClass(args.klass, args.n)
    state = matrixflow.sample_free_state(sym, args.seed, gap=args.gap)
    rep = matrixflow.cross_check(state, args.t, args.steps, samples=args.samples,
                                 tol=args.tol)
    red = matrixflow.reduce_state(state)
    rows = []
    for row in matrixflow.trajectory_rows(red, args.t, args.steps, args.samples):
        names = (["t"] + [f"x_{i+1}" for i in range(sym.n)]
                 + [f"p_{i+1}" for i in range(sym.n)] + ["H", "TrL2"])
        rows.append(dict(zip(names, row)))
    checks = [
        _check("max_position_error", rep.max_position_error, args.tol),
        _check("h_drift", rep.h_drift, args.drift_tol),
        _check("charge_drift", rep.charge_drift, args.drift_tol),
    ]
    return rows, checks


def _cmd_metric_audit(args):
    sym = SymmetryClass(args.klass, args.n)
    rows = geometry.metric_audit(sym, args.samples, args.seed, h=args.h,
                                 a_radius=args.radius)
    checks = [
        _check("residual_det", max(r["residual_det"] for r in rows), args.tol_det),
        _check("residual_factorization",
               max(r["residual_factorization"] for r in rows), args.tol_fact),
        _check("max_F", max(r["max_F"] for r in rows), args.tol_f),
        _check("max_nu_plus_f", max(r["max_nu_plus_f"] for r in rows), args.tol_nu),
    ]
    return rows, checks


def _cmd_n2(args):
    r_grid = np.linspace(0.25, 10.0, 40)
    checks = []
    rows = []
    if args.klass == "orthogonal":
        sym = SymmetryClass("orthogonal", 2)
        k_mat = np.array([[0.9, 0.35], [0.35, -0.4]])
        params = spectra2.plane_wave_params(sym, k_mat)
        for nu in range(0, 4):
            proj = spectra2.so2_project(params, nu, r_grid, n_quad=args.quad)
            ref = spectra2.so2_reference(params, nu, r_grid)
            dev = float(np.max(np.abs(proj - ref)))
            checks.append(_check(f"so2_nu{nu}_closed_form", dev, args.tol))
            if nu == args.emit:
                rows = [{"r": float(r), "re_psi": float(p.real), "im_psi": float(p.imag),
                         "reference": float(ref_i.real)}
                        for r, p, ref_i in zip(r_grid, proj, ref)]
        esum = sum(spectra2.energy_split(params))
        target = 0.5 * float(np.trace(k_mat @ k_mat).real)
        checks.append(_check("energy_split_identity", abs(esum - target), 1e-13))
    else:
        sym = SymmetryClass("unitary", 2)
        k_mat = np.array([[0.8, 0.3 + 0.25j], [0.3 - 0.25j, -0.5]])
        params = spectra2.plane_wave_params(sym, k_mat)
        sample = np.array([0.5, 1.0, 2.0, 3.5, 5.0])
        for l in range(0, 5):
            proj = spectra2.su2_project(params, l, 0, sample, n_quad=args.quad)
            shape = spectra2.su2_reference_shape(params, l, 0, sample)
            ratios = proj / shape
            dev = float(np.max(np.abs(ratios - ratios[0])) / np.abs(ratios[0]))
            checks.append(_check(f"su2_l{l}_ratio_r_independent", dev, args.tol_ratio))
            if l == args.emit:
                rows = [{"r": float(r), "re_psi": float(p.real), "im_psi": float(p.imag),
                         "reference": float(s)}
                        for r, p, s in zip(sample, proj, shape)]
    return rows, checks


def _cmd_n3_tables(args):
    rows_raw = angular3.reference_tables(args.klass, args.dim, exact=args.exact)
    checks = []
    if args.klass == "orthogonal":
        keys = ["p", "delta_b_odd", "delta_psi_odd", "delta_b_even", "delta_psi_even"]
        reference = angular3.REFERENCE_TABLE_ORTHOGONAL
    else:
        keys = ["l", "delta_b_low", "delta_b_high", "delta_psi"]
        reference = angular3.REFERENCE_TABLE_UNITARY
    rows = [dict(zip(keys, row)) for row in rows_raw]
    if args.dim == 100 and not args.exact:
        dev = 0.0
        for row in rows_raw:
            expected = reference[row[0]]
            dev = max(dev, max(abs(a - b) for a, b in zip(row[1:], expected)))
        checks.append(_check("reference_table_match", dev, 0.005))
    return rows, checks


def _cmd_residual(args):
    sym = SymmetryClass(args.klass, 3)
    if args.klass == "orthogonal":
        problem = angular3.orthogonal_sector_matrix("odd", args.dim)
    else:
        problem = angular3.unitary_sector_matrix("low", args.dim, exact=True, coupling=2.0)
    mode = angular3.mode_by_label(angular3.solve_modes(problem), 1)
    grid = separation.GridSpec(points=args.points)
    rows = []
    checks = []
    for regime in ("free", "harmonic"):
        if regime == "free":
            radial = separation.radial_factor(3, mode.b, "free", k=1.1)
            com = separation.com_factor(3, "free", k=0.9)
        else:
            radial = separation.radial_factor(3, mode.b, "harmonic", nu=0, omega=1.0)
            com = separation.com_factor(3, "harmonic", level=0, omega=1.0)
        rep = separation.assemble_and_residual(sym, 2, mode, radial, com, grid, h=args.h)
        rows.append({"class": rep.kind, "I": rep.repulsive + 1, "l": rep.l,
                     "regime": rep.regime, "grid": rep.points, "h": rep.h,
                     "residual": rep.residual, "energy": rep.energy})
        checks.append(_check(f"residual_{regime}", rep.residual, args.tol))
    control = separation.control_residual(points=args.points, h=args.h)
    rows.append({"class": "control", "I": 0, "l": 0, "regime": "plane-wave",
                 "grid": args.points, "h": args.h, "residual": control, "energy": 0.0})
    checks.append(_check("residual_control", control, args.tol_control))
    return rows, checks


def _cmd_selftest(args):
    checks = []
    for n in (4, 8, 16):
        rule = gauss_legendre(n)
        dev = 0.0
        for deg in range(0, 2 * n):
            exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
            dev = max(dev, abs(float(np.sum(rule.weights * rule.nodes ** deg)) - exact))
        checks.append(_check(f"quadrature_exactness_n{n}", dev, 1e-12))
    rng = np.random.default_rng(7)
    dev = 0.0
    for _ in range(5):
        m = rng.normal(size=(40, 40))
        m = 0.5 * (m + m.T)
        dec = sym_eig(m)
        dev = max(dev, float(np.max(np.abs(
            dec.vectors @ np.diag(dec.values) @ dec.vectors.T - m))) / np.linalg.norm(m))
    checks.append(_check("eigensolver_reconstruction", dev, 1e-9))
    xs = np.linspace(0.5, 20.0, 12)
    dev = max(abs(bessel_j(1.0, x) + bessel_j(3.0, x) - 4.0 / x * bessel_j(2.0, x))
              for x in xs)
    checks.append(_check("bessel_recurrence", dev, 1e-9))
    dev = max(abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) for x in (0.5, 1.0, 2.25))
    checks.append(_check("digamma_recurrence", dev, 1e-12))
    checks.append(_check("digamma_euler", abs(digamma(1.0) + 0.5772156649015329), 1e-12))
    return checks, checks


def _add_common(p, *, seed=True, fmt=True):
    if seed:
        p.add_argument("--seed", type=int, default=7)
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="report path (default: <outdir>/<command>.<format>)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincm",
        description="Reduction laboratory: matrix flows, chart geometry, and spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generators", help="Lie-algebra audits")
    p.add_argument("--class", dest="klass", choices=("orthogonal", "unitary"), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_common(p)
    p.set_defaults(func=_cmd_generators)

    p = sub.add_parser("flow", help="classical cross-check")
    p.add_argument("--class", dest="klass", choices=("orthogonal", "unitary"), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--gap", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--drift-tol", type=float, default=1e-9)
    _add_common(p)
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("metric-audit", help="reduction-geometry identities")
    p.add_argument("--class", dest="klass", choices=("orthogonal", "unitary"), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("--tol-det", type=float, default=1e-8)
    p.add_argument("--tol-fact", type=float, default=1e-10)
    p.add_argument("--tol-f", type=float, default=1e-5)
    p.add_argument("--tol-nu", type=float, default=1e-4)
    _add_common(p)
    p.set_defaults(func=_cmd_metric_audit)

    p = sub.add_parser("n2", help="two-particle closed-form checks")
    p.add_argument("--class", dest="klass", choices=("orthogonal", "unitary"), required=True)
    p.add_argument("--quad", type=int, default=256)
    p.add_argument("--emit", type=int, default=1, help="mode index whose profile is written")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--tol-ratio", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=_cmd_n2)

    p = sub.add_parser("n3-tables", help="three-particle sector tables")
    p.add_argument("--class", dest="klass", choices=("orthogonal", "unitary"), required=True)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--exact", action="store_true",
                   help="unitary: use the full wall integrals instead of the approximation")
    _add_common(p)
    p.set_defaults(func=_cmd_n3_tables)

    p = sub.add_parser("residual", help="assembled eigenfunction residuals")
    p.add_argument("--class", dest="klass", choices=("orthogonal", "unitary"), required=True)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--tol-control", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=_cmd_residual)

    p = sub.add_parser("selftest", help="numerics-kernel oracles")
    _add_common(p)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, checks = args.func(args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1
    outdir = os.environ.get("SPINCM_OUTDIR", ".")
    out = args.out if getattr(args, "out", None) else os.path.join(
        outdir, f"{args.command}.{args.format}")
    write_report(rows, args.format, out)
    failed = [c for c in checks if not c["passed"]]
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status} {c['check']}: {c['value']:.3e} (tol {c['tol']:.1e})")
    if failed:
        print(json.dumps(failed, default=_fmt), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
