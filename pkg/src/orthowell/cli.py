"""Command-line front end.

Usage:
    orthowell modes --family III --cutoff 4
    orthowell gram --family I --cutoff 16 --format csv
    orthowell sift --cutoff 8
    orthowell expand --family IV --cutoff 63 --fn const1 --emit csv --out samples.csv
    orthowell operators --check all --cutoff 8 --ref-cutoff 32
    orthowell kets-check
    orthowell mixed-bc --a 1 --hmax 10 --emit csv
    orthowell converge --family III --p-target 3.14159 --emit csv

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 invalid value or range, 4 output not writable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .analysis import convergence_study, mixed_bc_scan
from .core import Family, WellConfig, enumerate_modes, energy_of
from .expansion import boundary_probe, expand, partial_sum, resolve_function
from .kets import run_checks
from .operators import (
    HAMILTONIAN,
    PROJECTOR,
    build_operator,
    check_linear_dependence,
    commutator_study,
    idempotence_defect,
    spectral_action_check,
)
from .overlap import gram_cross, gram_family, identify_family, sift_families
from .quadrature import QuadratureConvergenceError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_UNWRITABLE = 4


class _OutputError(Exception):
    pass


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def to_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def _write(text: str, path: str | None, stream=None):
    if path is None:
        (stream or sys.stdout).write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _OutputError(f"cannot write {path}: {exc}") from exc


def _check(name, value, tol, passed=None):
    passed = (value <= tol) if passed is None else passed
    return {"name": name, "value": value, "tol": tol, "passed": bool(passed)}


def _report(args, outputs, checks):
    return {
        "toolkit": "orthowell",
        "version": __version__,
        "subcommand": args.command,
        "inputs": {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "func")},
        "outputs": outputs,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def _cfg(args) -> WellConfig:
    return WellConfig(args.a, args.hbar, args.mass)


def _emit_report(args, report):
    _write(to_json(report), args.out)


# -- subcommands ---------------------------------------------------------------

def cmd_modes(args):
    cfg = _cfg(args)
    modes = enumerate_modes(args.family, args.cutoff)
    rows = [
        {"j": m.j, "kind": m.kind.name.lower(), "parity": m.parity, "label": m.label, "energy": energy_of(cfg, m.j)}
        for m in modes
    ]
    if args.emit == "csv":
        _write(to_csv(["j", "kind", "parity", "label", "energy"], [list(r.values()) for r in rows]), args.out)
        return True
    checks = [_check("modes_nonempty", len(rows), 0, passed=len(rows) > 0)]
    report = _report(args, {"modes": rows, "levels": [r["label"] for r in rows]}, checks)
    _emit_report(args, report)
    return report["passed"]


def cmd_gram(args):
    cfg = _cfg(args)
    if args.cross:
        rep = gram_cross(cfg, args.family, args.cross, args.cutoff, args.tol)
        cols = rep.col_modes
        checks = []
    else:
        rep = gram_family(cfg, args.family, args.cutoff, args.tol)
        cols = rep.modes
        checks = [_check("orthonormality", rep.max_offdiag, args.tol, passed=rep.is_orthonormal)]
    if args.emit == "csv":
        header = ["mode"] + [str(m) for m in cols]
        _write(to_csv(header, [[str(m)] + list(row) for m, row in zip(rep.modes, rep.matrix)]), args.out)
    else:
        _emit_report(args, _report(args, {**rep.to_dict(), "matrix": rep.matrix}, checks))
    return all(c["passed"] for c in checks)


def cmd_sift(args):
    cfg = _cfg(args)
    sets = sift_families(cfg, args.cutoff)
    found = []
    for s in sets:
        fam = identify_family(s, args.cutoff)
        found.append({"family": fam.value if fam else None, "modes": [str(m) for m in sorted(s)]})
    names = sorted(f["family"] or "?" for f in found)
    checks = [
        _check("four_maximal_sets", len(sets), 4, passed=len(sets) == 4),
        _check("sets_match_families", 0, 0, passed=names == sorted(f.value for f in Family)),
    ]
    _emit_report(args, _report(args, {"families": found}, checks))
    return all(c["passed"] for c in checks)


def cmd_expand(args):
    cfg = _cfg(args)
    f = resolve_function(args.fn, cfg)
    rep = expand(cfg, args.family, args.cutoff, f, n_samples=args.samples)
    probe = boundary_probe(cfg, args.family, args.cutoff, f)
    checks = [
        _check("bessel", rep.parseval_ratio, 1 + 1e-9),
        _check(
            "pythagoras",
            abs(rep.l2_residual**2 + rep.coeff_sq_sum - rep.norm_sq),
            1e-8,
        ),
        _check("quadrature_converged", rep.quadrature["max_coeff_change"], 1e-10),
        _check("boundary_invariants", max(probe["residuals"].values()), max(probe["tolerances"].values()), probe["holds"]),
    ]
    report = _report(args, {**rep.to_dict(), "boundary_probe": probe}, checks)
    if args.emit == "csv":
        xs = np.linspace(-cfg.a, cfg.a, args.samples)
        s = partial_sum(cfg, rep.modes, rep.coeffs, xs)
        _write(to_csv(["x", "f", "s_n"], zip(xs, f(xs), s)), args.out)
        if args.out is None:
            sys.stderr.write(to_json(report))
        else:
            _write(to_json(report), args.out + ".json")
    else:
        _emit_report(args, report)
    return report["passed"]


def cmd_operators(args):
    cfg = _cfg(args)
    J, J_ref = args.cutoff, args.ref_cutoff
    if args.matrix:
        op = build_operator(cfg, args.matrix, J, J_ref, args.kind, not args.as_printed)
        header = ["mode"] + [str(m) for m in op.ref_modes]
        _write(to_csv(header, [[str(m)] + list(row) for m, row in zip(op.ref_modes, op.matrix)]), args.out)
        return True
    wanted = {"lindep", "commutator", "spectral", "idempotence"} if args.check == "all" else {args.check}
    outputs, checks = {}, []
    if "lindep" in wanted:
        r = check_linear_dependence(cfg, J, J_ref, include_constant=not args.as_printed, tol=args.tol)
        outputs["linear_dependence"] = r
        checks.append(_check("hamiltonian_linear_dependence", r["hamiltonian_residual"], args.tol))
        checks.append(_check("projector_linear_dependence", r["projector_residual"], args.tol))
    if "commutator" in wanted:
        r = commutator_study(cfg, "I", "II", J, J_ref)
        outputs["commutator_I_II"] = r
        checks.append(_check("commutator_nonzero", r["commutator_norm"], 0.0, passed=r["commutator_norm"] > 0))
        checks.append(_check("commutator_stable", r["relative_change"], 0.2))
    if "spectral" in wanted:
        outputs["spectral_action"] = {f.value: spectral_action_check(cfg, f, J, J_ref) for f in Family}
        checks.append(
            _check("spectral_action_III_exact", outputs["spectral_action"]["III"]["max_residual"], args.tol)
        )
    if "idempotence" in wanted:
        defects = {f.value: idempotence_defect(build_operator(cfg, f, J, J_ref, PROJECTOR)) for f in Family}
        outputs["idempotence_defect"] = defects
        checks.append(_check("projector_III_idempotent", defects["III"], args.tol))
    report = _report(args, outputs, checks)
    if args.emit == "csv":
        _write(to_csv(["name", "value", "tol", "passed"], [list(c.values()) for c in checks]), args.out)
    else:
        _emit_report(args, report)
    return report["passed"]


def cmd_kets_check(args):
    rows = run_checks(tol=args.tol)
    checks = [_check(f"{r['check']}@p={r['p']:g}", r["value"], None, r["passed"]) for r in rows]
    _emit_report(args, _report(args, {"rows": rows}, checks))
    return all(r["passed"] for r in rows)


def cmd_mixed_bc(args):
    cfg = _cfg(args)
    rep = mixed_bc_scan(cfg, args.hmax, args.samples, swapped=args.swapped)
    det_dev = max(abs(d - math.cos(2 * h * cfg.a)) for h, d in zip(rep.h_grid, rep.det_values))
    checks = [
        _check("determinant_matches_cos2ha", det_dev, 1e-14),
        _check(
            "candidates_satisfy_conditions",
            max((max(v["value_residual"], v["derivative_residual"]) for v in rep.verdicts), default=0.0),
            1e-10,
        ),
    ]
    if args.emit == "csv":
        cols = ["h", "A", "B", "value_residual", "derivative_residual", "norm"]
        _write(to_csv(cols, [[v[c] for c in cols] for v in rep.verdicts]), args.out)
    else:
        _emit_report(args, _report(args, rep.to_dict(), checks))
    return all(c["passed"] for c in checks)


def cmd_converge(args):
    cfg = _cfg(args)
    a_list = [float(v) for v in args.a_list.split(",")]
    rows = convergence_study(cfg, args.family, args.p_target, args.window, a_list)
    checks = []
    for key in ("error_even", "error_odd"):
        errs = [r[key] for r in rows]
        ups = sum(1 for e0, e1 in zip(errs, errs[1:]) if e1 > e0 + 1e-12)
        checks.append(_check(f"{key}_nonincreasing", ups, 1, passed=ups <= 1 and errs[-1] <= errs[0] + 1e-12))
    if args.emit == "csv":
        cols = ["a", "j", "p_selected", "momentum_gap", "error_even", "error_odd"]
        _write(to_csv(cols, [[r[c] for c in cols] for r in rows]), args.out)
    else:
        _emit_report(args, _report(args, {"rows": rows}, checks))
    return all(c["passed"] for c in checks)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=1.0, help="well half-width")
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--cutoff", type=int, default=16, help="largest momentum grid index")
    common.add_argument("--ref-cutoff", type=int, default=64, help="reference (family III) cutoff")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--emit", "--format", dest="emit", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="orthowell", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"orthowell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modes", parents=[common], help="list family modes and levels")
    p.add_argument("--family", default="III")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("gram", parents=[common], help="Gram matrix of a family")
    p.add_argument("--family", default="I")
    p.add_argument("--cross", default=None, help="second family for a cross Gram matrix")
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("sift", parents=[common], help="discover maximal orthogonal families")
    p.set_defaults(func=cmd_sift)

    p = sub.add_parser("expand", parents=[common], help="expand a built-in function")
    p.add_argument("--family", default="III")
    p.add_argument("--fn", default="const1", help="const1, linear, square, triangle, gauss(sigma)")
    p.add_argument("--samples", type=int, default=2001)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("operators", parents=[common], help="operator identity checks")
    p.add_argument("--check", choices=("all", "lindep", "commutator", "spectral", "idempotence"), default="all")
    p.add_argument("--matrix", default=None, help="export this family's matrix as CSV instead")
    p.add_argument("--kind", choices=(HAMILTONIAN, PROJECTOR), default=HAMILTONIAN)
    p.add_argument("--as-printed", action="store_true", help="omit the constant mode from the sums")
    p.set_defaults(func=cmd_operators)

    p = sub.add_parser("kets-check", parents=[common], help="formal delta-algebra checks")
    p.set_defaults(func=cmd_kets_check)

    p = sub.add_parser("mixed-bc", parents=[common], help="mixed boundary-condition determinant scan")
    p.add_argument("--hmax", type=float, default=10.0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--swapped", action="store_true", help="psi(-a) = psi'(a) = 0 instead")
    p.set_defaults(func=cmd_mixed_bc)

    p = sub.add_parser("converge", parents=[common], help="large-well convergence to free doublets")
    p.add_argument("--family", default="III")
    p.add_argument("--p-target", type=float, default=math.pi)
    p.add_argument("--window", type=float, default=1.0)
    p.add_argument("--a-list", default="2,4,8,16")
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.cutoff < 1 or args.ref_cutoff < 1:
            raise ValueError("cutoffs must be >= 1")
        if not args.tol > 0:
            raise ValueError("tol must be positive")
        ok = args.func(args)
    except _OutputError as exc:
        sys.stderr.write(f"orthowell: {exc}\n")
        return EXIT_UNWRITABLE
    except QuadratureConvergenceError as exc:
        sys.stderr.write(f"orthowell: {exc}\n")
        return EXIT_CHECK_FAILED
    except (ValueError, TypeError) as exc:
        sys.stderr.write(f"orthowell: invalid input: {exc}\n")
        return EXIT_INVALID
    return EXIT_OK if ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
