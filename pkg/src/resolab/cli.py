"""Command-line entry point: load models, run analyses, emit JSON/CSV reports.

Exit codes: 0 success, 1 analysis failure (a computed verdict came back
negative), 2 usage error (bad flags, unreadable or invalid input).
Errors go to stderr as a human-readable line followed by a JSON mirror.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import decay as decay_mod
from . import hardy as hardy_mod
from .config import TOL, Tolerances
from .model import (BUILTIN_NAMES, SchemaError, builtin_model, load_model,
                    serialize_model, validate_model)
from .oracle import Contour
from .resonances import find_resonances, verify_lemma
from .scattering import smatrix, theorem2_conditions, unitarity_defect

SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


class AnalysisFailure(RuntimeError):
    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


def _round_floats(obj):
    """Normalize floats to 17 significant digits for byte-stable output."""
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, complex):
        return [_round_floats(obj.real), _round_floats(obj.imag)]
    return obj


def _dump(doc: dict, path: Path) -> None:
    doc = dict(doc)
    doc.setdefault("schema_version", SCHEMA_VERSION)
    path.write_text(json.dumps(_round_floats(doc), indent=2, sort_keys=False) + "\n",
                    encoding="utf-8")


def _parse_complex(text: str) -> complex:
    t = text.strip().replace("i", "j")
    if t in ("j", "+j"):
        t = "1j"
    elif t == "-j":
        t = "-1j"
    try:
        return complex(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def _parse_region(text: str) -> Contour:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("region must be re_min,re_max,im_min,im_max")
    try:
        a, b, c, d = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"bad region {text!r}") from exc
    return Contour(re_min=a, re_max=b, im_min=c, im_max=d)


def _load(spec: str, tol: Tolerances, *, require: bool = True):
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        try:
            return builtin_model(name, tol=tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"model file not found: {spec}")
    try:
        return load_model(path.read_text(encoding="utf-8"), tol=tol, require=require)
    except (SchemaError, ValueError) as exc:
        raise UsageError(f"invalid model {spec}: {exc}") from exc


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args, tol):
    m = _load(args.model, tol, require=False)
    report = validate_model(m, tol=tol)
    doc = report.to_json()
    _dump(doc, _out_dir(args) / "validate.json")
    print(json.dumps(_round_floats(doc), indent=2))
    if not report.ok:
        raise AnalysisFailure("model invariants violated", doc)
    return 0


def _cmd_smatrix(args, tol):
    m = _load(args.model, tol)
    sm = smatrix(m, tol=tol)
    grid = np.linspace(args.lam_min, args.lam_max, args.lam_points)
    defects = [unitarity_defect(sm, float(x), tol=tol) for x in grid]
    doc = sm.to_json()
    doc["unitarity_sweep"] = {
        "lam_min": args.lam_min, "lam_max": args.lam_max,
        "points": args.lam_points, "max_defect": float(max(defects)),
    }
    _dump(doc, _out_dir(args) / "smatrix.json")
    print(f"max unitarity defect on [{args.lam_min}, {args.lam_max}]: "
          f"{max(defects):.3e}")
    if max(defects) > 1e-8:
        raise AnalysisFailure("unitarity defect exceeds 1e-8", doc)
    return 0


def _cmd_poles(args, tol):
    m = _load(args.model, tol)
    region = _parse_region(args.region)
    records = find_resonances(m, region, tol=tol)
    sm = smatrix(m, tol=tol)
    doc = {
        "model": m.name,
        "region": [region.re_min, region.re_max, region.im_min, region.im_max],
        "resonances": [r.to_json() for r in records],
        "audit_count": sum(r.order for r in records),
        "smatrix_poles_lower": [p.to_json() for p in sm.poles_lower],
        "smatrix_poles_upper": [p.to_json() for p in sm.poles_upper],
    }
    _dump(doc, _out_dir(args) / "poles.json")
    for r in records:
        print(f"resonance {r.zeta:.12g}  order {r.order}  |det| {r.det_residual:.3e}")
    print(f"audit count: {doc['audit_count']}")
    return 0


def _cmd_lemma(args, tol):
    m = _load(args.model, tol)
    region = _parse_region(args.region)
    records = find_resonances(m, region, tol=tol)
    reports = [verify_lemma(m, r.zeta, tol=tol) for r in records]
    doc = {"model": m.name, "reports": [r.to_json() for r in reports]}
    _dump(doc, _out_dir(args) / "lemma.json")
    for r in reports:
        print(f"zeta {r.zeta:.12g}  dim ker {r.dim_ker_s}  "
              f"angle {r.max_principal_angle:.3e}  {r.verdict}")
    if any(r.verdict == "fail" for r in reports):
        raise AnalysisFailure("lemma verification failed", doc)
    return 0


def _t_grid(args) -> np.ndarray:
    if args.t_log:
        return np.geomspace(max(args.t_min, 1e-6), args.t_max, args.t_points)
    return np.linspace(args.t_min, args.t_max, args.t_points)


def _cmd_decay(args, tol):
    bw = decay_mod.BreitWigner(args.c, args.alpha)
    ts = _t_grid(args)
    out = _out_dir(args)
    with open(out / "survival.csv", "w", encoding="utf-8") as fp:
        decay_mod.write_survival_csv(bw, ts, fp)
    print(f"wrote {out / 'survival.csv'} ({len(ts)} points, c={bw.c}, alpha={bw.alpha})")
    return 0


def _cmd_nogo(args, tol):
    bw = decay_mod.BreitWigner(args.c, args.alpha)
    ts = _t_grid(args)
    report = decay_mod.nogo_report(bw, ts, tol=tol)
    out = _out_dir(args)
    with open(out / "nogo.csv", "w", encoding="utf-8") as fp:
        decay_mod.write_survival_csv(report, fp=fp)
    doc = report.to_json()
    _dump(doc, out / "nogo.json")
    print(f"tail slope {report.tail_slope:.4f} +- {report.tail_slope_stderr:.4f}; "
          f"max log10 ratio {report.max_log10_ratio:.2f}; verdict {report.verdict}")
    if report.verdict != "non-exponential":
        raise AnalysisFailure("no-go verdict inconclusive", doc)
    return 0


def _snap_to_pole(sm, z: complex) -> complex:
    """Replace z by the nearest catalogued pole when within matching radius.

    Lets hand-typed, decimal-truncated resonance locations hit the exact
    computed pole instead of failing the strict null-vector threshold.
    """
    for p in sm.all_poles:
        if abs(z - p.location) <= 1e-6 * max(1.0, abs(z)):
            return complex(p.location)
    return z


def _auto_k0(sm, bases, zeta, tol) -> tuple[str, np.ndarray]:
    zbar = complex(np.conj(zeta))
    if sm.is_pole(zeta):
        b = sm.s(zbar).conj().T
        _u, s, vh = np.linalg.svd(b)
        if s[-1] > 1e-6 * max(s[0], 1.0):
            raise AnalysisFailure(f"S({zbar})* has no null vector")
        return "(i)(a)", vh[-1].conj()
    if sm.is_pole(zbar):
        _c, a = hardy_mod._normalized_leading(sm, bases.p, zbar, tol)
        u, s, _vh = np.linalg.svd(a)
        if s[-1] > 1e-6 * max(s[0], 1.0):
            raise AnalysisFailure(
                f"leading coefficient at {zbar} is invertible: no eigenvector there")
        return "(i)(b)", u[:, -1]
    raise AnalysisFailure(f"{zeta} is neither a pole of S nor conjugate to one")


def _cmd_theorem2(args, tol):
    m = _load(args.model, tol)
    sm = smatrix(m, tol=tol)
    conditions = theorem2_conditions(sm, tol=tol)
    doc = {"model": m.name, "conditions": conditions.to_json()}
    failures = []
    if not conditions.all_pass:
        failures.append("hypotheses fail")

    bases = None
    if args.check_eigen or args.check_resolvent:
        bases = hardy_mod.subspace_bases(m, tol=tol, sm=sm)

    if args.check_eigen:
        zeta = _parse_complex(args.check_eigen)
        snapped = _snap_to_pole(sm, zeta)
        if snapped == zeta:
            snapped = complex(np.conj(_snap_to_pole(sm, complex(np.conj(zeta)))))
        zeta = snapped
        _case, k0 = _auto_k0(sm, bases, zeta, tol)
        rep = hardy_mod.eigenvector_check(m, zeta, k0, tol=tol, sm=sm, bases=bases)
        doc["eigen"] = rep.to_json()
        print(f"eigen case {rep.case}: condition residual {rep.condition_residual:.3e}, "
              f"orthogonality {rep.max_orthogonality:.3e}")
        if not rep.eigenvector_certified:
            failures.append("eigenvector certificate failed")

    if args.check_resolvent:
        zeta = _parse_complex(args.check_resolvent)
        region = _parse_region(args.region)
        records = find_resonances(m, region, tol=tol)
        if not records:
            raise AnalysisFailure("no resonance available to build a test function")
        from .resonances import livsic_kernel
        r = records[0]
        e_vec = livsic_kernel(m, r.zeta, tol=tol)[:, 0]
        k_test = m.coupling(r.zeta) @ e_vec
        g = hardy_mod._bw_vector(np.asarray(k_test), r.zeta, tol)
        rep = hardy_mod.resolvent_construct(m, zeta, g, tol=tol, sm=sm, bases=bases)
        doc["resolvent"] = rep.to_json()
        print(f"resolvent case {rep.case}: cancellation {rep.cancellation_residual:.3e}, "
              f"orthogonality {rep.f_orthogonality:.3e}")
        if not rep.all_certificates_pass:
            failures.append("resolvent certificate failed")

    _dump(doc, _out_dir(args) / "theorem2.json")
    print("conditions: " + ("pass" if conditions.all_pass else "FAIL"))
    if failures:
        raise AnalysisFailure("; ".join(failures), doc)
    return 0


def _cmd_example(args, tol):
    try:
        m = builtin_model(args.name, tol=tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _out_dir(args) / f"{args.name}.json"
    _dump(serialize_model(m), out)
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------
# wiring


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resolab",
        description="Resonances, scattering poles, and decay semigroups of "
                    "finite-rank Friedrichs models.")
    # shared options, accepted both before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    for target, out_default, tol_default in (
            (parser, ".", None),
            (common, argparse.SUPPRESS, argparse.SUPPRESS)):
        target.add_argument("--out", default=out_default,
                            help="output directory (default: .)")
        target.add_argument("--tol-scale", type=float, default=tol_default,
                            help="global tolerance multiplier "
                                 "(overrides RESOLAB_TOL_SCALE)")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(
                                    parents=[common], **kw))

    def with_model(p):
        p.add_argument("--model", required=True,
                       help="model JSON path or builtin:<name>; builtins: "
                            + ", ".join(BUILTIN_NAMES))

    with_model(sub.add_parser("validate", help="schema and invariant report"))

    p = sub.add_parser("smatrix", help="scattering matrix data and unitarity sweep")
    with_model(p)
    p.add_argument("--lam-min", type=float, default=-50.0)
    p.add_argument("--lam-max", type=float, default=50.0)
    p.add_argument("--lam-points", type=int, default=1000)

    for name, helptext in (("poles", "resonance search with argument-principle audit"),
                           ("lemma", "kernel/multiplicity verification at each resonance")):
        p = sub.add_parser(name, help=helptext)
        with_model(p)
        p.add_argument("--region", default="-5,5,-5,-1e-6",
                       help="search rectangle re_min,re_max,im_min,im_max (below the axis)")

    for name, helptext in (("decay", "truncated survival amplitude CSV"),
                           ("nogo", "non-exponential decay demonstration")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--c", type=float, default=1.0, help="resonance position Re zeta")
        p.add_argument("--alpha", type=float, default=0.05, help="resonance width")
        p.add_argument("--t-min", type=float, default=0.1)
        p.add_argument("--t-max", type=float, default=1e4 if name == "nogo" else 20.0)
        p.add_argument("--t-points", type=int, default=200)
        p.add_argument("--t-log", action="store_true", default=(name == "nogo"),
                       help="geometric time grid")

    p = sub.add_parser("theorem2", help="spectral characterization certificates")
    with_model(p)
    p.add_argument("--check-eigen", metavar="ZETA", default=None,
                   help="certify the eigenvector at this lower-half-plane point")
    p.add_argument("--check-resolvent", metavar="ZETA", default=None,
                   help="run the resolvent construction at this point")
    p.add_argument("--region", default="-5,5,-5,-1e-6",
                   help="resonance search region for the test function")

    p = sub.add_parser("example", help="write a builtin model file")
    p.add_argument("name", choices=list(BUILTIN_NAMES))
    return parser


_HANDLERS = {
    "validate": _cmd_validate,
    "smatrix": _cmd_smatrix,
    "poles": _cmd_poles,
    "lemma": _cmd_lemma,
    "decay": _cmd_decay,
    "nogo": _cmd_nogo,
    "theorem2": _cmd_theorem2,
    "example": _cmd_example,
}


def _emit_error(kind: str, message: str, payload: dict | None = None) -> None:
    print(f"error: {message}", file=sys.stderr)
    mirror = {"schema_version": SCHEMA_VERSION, "error": kind, "message": message}
    if payload:
        mirror["detail"] = _round_floats(payload)
    print(json.dumps(mirror), file=sys.stderr)


_VALUE_OPTIONS = ("--region", "--check-eigen", "--check-resolvent")


def _join_negative_values(argv):
    """Fold ``--opt -2,2,...`` into ``--opt=-2,2,...``.

    argparse treats an option value beginning with ``-`` as a flag, which
    breaks region bounds and complex points in the lower half-plane.
    """
    out = []
    skip = False
    for k, arg in enumerate(argv):
        if skip:
            skip = False
            continue
        if (arg in _VALUE_OPTIONS and k + 1 < len(argv)
                and argv[k + 1].startswith("-")):
            out.append(arg + "=" + argv[k + 1])
            skip = True
        else:
            out.append(arg)
    return out


def run(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_negative_values(list(argv)))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    tol = TOL if args.tol_scale is None else TOL.scaled(args.tol_scale)
    try:
        return _HANDLERS[args.command](args, tol)
    except UsageError as exc:
        _emit_error("usage", str(exc))
        return 2
    except AnalysisFailure as exc:
        _emit_error("analysis", str(exc), exc.payload)
        return 1
    except (ValueError, ArithmeticError) as exc:
        _emit_error("analysis", str(exc))
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
