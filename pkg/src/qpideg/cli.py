"""Command-line front end.

Exit codes: 0 success, 1 a verification reported failure, 2 malformed input,
3 precondition violated, 4 internal disagreement between independent
computations, 5 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cyclotomic import CycNum
from .dda import OrePresentation, check_hypothesis, dda_full, dda_pullback
from .errors import (
    BudgetExceeded,
    PullbackDiverged,
    QpiError,
    RelationResidual,
    RoundTripFailed,
)
from .pideg import pideg_quotient
from .pipeline import pullback_representation
from .presets import preset
from .qmatrices import (
    CALIBRATED_CONVENTION,
    CauchonDiagram,
    calibration_report,
    enumerate_diagrams,
    kernel_vs_odd_cycles,
    pideg_qm_formula,
    qm_exponent_matrix,
    toric_permutation,
)
from .representation import (
    GeneratorImages,
    TorusRepParams,
    certify_irreducible,
    quantum_torus_representation,
    verify_affine_relations,
)
from .skew import check_skew, delete_rows_cols, skew_normal_form

EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_DISAGREE, EXIT_BUDGET = 1, 2, 3, 4, 5


class InputError(Exception):
    """Malformed input file or argument (exit 2)."""


class Disagreement(Exception):
    """Two independent computations disagree (exit 4)."""


# --- input helpers ----------------------------------------------------------

def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from None


def _load_matrix(path: str):
    data = _read_json(path)
    entries = data["entries"] if isinstance(data, dict) and "entries" in data else data
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise InputError("matrix JSON must be {'n':..,'entries':[[..],..]} or a list of rows")
    try:
        rows = [[int(x) for x in r] for r in entries]
    except (TypeError, ValueError):
        raise InputError("matrix entries must be integers") from None
    if isinstance(data, dict) and "n" in data and int(data["n"]) != len(rows):
        raise InputError(f"declared n={data['n']} but {len(rows)} rows given")
    return rows


def _parse_indices(text: str | None) -> list[int]:
    """'2,4' (1-based) -> [1, 3]."""
    if not text:
        return []
    try:
        return [int(x) - 1 for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"bad index list {text!r}") from None


def _parse_scalars(text: str | None, ell: int):
    if not text:
        return ()
    try:
        return tuple(CycNum.from_rational(ell, Fraction(x)) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad scalar list {text!r}") from None


def _load_diagram(spec: str, m: int | None, n: int | None) -> CauchonDiagram:
    path = Path(spec)
    text = path.read_text() if path.exists() else spec.replace("/", "\n")
    if text.lstrip().startswith("{"):
        try:
            return CauchonDiagram.from_json(text)
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise InputError(f"bad diagram JSON: {exc}") from None
    try:
        d = CauchonDiagram.from_text(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if (m and m != d.m) or (n and n != d.n):
        raise InputError(f"diagram is {d.m}x{d.n}, expected {m}x{n}")
    return d


def _presentation(args) -> OrePresentation:
    if getattr(args, "presentation", None):
        try:
            return OrePresentation.from_json(_read_json(args.presentation))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad presentation JSON: {exc}") from None
    if getattr(args, "preset", None):
        return preset(args.preset)
    raise InputError("give --preset or --presentation")


def _cauchon(args, p: OrePresentation) -> list[int]:
    if getattr(args, "diagram", None):
        if not p.name.startswith("qm"):
            raise InputError("--diagram only applies to quantum-matrix presets")
        d = _load_diagram(args.diagram, None, None)
        if d.m * d.n != p.N:
            raise InputError(f"diagram has {d.m * d.n} cells but the presentation {p.N} generators")
        return d.indices()
    return _parse_indices(getattr(args, "cauchon", None))


# --- output helpers ---------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(args, payload: dict, text: str | None = None):
    if args.format == "json" or text is None:
        print(dumps(payload))
    else:
        print(text)


def _fmt_matrix(rows) -> str:
    return "\n".join("  [" + ", ".join(str(x) for x in r) + "]" for r in rows)


# --- commands ---------------------------------------------------------------

def cmd_snf(args):
    m = check_skew(_load_matrix(args.matrix))
    snf = skew_normal_form(m)
    text = (
        f"invariant factors: {list(snf.invariant_factors)}\nkernel dim: {snf.kernel_dim}\n"
        f"S =\n{_fmt_matrix(snf.S)}\nE =\n{_fmt_matrix(snf.E)}"
    )
    _emit(args, snf.to_json(), text)
    return 0


def _matrix_or_preset(args):
    if args.matrix:
        return _load_matrix(args.matrix)
    if args.preset:
        return preset(args.preset).M
    raise InputError("give a matrix file or --preset")


def cmd_pideg(args):
    m = _matrix_or_preset(args)
    rep = pideg_quotient(m, _parse_indices(args.delete), args.ell, args.budget)
    if args.oracle and rep.method_oracle is None:
        raise BudgetExceeded("oracle requested but the image is beyond the enumeration budget")
    text = (
        f"ell = {rep.ell}\nskew normal form: {rep.method_snf}\n"
        f"oracle: {rep.method_oracle if rep.method_oracle is not None else 'skipped (budget)'}"
        f" [h = {rep.h_image_cardinality}, {rep.oracle_method}]\nagree: {rep.agree}"
    )
    _emit(args, rep.to_json(), text)
    if not rep.agree:
        raise Disagreement(f"skew normal form gives {rep.method_snf}, oracle {rep.method_oracle}")
    return 0


def _qm_row(d: CauchonDiagram, ell: int | None, budget):
    tau = toric_permutation(d)
    kv = kernel_vs_odd_cycles(d)
    row = {
        "diagram": d.to_text().replace("\n", "/"),
        "black": [list(c) for c in sorted(d.black)],
        "tau": tau.cycle_notation(),
        "tau_array": list(tau.mapping),
        "odd_cycles_with_fixed": tau.odd_cycle_count_with_fixed,
        "odd_cycles_without_fixed": tau.odd_cycle_count_without_fixed,
        "even_length_cycles": tau.even_cycle_count,
        "kernel_dim": kv.kernel_dim,
        "invariant_factors": list(kv.invariant_factors),
    }
    if ell is not None:
        rep = pideg_quotient(qm_exponent_matrix(d.m, d.n), d.indices(), ell, budget)
        row["pideg"] = rep.value
        row["pideg_oracle"] = rep.method_oracle
        if ell % 2:
            out = {}
            for base in ("grid", "deleted"):
                try:
                    out[base] = pideg_qm_formula(d, ell, CALIBRATED_CONVENTION, base)
                except QpiError:
                    out[base] = None
            row["formula"] = out
            row["formula_matches"] = {b: v == rep.value for b, v in out.items()}
        if not rep.agree:
            raise Disagreement(f"pideg methods disagree on {row['diagram']}")
    return row


def cmd_qm(args):
    if args.calibrate:
        rep = calibration_report(budget=args.budget)
        if args.output:
            Path(args.output).write_text(dumps(rep) + "\n")
        summary = {c: {"kernel_identity": e["kernel_identity"], **e["mismatch_counts"]}
                   for c, e in rep["conventions"].items()}
        text = "\n".join(
            [f"diagrams: {rep['diagrams']}, ells: {rep['ells']}",
             f"exact routes agree: {rep['exact_routes_agree']}",
             f"invariant factors powers of 2: {rep['factors_powers_of_two']}"]
            + [f"{c}: {s}" for c, s in summary.items()]
        )
        _emit(args, rep, text)
        if not rep["exact_routes_agree"]:
            raise Disagreement("exact PI-degree routes disagree")
        return 0
    if args.enumerate:
        if not (args.m and args.n):
            raise InputError("--enumerate needs --m and --n")
        diagrams = enumerate_diagrams(args.m, args.n, le_only=args.le_only, budget=args.budget)
    elif args.diagram:
        diagrams = [_load_diagram(args.diagram, args.m, args.n)]
    elif args.m and args.n:
        diagrams = [CauchonDiagram(args.m, args.n)]
    else:
        raise InputError("give --diagram, or --m/--n (with --enumerate for all diagrams)")
    rows = [_qm_row(d, args.ell, args.budget) for d in diagrams]
    lines = []
    for r in rows:
        line = f"{r['diagram']:<14} tau={r['tau']:<20} ker={r['kernel_dim']} factors={r['invariant_factors']}"
        if "pideg" in r:
            line += f" pideg={r['pideg']}"
        if "formula" in r:
            line += f" formula={r['formula']['grid']}/{r['formula']['deleted']}"
        lines.append(line)
    _emit(args, {"rows": rows}, "\n".join(lines))
    return 0


def cmd_rep(args):
    if args.action == "pullback":
        p = _presentation(args)
        params = TorusRepParams(_parse_scalars(args.lambdas, args.ell), _parse_scalars(args.xis, args.ell))
        res = pullback_representation(p, _cauchon(args, p), args.ell, params, args.budget)
        text_lines = [
            f"{p.name} / w={[i + 1 for i in res.w]} at ell={args.ell}: dim {res.x_images.dim}, "
            f"PI degree {res.pideg.value}",
            f"relations zero: {res.relations.ok}; round trip exact: {res.round_trip}; "
            f"commutant dim: {res.certificate.dim_commutant}",
        ]
        for name, val in res.elements.items():
            text_lines.append(f"{name} evaluates to zero: {val.is_zero()}")
        for name, img in zip(res.x_images.names, res.x_images.images):
            text_lines.append(f"{name} =\n{_fmt_matrix(img.tolist())}")
        _emit(args, res.to_json(), "\n".join(text_lines))
        return 0 if res.ok else EXIT_FAIL
    if args.action == "build":
        params = TorusRepParams(_parse_scalars(args.lambdas, args.ell), _parse_scalars(args.xis, args.ell))
        m = _matrix_or_preset(args)
        w = _parse_indices(args.cauchon)
        sub = delete_rows_cols(check_skew(m), w)
        keep = [i for i in range(len(m)) if i not in set(w)]
        imgs = quantum_torus_representation(sub, args.ell, params, [f"t{i + 1}" for i in keep])
        _emit(args, imgs.to_json())
        return 0
    # verify
    try:
        imgs = GeneratorImages.from_json(_read_json(args.images))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad representation JSON: {exc}") from None
    if args.preset or args.presentation:
        from .dda import verify_presentation_relations

        p = _presentation(args)
        rel, elements = verify_presentation_relations(p, imgs)
        extra = {k: v.is_zero() for k, v in elements.items()}
    else:
        m = _load_matrix(args.matrix) if args.matrix else None
        if m is None:
            raise InputError("give --matrix, --preset or --presentation to verify against")
        rel = verify_affine_relations(imgs, m)
        extra = {}
    cert = certify_irreducible(imgs)
    payload = {"relations": rel.to_json(), "elements_vanish": extra, "certificate": cert.to_json()}
    text = f"relations zero: {rel.ok} (max residual {rel.max_norm})\ncommutant dim: {cert.dim_commutant}"
    _emit(args, payload, text)
    return 0 if rel.ok else EXIT_FAIL


def cmd_dda(args):
    p = _presentation(args)
    if args.action == "check":
        rep = check_hypothesis(p, args.ell)
        text = "\n".join(f"{'ok  ' if ok else 'FAIL'} {k}: {d}" for k, d, ok in rep.checks)
        _emit(args, rep.to_json(), text or "no derivations: nothing to check")
        return 0 if rep.ok else EXIT_FAIL
    try:
        imgs = GeneratorImages.from_json(_read_json(args.images))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad representation JSON: {exc}") from None
    if args.action == "run":
        out, trace = dda_full(p, imgs)
        payload = {"trace": trace.to_json(), "images": out.to_json()}
        _emit(args, payload)
        return 0
    out = dda_pullback(p, _cauchon(args, p), imgs)
    _emit(args, out.to_json())
    return 0


def cmd_reproduce(args):
    from .reproduce import run_all

    results = run_all()
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else EXIT_FAIL


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qpideg", description="PI degrees and representations of "
                                 "quantum nilpotent algebras at roots of unity")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration cap (default: $QPI_BUDGET or 10^6)")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("snf", parents=[common], help="skew normal form of a matrix")
    s.add_argument("matrix", help="matrix JSON path ('-' for stdin)")
    s.set_defaults(func=cmd_snf)

    s = sub.add_parser("pideg", parents=[common], help="PI degree of a (quotient) quantum affine space")
    s.add_argument("matrix", nargs="?", help="matrix JSON path")
    s.add_argument("--preset", help="use the exponent matrix of a built-in presentation")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--delete", help="1-based indices to delete, e.g. '2' or '1,3'")
    s.add_argument("--oracle", action="store_true", help="fail if the image-counting oracle is skipped")
    s.set_defaults(func=cmd_pideg)

    s = sub.add_parser("qm", parents=[common], help="quantum-matrix diagrams and toric permutations")
    s.add_argument("--m", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--diagram", help="file or inline rows ('#.#/..#'), or JSON")
    s.add_argument("--enumerate", action="store_true")
    s.add_argument("--le-only", action="store_true")
    s.add_argument("--ell", type=int)
    s.add_argument("--calibrate", action="store_true", help="run the 2x2/3x3 calibration")
    s.add_argument("--output", help="write the calibration report here")
    s.set_defaults(func=cmd_qm)

    s = sub.add_parser("rep", parents=[common], help="build, verify or pull back representations")
    s.add_argument("action", choices=("build", "verify", "pullback"))
    s.add_argument("--matrix")
    s.add_argument("--preset")
    s.add_argument("--presentation")
    s.add_argument("--images", help="representation JSON (verify)")
    s.add_argument("--cauchon", help="1-based Cauchon indices, e.g. '2'")
    s.add_argument("--diagram", help="quantum-matrix diagram instead of --cauchon")
    s.add_argument("--ell", type=int)
    s.add_argument("--lambdas", help="comma-separated rationals, one per pair")
    s.add_argument("--xis", help="comma-separated rationals, one per kernel direction")
    s.set_defaults(func=cmd_rep)

    s = sub.add_parser("dda", parents=[common], help="run or invert the deleting derivations algorithm")
    s.add_argument("action", choices=("check", "run", "pullback"))
    s.add_argument("--preset")
    s.add_argument("--presentation")
    s.add_argument("--images")
    s.add_argument("--cauchon")
    s.add_argument("--diagram")
    s.add_argument("--ell", type=int)
    s.set_defaults(func=cmd_dda)

    s = sub.add_parser("reproduce", help="check the built-in worked examples against reference values")
    s.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "command", None) in ("rep",) and args.action != "verify" and not args.ell:
        ap.error("--ell is required")
    if getattr(args, "ell", None) is not None and args.ell < 1:
        ap.error("--ell must be >= 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (Disagreement, RelationResidual, RoundTripFailed, PullbackDiverged) as exc:
        print(f"internal disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (QpiError, ValueError, ZeroDivisionError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
