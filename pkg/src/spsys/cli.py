"""Command-line front end: reproducible batch workflows over JSON documents.

Reports go to stdout as JSON (sorted keys, stable across runs for a fixed
seed); a one-line human summary goes to stderr.  Exit codes: 0 success or
valid, 1 domain refutation (invalid data, non-membership, refuted
isomorphism), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import io as docio
from .commutation import RelationUnitarityError
from .expr import ExpressionError, build_operator
from .fock import (
    TruncatedFock,
    cesaro_reconstruct,
    fourier_coefficient,
    op_norm_check,
    vacuum_character,
)
from .invariants import (
    TruncationOrderError,
    compute_invariants,
    iso_search,
)
from .ncpoly import (
    ImproperIdealError,
    NonHomogeneousGeneratorError,
    UnsupportedGeneratorError,
    commutation_generators,
    ideal_to_subproduct,
    subproduct_to_ideal,
)
from .subproduct import (
    PartialDataError,
    StaircaseError,
    dimension_profile,
    graded_degrees,
    maximal_completion,
    validate,
)
from .variety import (
    PolyballPoint,
    in_c_set,
    is_good,
    polyball_membership,
    polyball_norm,
    sample_cross,
    sample_polyball,
    variety_generators,
)

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2

_DOMAIN_ERRORS = (
    PartialDataError, StaircaseError, ImproperIdealError,
    NonHomogeneousGeneratorError, UnsupportedGeneratorError,
    RelationUnitarityError, TruncationOrderError,
)


def _read_input(path: str) -> tuple[str, bytes]:
    if path == "-":
        return "<stdin>", sys.stdin.buffer.read()
    with open(path, "rb") as handle:
        return path, handle.read()


def _load_doc(path: str) -> tuple[dict, dict]:
    name, raw = _read_input(path)
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise docio.DocumentError(f"{name}: cannot parse JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise docio.DocumentError(f"{name}: document must be a JSON object")
    return doc, {name: digest}


def _emit(report: dict, summary: str, code: int) -> int:
    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    sys.stderr.write(summary + "\n")
    return code


def _report(command: str, inputs: dict, tolerances: dict, findings: dict,
            seed: int | None = None, notes: list[str] | None = None) -> dict:
    out = {
        "command": command,
        "schema_version": docio.SCHEMA_VERSION,
        "inputs": inputs,
        "tolerances": tolerances,
        "findings": findings,
    }
    if seed is not None:
        out["seed"] = seed
    if notes:
        out["notes"] = notes
    return out


def _degree_key(deg) -> str:
    return f"{deg[0]},{deg[1]}"


def _write_out(args, doc: dict):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)


# -- commands -----------------------------------------------------------------


def _cmd_validate(args) -> int:
    doc, inputs = _load_doc(args.path)
    try:
        sps = docio.doc_to_system(doc, tol=args.tol_rank)
    except RelationUnitarityError as exc:
        report = _report("validate", inputs, {"rank": args.tol_rank},
                         {"valid": False,
                          "violations": [{"kind": "commutation-not-unitary",
                                          "message": str(exc)}]})
        return _emit(report, f"invalid: {exc}", EXIT_REFUTED)
    result = validate(sps, tol=args.tol_rank)
    findings = {
        "valid": result.ok,
        "D": result.D,
        "violations": [
            {
                "kind": v.kind,
                "degree": list(v.degree),
                "split": [list(v.split[0]), list(v.split[1])] if v.split else None,
                "error": None if v.error != v.error else v.error,  # NaN -> null
                "message": v.message,
            }
            for v in result.violations
        ],
    }
    report = _report("validate", inputs, {"rank": args.tol_rank}, findings)
    return _emit(report, result.summary(), EXIT_OK if result.ok else EXIT_REFUTED)


def _cmd_complete(args) -> int:
    doc, inputs = _load_doc(args.path)
    staircase = docio.parse_staircase(args.staircase) if args.staircase else None
    cr, partial, D = docio.doc_to_partial(doc, tol=args.tol_rank, staircase=staircase)
    sps = maximal_completion(cr, partial, D, tol=args.tol_rank)
    check = validate(sps, tol=max(args.tol_rank, 1e-9))
    out_doc = docio.system_to_doc(sps, tol=args.tol_rank)
    out_doc["metadata"] = dict(doc.get("metadata") or {})
    _write_out(args, out_doc)
    findings = {
        "staircase": sorted(_degree_key(d) for d in partial),
        "completed_degrees": sorted(
            _degree_key(d) for d in graded_degrees(D) if d not in partial),
        "dimension_profile": {_degree_key(d): r
                              for d, r in dimension_profile(sps, args.tol_rank).items()},
        "revalidated": check.ok,
    }
    report = _report("complete", inputs, {"rank": args.tol_rank}, findings)
    if args.out is None or args.out == "-":
        # completed document already on stdout; keep the report on stderr side
        sys.stderr.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        sys.stderr.write(f"completed {len(findings['completed_degrees'])} degree(s)\n")
        return EXIT_OK if check.ok else EXIT_REFUTED
    return _emit(report, f"completed {len(findings['completed_degrees'])} degree(s)"
                 f" -> {args.out}", EXIT_OK if check.ok else EXIT_REFUTED)


def _cmd_ideal(args) -> int:
    doc, inputs = _load_doc(args.path)
    notes: list[str] = []
    if args.direction == "to-ideal":
        sps = docio.doc_to_system(doc, tol=args.tol_rank)
        gens = subproduct_to_ideal(sps, tol=args.tol_rank)
        out_doc = docio.ideal_to_doc(sps.cr, gens, sps.D)
        out_doc["metadata"] = dict(doc.get("metadata") or {})
        _write_out(args, out_doc)
        findings = {
            "generator_count": len(gens),
            "generator_degrees": {},
        }
        degrees: dict[str, int] = {}
        for g in gens:
            comps = {g.word_degree(w) for w in g.terms}
            deg = comps.pop() if len(comps) == 1 else None
            key = _degree_key(deg) if deg else "mixed"
            degrees[key] = degrees.get(key, 0) + 1
        findings["generator_degrees"] = degrees
    else:
        cr, gens, D = docio.doc_to_ideal(doc)
        relation_polys = commutation_generators(cr)
        included = all(any(g.close_to(p, 1e-12) for g in gens) for p in relation_polys)
        if relation_polys and not included:
            notes.append(
                "ideal enlarged: the commutation relation polynomials are "
                "implicitly included")
        sps = ideal_to_subproduct(gens, cr, D, tol=args.tol_rank)
        out_doc = docio.system_to_doc(sps, tol=args.tol_rank)
        out_doc["metadata"] = dict(doc.get("metadata") or {})
        _write_out(args, out_doc)
        findings = {
            "commutation_generators_added": bool(relation_polys) and not included,
            "dimension_profile": {_degree_key(d): r
                                  for d, r in dimension_profile(sps, args.tol_rank).items()},
        }
    report = _report("ideal", inputs, {"rank": args.tol_rank}, findings, notes=notes)
    if args.out is None or args.out == "-":
        sys.stderr.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        sys.stderr.write(f"ideal {args.direction} done\n")
        return EXIT_OK
    return _emit(report, f"ideal {args.direction} -> {args.out}", EXIT_OK)


def _cmd_invariants(args) -> int:
    doc, inputs = _load_doc(args.path)
    sps = docio.doc_to_system(doc, tol=args.tol_rank)
    inv = compute_invariants(sps, tol=args.tol_rank)
    findings = {
        "dim_sum": inv.dim_sum,
        "k_x": inv.k_x,
        "k_x_label": inv.k_x_label(),
        "D": inv.D,
        "good": is_good(sps, tol=args.tol_rank),
        "dimension_profile": {_degree_key(d): r
                              for d, r in dimension_profile(sps, args.tol_rank).items()},
    }
    report = _report("invariants", inputs, {"rank": args.tol_rank}, findings)
    return _emit(report, f"dim_sum={inv.dim_sum} k_x={inv.k_x_label()}", EXIT_OK)


def _cmd_variety(args) -> int:
    doc, inputs = _load_doc(args.path)
    sps = docio.doc_to_system(doc, tol=args.tol_rank)
    gens = variety_generators(sps, tol=args.tol_rank)
    findings: dict = {
        "generator_count": len(gens),
        "generator_degrees": sorted(
            _degree_key(g.bidegree()) for g in gens),
        "good": is_good(sps, tol=args.tol_rank),
    }
    code = EXIT_OK
    summary = f"{len(gens)} variety generator(s)"
    if args.point is not None:
        z, w = docio.parse_point(args.point, sps.m, sps.n)
        pt = PolyballPoint(z, w)
        member = polyball_membership(pt, gens, tol=args.tol_member)
        findings["point"] = {
            "member": member,
            "in_c_set": in_c_set(pt, tol=args.tol_member),
            "polyball_norm": polyball_norm(pt),
        }
        code = EXIT_OK if member else EXIT_REFUTED
        summary = f"point is {'inside' if member else 'outside'} the variety"
    if args.sample:
        rng = np.random.default_rng(args.seed)
        members = 0
        cross_members = 0
        cross_hits = 0
        for k in range(args.sample):
            pt = sample_cross(rng, sps.m, sps.n) if k % 2 else sample_polyball(rng, sps.m, sps.n)
            inside = polyball_membership(pt, gens, tol=args.tol_member)
            cross = in_c_set(pt, tol=args.tol_member)
            members += inside
            cross_hits += cross
            cross_members += inside and cross
        findings["sample"] = {
            "count": args.sample,
            "members": members,
            "in_c_set": cross_hits,
            "members_on_cross": cross_members,
        }
        summary += f"; sampled {args.sample}: {members} member(s)"
    report = _report("variety", inputs, {"rank": args.tol_rank, "member": args.tol_member},
                     findings, seed=args.seed if args.sample else None)
    return _emit(report, summary, code)


def _cmd_fourier(args) -> int:
    doc, inputs = _load_doc(args.path)
    sps = docio.doc_to_system(doc, tol=args.tol_rank)
    fock = TruncatedFock(sps, tol=args.tol_rank)
    T = build_operator(fock, args.expr)
    components = {}
    recon = np.zeros_like(T.matrix)
    for deg in graded_degrees(sps.D):
        comp = fourier_coefficient(T, deg)
        norm = comp.norm()
        recon = recon + comp.matrix
        if norm > 0:
            components[_degree_key(deg)] = norm
    findings: dict = {
        "operator_norm": T.norm(),
        "vacuum_character": docio.complex_to_pair(vacuum_character(T)),
        "component_norms": components,
        "reconstruction_error": float(np.max(np.abs(recon - T.matrix)))
        if recon.size else 0.0,
    }
    if args.degree is not None:
        i, j = (int(x) for x in args.degree.split(","))
        findings["extracted"] = {
            "degree": [i, j],
            "norm": fourier_coefficient(T, (i, j)).norm(),
        }
    if args.cesaro is not None:
        ces = cesaro_reconstruct(T, args.cesaro)
        findings["cesaro"] = {
            "P": args.cesaro,
            "distance_to_operator": float(np.max(np.abs(ces.matrix - T.matrix)))
            if ces.matrix.size else 0.0,
        }
    report = _report("fourier", inputs, {"rank": args.tol_rank}, findings)
    return _emit(report, f"{len(components)} nonzero component(s)", EXIT_OK)


def _cmd_fock_norms(args) -> int:
    doc, inputs = _load_doc(args.path)
    sps = docio.doc_to_system(doc, tol=args.tol_rank)
    fock = TruncatedFock(sps, tol=args.tol_rank)
    findings: dict = {}
    if args.expr is not None:
        T = build_operator(fock, args.expr)
        findings["operator_norm"] = T.norm()
        findings["vacuum_character"] = docio.complex_to_pair(vacuum_character(T))
    else:
        rows = []
        worst = 0.0
        for deg in graded_degrees(sps.D):
            basis = fock.block_bases[deg]
            if deg == (0, 0):
                continue
            for k in range(basis.shape[1]):
                norm, fiber = op_norm_check(fock, deg, basis[:, k])
                gap = abs(norm - fiber) / max(fiber, 1e-30)
                worst = max(worst, gap)
                rows.append({
                    "degree": list(deg), "index": k + 1,
                    "op_norm": norm, "fiber_norm": fiber, "relative_gap": gap,
                })
        findings["vectors"] = rows
        findings["max_relative_gap"] = worst
    report = _report("fock-norms", inputs, {"rank": args.tol_rank}, findings)
    return _emit(report, "fock norms computed", EXIT_OK)


def _cmd_iso(args) -> int:
    doc_x, inputs = _load_doc(args.path_x)
    doc_y, inputs_y = _load_doc(args.path_y)
    inputs.update(inputs_y)
    sps_x = docio.doc_to_system(doc_x, tol=args.tol_rank)
    sps_y = docio.doc_to_system(doc_y, tol=args.tol_rank)
    result = iso_search(sps_x, sps_y, tol=args.tol_iso, restarts=args.budget,
                        iters=args.iters, seed=args.seed, rank_tol=args.tol_rank)
    inv_x = compute_invariants(sps_x, tol=args.tol_rank)
    inv_y = compute_invariants(sps_y, tol=args.tol_rank)
    try:
        invariants_agree = inv_x.same_as(inv_y)
    except ValueError:
        invariants_agree = None
    findings: dict = {
        "status": result.status,
        "invariants": {
            "x": {"dim_sum": inv_x.dim_sum, "k_x": inv_x.k_x_label()},
            "y": {"dim_sum": inv_y.dim_sum, "k_x": inv_y.k_x_label()},
            "agree": invariants_agree,
        },
        "branches": [
            {
                "switch": b.switch,
                "profile_match": b.profile_match,
                "best_residual": b.best_residual,
                "restarts_run": b.restarts_run,
            }
            for b in result.branches
        ],
    }
    if result.witness is not None:
        findings["witness"] = {
            "switch": result.witness.switch,
            "residual": result.witness.residual,
            "B": docio.matrix_to_json(result.witness.B),
            "C": docio.matrix_to_json(result.witness.C),
        }
    report = _report("iso", inputs,
                     {"rank": args.tol_rank, "iso_residual": args.tol_iso},
                     findings, seed=args.seed)
    code = EXIT_REFUTED if result.status == "refuted" else EXIT_OK
    return _emit(report, f"iso search: {result.status}", code)


# -- argument parsing ----------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--tol-rank", type=float, default=1e-9,
                        help="rank / validation tolerance (default 1e-9)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all sampling and restarts (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spsys",
        description="Subproduct systems at a finite truncation: validation, "
                    "completion, ideals, Fock operators, varieties, invariants.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a system document")
    p.add_argument("path", help="system document (or '-' for stdin)")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("complete", help="maximal completion of staircase data")
    p.add_argument("path")
    p.add_argument("--staircase", default=None,
                   help="degrees forming the partial data, e.g. '0,0;1,0;0,1;2,0'")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    _add_common(p)
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("ideal", help="translate system <-> polynomial ideal")
    p.add_argument("path")
    p.add_argument("--direction", choices=("to-ideal", "to-system"), required=True)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_ideal)

    p = sub.add_parser("invariants", help="dimension sum, k_x, goodness, profile")
    p.add_argument("path")
    _add_common(p)
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("variety", help="variety generators, membership, sampling")
    p.add_argument("path")
    p.add_argument("--point", default=None, help="point 'z1,..,zm;w1,..,wn'")
    p.add_argument("--sample", type=int, default=0,
                   help="Monte Carlo containment report with N samples")
    p.add_argument("--tol-member", type=float, default=1e-8,
                   help="membership tolerance (default 1e-8)")
    _add_common(p)
    p.set_defaults(func=_cmd_variety)

    p = sub.add_parser("fourier", help="graded components of an operator expression")
    p.add_argument("path")
    p.add_argument("expr", help="prefix expression, e.g. '(+ (* e1 f1) e1)'")
    p.add_argument("--degree", default=None, help="extract one component 'i,j'")
    p.add_argument("--cesaro", type=int, default=None,
                   help="triangular-weight reconstruction order P")
    _add_common(p)
    p.set_defaults(func=_cmd_fourier)

    p = sub.add_parser("fock-norms", help="creation-operator norm checks")
    p.add_argument("path")
    p.add_argument("--expr", default=None,
                   help="report on one operator expression instead of all fibers")
    _add_common(p)
    p.set_defaults(func=_cmd_fock_norms)

    p = sub.add_parser("iso", help="isomorphism search between two systems")
    p.add_argument("path_x")
    p.add_argument("path_y")
    p.add_argument("--budget", type=int, default=50, help="restarts (default 50)")
    p.add_argument("--iters", type=int, default=200,
                   help="iterations per restart (default 200)")
    p.add_argument("--tol-iso", type=float, default=1e-6,
                   help="witness residual tolerance (default 1e-6)")
    _add_common(p)
    p.set_defaults(func=_cmd_iso)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (docio.DocumentError, ExpressionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_REFUTED
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
