"""Command-line surface.

Every command reads graph JSON files, runs the library with its internal
verifications enabled (unless --no-verify), and emits a JSON report on
stdout.  Exit codes: 0 success, 2 input or validation error, 3 a verified
identity failed (always a bug or a finding, never silent).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from .errors import InputError, VerificationError
from .graph import graph_from_json, graph_to_json, is_purely_infinite_simple, is_simple
from .graph import condition_L, matrix_algebra_size
from .invariants import (
    GROUND_FIELD,
    canonical_representative,
    classify,
    compute_invariants,
    ext_group,
    simplicity_of,
)
from .kconstruct import boundary_class, build_U, regular_order
from .lpa import Context, is_in_DC, is_in_DL, parse_expression, render_element
from . import kconstruct


def _load_graph(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    g = graph_from_json(raw.decode("utf-8"))
    digest = hashlib.sha256(raw).hexdigest()
    return g, {"path": path, "sha256": digest}


def _parse_x(text, g):
    try:
        coords = [int(part.strip()) for part in text.split(",")] if text.strip() else []
    except ValueError as exc:
        raise InputError(f"kernel vector must be comma-separated integers: {exc}") from exc
    return kconstruct.check_kernel_vector(g, coords)


def cmd_invariants(args):
    g, meta = _load_graph(args.graph)
    inv = compute_invariants(g)
    result = inv.to_json()
    result["regular_order"] = list(regular_order(g))
    pretty = [
        f"K0 = {inv.k0.group.describe()} with unit class {list(inv.k0.point)}",
        f"ker free rank = {inv.k1_free_rank}; kernel basis {[list(v) for v in inv.kernel]}",
        f"K1 = Z^{inv.k1_free_rank} + (K0 tensor units of the ground field), K0 = {inv.k1_twist.describe()}",
        f"simplicity: {inv.simplicity.describe()}",
    ]
    return {"inputs": {"graph": meta}, "result": result}, pretty


def cmd_classify(args):
    ge, meta_e = _load_graph(args.graph_e)
    gf, meta_f = _load_graph(args.graph_f)
    verdict = classify(ge, gf, budget=args.budget)
    pretty = [f"verdict: {verdict.kind}"]
    for key, val in verdict.detail.items():
        pretty.append(f"  {key}: {val}")
    return {"inputs": {"graph_e": meta_e, "graph_f": meta_f}, "result": verdict.to_json()}, pretty


def cmd_ext(args):
    g, meta = _load_graph(args.graph)
    inputs = {"graph": meta}
    if args.target == "ell":
        target = GROUND_FIELD
    else:
        target, meta_t = _load_graph(args.target)
        inputs["target"] = meta_t
    report = ext_group(g, target)
    result = report.to_json()
    pretty = [
        f"sub term Ext^1 = {report.sub.describe()}",
        f"quotient term Hom = {report.quotient.describe()}",
        f"exact: {report.exact}"
        + (f", group = {report.group.describe()}" if report.group is not None else ""),
    ]
    return {"inputs": inputs, "result": result}, pretty


def cmd_unitary(args):
    g, meta = _load_graph(args.graph)
    x = _parse_x(args.x, g)
    bundle = build_U(g, x, check=not args.no_verify)
    rows = []
    for i in bundle.S:
        rows.append([render_element(bundle.U.entry(i, j)) for j in bundle.S])
    result = {
        "x": list(x),
        "index_set": [[e, j] for e, j in bundle.S],
        "U": rows,
        "checks": {"unitary": not args.no_verify, "pairing_relations": not args.no_verify},
    }
    pretty = [f"index set size {len(bundle.S)}"]
    for i, row in zip(bundle.S, rows):
        pretty.append(f"  row {i}: {row}")
    if args.boundary_check:
        boundary = boundary_class(g, x, check=not args.no_verify)
        result["boundary"] = list(boundary)
        result["boundary_equals_minus_x"] = boundary == tuple(-c for c in x)
        pretty.append(f"boundary: {list(boundary)} (expected {[-c for c in x]})")
    return {"inputs": {"graph": meta}, "result": result}, pretty


def cmd_eval(args):
    g, meta = _load_graph(args.graph)
    elem = parse_expression(args.expression, g, args.context)
    in_diag = is_in_DL(elem) if args.context == "leavitt" else is_in_DC(elem)
    result = {
        "context": args.context,
        "expression": args.expression,
        "normal_form": render_element(elem),
        "terms": [
            {"coeff": str(c), "monomial": m.alpha and "*".join(m.alpha) or m.range, "alpha": list(m.alpha), "beta": list(m.beta), "range": m.range}
            for m, c in elem.sorted_terms()
        ],
        "is_zero": elem.is_zero(),
        "in_diagonal_subalgebra": in_diag,
    }
    return {"inputs": {"graph": meta}, "result": result}, [f"normal form: {result['normal_form']}"]


def cmd_canonical(args):
    g, meta = _load_graph(args.graph)
    rep = canonical_representative(g)
    result = {
        "graph": json.loads(graph_to_json(rep)),
        "k0_torsion": list(compute_invariants(rep).k0.group.torsion),
    }
    return {"inputs": {"graph": meta}, "result": result}, [graph_to_json(rep)]


def cmd_simple_check(args):
    g, meta = _load_graph(args.graph)
    result = {
        "condition_L": condition_L(g),
        "is_simple": is_simple(g),
        "is_purely_infinite_simple": is_purely_infinite_simple(g),
        "matrix_algebra_size": matrix_algebra_size(g),
        "simplicity": simplicity_of(g).describe(),
    }
    pretty = [f"{key}: {val}" for key, val in result.items()]
    return {"inputs": {"graph": meta}, "result": result}, pretty


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lpakit",
        description="K-theory invariants and certified unitaries for Leavitt path algebras of finite graphs",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument(
        "--no-verify",
        action="store_true",
        help="skip the internal postcondition verifications (faster, less paranoid)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("invariants", help="pointed K0, K1 data and simplicity")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_invariants)

    p = add_parser("classify", help="homotopy-classification verdict for two graphs")
    p.add_argument("graph_e")
    p.add_argument("graph_f")
    p.add_argument("--budget", type=int, default=8, help="witness search entry bound")
    p.set_defaults(fn=cmd_classify)

    p = add_parser("ext", help="extension-group report")
    p.add_argument("graph")
    p.add_argument("--target", default="ell", help="'ell' or a graph file")
    p.set_defaults(fn=cmd_ext)

    p = add_parser("unitary", help="build the kernel unitary U(x)")
    p.add_argument("graph")
    p.add_argument("--x", required=True, help="kernel vector, comma-separated, regular-vertex order")
    p.add_argument("--boundary-check", action="store_true", help="also compute the boundary")
    p.set_defaults(fn=cmd_unitary)

    p = add_parser("eval", help="evaluate an algebra expression to normal form")
    p.add_argument("graph")
    p.add_argument("--context", choices=("leavitt", "cohn"), default="leavitt")
    p.add_argument("expression")
    p.set_defaults(fn=cmd_eval)

    p = add_parser("canonical", help="canonical rose representative for finite K0")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_canonical)

    p = add_parser("simple-check", help="graph-level simplicity predicates")
    p.add_argument("graph")
    p.set_defaults(fn=cmd_simple_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"command": args.command}
    try:
        body, pretty = args.fn(args)
    except InputError as exc:
        report["status"] = "error"
        report["error"] = {"kind": "input", "message": str(exc)}
        print(json.dumps(report))
        return 2
    except VerificationError as exc:
        report["status"] = "error"
        report["error"] = {"kind": "internal_check", "message": str(exc)}
        print(json.dumps(report))
        return 3
    report.update(body)
    report["status"] = "ok"
    if args.pretty:
        print(f"# lpakit {args.command}")
        for line in pretty:
            print(line)
    else:
        print(json.dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
