"""``opfield`` command line.

Exit codes: 0 success, 1 malformed input, 2 the mathematics says no
(residue check failed, no certified growth count, ...).
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import local_decompose, radical
from .arith import QQ, Field
from .decl import PRESETS, load_preset, parse_declaration
from .errors import InputError, MathFailure, OpfieldError
from .growth import FreeAlphabet, RelationFamily, growth_function
from .operators import (
    associated_endomorphisms,
    classify_single_operator,
    linear_combination,
    triangularize,
)
from .words import expand_scale, format_word, parse_wordpoly

EXIT_OK, EXIT_INPUT, EXIT_MATH = 0, 1, 2


def _field_arg(text: str) -> Field:
    t = text.strip()
    if t == "Q":
        return QQ
    if t.startswith("F") and t[1:].isdigit():
        try:
            return Field(int(t[1:]))
        except InputError as exc:
            raise argparse.ArgumentTypeError(str(exc))
    raise argparse.ArgumentTypeError(f"field must be Q or F<prime>, got {text!r}")


def _empty_doc(command: str) -> dict:
    return {
        "command": command,
        "field": None,
        "dimension": None,
        "blocks": None,
        "endomorphisms": None,
        "triangular": None,
        "expand": None,
        "growth": None,
    }


def _load(args):
    if args.input and args.preset:
        raise InputError("give either --input or --preset, not both")
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        decl = parse_declaration(text)
        if args.field is not None and args.field != decl.field:
            raise InputError("--field conflicts with the declaration's field clause")
        return decl
    if args.preset:
        return load_preset(args.preset, args.field or QQ)
    raise InputError("one of --input FILE or --preset NAME is required")


def _vec(field, v):
    return [field.to_json(x) for x in v]


def _blocks_json(dec):
    out = []
    for b in dec.blocks:
        entry = {"dim": b.dimension, "radical_dim": len(b.ideal_basis), "residue_ok": b.residue_ok}
        entry["basis"] = [_vec(dec.algebra.field, v) for v in b.basis]
        if not b.residue_ok:
            entry["witnesses"] = [str(w) for w in b.witnesses]
        out.append(entry)
    return out


def cmd_validate(args, doc, out):
    decl = _load(args)
    sys_ = decl.to_system()
    alg = sys_.algebra
    doc.update(field=repr(alg.field), dimension=alg.dimension)
    doc["unit"] = _vec(alg.field, alg.unit)
    doc["first_coordinate"] = sys_.first_coordinate
    try:
        rad = radical(alg)
        doc["radical_dim"] = len(rad)
    except MathFailure:
        rad = None
        doc["radical_dim"] = None
    out.append(f"valid commutative unital algebra over {alg.field}, dimension {alg.dimension}")
    out.append("unit: " + " ".join(str(x) for x in alg.unit))
    out.append(f"first coordinate is the identity: {'yes' if sys_.first_coordinate else 'no'}")
    if rad is not None:
        out.append(f"radical dimension: {len(rad)}")
    return EXIT_OK


def _decompose(args, doc, out):
    decl = _load(args)
    sys_ = decl.to_system()
    dec = local_decompose(sys_.algebra)
    doc.update(field=repr(sys_.field), dimension=sys_.dimension, blocks=_blocks_json(dec))
    doc["residue"] = {
        "ok": dec.residue.ok,
        "witnesses": [str(w) for _, ws in dec.residue.failures for w in ws],
    }
    return sys_, dec


def cmd_decompose(args, doc, out):
    sys_, dec = _decompose(args, doc, out)
    out.append(f"{len(dec.blocks)} local block(s) over {sys_.field}")
    for b in dec.blocks:
        status = "residue F" if b.residue_ok else "residue larger than F"
        out.append(f"  block {b.index}: dim {b.dimension}, radical dim {len(b.ideal_basis)}, {status}")
    out.append(dec.residue.describe())
    return EXIT_OK if dec.residue.ok else EXIT_MATH


def cmd_endos(args, doc, out):
    sys_, dec = _decompose(args, doc, out)
    endos = associated_endomorphisms(sys_, dec)
    doc["endomorphisms"] = [_vec(sys_.field, e.coefficients) for e in endos]
    for e in endos:
        flag = " (invertible)" if e.invertible else ""
        out.append(f"block {e.block}: sigma = {e.describe(sys_.names)}{flag}")
    return EXIT_OK


def cmd_triangularize(args, doc, out):
    sys_, dec = _decompose(args, doc, out)
    tri = triangularize(sys_, dec)
    f = sys_.field
    doc["endomorphisms"] = [_vec(f, e.coefficients) for e in tri.endomorphisms]
    doc["triangular"] = {
        "basis": [_vec(f, c) for c in tri.change_of_basis.columns()],
        "operators": [_vec(f, tri.operator(s)) for s in range(tri.dimension)],
        "constants": [
            {"block": bi, "k": k, "l": l, "j": j, "value": f.to_json(v)}
            for bi, entries in enumerate(tri.constants)
            for k, l, j, v in entries
        ],
        "rules": [r.render() for r in tri.rules],
    }
    for s in range(tri.dimension):
        out.append(f"F{s} := {linear_combination(tri.operator(s), sys_.names)}")
    for r in tri.rules:
        out.append(r.render())
    return EXIT_OK


def cmd_expand(args, doc, out):
    decl = _load(args)
    sys_ = decl.to_system()
    dec = local_decompose(sys_.algebra)
    doc.update(field=repr(sys_.field), dimension=sys_.dimension, blocks=_blocks_json(dec))
    tri = triangularize(sys_, dec)
    poly = parse_wordpoly(args.combination, sys_.field)
    exp = expand_scale(poly, args.symbol, tri)
    doc["expand"] = {
        "leading_word": format_word(exp.degree),
        "leading_sigma": str(exp.sigma),
        "leading_coefficient": str(exp.leading),
        "remainder": [
            {"word": format_word(w), "coefficient": str(c)} for w, c in exp.remainder.items()
        ],
    }
    x = "x" if not exp.degree else f"{format_word(exp.degree)}(x)"
    out.append(f"leading: ({exp.leading}) * {x}   [sigma_theta = {exp.sigma}]")
    out.append(f"remainder: {exp.remainder}")
    return EXIT_OK


def cmd_growth(args, doc, out):
    alpha = FreeAlphabet.standard(args.free)
    rels = RelationFamily.parse(args.relation or [], alpha)
    rep = growth_function(alpha, rels, args.radius, args.bound)
    doc["growth"] = {
        "generators": list(alpha.names),
        "relations": list(args.relation or []),
        "radius": args.radius,
        "bound": args.bound,
        "sizes": list(rep.sizes),
        "shells": list(rep.shells),
        "classes": list(rep.classes),
        "working_radius": rep.working_radius,
        "note": rep.note,
    }
    out.append(f"# {rep.note}")
    out.append("r\t|Theta_r|\tshell\tf(r)")
    for r in range(args.radius + 1):
        shell = rep.shells[r - 1] if r else ""
        out.append(f"{r}\t{rep.sizes[r]}\t{shell}\t{rep.classes[r]}")
    return EXIT_OK


def cmd_classify1(args, doc, out):
    f = args.field or QQ
    cl = classify_single_operator(args.a, args.b, args.c, f)
    doc.update(field=repr(f), dimension=2)
    doc["classification"] = {
        "case": cl.case,
        "a": f.to_json(cl.a),
        "b": f.to_json(cl.b),
        "c": f.to_json(cl.c),
        "map": _vec(f, cl.map_coefficients),
        "description": cl.describe(),
    }
    out.append(cl.describe())
    if cl.basis is not None:
        e0, e1 = cl.basis
        out.append(
            "orthonormal basis: e'0 = "
            + " ".join(str(x) for x in e0)
            + ", e'1 = "
            + " ".join(str(x) for x in e1)
        )
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "endos": cmd_endos,
    "triangularize": cmd_triangularize,
    "expand": cmd_expand,
    "growth": cmd_growth,
    "classify1": cmd_classify1,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--field", type=_field_arg, default=None, help="Q or F<p> (presets, classify1)")
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", metavar="FILE", help="declaration file")
    source.add_argument("--preset", metavar="NAME", help="one of: " + ", ".join(PRESETS))

    p = argparse.ArgumentParser(prog="opfield", description="Exact algebra of fields with operators.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (
        ("validate", "check the declaration and report the radical"),
        ("decompose", "local decomposition and residue check"),
        ("endos", "associated endomorphisms"),
        ("triangularize", "triangular basis and product rules"),
    ):
        sub.add_parser(name, parents=[common, source], help=text)
    ex = sub.add_parser("expand", parents=[common, source], help="expand S(g x)")
    ex.add_argument("combination", help='word combination, e.g. "3*F1 + 2" or "F2F1 - F1F2"')
    ex.add_argument("symbol", nargs="?", default="g")
    c1 = sub.add_parser("classify1", parents=[common], help="classify F(xy) = a xy + b(xF(y) + F(x)y) + c F(x)F(y)")
    c1.add_argument("a")
    c1.add_argument("b")
    c1.add_argument("c")
    gr = sub.add_parser("growth", parents=[common], help="growth of word classes under a relation family")
    gr.add_argument("--free", type=int, default=2, metavar="K", help="number of generators s1..sK")
    gr.add_argument(
        "--relation", action="append", metavar="SPEC", help='e.g. "s1 s2^l = s2^l" (l ranges over |l| <= bound)'
    )
    gr.add_argument("--radius", type=int, default=3)
    gr.add_argument("--bound", type=int, default=None)
    return p


def run(argv=None) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_OK), "", ""
    doc = _empty_doc(args.command)
    lines = []
    err = ""
    try:
        code = COMMANDS[args.command](args, doc, lines)
    except MathFailure as exc:
        code, err = EXIT_MATH, f"opfield: {exc}"
        doc["error"] = str(exc)
    except (OpfieldError, ValueError, ZeroDivisionError) as exc:
        code, err = EXIT_INPUT, f"opfield: {exc}"
        doc["error"] = str(exc)
    if args.json:
        return code, json.dumps(doc, indent=2, ensure_ascii=False) + "\n", err
    return code, ("\n".join(lines) + "\n") if lines else "", err


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
