"""Command line entry point.

Every verb prints one canonical JSON document.  Exit codes: 0 when the
check passes, 1 when it fails (the report carries witnesses), 2 when the
input cannot be read or validated.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import CAPS
from .corpus import generate_corpus, write_corpus
from .cylinder import cylinder, verify_lax_colimit
from .descent import DATA, check_external_descent, check_internal_descent
from .errors import LabError, SchemaError, UnknownPreset
from .homotopy import (PANEL, FiniteGroup, count_homs, group_preset, h1_invariants, order_complex,
                       pi1_presentation, simplify, van_kampen_check)
from .schematic import (check_cylinder_morphism_theorem, check_cylinder_theorem, check_nerve_corollary,
                        is_pseudo_schematic, is_qc_iso, is_schematic, nerve_datum)
from .serialize import canonical_json, datum_to_json, load, read_json, to_document
from .suites import SUITES, Workspace, jsonable, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _expect(path, *kinds):
    kind, _, obj = load(path)
    if kind not in kinds:
        raise SchemaError(f"{path}: expected {' or '.join(kinds)}, got {kind!r}", "/kind")
    return kind, obj


def _verdict(report: dict) -> int:
    return EXIT_PASS if report.get("verdict", True) else EXIT_FAIL


# verbs --------------------------------------------------------------------------------


def cmd_cylinder(args):
    _, X = _expect(args.datum, "datum")
    return to_document("space", cylinder(X)), EXIT_PASS


def cmd_nerve(args):
    _, legs = _expect(args.cover, "cover")
    nerve = nerve_datum(legs)
    return {"kind": "datum", "body": datum_to_json(nerve.datum)}, EXIT_PASS


def cmd_check_schematic(args):
    _, X = _expect(args.space, "space")
    r = {"pseudo_schematic": is_pseudo_schematic(X), **is_schematic(X)}
    return r, _verdict(r)


def cmd_check_qciso(args):
    _, f = _expect(args.morphism, "morphism")
    r = is_qc_iso(f)
    return r, _verdict(r)


def cmd_cylinder_theorem(args):
    kind, obj = _expect(args.datum, "datum", "datum-morphism")
    r = check_cylinder_theorem(obj) if kind == "datum" else check_cylinder_morphism_theorem(obj)
    return r, _verdict(r)


def cmd_descent_report(args):
    """Internal descent on --space, external descent on --cover; both when both are given."""
    if args.space is None and args.cover is None:
        raise SchemaError("descent-report needs --space or --cover", "")
    dat = DATA[args.datum]()
    r = {"datum": dat.name}
    ok = True
    if args.space is not None:
        _, X = _expect(args.space, "space")
        r["internal"] = check_internal_descent(dat, X)
        ok = ok and r["internal"]["verdict"]
    if args.cover is not None:
        _, legs = _expect(args.cover, "cover")
        ext = check_external_descent(dat, legs)
        r["external"] = ext
        r["corollary"] = check_nerve_corollary(legs)
        ok = ok and (ext["iso"] or not ext["preconditions_hold"])
    r["verdict"] = ok
    return r, _verdict(r)


def _panel(path):
    if path is None:
        return [group_preset(n) for n in PANEL]
    doc = read_json(path)
    if not isinstance(doc, list):
        raise SchemaError("panel must be a list of group presets or tables", "")
    out = []
    for i, g in enumerate(doc):
        if isinstance(g, str):
            out.append(group_preset(g))
        elif isinstance(g, dict) and "mul" in g:
            out.append(FiniteGroup(g.get("name", f"G{i}"), [list(r) for r in g["mul"]]))
        else:
            raise SchemaError("panel entry must be a preset name or {name, mul}", f"/{i}")
    return out


def cmd_pi1(args):
    kind, obj = _expect(args.space, "poset", "space", "datum")
    P = {"poset": lambda: obj, "space": lambda: obj.base, "datum": lambda: cylinder(obj).base}[kind]()
    K = order_complex(P)
    pres = pi1_presentation(K)
    small = simplify(pres)
    r = {"vertices": len(K.vertices), "f_vector": K.f_vector(), "presentation": pres.as_dict(),
         "simplified": small.as_dict(), "h1": h1_invariants(K),
         "homs": {G.name: count_homs(small, G) for G in _panel(args.panel)}}
    return r, EXIT_PASS


def cmd_vankampen(args):
    _, X = _expect(args.datum, "datum")
    r = van_kampen_check(X, _panel(args.panel))
    return r, _verdict(r)


def cmd_verify_lax_colimit(args):
    kind, obj = _expect(args.datum, "datum", "lax-instance")
    if kind == "lax-instance":
        X, Y = obj
    else:
        if args.target is None:
            raise SchemaError("--target is required with a bare datum", "")
        X = obj
        _, Y = _expect(args.target, "space")
    r = verify_lax_colimit(X, Y)
    r["verdict"] = r["iso"]
    return r, _verdict(r)


def cmd_corpus(args):
    paths = write_corpus(generate_corpus(args.seed), args.dir)
    return {"seed": args.seed, "out": str(args.dir), "files": len(paths)}, EXIT_PASS


def cmd_suite(args):
    ws = Workspace.open(args.workspace)
    r = run_suite(ws, args.name, jobs=args.jobs)
    return r, _verdict(r)


# parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--caps", type=Path, help="JSON object overriding size caps")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized generation")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for suites")
    p = argparse.ArgumentParser(prog="laxcyl", description="Finite checks for lax cylinders of ringed posets.")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, help):
        return sub.add_parser(name, parents=[common], help=help)

    s = verb("cylinder", "cylinder of a lax datum")
    s.add_argument("--datum", required=True, type=Path)
    s.set_defaults(run=cmd_cylinder)

    s = verb("nerve", "nerve datum of a cover")
    s.add_argument("--cover", required=True, type=Path)
    s.set_defaults(run=cmd_nerve)

    s = verb("check-schematic", "schematicity of a ringed poset")
    s.add_argument("--space", required=True, type=Path)
    s.set_defaults(run=cmd_check_schematic)

    s = verb("check-qciso", "qc-isomorphism test for a morphism")
    s.add_argument("--morphism", required=True, type=Path)
    s.set_defaults(run=cmd_check_qciso)

    s = verb("cylinder-theorem", "cylinder theorem report for a datum or datum morphism")
    s.add_argument("--datum", required=True, type=Path)
    s.set_defaults(run=cmd_cylinder_theorem)

    s = verb("descent-report", "internal descent on a space and external descent on a cover")
    s.add_argument("--datum", choices=sorted(DATA), default="specpts")
    s.add_argument("--space", type=Path)
    s.add_argument("--cover", type=Path)
    s.set_defaults(run=cmd_descent_report)

    s = verb("pi1", "edge-path presentation, H1 and hom counts of a finite space")
    s.add_argument("--space", required=True, type=Path)
    s.add_argument("--panel", type=Path)
    s.set_defaults(run=cmd_pi1)

    s = verb("vankampen", "cylinder against amalgam presentation")
    s.add_argument("--datum", required=True, type=Path)
    s.add_argument("--panel", type=Path)
    s.set_defaults(run=cmd_vankampen)

    s = verb("verify-lax-colimit", "universal property of the cylinder against a target")
    s.add_argument("--datum", required=True, type=Path)
    s.add_argument("--target", type=Path)
    s.set_defaults(run=cmd_verify_lax_colimit)

    s = sub.add_parser("corpus", help="corpus management")
    csub = s.add_subparsers(dest="action", required=True)
    g = csub.add_parser("generate", help="write the randomized corpus into the --out directory")
    g.add_argument("--caps", type=Path, help="JSON object overriding size caps")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized generation")
    g.add_argument("--out", type=Path, required=True, dest="dir", help="corpus directory")
    g.add_argument("--jobs", type=int, default=1, help="accepted for symmetry; generation is sequential")
    g.set_defaults(run=cmd_corpus, out=None)

    s = verb("suite", "run a check suite over a workspace directory")
    s.add_argument("name", choices=SUITES)
    s.add_argument("--workspace", required=True, type=Path)
    s.set_defaults(run=cmd_suite)
    return p


def _apply_caps(path):
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise SchemaError("caps file must be a JSON object", "")
    try:
        CAPS.update(**doc)
    except (KeyError, ValueError) as e:
        raise SchemaError(str(e), "") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.caps is not None:
            _apply_caps(args.caps)
        report, code = args.run(args)
    except (LabError, OSError, UnknownPreset) as e:
        report, code = {"error": type(e).__name__, "message": str(e)}, EXIT_INPUT
        pointer = getattr(e, "pointer", None)
        if pointer is not None:
            report["pointer"] = pointer
    text = canonical_json(jsonable(report))
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
