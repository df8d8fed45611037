"""Command line front end: ``latticehfi <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .export import to_ascii, to_dot
from .involutive import InvolutiveError
from .lattice import LatticeError, WeightFunction, cube_cohomology_all, quotient_lattice
from .obstruct import (PartialResult, UnsupportedPlumbing, _load, choose_class, compute_side,
                       module_dict, rat, run_pipeline, root_summary)
from .plumbing import FAMILIES, PlumbingError, builtin_family, classify, intersection_form
from .spinc import SpincError

EXIT_OK, EXIT_ERROR, EXIT_UNSUPPORTED, EXIT_PARTIAL = 0, 1, 2, 3
log = logging.getLogger("latticehfi")


def _spinc(text):
    if text in (None, "auto"):
        return "auto"
    return [int(a) for a in text.replace(",", " ").split()]


def _add_common(p, reversed_=False):
    p.add_argument("--gamma", required=True, help="plumbing JSON file (or directory in batch mode)")
    p.add_argument("--spinc", default="auto", help="'auto' or a comma separated characteristic vector")
    p.add_argument("--method", default="auto", choices=["auto", "flood", "flood-minima", "enumerate", "fibered"])
    p.add_argument("--max-level", type=int, default=None)
    p.add_argument("--format", default="json", choices=["json", "dot", "ascii"])
    if reversed_:
        p.add_argument("--gamma-reversed", help="plumbing of the reversed orientation")
        p.add_argument("--d-half-override", type=Fraction, default=None,
                       help="d_{1/2} of the reversed orientation, as p/q")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latticehfi", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("classify", help="definiteness, b1, H1 and bad vertices")
    p.add_argument("--gamma", required=True)
    p.add_argument("--format", default="json", choices=["json"])
    _add_common(sub.add_parser("root", help="graded root and involution"))
    _add_common(sub.add_parser("hf", help="HF+ of -Y"), True)
    _add_common(sub.add_parser("hfi", help="involutive invariants of both orientations"), True)
    _add_common(sub.add_parser("obstruct", help="full report with verdicts"), True)
    p = sub.add_parser("family", help="write a built-in plumbing as JSON")
    p.add_argument("name", choices=FAMILIES)
    p.add_argument("j", type=int)
    p = sub.add_parser("cohomology", help="F2 cube cohomology of a sublevel set")
    p.add_argument("--gamma", required=True)
    p.add_argument("--spinc", default="auto")
    p.add_argument("--level", type=int, required=True)
    return ap


def _emit(obj, fmt="json"):
    if isinstance(obj, str):
        sys.stdout.write(obj)
    else:
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _run_one(args, gamma) -> int:
    cmd = args.cmd
    if cmd == "classify":
        g = _load(gamma)
        pc = classify(intersection_form(g), g)
        _emit({"definiteness": pc.definiteness, "b1": pc.b1, "h1": pc.h1_text(),
               "bad_vertices": list(pc.bad_vertices), "supported": pc.supported,
               "reason": pc.reason})
        return EXIT_OK if pc.supported else EXIT_UNSUPPORTED
    if cmd == "cohomology":
        g = _load(gamma)
        B = intersection_form(g)
        cls = choose_class(B, _spinc(args.spinc), strict=False)
        W = WeightFunction(quotient_lattice(B), cls.representative)
        _emit({"level": args.level, "dims": cube_cohomology_all(W, args.level)})
        return EXIT_OK
    if cmd == "root":
        side = compute_side(_load(gamma), _spinc(args.spinc), args.method, args.max_level)
        if args.format == "dot":
            _emit(to_dot(side.root, side.involution))
        elif args.format == "ascii":
            _emit(to_ascii(side.root, side.involution))
        else:
            out = root_summary(side.root)
            out["involution"] = list(side.involution.perm)
            out["parent"] = list(side.root.parent)
            out["gradings"] = [rat(side.root.grading(v)) for v in range(len(side.root))]
            _emit(out)
        return EXIT_OK
    rep = run_pipeline(gamma, args.gamma_reversed, spinc=_spinc(args.spinc),
                       d_half_override=args.d_half_override, method=args.method,
                       max_level=args.max_level)
    if args.format in ("dot", "ascii"):
        r, j = rep.side.root, rep.side.involution
        _emit(to_dot(r, j) if args.format == "dot" else to_ascii(r, j))
        return EXIT_OK
    if cmd == "hf":
        _emit(module_dict(rep.hf))
        return EXIT_OK
    if rep.partial:
        _emit(rep.to_dict())
        log.error("partial result: the reversed plumbing or --d-half-override is required")
        return EXIT_PARTIAL
    if cmd == "hfi":
        d = rep.to_dict()
        _emit({k: d.get(k) for k in ("invariants_minus_Y", "invariants_Y", "hfi_minus_Y",
                                     "certificate", "orientation_check", "notes")})
    else:
        _emit(rep.to_dict())
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.cmd == "family":
        sys.stdout.write(builtin_family(args.name, args.j).to_json() + "\n")
        return EXIT_OK
    path = Path(args.gamma)
    targets = sorted(path.glob("*.json")) if path.is_dir() else [args.gamma]
    code = EXIT_OK
    summary = []
    for t in targets:
        if len(targets) > 1:
            sys.stdout.write(f"# {t}\n")
        try:
            rc = _run_one(args, t)
        except UnsupportedPlumbing as e:
            log.error("unsupported plumbing: %s", e)
            rc = EXIT_UNSUPPORTED
        except (PlumbingError, SpincError, LatticeError, InvolutiveError, PartialResult, ValueError) as e:
            log.error("%s", e)
            rc = EXIT_ERROR
        code = max(code, rc)
        summary.append((str(t), rc))
    if len(targets) > 1:
        sys.stdout.write("# summary\n")
        for name, rc in summary:
            sys.stdout.write(f"# {rc}  {name}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
