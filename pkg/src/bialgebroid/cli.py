"""Command line front-end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import sys

from .algebroid import AlgebroidError, CocycleError, tangent_algebroid
from .exterior import ExteriorError, MultiForm, ProductElement
from .glb import (GLBError, YBError, canonical_pair, check_duality, check_glb, check_glb_point,
                  induced_jacobi, triangular, yb_center_reduce, yb_check, yb_construct)
from .jacobi import JacobiError, build_tm_r, is_jacobi, poissonize, verify_jacobi
from .report import Report
from .structfile import EXAMPLES, SchemaError, StructureFile, dumps, emit_example, glb_doc, load_file
from .time_ext import bialgebroidize

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _need(sf: StructureFile, kinds: tuple, command: str):
    if sf.kind not in kinds:
        raise InputError(f"{command} expects a file of kind {' or '.join(kinds)}, got {sf.kind}")


def _pair_from(sf: StructureFile, rep: Report):
    """GLB pair from a glb_pair file, or the canonical pair of a Jacobi file."""
    if sf.kind == "glb_pair":
        return sf.pair(), None
    J = sf.jacobi()
    ok = is_jacobi(J)
    rep.add("jacobi_input", ok, None if ok else verify_jacobi(J).failures()[0].witness)
    if not ok:
        return None, J
    return canonical_pair(J), J


# commands ------------------------------------------------------------------
def verify_algebroid(sf: StructureFile, args) -> Report:
    _need(sf, ("lie_algebra", "algebroid", "yb_data", "glb_pair"), "verify algebroid")
    rep = Report("algebroid axioms")
    rep.extend(sf.algebroid.check_axioms(seed=args.seed))
    if sf.kind == "glb_pair":
        rep.extend(sf.dual.check_axioms(seed=args.seed), prefix="dual.")
    if sf.cocycle_form is not None:
        ok = sf.algebroid.is_cocycle(sf.cocycle_form)
        rep.add("cocycle_form", ok, None if ok else sf.algebroid.differential(sf.cocycle_form).first_term())
    return rep


def verify_jacobi_cmd(sf: StructureFile, args) -> Report:
    _need(sf, ("jacobi",), "verify jacobi")
    return verify_jacobi(sf.jacobi())


def verify_glb(sf: StructureFile, args) -> Report:
    _need(sf, ("jacobi", "glb_pair"), "verify glb")
    rep = Report("generalized Lie bialgebroid")
    p, J = _pair_from(sf, rep)
    if p is None:
        return rep
    main = check_glb(p, seed=args.seed)
    rep.extend(main)
    if main.passed:
        dual = check_duality(p, seed=args.seed)
        rep.extend(dual)
        rep.add("duality", dual.passed, [c.check_id for c in dual.failures()] or None)
        induced = induced_jacobi(p, check=False)
        rep.add("induced_is_jacobi", is_jacobi(induced), None)
        rep.data["induced_bivector"] = induced.Lambda.to_records()
        rep.data["induced_vector"] = [str(c) for c in induced.E.components()] if induced.dim else []
        if J is not None:
            rep.add("induced_jacobi_roundtrip", induced == J,
                    {"bivector": induced.Lambda.to_records(),
                     "vector": [str(c) for c in induced.E.components()]})
    else:
        rep.skip("duality", "the pair itself fails")
    return rep


def verify_glb_point(sf: StructureFile, args) -> Report:
    _need(sf, ("glb_pair", "yb_data"), "verify glb-point")
    if sf.kind == "glb_pair":
        if sf.ring.variables or sf.ring.time_extended:
            raise InputError("verify glb-point needs a pair over a point (no ring variables)")
        return check_glb_point(sf.pair())
    data = sf.yb()
    rep = Report("generalized Lie bialgebra")
    try:
        p = yb_construct(data.h, data.r, data.xbar0)
    except YBError as e:
        rep.add("construct", False, str(e))
        return rep
    rep.extend(check_glb_point(p), prefix="construct.")
    return rep


def verify_yb(sf: StructureFile, args) -> Report:
    _need(sf, ("yb_data",), "verify yb")
    data = sf.yb()
    rep = Report("Yang-Baxter type construction")
    rep.extend(yb_check(data.h, data.r, data.xbar0))
    if not rep.passed:
        return rep
    p = yb_construct(data.h, data.r, data.xbar0)
    rep.add("construct", True)
    rep.extend(check_glb_point(p), prefix="construct.")
    rep.extend(check_duality(p, seed=args.seed), prefix="construct.")
    try:
        c = yb_center_reduce(data.h, data.r, data.xbar0)
    except YBError as e:
        rep.skip("center_reduce", str(e))
    else:
        rep.add("center_reduce", True)
        rep.extend(check_glb_point(c), prefix="center.")
        rep.extend(check_duality(c, seed=args.seed), prefix="center.")
    return rep


def triangular_cmd(sf: StructureFile, args) -> Report:
    _need(sf, ("algebroid", "lie_algebra", "jacobi"), "triangular")
    rep = Report("triangular pair")
    if sf.kind == "jacobi":
        J = sf.jacobi()
        A, phi0 = build_tm_r(J.ring)
        P = ProductElement(J.Lambda, J.E).embed()
    else:
        A = sf.algebroid
        phi0 = sf.cocycle_form if sf.cocycle_form is not None else MultiForm.zero(sf.ring, sf.rank, 1)
        if sf.bivector is None:
            raise InputError("triangular needs a bivector")
        P = sf.bivector
    if not A.is_cocycle(phi0):
        rep.add("cocycle", False, A.differential(phi0).first_term())
        return rep
    sq = A.twisted_schouten(phi0, P, P)
    rep.add("twisted_square_vanishes", not sq.terms, sq.first_term())
    if sq.terms:
        return rep
    p = triangular(A, phi0, P)
    rep.add("bracket_forms_agree", True)
    rep.extend(check_glb(p, seed=args.seed))
    rep.data["pair"] = glb_doc(p)
    return rep


def bialgebroidize_cmd(sf: StructureFile, args) -> Report:
    _need(sf, ("jacobi", "glb_pair"), "bialgebroidize")
    rep = Report("Lie bialgebroid over base x R")
    p, _ = _pair_from(sf, rep)
    if p is None:
        return rep
    pre = check_glb(p, seed=args.seed)
    if not pre.passed:
        rep.extend(pre)
        return rep
    rep.extend(bialgebroidize(p))
    return rep


def poissonize_cmd(sf: StructureFile, args) -> Report:
    _need(sf, ("jacobi",), "poissonize")
    J = sf.jacobi()
    rep = Report("Poissonization")
    ok = is_jacobi(J)
    rep.add("jacobi_input", ok, None if ok else verify_jacobi(J).failures()[0].witness)
    if not ok:
        return rep
    L = poissonize(J)
    sq = tangent_algebroid(L.ring).schouten(L, L)
    rep.add("poisson", not sq.terms, sq.first_term())
    rep.data["ring"] = {"vars": list(L.ring.variables), "time_extended": True}
    rep.data["bivector"] = L.to_records()
    return rep


VERIFY = {
    "algebroid": verify_algebroid,
    "jacobi": verify_jacobi_cmd,
    "glb": verify_glb,
    "glb-point": verify_glb_point,
    "yb": verify_yb,
}

COMMANDS = {
    "triangular": triangular_cmd,
    "bialgebroidize": bialgebroidize_cmd,
    "poissonize": poissonize_cmd,
}


def _filter(rep: Report, checks: str | None) -> Report:
    if not checks:
        return rep
    wanted = [c.strip() for c in checks.split(",") if c.strip()]
    out = Report(rep.title, [c for c in rep.checks if c.check_id in wanted], dict(rep.data))
    missing = [w for w in wanted if w not in out]
    for w in missing:
        out.skip(w, "no such check in this suite")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    common.add_argument("--checks", default=None, help="comma-separated subset of check ids")

    parser = argparse.ArgumentParser(prog="bialgebroid",
                                     description="Exact verification of algebroid and bialgebroid structures.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite", parents=[common])
    v.add_argument("suite", choices=sorted(VERIFY))
    v.add_argument("file")
    for name in COMMANDS:
        c = sub.add_parser(name, parents=[common])
        c.add_argument("file")
    e = sub.add_parser("emit-example", help="write a built-in structure file")
    e.add_argument("name", choices=sorted(EXAMPLES))
    e.add_argument("-o", "--output", default=None)
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_PASS

    if args.command == "emit-example":
        text = dumps(emit_example(args.name))
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
        return EXIT_PASS

    handler = VERIFY[args.suite] if args.command == "verify" else COMMANDS[args.command]
    try:
        sf = load_file(args.file)
        rep = handler(sf, args)
    except (SchemaError, InputError) as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    except (AlgebroidError, CocycleError, ExteriorError, GLBError, JacobiError, YBError) as e:
        err.write(f"input error: {e}\n")
        return EXIT_INPUT
    rep = _filter(rep, args.checks)
    out.write((rep.to_json() if args.format == "json" else rep.to_text()) + "\n")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
