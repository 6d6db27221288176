"""Command-line entry point.

Exit codes: 0 success, 1 mathematical failure (axiom, assumption or
identity), 2 input error.  Reports are JSON on stdout (or ``--out``); a
one-line summary goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from itertools import product as iproduct
from pathlib import Path

from . import io
from .dga import DGA, DGAError, build_simplicial_cochain_dga, builtin_dga, random_dga, validate_dga
from .graded import GradedMap, GradingError, HomogeneousVector
from .hodge import HodgeError, build_hodge, cohomology_dims, hodge_residuals, homotopy
from .linalg import LinAlgError, Matrix, format_rational, kernel_basis, solve_linear
from .simplicial import ComplexError
from .transfer import (AInftyStructure, MembershipError, Subcomplex, TransferError, check_assumption, mu_w,
                       verify_ainfty)

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (io.FormatError, ComplexError, DGAError, GradingError, LinAlgError, OSError,
                json.JSONDecodeError, HodgeError)


class InputError(Exception):
    pass


# -- argument handling ---------------------------------------------------------

def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", metavar="NAME", help="catalog DGA (point, interval, sphere2, torus, ...)")
    g.add_argument("--dga", metavar="FILE", help="DGA JSON file")
    g.add_argument("--complex", metavar="FILE", help="simplicial complex text file (cochain algebra)")
    g.add_argument("--random-seed", metavar="SEED", type=int, help="random_dga(SEED)")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")


def _add_datum(p: argparse.ArgumentParser) -> None:
    p.add_argument("--subcomplex", default="harm",
                   help="harm | closed | kerdstar | full | custom:FILE (default: harm)")
    p.add_argument("--Q", dest="q_source", default="auto", help="auto | zero | file:PATH (default: auto)")
    p.add_argument("--gram", metavar="FILE", help="per-degree gram matrices for --Q auto (default: identity)")
    p.add_argument("--max-order", type=int, default=4, metavar="N")
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int, default=1000, metavar="T")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--budget", type=int, default=10 ** 5, metavar="B")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ainfty", description="A-infinity structures by homotopy transfer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the DGA axioms")
    _add_input(p)

    p = sub.add_parser("transfer", help="build and verify mu_n tables, write the mu-table JSON")
    _add_input(p)
    _add_datum(p)

    p = sub.add_parser("verify", help="re-verify a stored mu-table against its algebra")
    p.add_argument("table", help="mu-table JSON produced by 'transfer'")
    _add_input(p)
    _add_datum(p)

    p = sub.add_parser("hodge", help="Hodge report: Betti numbers and identity residuals")
    _add_input(p)
    p.add_argument("--gram", metavar="FILE")

    p = sub.add_parser("mu3", help="evaluate mu_3 on three W elements given as DEG:c1,c2,...")
    _add_input(p)
    _add_datum(p)
    p.add_argument("elements", nargs=3, metavar="DEG:COORDS")

    p = sub.add_parser("dump", help="write a DGA as JSON")
    _add_input(p)
    return parser


def _check_config(args) -> None:
    if getattr(args, "max_order", 1) < 1:
        raise InputError("--max-order must be at least 1")
    if getattr(args, "trials", 1) < 1:
        raise InputError("--trials must be at least 1")
    if getattr(args, "budget", 1) < 1:
        raise InputError("--budget must be at least 1")


def load_algebra(args) -> DGA:
    if args.builtin:
        return builtin_dga(args.builtin)
    if args.dga:
        return io.parse_dga(Path(args.dga).read_text(encoding="utf-8"))
    if args.complex:
        K = io.parse_complex(Path(args.complex).read_text(encoding="utf-8"))
        return build_simplicial_cochain_dga(K, name=Path(args.complex).stem)
    return random_dga(args.random_seed)


def _load_gram(path, algebra: DGA):
    if not path:
        return None
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    sp = algebra.space
    blocks = doc.get("blocks", doc)
    return {g: io.matrix_from_json(blocks[str(g)], sp.dim(g), sp.dim(g), f"gram {g}") for g in sp.degrees()}


def build_datum(args, algebra: DGA):
    """Resolve --subcomplex / --Q into a checked TransferDatum (may raise TransferError)."""
    sp = algebra.space
    choice = args.subcomplex
    q_src = args.q_source
    pkg = None
    if q_src == "auto" or choice in ("harm", "closed", "kerdstar"):
        pkg = build_hodge(algebra, _load_gram(args.gram, algebra), "custom" if args.gram else "identity")
    if q_src == "auto":
        Q = homotopy(pkg)
    elif q_src == "zero":
        Q = GradedMap.zero(sp, -1)
    elif q_src.startswith("file:"):
        Q = io.parse_map(Path(q_src[5:]).read_text(encoding="utf-8"), sp, shift=-1)
    else:
        raise InputError(f"unknown --Q value {q_src!r}")

    if choice == "harm":
        W = Subcomplex.from_basis(sp, pkg.harmonic_basis)
    elif choice == "closed":
        W = Subcomplex.from_basis(sp, {g: kernel_basis(algebra.d.blocks[g]) for g in sp.degrees()})
    elif choice == "kerdstar":
        W = Subcomplex.from_basis(sp, {g: kernel_basis(pkg.d_star.blocks[g]) for g in sp.degrees()})
    elif choice == "full":
        W = Subcomplex.full(sp)
    elif choice.startswith("custom:"):
        W = io.parse_subcomplex(Path(choice[7:]).read_text(encoding="utf-8"), sp)
    else:
        raise InputError(f"unknown --subcomplex value {choice!r}")
    return check_assumption(algebra, W, Q)


def _emit(args, report: dict) -> None:
    text = io.pretty_json(report)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _config(args) -> dict:
    return {"subcomplex": args.subcomplex, "Q": args.q_source, "gram": args.gram or "identity",
            "max_order": args.max_order, "mode": args.mode, "trials": args.trials, "seed": args.seed,
            "budget": args.budget}


def _reject_non_dga(args, A: DGA) -> bool:
    """Emit the validation report and return True when A fails the DGA axioms."""
    rep = validate_dga(A)
    if rep.ok:
        return False
    out = rep.to_dict()
    out.update({"error": "DGAAxiomError", "algebra_hash": io.content_hash(A)})
    _emit(args, out)
    _note(f"{args.command}: input is not a DGA ({rep.first_failure['rule']} fails)")
    return True


def _failure_report(exc: TransferError, algebra: DGA, args) -> dict:
    witness = exc.witness
    if isinstance(witness, HomogeneousVector):
        witness = io.vector_to_json(witness)
    elif witness is not None:
        witness = list(witness)
    return {"ok": False, "error": type(exc).__name__, "message": str(exc), "witness": witness,
            "algebra_hash": io.content_hash(algebra), "config": _config(args)}


# -- commands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    A = load_algebra(args)
    rep = validate_dga(A)
    out = rep.to_dict()
    out["algebra_hash"] = io.content_hash(A)
    out["dims"] = {str(g): A.space.dim(g) for g in A.space.degrees()}
    _emit(args, out)
    _note(f"validate {A.name or 'dga'}: {'ok' if rep.ok else 'FAILED'}")
    return EXIT_OK if rep.ok else EXIT_MATH


def _stored_orders(structure: AInftyStructure, budget: int) -> list:
    return [n for n in range(1, structure.max_order + 1) if structure.dim ** n <= budget]


def cmd_transfer(args) -> int:
    A = load_algebra(args)
    if _reject_non_dga(args, A):
        return EXIT_MATH
    try:
        datum = build_datum(args, A)
    except TransferError as exc:
        _emit(args, _failure_report(exc, A, args))
        _note(f"transfer: {exc}")
        return EXIT_MATH
    structure = AInftyStructure(datum, args.max_order)
    report = verify_ainfty(structure, args.max_order, args.mode, args.trials, args.seed, args.budget)
    orders = _stored_orders(structure, args.budget)
    doc = io.export_mu_tables(structure, orders, report, extra={"config": _config(args), "seed": args.seed,
                                                                 "budget": args.budget})
    _emit(args, doc)
    _note(f"transfer: W dims {[datum.W.space.dim(g) for g in datum.W.space.degrees()]}, "
          f"orders stored {orders}, verification {'ok' if report.ok else 'FAILED'}")
    return EXIT_OK if report.ok else EXIT_MATH


def cmd_verify(args) -> int:
    doc = json.loads(Path(args.table).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or doc.get("format") != io.MU_TABLE_FORMAT:
        raise io.FormatError("not a mu-table document")
    A = load_algebra(args)
    if doc.get("algebra_hash") != io.content_hash(A):
        raise InputError("mu-table was produced for a different algebra (hash mismatch)")
    if _reject_non_dga(args, A):
        return EXIT_MATH
    try:
        datum = build_datum(args, A)
    except TransferError as exc:
        _emit(args, _failure_report(exc, A, args))
        return EXIT_MATH
    if doc.get("W_hash") != io.content_hash(datum.W) or doc.get("Q_hash") != io.content_hash(datum.Q):
        raise InputError("mu-table was produced for a different subcomplex or homotopy")
    max_order = int(doc.get("max_order", args.max_order))
    stored = io.load_mu_entries(doc, len(datum.W.basis_index))
    complete = [int(n) for n in doc.get("complete_orders", [])]
    probe = AInftyStructure(datum, max_order)
    preset = {}
    for n in complete:
        for t in iproduct(range(probe.dim), repeat=n):
            preset[t] = stored.get(t) or datum.W.space.zero(probe.degree_of(t))
    structure = AInftyStructure(datum, max_order, preset)
    budget = max([structure.dim ** n for n in complete], default=0)
    budget = max(budget, 1)
    report = verify_ainfty(structure, max_order, "exhaustive", args.trials, args.seed, budget)
    out = report.to_dict()
    out["algebra_hash"] = doc["algebra_hash"]
    out["table"] = str(args.table)
    _emit(args, out)
    _note(f"verify: {'ok' if report.ok else 'FAILED'}")
    return EXIT_OK if report.ok else EXIT_MATH


def cmd_hodge(args) -> int:
    A = load_algebra(args)
    pkg = build_hodge(A, _load_gram(args.gram, A), "custom" if args.gram else "identity")
    sp = A.space
    residuals = {name: ("0" if all(m.is_zero() for m in ms) else "nonzero")
                 for name, ms in hodge_residuals(pkg).items()}
    ranks = cohomology_dims(A)
    betti = pkg.betti()
    ok = all(v == "0" for v in residuals.values()) and betti == ranks
    out = {"ok": ok, "algebra_hash": io.content_hash(A), "gram": pkg.gram_description,
           "dims": {str(g): sp.dim(g) for g in sp.degrees()},
           "betti": {str(g): betti[g] for g in sp.degrees()},
           "betti_rank_oracle": {str(g): ranks[g] for g in sp.degrees()},
           "residuals": residuals}
    _emit(args, out)
    _note(f"hodge: betti {[betti[g] for g in sp.degrees()]}")
    return EXIT_OK if ok else EXIT_MATH


def parse_element(spec: str, datum) -> HomogeneousVector:
    """``"DEG:c1,c2,..."`` in W-coordinates of that degree."""
    try:
        deg_text, _, coords = spec.partition(":")
        g = int(deg_text)
        vals = [io._rat(x) for x in coords.split(",")] if coords.strip() else []
    except (ValueError, io.FormatError) as exc:
        raise InputError(f"bad element {spec!r}: {exc}") from None
    if len(vals) != datum.W.space.dim(g):
        raise InputError(f"element {spec!r} needs {datum.W.space.dim(g)} W-coordinates in degree {g}")
    return HomogeneousVector(g, tuple(vals))


def _is_mu1_exact(datum, value: HomogeneousVector) -> bool:
    W = datum.W
    g = value.degree
    if not W.space.dim(g):
        return True
    src = g - 1
    cols = [datum.W.coordinates(datum.algebra.d(W.embed(HomogeneousVector.basis(W.space, src, i)))).coords
            for i in range(W.space.dim(src))]
    M = Matrix.from_columns(cols, W.space.dim(g))
    return solve_linear(M, value.coords) is not None


def cmd_mu3(args) -> int:
    A = load_algebra(args)
    if _reject_non_dga(args, A):
        return EXIT_MATH
    try:
        datum = build_datum(args, A)
    except TransferError as exc:
        _emit(args, _failure_report(exc, A, args))
        return EXIT_MATH
    elems = [parse_element(s, datum) for s in args.elements]
    try:
        value = mu_w(datum, elems)
    except MembershipError as exc:
        _emit(args, _failure_report(exc, A, args))
        return EXIT_MATH
    exact = _is_mu1_exact(datum, value)
    out = {"ok": True, "algebra_hash": io.content_hash(A), "config": _config(args),
           "arguments": [io.vector_to_json(e) for e in elems],
           "mu3": io.vector_to_json(value), "zero": value.is_zero(), "mu1_exact": exact,
           "ambient": io.vector_to_json(datum.W.embed(value))}
    _emit(args, out)
    _note(f"mu3 = [{', '.join(format_rational(x) for x in value.coords)}] "
          f"({'exact' if exact else 'not exact'})")
    return EXIT_OK


def cmd_dump(args) -> int:
    A = load_algebra(args)
    _emit(args, io.serialize_dga(A))
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "transfer": cmd_transfer, "verify": cmd_verify,
            "hodge": cmd_hodge, "mu3": cmd_mu3, "dump": cmd_dump}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        _check_config(args)
        return COMMANDS[args.command](args)
    except (InputError, *INPUT_ERRORS) as exc:
        _note(f"input error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
