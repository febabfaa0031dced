"""bicrossed command line.

Exit codes: 0 ok, 1 an axiom or check failed, 2 bad input, 3 search budget
exceeded, 4 an equivalence could not be decided.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import documents
from .algebra import Algebra, Factorization, check_associative, check_factorization
from .catalog import ENTRY_IDS, get_entry, named_map, parse_entry_id
from .classify import (
    ClassificationReport,
    Fingerprint,
    are_isomorphic,
    classify_complements,
    invariant_fingerprint,
)
from .deformation import (
    DeformationMap,
    deform,
    enumerate_deformation_maps,
    extract_deformation,
    is_deformation_map,
    lift_complement,
)
from .errors import (
    AlgebraError,
    BudgetExceeded,
    DimensionMismatch,
    FieldNotFinite,
    ParseError,
    UnknownEntry,
    UnresolvedPair,
)
from .linalg import DEFAULT_BUDGET, DEFAULT_GL_BUDGET, Matrix, Subspace, lincomb
from .matched_pair import (
    MatchedPair,
    bicrossed_product,
    canonical_matched_pair,
    check_matched_pair,
    semidirect_product,
    trivial_extension,
)
from .scalar import FieldSpec

log = logging.getLogger("bicrossed")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET, EXIT_UNRESOLVED = 0, 1, 2, 3, 4

SYMBOLS = {"xa_to_a": "|>", "xa_to_x": "<|", "ax_to_a": "<-", "ax_to_x": "->"}


class Failed(Exception):
    """A check failed; carries the message for exit code 1."""


# -- text rendering --------------------------------------------------------------

def _vec(names, v):
    terms = []
    for name, c in zip(names, v):
        if not c:
            continue
        s = str(c)
        terms.append(name if s == "1" else f"-{name}" if s == "-1" else f"{s}*{name}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def format_algebra(alg: Algebra) -> str:
    lines = [f"algebra over {alg.field}, dim {alg.dim}, basis {' '.join(alg.names)}"]
    for i in range(alg.dim):
        for j in range(alg.dim):
            v = alg.product(i, j)
            if any(v):
                lines.append(f"  {alg.names[i]} * {alg.names[j]} = {_vec(alg.names, v)}")
    return "\n".join(lines)


def format_pair(mp: MatchedPair) -> str:
    lines = [f"matched pair over {mp.field}",
             f"A: {' '.join(mp.a.names)}", f"X: {' '.join(mp.x.names)}"]
    for attr, sym in SYMBOLS.items():
        b = getattr(mp, attr)
        left, right = (mp.x, mp.a) if attr.startswith("xa") else (mp.a, mp.x)
        out = mp.a if attr.endswith("_a") else mp.x
        for i in range(left.dim):
            for j in range(right.dim):
                v = b.basis(i, j)
                if any(v):
                    lines.append(f"  {left.names[i]} {sym} {right.names[j]} = {_vec(out.names, v)}")
    return "\n".join(lines)


def format_matrix(m: Matrix) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in m.rows) + "]"


def format_fingerprint(fp: Fingerprint) -> str:
    return " ".join(f"{k}={v}" for k, v in fp.as_dict().items())


def format_report(rep: ClassificationReport) -> str:
    lines = [f"pair {rep.pair_id or '?'} over {rep.field}",
             "deformation maps r: X -> A (matrix rows = A-coordinates, columns = X-basis)",
             f"candidates: {rep.candidates}",
             f"deformation maps: {len(rep.maps)}"]
    for k, c in enumerate(rep.classes, 1):
        lines.append(f"class {k}: size {c.size}, representative {format_matrix(c.representative.matrix)}")
        lines.append(f"  fingerprint: {format_fingerprint(c.fingerprint)}")
    lines.append(f"factorization index = {rep.factorization_index}")
    return "\n".join(lines)


def render(obj) -> str:
    if isinstance(obj, Algebra):
        return format_algebra(obj)
    if isinstance(obj, MatchedPair):
        return format_pair(obj)
    if isinstance(obj, ClassificationReport):
        return format_report(obj)
    if isinstance(obj, Fingerprint):
        return format_fingerprint(obj)
    if isinstance(obj, DeformationMap):
        return format_matrix(obj.matrix)
    if isinstance(obj, Subspace):
        return "\n".join(["subspace of dim %d in ambient dim %d" % (obj.dim, obj.ambient_dim)]
                         + ["  (" + ", ".join(str(c) for c in v) + ")" for v in obj.basis])
    if isinstance(obj, list):
        return "\n".join([f"{len(obj)} deformation maps"] + [format_matrix(r.matrix) for r in obj])
    return str(obj)


# -- inputs ------------------------------------------------------------------------

def _field(args) -> FieldSpec:
    try:
        return FieldSpec.from_string(args.field)
    except (ValueError, ParseError) as exc:
        raise ParseError(f"bad --field {args.field!r}: {exc}") from exc


def _entry(args):
    name, k = parse_entry_id(args.catalog)
    n = args.n if args.n is not None else k
    m = args.m if args.m is not None else k
    return get_entry(name, _field(args), n=n, m=m)


def _load(path):
    try:
        return documents.load(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_input(args, want: str, path=None):
    """Resolve the command's input to an Algebra, Factorization or MatchedPair."""
    path = path if path is not None else args.input
    if path is None and not args.catalog:
        raise ParseError("give an input file or --catalog ID")
    if path is None:
        e = _entry(args)
        obj = {"algebra": e.ambient, "factorization": e.factorization}.get(want) or e.pair()
        return obj
    obj = _load(path)
    if want == "pair" and isinstance(obj, Factorization):
        return canonical_matched_pair(obj)
    if want == "algebra" and isinstance(obj, Factorization):
        return obj.ambient
    if want == "pair" and isinstance(obj, DeformationMap):
        return obj.pair
    types = {"algebra": Algebra, "factorization": Factorization, "pair": MatchedPair}
    if not isinstance(obj, types[want]):
        raise ParseError(f"expected a {want} document, got {type(obj).__name__}")
    return obj


def load_map(args, mp: MatchedPair, name=None, path=None) -> Matrix:
    name = name if name is not None else args.map
    path = path if path is not None else args.map_file
    if path:
        obj = _load(path)
        m = obj.matrix if isinstance(obj, DeformationMap) else obj
        if not isinstance(m, Matrix):
            raise ParseError("expected a deformation document")
        if m.shape != (mp.a.dim, mp.x.dim):
            raise ParseError(f"map is {m.shape}, pair needs {(mp.a.dim, mp.x.dim)}")
        return m
    if name is None:
        raise ParseError("give --map NAME or --map-file PATH")
    if name == "0":
        return Matrix.zeros(mp.field, mp.a.dim, mp.x.dim)
    if not args.catalog:
        raise ParseError("named maps need --catalog")
    return named_map(parse_entry_id(args.catalog)[0], name, _field(args)).matrix


def emit(args, obj, **extra):
    if args.output == "doc":
        sys.stdout.write(documents.dumps(obj, **extra))
    else:
        print(render(obj))


def _no_violation(v):
    if v is not None:
        raise Failed(str(v))


# -- commands ------------------------------------------------------------------------

def cmd_check(args):
    kind = args.kind
    if kind == "algebra":
        alg = load_input(args, "algebra")
        _no_violation(check_associative(alg))
    elif kind == "factorization":
        _no_violation(check_factorization(load_input(args, "factorization")))
    elif kind == "pair":
        _no_violation(check_matched_pair(load_input(args, "pair")))
    else:
        mp = load_input(args, "pair")
        _no_violation(is_deformation_map(mp, load_map(args, mp)))
    print(f"{kind}: ok")


def cmd_bicrossed(args):
    emit(args, bicrossed_product(load_input(args, "pair")))


def cmd_canonical(args):
    emit(args, canonical_matched_pair(load_input(args, "factorization")))


def cmd_trivial_ext(args):
    mp = load_input(args, "pair")
    emit(args, trivial_extension(mp.a, mp.ax_to_x, mp.xa_to_x, mp.x.names))


def cmd_semidirect(args):
    mp = load_input(args, "pair")
    emit(args, semidirect_product(mp.a, mp.x, mp.ax_to_x, mp.xa_to_x))


def _validated_map(args, mp):
    r = load_map(args, mp)
    _no_violation(is_deformation_map(mp, r))
    return DeformationMap(mp, r)


def cmd_deform(args):
    mp = load_input(args, "pair")
    emit(args, deform(mp, _validated_map(args, mp)))


def cmd_lift(args):
    mp = load_input(args, "pair")
    emit(args, lift_complement(mp, _validated_map(args, mp)))


def cmd_extract(args):
    f = load_input(args, "factorization")
    if args.complement:
        other = _load(args.complement)
        if not isinstance(other, Subspace):
            raise ParseError("--complement must be a subspace document")
    else:
        # complement of the ambient algebra given by a named map: span{x + r(x)}
        mp = canonical_matched_pair(f)
        r = _validated_map(args, mp)
        n = f.ambient.dim
        vecs = [tuple(a + b for a, b in zip(lincomb(col, f.a.basis, f.field, n), x))
                for col, x in zip(r.matrix.columns(), f.x.basis)]
        other = Subspace.span(f.field, n, vecs)
    emit(args, extract_deformation(f, other))


def cmd_enumerate(args):
    mp = load_input(args, "pair")
    maps = enumerate_deformation_maps(mp, args.budget, args.workers)
    emit(args, [DeformationMap(mp, m) if isinstance(m, Matrix) else m for m in maps], pair=mp, field=mp.field)


def cmd_classify(args):
    mp = load_input(args, "pair")
    pair_id = args.catalog or args.input or ""
    if args.catalog:
        pair_id = _entry(args).id
    rep = classify_complements(mp, args.budget, args.gl_budget, args.workers, pair_id=pair_id)
    emit(args, rep)
    if args.output == "doc":
        print(f"factorization index = {rep.factorization_index}", file=sys.stderr)


def _algebra_for(args, path=None, name=None):
    """An algebra from a file, or X_r when --map is given, or the ambient algebra."""
    if path is not None or (args.input is not None and name is None and args.map is None):
        obj = _load(path or args.input)
        if isinstance(obj, Factorization):
            return obj.ambient
        if isinstance(obj, DeformationMap):
            return deform(obj.pair, obj)
        if not isinstance(obj, Algebra):
            raise ParseError("expected an algebra document")
        return obj
    if name is not None or args.map is not None or args.map_file:
        mp = load_input(args, "pair")
        r = load_map(args, mp, name=name)
        _no_violation(is_deformation_map(mp, r))
        return deform(mp, r)
    return load_input(args, "algebra")


def cmd_fingerprint(args):
    emit(args, invariant_fingerprint(_algebra_for(args)))


def cmd_iso(args):
    if args.other is not None:
        a, b = _algebra_for(args), _algebra_for(args, path=args.other)
    else:
        if args.against is None:
            raise ParseError("iso needs a second algebra: OTHER file or --against MAP")
        a, b = _algebra_for(args), _algebra_for(args, name=args.against)
    witness = None
    if args.witness:
        w = _load(args.witness)
        witness = w.matrix if isinstance(w, DeformationMap) else w
    verdict = are_isomorphic(a, b, args.gl_budget, witness=witness)
    emit(args, verdict, field=a.field)
    if verdict.status == "unknown":
        return EXIT_UNRESOLVED
    return EXIT_OK


COMMANDS = {
    "check": cmd_check, "bicrossed": cmd_bicrossed, "canonical": cmd_canonical,
    "trivial-ext": cmd_trivial_ext, "semidirect": cmd_semidirect, "deform": cmd_deform,
    "lift": cmd_lift, "extract": cmd_extract, "enumerate": cmd_enumerate,
    "classify": cmd_classify, "fingerprint": cmd_fingerprint, "iso": cmd_iso,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="input document (JSON)")
    common.add_argument("--catalog", help=f"built-in example: {', '.join(ENTRY_IDS)}; sized ids like mn(3) work")
    common.add_argument("--n", type=int, help="size for mn / triangular-split / lastrow-split")
    common.add_argument("--m", type=int, help="corner dimension for bimodule-corner")
    common.add_argument("--field", default="Q", help="Q, F5 or Fp:5 (default Q)")
    common.add_argument("--output", choices=("text", "doc"), default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="deformation-map candidate budget")
    common.add_argument("--gl-budget", type=int, default=DEFAULT_GL_BUDGET, help="isomorphism search budget")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--map", help="named deformation map (catalog), or 0 for the zero map")
    common.add_argument("--map-file", help="deformation map document")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bicrossed", description="matched pairs, deformation maps and complements")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "check":
            sp.add_argument("--kind", choices=("algebra", "pair", "factorization", "deformation"), default="pair")
        if name == "extract":
            sp.add_argument("--complement", help="subspace document of the other complement")
        if name == "iso":
            sp.add_argument("other", nargs="?", help="second algebra document")
            sp.add_argument("--against", help="with --catalog: compare X_map against X_against")
            sp.add_argument("--witness", help="candidate isomorphism (matrix document)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code = COMMANDS[args.command](args)
        return code or EXIT_OK
    except Failed as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnresolvedPair as exc:
        print(f"unresolved: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except (ParseError, UnknownEntry, FieldNotFinite, DimensionMismatch, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AlgebraError as exc:
        # NotAssociative, InvalidMatchedPair, NotABimodule, ...
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
