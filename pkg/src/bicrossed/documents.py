"""JSON documents for algebras, pairs, maps and reports.

Every document has ``format_version`` "1" and a ``kind``.  Coefficients are
always strings.  Sparse tensors are lists of [i, j, k, "c"] with 0-based
indices; a matched pair stores its actions as

    rtri   x-index, a-index -> a-index     (x |> a)
    ltri   x-index, a-index -> x-index     (x <| a)
    lhar   a-index, x-index -> a-index     (a <- x)
    rhar   a-index, x-index -> x-index     (a -> x)

Deformation maps are dense dim(A) x dim(X) matrices, row = A-coordinate,
column = X-basis index.
"""

from __future__ import annotations

import json

from .algebra import Algebra, Bilinear, Factorization
from .classify import ClassificationReport, EquivalenceClass, Fingerprint, IsoVerdict
from .deformation import DeformationMap, deform
from .errors import ParseError
from .linalg import Matrix, Subspace
from .matched_pair import MatchedPair
from .scalar import FieldSpec

FORMAT_VERSION = "1"

ACTION_KEYS = {"rtri": "xa_to_a", "ltri": "xa_to_x", "lhar": "ax_to_a", "rhar": "ax_to_x"}


def _s(field, x):
    return field.format(x)


def _coeff(field, text):
    if not isinstance(text, str):
        raise ParseError(f"coefficients must be strings, got {text!r}")
    return field.parse(text)


def _int(x, bound=None):
    if not isinstance(x, int) or isinstance(x, bool) or x < 0 or (bound is not None and x >= bound):
        raise ParseError(f"bad index {x!r}")
    return x


def _head(kind, field):
    return {"format_version": FORMAT_VERSION, "kind": kind, "field": field.descriptor()}


# -- writers -------------------------------------------------------------------

def _sparse(field, b: Bilinear):
    return [[i, j, k, _s(field, c)] for i, j, k, c in b.entries()]


def _vectors(field, vs):
    return [[_s(field, c) for c in v] for v in vs]


def _algebra_block(alg: Algebra):
    return {"dim": alg.dim, "names": list(alg.names), "entries": _sparse(alg.field, alg.mul)}


def _pair_block(mp: MatchedPair):
    out = {"a": _algebra_block(mp.a), "x": _algebra_block(mp.x)}
    for key, attr in ACTION_KEYS.items():
        out[key] = _sparse(mp.field, getattr(mp, attr))
    return out


def _matrix_block(m: Matrix):
    return [[_s(m.field, c) for c in row] for row in m.rows]


def _fingerprint_block(fp: Fingerprint):
    return fp.as_dict()


def to_document(obj, **extra) -> dict:
    if isinstance(obj, Algebra):
        doc = _head("algebra", obj.field) | _algebra_block(obj)
    elif isinstance(obj, MatchedPair):
        doc = _head("matched_pair", obj.field) | _pair_block(obj)
    elif isinstance(obj, Factorization):
        doc = _head("factorization", obj.field) | {
            "ambient": _algebra_block(obj.ambient),
            "a": _vectors(obj.field, obj.a.basis),
            "x": _vectors(obj.field, obj.x.basis),
        }
    elif isinstance(obj, Subspace):
        doc = _head("subspace", obj.field) | {"ambient_dim": obj.ambient_dim, "basis": _vectors(obj.field, obj.basis)}
    elif isinstance(obj, DeformationMap):
        doc = _head("deformation", obj.matrix.field) | {
            "rows": obj.pair.a.dim, "cols": obj.pair.x.dim, "matrix": _matrix_block(obj.matrix),
            "pair": _pair_block(obj.pair),
        }
    elif isinstance(obj, Matrix):
        doc = _head("deformation", obj.field) | {"rows": obj.shape[0], "cols": obj.shape[1],
                                                 "matrix": _matrix_block(obj)}
    elif isinstance(obj, ClassificationReport):
        doc = _report_document(obj)
    elif isinstance(obj, Fingerprint):
        doc = {"format_version": FORMAT_VERSION, "kind": "fingerprint", "fingerprint": _fingerprint_block(obj)}
    elif isinstance(obj, IsoVerdict):
        field = extra.pop("field", None)
        field = obj.witness.field if obj.witness is not None else field
        doc = (_head("iso", field) if field else {"format_version": FORMAT_VERSION, "kind": "iso"}) | {
            "status": obj.status,
            "witness": _matrix_block(obj.witness) if obj.witness is not None else None,
            "invariant": obj.invariant,
            "values": list(obj.values) if obj.values is not None else None,
            "reason": obj.reason,
        }
    elif isinstance(obj, (list, tuple)) and all(isinstance(r, DeformationMap) for r in obj):
        field = extra.pop("field", None) or (obj[0].matrix.field if obj else None)
        pair = extra.pop("pair", None) or (obj[0].pair if obj else None)
        doc = _head("deformation_list", field) | {
            "maps": [_matrix_block(r.matrix) for r in obj],
            "pair": _pair_block(pair) if pair is not None else None,
        }
    else:
        raise TypeError(f"no document form for {type(obj).__name__}")
    doc.update(extra)
    return doc


def _report_document(rep: ClassificationReport):
    mp = rep.maps[0].pair if rep.maps else None
    return _head("classification_report", rep.field) | {
        "pair_id": rep.pair_id,
        "map_order": "r: X -> A, matrix rows = A-coordinates, columns = X-basis",
        "candidates": rep.candidates,
        "maps": [_matrix_block(r.matrix) for r in rep.maps],
        "classes": [{
            "representative": _matrix_block(c.representative.matrix),
            "size": c.size,
            "members": [_matrix_block(r.matrix) for r in c.members],
            "fingerprint": _fingerprint_block(c.fingerprint),
        } for c in rep.classes],
        "factorization_index": rep.factorization_index,
        "pair": _pair_block(mp) if mp is not None else None,
    }


def dumps(obj, **extra) -> str:
    doc = obj if isinstance(obj, dict) else to_document(obj, **extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def save(obj, path, **extra):
    with open(path, "w") as fh:
        fh.write(dumps(obj, **extra))


# -- readers -------------------------------------------------------------------

def _read_sparse(field, entries, dims):
    if not isinstance(entries, list):
        raise ParseError("sparse tensor must be a list of [i, j, k, \"c\"]")
    quads = []
    for e in entries:
        if not isinstance(e, list) or len(e) != 4:
            raise ParseError(f"bad tensor entry {e!r}")
        i, j, k = (_int(x, d) for x, d in zip(e[:3], dims))
        quads.append((i, j, k, _coeff(field, e[3])))
    return Bilinear.from_entries(field, dims, quads)


def _read_algebra(field, block):
    dim = _int(block["dim"])
    names = block.get("names")
    if names is not None and (not isinstance(names, list) or len(names) != dim):
        raise ParseError("names must list one label per basis vector")
    return Algebra(field, _read_sparse(field, block["entries"], (dim, dim, dim)), names)


def _read_pair(field, block):
    a, x = _read_algebra(field, block["a"]), _read_algebra(field, block["x"])
    dims = {"rtri": (x.dim, a.dim, a.dim), "ltri": (x.dim, a.dim, x.dim),
            "lhar": (a.dim, x.dim, a.dim), "rhar": (a.dim, x.dim, x.dim)}
    acts = {ACTION_KEYS[k]: _read_sparse(field, block.get(k, []), dims[k]) for k in ACTION_KEYS}
    return MatchedPair(a, x, **acts)


def _read_vectors(field, vs, n):
    if not isinstance(vs, list):
        raise ParseError("expected a list of vectors")
    out = []
    for v in vs:
        if not isinstance(v, list) or len(v) != n:
            raise ParseError(f"vector must have {n} coefficients")
        out.append(tuple(_coeff(field, c) for c in v))
    return out


def _read_matrix(field, rows, nrows=None, ncols=None):
    if not isinstance(rows, list) or (nrows is not None and len(rows) != nrows):
        raise ParseError("matrix has the wrong number of rows")
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return Matrix(field, _read_vectors(field, rows, ncols), ncols)


def _read_fingerprint(d):
    try:
        return Fingerprint(**d)
    except TypeError as exc:
        raise ParseError(f"bad fingerprint: {exc}") from exc


def from_document(doc: dict):
    try:
        return _from_document(doc)
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise ParseError(f"malformed document: {exc!r}") from exc


def _from_document(doc):
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {doc.get('format_version')!r}")
    kind = doc.get("kind")
    if kind == "fingerprint":
        return _read_fingerprint(doc["fingerprint"])
    field = FieldSpec.from_descriptor(doc["field"]) if "field" in doc else None
    if kind == "algebra":
        return _read_algebra(field, doc)
    if kind == "matched_pair":
        return _read_pair(field, doc)
    if kind == "factorization":
        e = _read_algebra(field, doc["ambient"])
        return Factorization(e, Subspace.span(field, e.dim, _read_vectors(field, doc["a"], e.dim)),
                             Subspace.span(field, e.dim, _read_vectors(field, doc["x"], e.dim)))
    if kind == "subspace":
        n = _int(doc["ambient_dim"])
        return Subspace.span(field, n, _read_vectors(field, doc["basis"], n))
    if kind == "deformation":
        m = _read_matrix(field, doc["matrix"], _int(doc["rows"]), _int(doc["cols"]))
        if doc.get("pair") is None:
            return m
        return DeformationMap(_read_pair(field, doc["pair"]), m)
    if kind == "deformation_list":
        mp = _read_pair(field, doc["pair"]) if doc.get("pair") else None
        ms = [_read_matrix(field, m) for m in doc["maps"]]
        return [DeformationMap(mp, m) for m in ms] if mp is not None else ms
    if kind == "iso":
        w = doc.get("witness")
        values = doc.get("values")
        return IsoVerdict(doc["status"], _read_matrix(field, w) if w is not None else None,
                          doc.get("invariant"), tuple(values) if values is not None else None, doc.get("reason", ""))
    if kind == "classification_report":
        return _read_report(field, doc)
    raise ParseError(f"unknown document kind {kind!r}")


def _read_report(field, doc):
    mp = _read_pair(field, doc["pair"]) if doc.get("pair") else None
    dx = mp.x.dim if mp else None

    def dm(rows):
        return DeformationMap(mp, _read_matrix(field, rows, ncols=dx))

    maps = [dm(m) for m in doc["maps"]]
    classes = []
    for c in doc["classes"]:
        rep = dm(c["representative"])
        classes.append(EquivalenceClass(rep, [dm(m) for m in c["members"]], _read_fingerprint(c["fingerprint"]),
                                        deform(mp, rep) if mp else None))
    rep = ClassificationReport(field, doc["pair_id"], doc["candidates"], maps, classes)
    if rep.factorization_index != doc["factorization_index"]:
        raise ParseError("factorization_index disagrees with the class list")
    return rep


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    return from_document(doc)


def load(path):
    with open(path) as fh:
        return loads(fh.read())
