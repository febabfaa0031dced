"""Built-in factorizations, actions and deformation maps from the matrix examples.

Expected action tables are kept in label form, ``{(left, right): {out: coeff}}``,
so they can be compared entry-for-entry with a computed canonical pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import Algebra, Factorization
from .deformation import DeformationMap
from .errors import UnknownEntry
from .linalg import Matrix, Subspace
from .matched_pair import ACTIONS, MatchedPair, canonical_matched_pair
from .scalar import QQ, FieldSpec


def _label(i, j, n):
    return f"e{i}{j}" if n < 10 else f"e{i},{j}"


def build_matrix_algebra(n: int, field: FieldSpec = QQ) -> Algebra:
    """M_n with basis e_ij in row-major order and e_ij e_kl = delta_jk e_il."""
    if n < 1:
        raise ValueError("n must be at least 1")
    idx = lambda i, j: (i - 1) * n + (j - 1)  # noqa: E731
    entries = [(idx(i, j), idx(j, l), idx(i, l), 1)
               for i in range(1, n + 1) for j in range(1, n + 1) for l in range(1, n + 1)]
    names = [_label(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1)]
    return Algebra.from_entries(field, n * n, entries, names)


def _coordinate_split(e: Algebra, a_names, x_names) -> Factorization:
    pos = {nm: k for k, nm in enumerate(e.names)}
    return Factorization(e, Subspace.coordinate(e.field, e.dim, [pos[nm] for nm in a_names]),
                         Subspace.coordinate(e.field, e.dim, [pos[nm] for nm in x_names]))


def build_triangular_split(n: int, field: FieldSpec = QQ) -> Factorization:
    """M_n = strictly lower triangular + upper triangular."""
    if n < 2:
        raise ValueError("n must be at least 2")
    e = build_matrix_algebra(n, field)
    rng = range(1, n + 1)
    return _coordinate_split(e, [_label(i, j, n) for i in rng for j in rng if i > j],
                             [_label(i, j, n) for i in rng for j in rng if i <= j])


def build_lastrow_split(n: int, field: FieldSpec = QQ) -> Factorization:
    """M_n = (rows 1..n-1) + (row n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    e = build_matrix_algebra(n, field)
    rng = range(1, n + 1)
    return _coordinate_split(e, [_label(i, j, n) for i in range(1, n) for j in rng],
                             [_label(n, j, n) for j in rng])


def build_triangular_bimodule(field: FieldSpec = QQ, m: int = 1) -> Factorization:
    """E = [[K, K^m], [0, K]] split into the diagonal and the corner.

    Basis order: e11, m1..mm, e22.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    names = ["e11"] + [f"m{k}" for k in range(1, m + 1)] + ["e22"]
    d1, d2 = 0, m + 1
    entries = [(d1, d1, d1, 1), (d2, d2, d2, 1)]
    for k in range(1, m + 1):
        entries += [(d1, k, k, 1), (k, d2, k, 1)]
    e = Algebra.from_entries(field, m + 2, entries, names)
    return _coordinate_split(e, ["e11", "e22"], names[1:m + 1])


def build_upper_triangular(field: FieldSpec = QQ) -> Algebra:
    """Upper triangular 2x2 matrices on e11, e12, e22."""
    names = ["e11", "e12", "e22"]
    return Algebra.from_products(field, names, {
        ("e11", "e11"): {"e11": 1}, ("e11", "e12"): {"e12": 1},
        ("e12", "e22"): {"e12": 1}, ("e22", "e22"): {"e22": 1}})


def build_ideal_split(field: FieldSpec = QQ) -> Factorization:
    """Upper triangular 2x2 with the ideal A = span{e12} and X = diagonal."""
    return _coordinate_split(build_upper_triangular(field), ["e12"], ["e11", "e22"])


# -- oracle tables ----------------------------------------------------------

def _tab(triples):
    out = {}
    for left, right, res in triples:
        out.setdefault((left, right), {})[res] = 1
    return out


def triangular_split_tables(n: int) -> dict:
    """Four case formulas for the triangular split of M_n, independent of E's product."""
    L = lambda i, j: _label(i, j, n)  # noqa: E731
    rng = range(1, n + 1)
    lower = [(i, j) for i in rng for j in rng if i > j]
    upper = [(i, j) for i in rng for j in rng if i <= j]
    # a <- x : e_ij <- e_lk = e_ik if i > k >= j = l
    ax_a = [(L(i, j), L(l, k), L(i, k)) for i, j in lower for l, k in upper if i > k >= j == l]
    # a -> x : e_ij -> e_lk = e_ik if l = j < i <= k
    ax_x = [(L(i, j), L(l, k), L(i, k)) for i, j in lower for l, k in upper if l == j < i <= k]
    # x |> a : e_rs |> e_pt = e_rt if t < r <= s = p
    xa_a = [(L(r, s), L(p, t), L(r, t)) for r, s in upper for p, t in lower if t < r <= s == p]
    # x <| a : e_rs <| e_pt = e_rt if r <= t < s = p
    xa_x = [(L(r, s), L(p, t), L(r, t)) for r, s in upper for p, t in lower if r <= t < s == p]
    return {"xa_to_a": _tab(xa_a), "xa_to_x": _tab(xa_x), "ax_to_a": _tab(ax_a), "ax_to_x": _tab(ax_x)}


def lastrow_split_tables(n: int) -> dict:
    L = lambda i, j: _label(i, j, n)  # noqa: E731
    rng = range(1, n + 1)
    a_lab = [(v, t) for v in range(1, n) for t in rng]
    # e_nu <| e_vt = e_nt if u = v ;  e_vt <- e_nu = e_vu if t = n
    xa_x = [(L(n, u), L(v, t), L(n, t)) for u in rng for v, t in a_lab if u == v]
    ax_a = [(L(v, t), L(n, u), L(v, u)) for v, t in a_lab for u in rng if t == n]
    return {"xa_to_a": {}, "xa_to_x": _tab(xa_x), "ax_to_a": _tab(ax_a), "ax_to_x": {}}


def bimodule_corner_tables(m: int) -> dict:
    # corner m <| diag(r, s) = m s ;  diag(r, s) -> corner m = r m
    ms = [f"m{k}" for k in range(1, m + 1)]
    return {"xa_to_a": {}, "ax_to_a": {},
            "xa_to_x": _tab([(mk, "e22", mk) for mk in ms]),
            "ax_to_x": _tab([("e11", mk, mk) for mk in ms])}


# Expected nonzero actions for M_2 = lower + upper and M_3 = rows 1-2 + row 3.
M2_SPLIT_TABLES = {
    "ax_to_a": {("e21", "e11"): {"e21": 1}},
    "ax_to_x": {("e21", "e12"): {"e22": 1}},
    "xa_to_x": {("e12", "e21"): {"e11": 1}},
    "xa_to_a": {("e22", "e21"): {"e21": 1}},
}

M3_LASTROW_TABLES = {
    "xa_to_x": _tab([("e31", "e11", "e31"), ("e31", "e12", "e32"), ("e31", "e13", "e33"),
                     ("e32", "e21", "e31"), ("e32", "e22", "e32"), ("e32", "e23", "e33")]),
    "ax_to_a": _tab([("e13", "e31", "e11"), ("e13", "e32", "e12"), ("e13", "e33", "e13"),
                     ("e23", "e31", "e21"), ("e23", "e32", "e22"), ("e23", "e33", "e23")]),
    "xa_to_a": {},
    "ax_to_x": {},
}


def m2_deformed_table(a) -> dict:
    """Reference table of X_{r_a} for M_2 (zero entries omitted); lacks two entries, see below."""
    t = {("e11", "e11"): {"e11": 1}, ("e11", "e12"): {"e12": 1, "e22": a},
         ("e12", "e11"): {"e11": a}, ("e12", "e12"): {"e22": a * a},
         ("e12", "e22"): {"e12": 1}, ("e22", "e12"): {"e22": -a},
         ("e22", "e22"): {"e22": 1}}
    return _drop_zeros(t)


def m2_deformed_table_computed(a) -> dict:
    """X_{r_a} as it actually comes out of x + r_a(x) inside M_2.

    Differs from ``m2_deformed_table`` in two entries: e12 e12 also has a^2 e11
    and e12 e22 also has -a e11.  With these, e11 + e22 is a unit of X_{r_a}.
    """
    t = m2_deformed_table(a)
    t[("e12", "e12")] = {"e11": a * a, "e22": a * a}
    t[("e12", "e22")] = {"e11": -a, "e12": 1}
    return _drop_zeros(t)


M3_DEFORMED_TABLES = {
    "X1": _tab([("e33", "e31", "e31"), ("e33", "e32", "e32"), ("e32", "e33", "e32"),
                ("e33", "e33", "e33")]),
    "X2": _tab([("e31", "e33", "e31"), ("e33", "e31", "e31"), ("e32", "e33", "e32"),
                ("e33", "e32", "e32"), ("e33", "e33", "e33")]),
    "X3": _tab([("e31", "e31", "e32"), ("e31", "e33", "e31"), ("e33", "e31", "e31"),
                ("e32", "e33", "e32"), ("e33", "e32", "e32"), ("e33", "e33", "e33")]),
}

# labels of the isomorphic algebras in the standard list of 3-dimensional algebras
M3_CLASSIFICATION_LABELS = {"X1": "As_3^9", "X2": "As_3^10", "X3": "As_3^12"}


def _drop_zeros(t):
    out = {}
    for key, vals in t.items():
        vals = {k: v for k, v in vals.items() if v != 0}
        if vals:
            out[key] = vals
    return out


def action_table(mp: MatchedPair, action: str) -> dict:
    """Label form of one action tensor of a pair."""
    b = getattr(mp, action)
    left = mp.x.names if action.startswith("xa") else mp.a.names
    right = mp.a.names if action.startswith("xa") else mp.x.names
    out_names = mp.a.names if action.endswith("_a") else mp.x.names
    t = {}
    for i, j, k, c in b.entries():
        t.setdefault((left[i], right[j]), {})[out_names[k]] = c
    return t


def normalize_table(t, field) -> dict:
    return _drop_zeros({key: {k: field(v) for k, v in vals.items()} for key, vals in t.items()})


def compare_tables(mp: MatchedPair, expected: dict) -> list:
    """Mismatching actions between a pair and an expected label table."""
    bad = []
    for action in ACTIONS:
        if action_table(mp, action) != normalize_table(expected.get(action, {}), mp.field):
            bad.append(action)
    return bad


# -- entries ------------------------------------------------------------------

@dataclass
class CatalogEntry:
    id: str
    factorization: Factorization
    expected: dict | None = None
    notes: dict = dc_field(default_factory=dict)

    @property
    def ambient(self) -> Algebra:
        return self.factorization.ambient

    def pair(self) -> MatchedPair:
        return canonical_matched_pair(self.factorization)


ENTRY_IDS = ("mn", "triangular-split", "lastrow-split", "bimodule-corner", "m2-split", "m3-lastrow",
             "ut2-ideal")


def get_entry(entry_id: str, field: FieldSpec = QQ, n: int | None = None, m: int | None = None) -> CatalogEntry:
    """Look up a catalog entry; ``n`` and ``m`` size the parametric families."""
    if entry_id == "mn":
        n = n or 2
        e = build_matrix_algebra(n, field)
        whole = Subspace.whole(field, e.dim)
        return CatalogEntry(f"mn({n})", Factorization(e, Subspace.span(field, e.dim), whole))
    if entry_id == "triangular-split":
        n = n or 2
        return CatalogEntry(f"triangular-split({n})", build_triangular_split(n, field), triangular_split_tables(n))
    if entry_id == "lastrow-split":
        n = n or 2
        return CatalogEntry(f"lastrow-split({n})", build_lastrow_split(n, field), lastrow_split_tables(n))
    if entry_id == "bimodule-corner":
        m = m or 1
        return CatalogEntry(f"bimodule-corner({m})", build_triangular_bimodule(field, m),
                            bimodule_corner_tables(m), {"claimed_index": 3})
    if entry_id == "m2-split":
        return CatalogEntry("m2-split", build_triangular_split(2, field), M2_SPLIT_TABLES, {"claimed_index": 2})
    if entry_id == "m3-lastrow":
        return CatalogEntry("m3-lastrow", build_lastrow_split(3, field), M3_LASTROW_TABLES,
                            {"index_lower_bound": 4, "labels": dict(M3_CLASSIFICATION_LABELS)})
    if entry_id == "ut2-ideal":
        return CatalogEntry("ut2-ideal", build_ideal_split(field), None, {"index_upper_bound": 1})
    raise UnknownEntry(entry_id)


def parse_entry_id(text: str):
    """Split ``name(k)`` into (name, k); plain names give (name, None)."""
    text = text.strip()
    if text.endswith(")") and "(" in text:
        name, arg = text[:-1].split("(", 1)
        return name, int(arg)
    return text, None


def known_deformations(entry_id: str, field: FieldSpec = QQ, a=1, alpha=None, beta=None):
    """Published deformation maps as (DeformationMap, note) pairs.

    ``a`` parametrizes r_a for m2-split; ``alpha``/``beta`` are the coefficient
    lists of the functionals for bimodule-corner (their length fixes m).
    """
    if entry_id == "m2-split":
        mp = get_entry("m2-split", field).pair()
        a = field(a)
        r = Matrix(field, [[a, a * a, -a]])
        return [(DeformationMap.validated(mp, r), f"r_a with a = {a}")]
    if entry_id == "bimodule-corner":
        out = []
        m = len(alpha) if alpha is not None else len(beta) if beta is not None else 1
        mp = get_entry("bimodule-corner", field, m=m).pair()
        zero = [0] * m
        if alpha is not None:
            out.append((DeformationMap.validated(mp, Matrix(field, [alpha, zero])), f"r^alpha, alpha = {alpha}"))
        if beta is not None:
            out.append((DeformationMap.validated(mp, Matrix(field, [zero, beta])), f"r_beta, beta = {beta}"))
        return out
    if entry_id == "m3-lastrow":
        mp = get_entry("m3-lastrow", field).pair()
        return [(DeformationMap.validated(mp, r), name) for name, r in m3_maps(field).items()]
    raise UnknownEntry(entry_id)


def m3_maps(field: FieldSpec = QQ) -> dict:
    """r_1, r_2, r_3 for M_3 = rows 1-2 + row 3 (A basis e11..e23, X basis e31, e32, e33)."""
    def mat(images):
        rows = [[0, 0, 0] for _ in range(6)]
        for col, a_idx in images:
            rows[a_idx][col] = 1
        return Matrix(field, rows)
    e11, e12, e22 = 0, 1, 4
    return {
        "r_1": mat([(2, e22)]),
        "r_2": mat([(2, e11), (2, e22)]),
        "r_3": mat([(0, e12), (2, e11), (2, e22)]),
    }


def named_map(entry_id: str, name: str, field: FieldSpec = QQ) -> DeformationMap:
    """Deformation map by name, e.g. ('m3-lastrow', 'r_2') or ('m2-split', 'r_3')."""
    if entry_id == "m3-lastrow":
        maps = m3_maps(field)
        if name not in maps:
            raise UnknownEntry(name)
        return DeformationMap.validated(get_entry(entry_id, field).pair(), maps[name])
    if entry_id == "m2-split" and name.startswith("r_"):
        return known_deformations("m2-split", field, a=field.parse(name[2:]))[0][0]
    if entry_id.startswith("bimodule-corner") and name.startswith(("alpha=", "beta=")):
        key, vals = name.split("=", 1)
        coeffs = [field.parse(v) for v in vals.split(",")]
        return known_deformations("bimodule-corner", field, **{key: coeffs})[0][0]
    raise UnknownEntry(f"{entry_id}:{name}")
