"""Isomorphism testing, equivalence of deformation maps and the factorization index.

Two deformation maps r, R are equivalent exactly when X_r and X_R are
isomorphic algebras, so equivalence is decided by invariants first and an
exhaustive search over GL_n(F_p) second.  A linear map W: U -> V is a matrix
whose column i is the image of the i-th basis vector of U.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .algebra import (
    Algebra,
    Factorization,
    check_associative,
    check_factorization,
    find_unit,
    is_commutative,
)
from .deformation import (
    DeformationMap,
    _gather,
    _tensor,
    deform,
    enumerate_deformation_indices,
    lift_complement,
    pair_arrays,
    candidate_count,
)
from .errors import BudgetExceeded, FieldMismatch, FieldNotFinite, UnresolvedPair
from .linalg import DEFAULT_BUDGET, DEFAULT_GL_BUDGET, Matrix, Subspace, batched_rank, gl_array, gl_order, invertible_mask, rank
from .matched_pair import MatchedPair, bicrossed_product

log = logging.getLogger(__name__)

DEFAULT_COUNT_BUDGET = 10**6


# -- invariants ---------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    dim: int
    commutative: bool
    unital: bool
    square_dim: int
    left_annihilator_dim: int
    right_annihilator_dim: int
    square_zero_count: int | None = None
    idempotent_count: int | None = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)

    def differences(self, other: "Fingerprint") -> list:
        return [(k, v, other.__dict__[k]) for k, v in self.__dict__.items() if other.__dict__[k] != v]


def _annihilator_dims(alg: Algebra):
    n, c = alg.dim, alg.c
    left = Matrix(alg.field, [[c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)], n)
    right = Matrix(alg.field, [[c[i][j][k] for j in range(n)] for i in range(n) for k in range(n)], n)
    return n - rank(left), n - rank(right)


def element_array(n: int, p: int):
    """All vectors of F_p^n in lexicographic order."""
    grids = np.indices((p,) * n).reshape(n, -1).T
    return grids.astype(np.int64)


def _power_counts(alg: Algebra):
    p, n = alg.field.p, alg.dim
    c = _tensor(alg.mul, p)
    v = element_array(n, p)
    sq = np.einsum("ni,nj,ijk->nk", v, v, c) % p
    zero = int((~sq.any(axis=1)).sum())
    idem = int((~((sq - v) % p).any(axis=1)).sum())
    return zero, idem


def invariant_fingerprint(alg: Algebra, count_budget: int = DEFAULT_COUNT_BUDGET) -> Fingerprint:
    """Isomorphism invariants; the element counts are only filled in over a small F_p."""
    n = alg.dim
    products = [alg.product(i, j) for i in range(n) for j in range(n)]
    square_dim = rank(Matrix(alg.field, products, n)) if products else 0
    la, ra = _annihilator_dims(alg) if n else (0, 0)
    zero = idem = None
    if alg.field.is_finite and alg.field.p ** n <= count_budget:
        zero, idem = _power_counts(alg)
    return Fingerprint(n, is_commutative(alg), find_unit(alg) is not None, square_dim, la, ra, zero, idem)


# -- isomorphism ----------------------------------------------------------------

@dataclass(frozen=True)
class IsoVerdict:
    status: str                     # "isomorphic", "not_isomorphic" or "unknown"
    witness: Matrix | None = None
    invariant: str | None = None    # name of separating invariant, or "exhausted-search"
    values: tuple | None = None
    reason: str = ""

    @property
    def isomorphic(self) -> bool:
        return self.status == "isomorphic"

    @property
    def decided(self) -> bool:
        return self.status != "unknown"

    def __str__(self):
        if self.status == "isomorphic":
            return f"isomorphic, witness {self.witness!r}"
        if self.status == "not_isomorphic":
            if self.invariant == "exhausted-search":
                return "not isomorphic (exhaustive search found no witness)"
            return f"not isomorphic ({self.invariant}: {self.values[0]} vs {self.values[1]})"
        return f"unknown ({self.reason})"


def verify_witness(a: Algebra, b: Algebra, w: Matrix) -> bool:
    """W is invertible and W(uv) = W(u) W(v) on basis pairs."""
    if w.shape != (b.dim, a.dim) or a.dim != b.dim or rank(w) != a.dim:
        return False
    cols = w.columns()
    return all(w.apply(a.product(i, j)) == b.mul(cols[i], cols[j])
               for i in range(a.dim) for j in range(a.dim))


def _check_batch(W, ca, cb, p):
    lhs = np.einsum("gmq,ijq->gijm", W, ca)
    t = np.einsum("gki,klm->gilm", W, cb) % p
    rhs = np.einsum("gilm,glj->gijm", t, W)
    return ~((lhs - rhs) % p).reshape(len(W), -1).any(axis=1)


def _search_witness(ca, cb, p, gl):
    """Index of the first W in gl (column convention) that is an algebra map."""
    step = 4096
    for lo in range(0, len(gl), step):
        hits = np.flatnonzero(_check_batch(gl[lo:lo + step], ca, cb, p))
        if len(hits):
            return lo + int(hits[0])
    return None


def element_signatures(c, p):
    """Per-element invariants for every vector of F_p^n (lexicographic order).

    Columns: rank of left multiplication, rank of right multiplication,
    x^2 == 0, x^2 == x, x central, dim span(x, x^2, x^3).  An isomorphism
    must send each element to one with the same signature.
    """
    n = c.shape[0]
    v = element_array(n, p)
    L = np.einsum("ni,ijk->nkj", v, c) % p       # L_x[k, j] = (x e_j)_k
    R = np.einsum("nj,ijk->nki", v, c) % p       # R_x[k, i] = (e_i x)_k
    sq = np.einsum("nkj,nj->nk", L, v) % p
    cube = np.einsum("nkj,nj->nk", L, sq) % p
    powers = np.stack([v, sq, cube], axis=1)
    return np.stack([
        batched_rank(L, p), batched_rank(R, p),
        ~sq.any(axis=1), ~((sq - v) % p).any(axis=1),
        ~((L - R) % p).reshape(len(v), -1).any(axis=1),
        batched_rank(powers, p),
    ], axis=1).astype(np.int64)


def _refined_search(ca, cb, p, budget):
    """Exhaustive search restricted to signature-preserving column choices.

    Returns (status, witness array or None, searched count); status is
    "found", "none", "empty" (some basis vector has no possible image) or
    "budget" when the restricted space is still too large.
    """
    n = ca.shape[0]
    sa, sb = element_signatures(ca, p), element_signatures(cb, p)
    elems = element_array(n, p)
    basis_rows = [int(p ** (n - 1 - i)) for i in range(n)]   # index of e_i in lex order
    cands = []
    for i in range(n):
        ok = np.flatnonzero((sb == sa[basis_rows[i]]).all(axis=1))
        if len(ok) == 0:
            return "empty", None, 0
        cands.append(ok)
    sizes = [len(x) for x in cands]
    total = int(np.prod(sizes, dtype=object))
    if total > budget:
        return "budget", None, total
    step = 1 << 14
    for lo in range(0, total, step):
        k = np.arange(lo, min(total, lo + step), dtype=np.int64)
        cols = []
        for i in range(n - 1, -1, -1):
            cols.append(cands[i][k % sizes[i]])
            k //= sizes[i]
        cols.reverse()
        W = np.stack([elems[cidx] for cidx in cols], axis=2)  # column i = image of e_i
        W = W[invertible_mask(W, p)]
        if not len(W):
            continue
        hits = np.flatnonzero(_check_batch(W, ca, cb, p))
        if len(hits):
            return "found", W[hits[0]], total
    return "none", None, total


def exhaustive_gl_search(a: Algebra, b: Algebra, budget: int = DEFAULT_GL_BUDGET) -> Matrix | None:
    """First W in GL_n(F_p) (lexicographic) with W(uv) = W(u)W(v), or None.  No invariants used."""
    if a.field != b.field:
        raise FieldMismatch(f"algebras over {a.field} and {b.field}")
    if not a.field.is_finite:
        raise FieldNotFinite("GL search needs a prime field")
    if a.dim != b.dim:
        return None
    p, n = a.field.p, a.dim
    gl = gl_array(n, p, budget)
    k = _search_witness(_tensor(a.mul, p), _tensor(b.mul, p), p, gl)
    return None if k is None else Matrix(a.field, gl[k].tolist(), n)


def are_isomorphic(a: Algebra, b: Algebra, budget: int = DEFAULT_GL_BUDGET, witness: Matrix | None = None,
                   fingerprints=None, count_budget: int = DEFAULT_COUNT_BUDGET) -> IsoVerdict:
    """Decide a = b when possible.

    Over F_p the witness search is exhaustive: either over all of GL_n, or over
    the (usually far smaller) set of matrices whose columns match element
    signatures.  Whichever fits the budget is used.
    """
    if a.field != b.field:
        raise FieldMismatch(f"algebras over {a.field} and {b.field}")
    fa, fb = fingerprints or (invariant_fingerprint(a, count_budget), invariant_fingerprint(b, count_budget))
    diff = fa.differences(fb)
    if diff:
        name, va, vb = diff[0]
        return IsoVerdict("not_isomorphic", invariant=name, values=(va, vb))
    if witness is not None and verify_witness(a, b, witness):
        return IsoVerdict("isomorphic", witness=witness)
    if a == b:
        return IsoVerdict("isomorphic", witness=Matrix.identity(a.field, a.dim))
    if not a.field.is_finite:
        return IsoVerdict("unknown", reason="invariants agree and no verified witness over Q")
    p, n = a.field.p, a.dim
    ca, cb = _tensor(a.mul, p), _tensor(b.mul, p)
    if p ** n <= count_budget:
        status, w, searched = _refined_search(ca, cb, p, budget)
        if status == "empty":
            return IsoVerdict("not_isomorphic", invariant="element-signature", values=("present", "absent"))
        if status == "none":
            return IsoVerdict("not_isomorphic", invariant="exhausted-search")
        if status == "found":
            return IsoVerdict("isomorphic", witness=Matrix(a.field, w.tolist(), n))
    if gl_order(n, p) > budget:
        return IsoVerdict("unknown", reason=f"|GL_{n}(F{p})| = {gl_order(n, p)} exceeds budget {budget}")
    w = exhaustive_gl_search(a, b, budget)
    if w is None:
        return IsoVerdict("not_isomorphic", invariant="exhausted-search")
    return IsoVerdict("isomorphic", witness=w)


def are_equivalent(mp: MatchedPair, r, s, budget: int = DEFAULT_GL_BUDGET) -> IsoVerdict:
    """r ~ s iff some automorphism sigma of X satisfies sigma(x ._r y) = sigma(x) ._s sigma(y)."""
    return are_isomorphic(deform(mp, r), deform(mp, s), budget)


def find_equivalence_direct(mp: MatchedPair, r, s, budget: int = DEFAULT_GL_BUDGET):
    """Search GL(X) for sigma with

        sigma(xy) - sigma(x)sigma(y) = sigma(x)<-s(sigma(y)) + s(sigma(x))->sigma(y)
                                       - sigma(x<-r(y)) - sigma(r(x)->y)

    evaluated term by term (no deformed algebras involved).  Returns the first
    sigma found, or None.
    """
    if not mp.field.is_finite:
        raise FieldNotFinite("direct search needs a prime field")
    arrs = pair_arrays(mp)
    p, n = arrs["p"], arrs["dx"]
    cX, T2, H2 = arrs["X"], arrs["xa_to_x"], arrs["ax_to_x"]
    rm = _tensor_matrix(r, p)
    sm = _tensor_matrix(s, p)
    gl = gl_array(n, p, budget)
    x_r = np.einsum("ibq,bj->ijq", T2, rm) % p          # x_i <| r(x_j)
    r_x = np.einsum("ai,ajq->ijq", rm, H2) % p          # r(x_i) -> x_j
    step = 2048
    for lo in range(0, len(gl), step):
        S = gl[lo:lo + step]
        s_sig = np.einsum("al,glj->gaj", sm, S) % p        # s(sigma(x_j))
        t1 = np.einsum("gmq,ijq->gijm", S, cX)
        t2 = np.einsum("gki,glj,klm->gijm", S, S, cX)
        t3 = np.einsum("gki,gaj,kam->gijm", S, s_sig, T2)
        t4 = np.einsum("gai,glj,alm->gijm", s_sig, S, H2)
        t5 = np.einsum("gmq,ijq->gijm", S, x_r)
        t6 = np.einsum("gmq,ijq->gijm", S, r_x)
        resid = (t1 - t2 - t3 - t4 + t5 + t6) % p
        hits = np.flatnonzero(~resid.reshape(len(S), -1).any(axis=1))
        if len(hits):
            return Matrix(mp.field, S[hits[0]].tolist(), n)
    return None


def _tensor_matrix(r, p):
    m = r.matrix if isinstance(r, DeformationMap) else r
    return np.array([[int(x) for x in row] for row in m.rows], dtype=np.int64).reshape(m.shape) % p


# -- classification -----------------------------------------------------------

@dataclass
class EquivalenceClass:
    representative: DeformationMap
    members: list
    fingerprint: Fingerprint
    algebra: Algebra

    @property
    def size(self):
        return len(self.members)


@dataclass
class ClassificationReport:
    """Deformation maps r: X -> A of a pair, grouped into equivalence classes.

    The index equals the number of isomorphism classes of A-complements.
    """

    field: object
    pair_id: str
    candidates: int
    maps: list
    classes: list = dc_field(default_factory=list)

    @property
    def factorization_index(self) -> int:
        return len(self.classes)

    def class_of(self, r) -> int:
        m = r.matrix if isinstance(r, DeformationMap) else r
        for k, c in enumerate(self.classes):
            if any(x.matrix == m for x in c.members):
                return k
        raise KeyError(r)


def classify_complements(mp: MatchedPair, budget: int = DEFAULT_BUDGET, gl_budget: int = DEFAULT_GL_BUDGET,
                         workers: int = 1, pair_id: str = "", recheck: bool = True) -> ClassificationReport:
    """Enumerate every deformation map over F_p and partition them up to equivalence."""
    if not mp.field.is_finite:
        raise FieldNotFinite("classification enumerates deformation maps and needs a prime field")
    idx = enumerate_deformation_indices(mp, budget, workers)
    maps = [DeformationMap(mp, Matrix(mp.field, m.tolist(), mp.x.dim)) for m in _gather(mp, idx)]
    algebras = [deform(mp, r) for r in maps]
    prints = [invariant_fingerprint(x) for x in algebras]

    uf = DisjointSet(range(len(maps)))
    reps = []   # indices of class representatives, in order of first appearance
    for k in range(len(maps)):
        for rep in reps:
            if prints[rep] != prints[k]:
                continue
            verdict = are_isomorphic(algebras[rep], algebras[k], gl_budget, fingerprints=(prints[rep], prints[k]))
            if verdict.status == "unknown":
                raise UnresolvedPair(maps[rep], maps[k], verdict.reason)
            if verdict.isomorphic:
                uf.merge(rep, k)
                break
        else:
            reps.append(k)

    classes = []
    for rep in reps:
        members = sorted(maps[i] for i in uf.subset(rep))
        classes.append(EquivalenceClass(maps[rep], members, prints[rep], algebras[rep]))
    report = ClassificationReport(mp.field, pair_id, candidate_count(mp), maps, classes)
    if recheck:
        _recheck_classes(mp, report)
    log.info("%s: %d maps, index %d", pair_id or "pair", len(maps), report.factorization_index)
    return report


def _recheck_classes(mp: MatchedPair, report: ClassificationReport):
    if not report.classes:
        return
    e = bicrossed_product(mp, validate=False)
    a = Subspace.coordinate(e.field, e.dim, range(mp.a.dim))
    for c in report.classes:
        v = check_associative(c.algebra)
        if v is not None:
            raise AssertionError(f"deformed algebra of {c.representative} not associative: {v}")
        v = check_factorization(Factorization(e, a, lift_complement(mp, c.representative)))
        if v is not None:
            raise AssertionError(f"lifted complement of {c.representative} fails: {v}")


def check_budgets(mp: MatchedPair, budget: int = DEFAULT_BUDGET, gl_budget: int = DEFAULT_GL_BUDGET):
    """Raise BudgetExceeded up front if a classification cannot run."""
    if not mp.field.is_finite:
        raise FieldNotFinite("classification needs a prime field")
    total = candidate_count(mp)
    if total > budget:
        raise BudgetExceeded("deformation map candidates", total, budget)
    return total
