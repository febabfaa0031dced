"""Deformation maps r: X -> A of a matched pair and the deformed algebras X_r.

A linear map r is stored as a dim(A) x dim(X) matrix: column i holds the
A-coordinates of r(x_i).  Exact checks work over any field; exhaustive
enumeration over F_p runs on batched integer arrays.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Bilinear, Factorization, Violation, check_factorization
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FieldNotFinite,
    NotAComplement,
    NotADeformationMap,
)
from .linalg import (
    DEFAULT_BUDGET,
    Matrix,
    Subspace,
    matrix_array,
    solve,
    vadd,
    vneg,
    vsub,
)
from .matched_pair import MatchedPair, canonical_matched_pair

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DeformationMap:
    pair: MatchedPair
    matrix: Matrix

    @classmethod
    def validated(cls, pair: MatchedPair, matrix: Matrix) -> "DeformationMap":
        v = is_deformation_map(pair, matrix)
        if v is not None:
            raise NotADeformationMap(str(v))
        return cls(pair, matrix)

    def __call__(self, x) -> tuple:
        return self.matrix.apply(x)

    def __eq__(self, other):
        if not isinstance(other, DeformationMap):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __lt__(self, other):
        return self.matrix < other.matrix

    def __repr__(self):
        return f"DeformationMap({self.matrix!r})"


def _as_matrix(r) -> Matrix:
    return r.matrix if isinstance(r, DeformationMap) else r


def _check_shape(mp: MatchedPair, r: Matrix):
    if r.shape != (mp.a.dim, mp.x.dim):
        raise DimensionMismatch(f"deformation map must be {mp.a.dim}x{mp.x.dim}, got {r.shape}")
    if r.field != mp.field:
        raise DimensionMismatch(f"map over {r.field} for a pair over {mp.field}")


def is_deformation_map(mp: MatchedPair, r) -> Violation | None:
    """Check r(x)r(y) - r(xy) = r(r(x)->y + x<-r(y)) - r(x)<-y - x|>r(y) on basis pairs."""
    r = _as_matrix(r)
    _check_shape(mp, r)
    cols = r.columns()
    A, X = mp.a.mul, mp.x.mul
    for i in range(mp.x.dim):
        xi = mp.x.basis_vector(i)
        for j in range(mp.x.dim):
            xj = mp.x.basis_vector(j)
            lhs = vsub(A(cols[i], cols[j]), r.apply(X.basis(i, j)))
            inner = vadd(mp.ax_to_x(cols[i], xj), mp.xa_to_x(xi, cols[j]))
            rhs = vsub(vsub(r.apply(inner), mp.ax_to_a(cols[i], xj)), mp.xa_to_a(xi, cols[j]))
            if lhs != rhs:
                return Violation("deformation", {"x": i, "y": j}, lhs, rhs)
    return None


def deform(mp: MatchedPair, r) -> Algebra:
    """X_r: the space X with x._r y = xy + r(x)->y + x<-r(y)."""
    r = _as_matrix(r)
    _check_shape(mp, r)
    cols = r.columns()
    table = []
    for i in range(mp.x.dim):
        xi = mp.x.basis_vector(i)
        table.append([vadd(vadd(mp.x.product(i, j), mp.ax_to_x(cols[i], mp.x.basis_vector(j))),
                           mp.xa_to_x(xi, cols[j]))
                      for j in range(mp.x.dim)])
    return Algebra(mp.field, Bilinear(mp.field, (mp.x.dim,) * 3, table), mp.x.names)


def lift_complement(mp: MatchedPair, r) -> Subspace:
    """Im(x -> (r(x), x)) inside A ⋈ X."""
    r = _as_matrix(r)
    _check_shape(mp, r)
    vecs = [col + mp.x.basis_vector(i) for i, col in enumerate(r.columns())]
    return Subspace.span(mp.field, mp.a.dim + mp.x.dim, vecs)


def _complement_parts(f: Factorization, other_x: Subspace):
    v = check_factorization(f)
    if v is not None:
        raise NotAComplement(f"reference complement: {v}")
    v = check_factorization(Factorization(f.ambient, f.a, other_x))
    if v is not None:
        raise NotAComplement(f"other complement: {v}")
    n = f.ambient.dim
    m = Matrix.from_columns(f.field, list(f.a.basis) + list(other_x.basis), n)
    parts = []
    for x in f.x.basis:
        sol = solve(m, x)
        parts.append((sol[:f.a.dim], sol[f.a.dim:]))
    return parts


def extract_deformation(f: Factorization, *spaces: Subspace) -> DeformationMap:
    """r = -u where each reference basis vector x = u(x) + v(x) along A ⊕ other_x.

    Called as ``(f, other_x)`` the reference complement is f.x; ``(f, reference_x,
    other_x)`` swaps it in first.  The result is a deformation map of
    ``canonical_matched_pair`` of the reference factorization.
    """
    if len(spaces) == 2:
        f = Factorization(f.ambient, f.a, spaces[0])
    elif len(spaces) != 1:
        raise TypeError("extract_deformation(f, [reference_x,] other_x)")
    other_x = spaces[-1]
    parts = _complement_parts(f, other_x)
    mp = canonical_matched_pair(f)
    r = Matrix.from_columns(f.field, [vneg(u) for u, _ in parts], f.a.dim)
    return DeformationMap(mp, r)


def complement_isomorphism(f: Factorization, other_x: Subspace) -> Matrix:
    """Matrix of v: X_r -> other_x (columns in other_x's RREF coordinates)."""
    parts = _complement_parts(f, other_x)
    return Matrix.from_columns(f.field, [w for _, w in parts], other_x.dim)


# -- exhaustive enumeration over F_p -----------------------------------------

def _tensor(b: Bilinear, p: int):
    return np.array([[[int(c) for c in vec] for vec in row] for row in b.table],
                    dtype=np.int64).reshape(b.dims) % p


def pair_arrays(mp: MatchedPair) -> dict:
    """Integer tensors of a matched pair over F_p."""
    if not mp.field.is_finite:
        raise FieldNotFinite("batched arithmetic needs a prime field")
    p = mp.field.p
    return {"p": p, "da": mp.a.dim, "dx": mp.x.dim,
            "A": _tensor(mp.a.mul, p), "X": _tensor(mp.x.mul, p),
            "xa_to_a": _tensor(mp.xa_to_a, p), "xa_to_x": _tensor(mp.xa_to_x, p),
            "ax_to_a": _tensor(mp.ax_to_a, p), "ax_to_x": _tensor(mp.ax_to_x, p)}


def deformed_tables(arrs: dict, R):
    """Structure tensors of X_r for a batch R of shape (N, dA, dX)."""
    p = arrs["p"]
    z = np.einsum("nai,ajm->nijm", R, arrs["ax_to_x"]) + np.einsum("ibm,nbj->nijm", arrs["xa_to_x"], R)
    return (arrs["X"][None] + z) % p


def deformation_mask(arrs: dict, R):
    """Boolean mask over a batch R of candidate maps: which satisfy the identity."""
    p = arrs["p"]
    R = np.asarray(R, dtype=np.int64)
    rr = np.einsum("nibc,nbj->nijc", np.einsum("nai,abc->nibc", R, arrs["A"]) % p, R)
    rxy = np.einsum("ijm,ncm->nijc", arrs["X"], R)
    z = (np.einsum("nai,ajm->nijm", R, arrs["ax_to_x"])
         + np.einsum("ibm,nbj->nijm", arrs["xa_to_x"], R)) % p
    rz = np.einsum("ncm,nijm->nijc", R, z)
    h = np.einsum("nai,ajc->nijc", R, arrs["ax_to_a"])
    t = np.einsum("ibc,nbj->nijc", arrs["xa_to_a"], R)
    resid = (rr - rxy - rz + h + t) % p
    return ~resid.reshape(len(R), -1).any(axis=1)


_CHUNK = 1 << 14


def _scan(args):
    arrs, start, stop = args
    found = []
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        R = matrix_array(arrs["da"], arrs["dx"], arrs["p"], lo, hi)
        found.extend((lo + np.flatnonzero(deformation_mask(arrs, R))).tolist())
    return found


def candidate_count(mp: MatchedPair) -> int:
    return mp.field.p ** (mp.a.dim * mp.x.dim)


def _split_ranges(total, parts):
    step = max(_CHUNK, -(-total // (parts * 4)))
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def enumerate_deformation_indices(mp: MatchedPair, budget: int = DEFAULT_BUDGET, workers: int = 1):
    """Lexicographic indices of all deformation maps (see ``linalg.matrix_array``)."""
    if not mp.field.is_finite:
        raise FieldNotFinite("deformation maps can only be enumerated over a prime field")
    total = candidate_count(mp)
    if total > budget:
        raise BudgetExceeded(f"deformation maps {mp.a.dim}x{mp.x.dim} over {mp.field}", total, budget)
    arrs = pair_arrays(mp)
    ranges = _split_ranges(total, workers)
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_scan, [(arrs, lo, hi) for lo, hi in ranges]))
    else:
        chunks = [_scan((arrs, lo, hi)) for lo, hi in ranges]
    found = sorted(i for c in chunks for i in c)
    log.info("%d deformation maps among %d candidates", len(found), total)
    return found


def index_to_matrix(mp: MatchedPair, k: int) -> Matrix:
    arr = matrix_array(mp.a.dim, mp.x.dim, mp.field.p, k, k + 1)[0]
    return Matrix(mp.field, arr.tolist(), mp.x.dim)


def enumerate_deformation_maps(mp: MatchedPair, budget: int = DEFAULT_BUDGET, workers: int = 1):
    """Every deformation map over F_p, in lexicographic matrix order."""
    idx = enumerate_deformation_indices(mp, budget, workers)
    return [DeformationMap(mp, Matrix(mp.field, m.tolist(), mp.x.dim)) for m in _gather(mp, idx)]


def _gather(mp, idx):
    p, size = mp.field.p, mp.a.dim * mp.x.dim
    ks = np.array(idx, dtype=np.int64)
    digits = np.empty((len(ks), size), dtype=np.int64)
    for pos in range(size - 1, -1, -1):
        digits[:, pos] = ks % p
        ks //= p
    return digits.reshape(-1, mp.a.dim, mp.x.dim)


# -- the triangular family of M_n --------------------------------------------

def triangular_bases(n: int):
    """(A labels, X labels) for the strictly-lower / upper split of M_n, 1-based."""
    a = [(k, t) for k in range(1, n + 1) for t in range(1, n + 1) if k > t]
    x = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i <= j]
    return a, x


def triangular_alpha(n: int, r: Matrix) -> dict:
    """Scalars alpha[(k, t, i, j)] with r(e_ij) = sum_{k>t} alpha e_kt."""
    a_lab, x_lab = triangular_bases(n)
    return {(k, t, i, j): r[ai, xi] for ai, (k, t) in enumerate(a_lab) for xi, (i, j) in enumerate(x_lab)}


def triangular_matrix(n: int, alpha: dict, field) -> Matrix:
    a_lab, x_lab = triangular_bases(n)
    _validate_alpha(n, alpha)
    return Matrix(field, [[alpha.get((k, t, i, j), 0) for (i, j) in x_lab] for (k, t) in a_lab], len(x_lab))


def _validate_alpha(n, alpha):
    for key in alpha:
        if len(key) != 4:
            raise IndexError(f"alpha index {key!r} must be (k, t, i, j)")
        k, t, i, j = key
        if not (1 <= t < k <= n and 1 <= i <= j <= n):
            raise IndexError(f"alpha index {key!r} needs n >= k > t >= 1 and 1 <= i <= j <= n")


def _triangular_conditions(n):
    """Admissible (k, q, i, j, r, s) for the scalar condition."""
    for k in range(1, n + 1):
        for q in range(1, k):
            for i in range(1, n + 1):
                for j in range(i, n + 1):
                    for r in range(1, n + 1):
                        for s in range(r, n + 1):
                            yield k, q, i, j, r, s


def _triangular_sides(k, q, i, j, r, s, al, zero):
    d = lambda u, v: u == v  # noqa: E731
    lhs = zero
    for t in range(q + 1, k):
        lhs = lhs + al(k, t, i, j) * al(t, q, r, s)
    rhs = zero
    if d(j, r):
        rhs = rhs + al(k, q, i, s)
    for u in range(r + 1, s + 1):
        rhs = rhs + al(u, r, i, j) * al(k, q, u, s)
    for v in range(i, j):
        rhs = rhs + al(j, v, r, s) * al(k, q, i, v)
    if d(s, q):
        rhs = rhs - al(k, r, i, j)
    if d(k, i):
        rhs = rhs - al(j, q, r, s)
    return lhs, rhs


def triangular_scalar_condition(n: int, alpha: dict, field) -> Violation | None:
    """The scalar form of the deformation identity for the triangular split of M_n.

    ``alpha`` maps (k, t, i, j) with k > t, i <= j (1-based) to scalars;
    missing keys are zero.
    """
    _validate_alpha(n, alpha)
    zero = field.zero
    al = lambda a, b, c, e: field(alpha.get((a, b, c, e), 0))  # noqa: E731
    for k, q, i, j, r, s in _triangular_conditions(n):
        lhs, rhs = _triangular_sides(k, q, i, j, r, s, al, zero)
        if lhs != rhs:
            return Violation("triangular-scalar", {"k": k, "q": q, "i": i, "j": j, "r": r, "s": s},
                             (lhs,), (rhs,))
    return None


def triangular_scalar_mask(n: int, R, p: int):
    """Vectorized ``triangular_scalar_condition`` over a batch (N, dA, dX) mod p."""
    a_lab, x_lab = triangular_bases(n)
    ai = {lab: k for k, lab in enumerate(a_lab)}
    xi = {lab: k for k, lab in enumerate(x_lab)}
    R = np.asarray(R, dtype=np.int64)
    ok = np.ones(len(R), dtype=bool)

    def al(a, b, c, e):
        return R[:, ai[a, b], xi[c, e]]

    for k, q, i, j, r, s in _triangular_conditions(n):
        lhs, rhs = _triangular_sides(k, q, i, j, r, s, al, 0)
        ok &= (np.asarray(lhs) - np.asarray(rhs)) % p == 0
    return ok
