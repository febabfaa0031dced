"""Exact dense linear algebra over Q and F_p.

Vectors are plain tuples of field elements.  ``Matrix`` is a thin immutable
wrapper around a tuple of row tuples.  The enumeration helpers at the bottom
produce every matrix (or every invertible matrix) over a prime field, both as
a stream of ``Matrix`` objects and as batched integer arrays for vectorized
searches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, FieldMismatch, FieldNotFinite
from .scalar import FieldSpec, Residue


# -- vectors -----------------------------------------------------------------

def zero_vector(field: FieldSpec, n: int) -> tuple:
    z = field.zero
    return (z,) * n


def unit_vector(field: FieldSpec, n: int, i: int) -> tuple:
    z, one = field.zero, field.one
    return tuple(one if k == i else z for k in range(n))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    return tuple(c * a for a in v)


def vneg(v):
    return tuple(-a for a in v)


def is_zero_vector(v) -> bool:
    return not any(v)


def lincomb(coeffs, vectors, field: FieldSpec, n: int) -> tuple:
    """Sum of coeffs[i] * vectors[i], skipping zero coefficients."""
    acc = list(zero_vector(field, n))
    for c, vec in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(vec):
                if x:
                    acc[k] += c * x
    return tuple(acc)


# -- matrices ----------------------------------------------------------------

class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: FieldSpec, rows, ncols: int | None = None):
        rows = tuple(tuple(field(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field, columns, nrows):
        columns = list(columns)
        return cls(field, [[col[i] for col in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> tuple:
        return tuple(row[j] for row in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.columns() if self.ncols else [], self.nrows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            cols = other.columns()
            return Matrix(self.field, [[sum((a * b for a, b in zip(row, col)), self.field.zero)
                                        for col in cols] for row in self.rows], other.ncols)
        return self.apply(other)

    def apply(self, v) -> tuple:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        return lincomb(v, self.columns(), self.field, self.nrows)

    def __add__(self, other):
        return Matrix(self.field, [vadd(r, s) for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix(self.field, [vneg(r) for r in self.rows], self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.shape, self.rows))

    def sort_key(self):
        return tuple(int(x) if isinstance(x, Residue) else x for row in self.rows for x in row)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def entries(self) -> tuple:
        return tuple(x for row in self.rows for x in row)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix<{self.field}>[{body}]"


def _check_same_field(field, vectors):
    for v in vectors:
        for x in v:
            if not field.contains(x):
                raise FieldMismatch(f"{x!r} is not an element of {field}")


def rref_rows(rows, field: FieldSpec, ncols: int):
    """Reduced row-echelon form of a list of row vectors.

    Returns ``(nonzero_rows, pivot_columns)``.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if field.kind == "Q" else m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rref(m: Matrix):
    """Return ``(R, rank)`` with R the reduced row-echelon form of m (same shape)."""
    rows, pivots = rref_rows(m.rows, m.field, m.ncols)
    rank = len(rows)
    z = zero_vector(m.field, m.ncols)
    return Matrix(m.field, rows + [z] * (m.nrows - rank), m.ncols), rank


def rank(m: Matrix) -> int:
    return rref(m)[1]


def solve(a: Matrix, b) -> tuple | None:
    """Some x with a @ x == b, free variables set to zero; None if inconsistent."""
    if len(b) != a.nrows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {a.shape} system")
    _check_same_field(a.field, [b])
    aug = [row + (bi,) for row, bi in zip(a.rows, b)]
    rows, pivots = rref_rows(aug, a.field, a.ncols + 1)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = list(zero_vector(a.field, a.ncols))
    for row, c in zip(rows, pivots):
        x[c] = row[-1]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if m.ncols != n:
        raise DimensionMismatch("only square matrices are invertible")
    eye = Matrix.identity(m.field, n).rows
    rows, pivots = rref_rows([r + e for r, e in zip(m.rows, eye)], m.field, 2 * n)
    if len(pivots) < n or pivots[n - 1] >= n:
        raise ZeroDivisionError("singular matrix")
    return Matrix(m.field, [row[n:] for row in rows], n)


def kernel(m: Matrix) -> list:
    """Basis of the right null space {x : m @ x = 0}."""
    rows, pivots = rref_rows(m.rows, m.field, m.ncols)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        x = list(zero_vector(m.field, m.ncols))
        x[f] = m.field.one
        for row, c in zip(rows, pivots):
            x[c] = -row[f]
        basis.append(tuple(x))
    return basis


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of field^ambient_dim, stored by the RREF of any spanning set."""

    field: FieldSpec
    ambient_dim: int
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, field: FieldSpec, ambient_dim: int, vectors=()) -> "Subspace":
        vectors = [tuple(field(x) for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in vectors):
            raise DimensionMismatch(f"spanning vectors must have length {ambient_dim}")
        rows, pivots = rref_rows(vectors, field, ambient_dim)
        return cls(field, ambient_dim, tuple(rows), tuple(pivots))

    @classmethod
    def coordinate(cls, field, ambient_dim, indices) -> "Subspace":
        return cls.span(field, ambient_dim, [unit_vector(field, ambient_dim, i) for i in indices])

    @classmethod
    def whole(cls, field, ambient_dim):
        return cls.coordinate(field, ambient_dim, range(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v) -> tuple | None:
        """Coordinates of v in the stored basis, or None if v is not in the subspace."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dim {self.ambient_dim}")
        coords = tuple(v[c] for c in self.pivots)
        if lincomb(coords, self.basis, self.field, self.ambient_dim) != tuple(v):
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def vector(self, coords) -> tuple:
        return lincomb(coords, self.basis, self.field, self.ambient_dim)

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.basis, self.ambient_dim)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.ambient_dim, self.basis + other.basis)


def subspace_membership(s: Subspace, v):
    """Return ``(is_member, coordinates_or_None)``."""
    coords = s.coordinates(v)
    return coords is not None, coords


# -- enumeration over F_p ----------------------------------------------------

DEFAULT_BUDGET = 10**7
DEFAULT_GL_BUDGET = 10**6


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def _require_prime_field(field: FieldSpec):
    if not field.is_finite:
        raise FieldNotFinite(f"exhaustive enumeration needs a prime field, not {field}")


def enumerate_matrices(rows: int, cols: int, field: FieldSpec, budget: int = DEFAULT_BUDGET,
                       start: int = 0, stop: int | None = None):
    """Every rows x cols matrix over F_p once, lexicographic in row-major entries.

    ``start``/``stop`` restrict to an index range so workers can split the stream.
    """
    _require_prime_field(field)
    count = field.p ** (rows * cols)
    if count > budget:
        raise BudgetExceeded(f"{rows}x{cols} matrices over {field}", count, budget)
    return itertools.islice(_matrix_stream(rows, cols, field), start, stop)


def _matrix_stream(rows, cols, field):
    elems = field.elements()
    for entries in itertools.product(elems, repeat=rows * cols):
        yield Matrix(field, [entries[i * cols:(i + 1) * cols] for i in range(rows)], cols)


def enumerate_gl(n: int, field: FieldSpec, budget: int = DEFAULT_GL_BUDGET):
    """Every invertible n x n matrix over F_p, in lexicographic order."""
    _require_prime_field(field)
    count = gl_order(n, field.p)
    if count > budget:
        raise BudgetExceeded(f"GL_{n}({field})", count, budget)
    return (Matrix(field, m.tolist(), n) for m in gl_array(n, field.p, budget))


def matrix_array(rows: int, cols: int, p: int, start: int = 0, stop: int | None = None):
    """Matrices with lexicographic indices in [start, stop) as an int64 array.

    Index k corresponds to the base-p digits of k, most significant digit first,
    laid out row-major.
    """
    size = rows * cols
    if stop is None:
        stop = p**size
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(idx), size), dtype=np.int64)
    for pos in range(size - 1, -1, -1):
        digits[:, pos] = idx % p
        idx //= p
    return digits.reshape(-1, rows, cols)


def matrix_index(entries, p: int) -> int:
    """Inverse of ``matrix_array``: the lexicographic index of a row-major entry list."""
    k = 0
    for x in entries:
        k = k * p + int(x)
    return k


def _inverse_table(p):
    return np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)


def invertible_mask(mats, p: int):
    """Boolean mask of the invertible matrices in a (N, n, n) batch over F_p."""
    m = np.array(mats, dtype=np.int64) % p
    N, n, _ = m.shape
    ok = np.ones(N, dtype=bool)
    inv = _inverse_table(p)
    idx = np.arange(N)
    for col in range(n):
        nz = m[:, col:, col] != 0
        ok &= nz.any(axis=1)
        piv = col + nz.argmax(axis=1)
        top = m[idx, col].copy()
        m[idx, col] = m[idx, piv]
        m[idx, piv] = top
        m[:, col] = m[:, col] * inv[m[:, col, col]][:, None] % p
        factors = m[:, :, col].copy()
        factors[:, col] = 0
        m = (m - factors[:, :, None] * m[:, col][:, None, :]) % p
    return ok


@lru_cache(maxsize=16)
def _gl_array_cached(n, p):
    total = p ** (n * n)
    chunks = []
    step = 1 << 18
    for start in range(0, total, step):
        block = matrix_array(n, n, p, start, min(total, start + step))
        chunks.append(block[invertible_mask(block, p)])
    out = np.concatenate(chunks) if chunks else np.zeros((0, n, n), dtype=np.int64)
    out.setflags(write=False)
    return out


def gl_array(n: int, p: int, budget: int = DEFAULT_GL_BUDGET):
    """All of GL_n(F_p) as a read-only (N, n, n) int64 array, lexicographic order."""
    count = gl_order(n, p)
    if count > budget:
        raise BudgetExceeded(f"GL_{n}(F{p})", count, budget)
    return _gl_array_cached(n, p)


def batched_rank(mats, p: int):
    """Ranks of a (N, r, c) batch of matrices over F_p."""
    m = np.array(mats, dtype=np.int64) % p
    N, r, c = m.shape
    inv = _inverse_table(p)
    idx = np.arange(N)
    row = np.zeros(N, dtype=np.int64)       # next pivot row, per matrix
    rows = np.arange(r)
    for col in range(c):
        cand = (m[:, :, col] != 0) & (rows[None, :] >= row[:, None])
        has = cand.any(axis=1)
        piv = np.where(has, cand.argmax(axis=1), row.clip(max=r - 1))
        tgt = row.clip(max=r - 1)
        sel = idx[has]
        if len(sel) == 0:
            continue
        a, b = tgt[sel], piv[sel]
        top = m[sel, a].copy()
        m[sel, a] = m[sel, b]
        m[sel, b] = top
        prow = m[sel, a] * inv[m[sel, a, col]][:, None] % p
        m[sel, a] = prow
        factors = m[sel, :, col].copy()
        factors[np.arange(len(sel)), a] = 0
        m[sel] = (m[sel] - factors[:, :, None] * prow[:, None, :]) % p
        row[sel] += 1
    return row
