"""Finite-dimensional associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import DimensionMismatch, NotAnIdeal, NotASubalgebra
from .linalg import (
    Matrix,
    Subspace,
    inverse,
    lincomb,
    rref_rows,
    solve,
    unit_vector,
    vsub,
    zero_vector,
)
from .scalar import FieldSpec


@dataclass(frozen=True)
class Violation:
    """First failing instance of an identity, with both evaluated sides."""

    rule: str
    indices: dict = dc_field(default_factory=dict)
    lhs: tuple | None = None
    rhs: tuple | None = None
    detail: str = ""

    def __str__(self):
        at = ", ".join(f"{k}={v}" for k, v in self.indices.items())
        msg = f"{self.rule} violated"
        if at:
            msg += f" at ({at})"
        if self.lhs is not None:
            msg += f": lhs={_fmt(self.lhs)} rhs={_fmt(self.rhs)}"
        if self.detail:
            msg += f" [{self.detail}]"
        return msg


def _fmt(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


class Bilinear:
    """A bilinear map U x V -> W, stored densely on basis pairs.

    ``table[i][j]`` is the W-vector image of (u_i, v_j).  Evaluation skips
    zero coefficients, which keeps the sparse matrix-unit examples cheap.
    """

    __slots__ = ("field", "dims", "table", "_nz")

    def __init__(self, field: FieldSpec, dims, table):
        du, dv, dw = dims
        table = tuple(tuple(tuple(field(c) for c in vec) for vec in row) for row in table)
        if len(table) != du or any(len(row) != dv for row in table) or any(
                len(vec) != dw for row in table for vec in row):
            raise DimensionMismatch(f"bilinear table does not have shape {dims}")
        self.field = field
        self.dims = (du, dv, dw)
        self.table = table
        self._nz = {(i, j): [(k, c) for k, c in enumerate(vec) if c]
                    for i, row in enumerate(table) for j, vec in enumerate(row)}

    @classmethod
    def zeros(cls, field, du, dv, dw):
        z = zero_vector(field, dw)
        return cls(field, (du, dv, dw), [[z] * dv for _ in range(du)])

    @classmethod
    def from_entries(cls, field, dims, entries):
        """Build from (i, j, k, coeff) quadruples; repeated keys are summed."""
        du, dv, dw = dims
        t = [[[field.zero] * dw for _ in range(dv)] for _ in range(du)]
        for i, j, k, c in entries:
            if not (0 <= i < du and 0 <= j < dv and 0 <= k < dw):
                raise DimensionMismatch(f"entry index ({i}, {j}, {k}) outside {dims}")
            t[i][j][k] += field(c)
        return cls(field, dims, t)

    def entries(self):
        """Nonzero (i, j, k, coeff) in lexicographic index order."""
        return [(i, j, k, c) for (i, j), nz in sorted(self._nz.items()) for k, c in nz]

    def basis(self, i, j) -> tuple:
        return self.table[i][j]

    def __call__(self, u, v) -> tuple:
        du, dv, dw = self.dims
        if len(u) != du or len(v) != dv:
            raise DimensionMismatch(f"arguments of lengths {len(u)}, {len(v)} for {self.dims}")
        acc = [self.field.zero] * dw
        nzv = [(j, b) for j, b in enumerate(v) if b]
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in nzv:
                ab = a * b
                for k, c in self._nz[i, j]:
                    acc[k] += ab * c
        return tuple(acc)

    def is_zero(self) -> bool:
        return not any(self._nz.values())

    def with_entry(self, i, j, k, c) -> "Bilinear":
        """Copy with one coefficient replaced."""
        t = [[list(vec) for vec in row] for row in self.table]
        t[i][j][k] = self.field(c)
        return Bilinear(self.field, self.dims, t)

    def transform(self, left: Matrix, right: Matrix, out: Matrix) -> "Bilinear":
        """Express in new bases: columns of ``left``/``right`` are the new input
        basis vectors, ``out`` maps old output coordinates to new ones."""
        t = [[out.apply(self(left.column(i), right.column(j))) for j in range(right.ncols)]
             for i in range(left.ncols)]
        return Bilinear(self.field, (left.ncols, right.ncols, out.nrows), t)

    def __eq__(self, other):
        if not isinstance(other, Bilinear):
            return NotImplemented
        return self.field == other.field and self.dims == other.dims and self.table == other.table

    def __hash__(self):
        return hash((self.field, self.dims, self.table))

    def __repr__(self):
        return f"Bilinear<{self.field}>{self.dims}{self.entries()}"


class Algebra:
    """An algebra on basis e_0..e_{n-1} with e_i e_j = sum_k c[i][j][k] e_k.

    Associativity is not assumed; call ``check_associative``.
    """

    __slots__ = ("field", "dim", "names", "mul")

    def __init__(self, field: FieldSpec, mul: Bilinear, names=None):
        n = mul.dims[0]
        if mul.dims != (n, n, n):
            raise DimensionMismatch(f"structure tensor has shape {mul.dims}")
        self.field = field
        self.dim = n
        self.mul = mul
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(n))
        if len(self.names) != n:
            raise DimensionMismatch(f"{len(self.names)} names for a {n}-dimensional algebra")

    @classmethod
    def from_table(cls, field, table, names=None):
        n = len(table)
        return cls(field, Bilinear(field, (n, n, n), table), names)

    @classmethod
    def from_entries(cls, field, dim, entries, names=None):
        return cls(field, Bilinear.from_entries(field, (dim, dim, dim), entries), names)

    @classmethod
    def from_products(cls, field, names, products):
        """Build from a dict {(name_i, name_j): {name_k: coeff}}."""
        index = {nm: k for k, nm in enumerate(names)}
        entries = [(index[a], index[b], index[c], v)
                   for (a, b), out in products.items() for c, v in out.items()]
        return cls.from_entries(field, len(names), entries, names)

    @classmethod
    def zero_algebra(cls, field, dim, names=None):
        return cls(field, Bilinear.zeros(field, dim, dim, dim), names)

    @property
    def c(self):
        return self.mul.table

    def product(self, i, j) -> tuple:
        return self.mul.table[i][j]

    def basis_vector(self, i) -> tuple:
        return unit_vector(self.field, self.dim, i)

    def __call__(self, u, v):
        return self.mul(u, v)

    def __eq__(self, other):
        """Equal structure constants over the same field (names ignored)."""
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.mul == other.mul

    def __hash__(self):
        return hash(self.mul)

    def table_by_name(self) -> dict:
        """{(name_i, name_j): {name_k: coeff}} for the nonzero products."""
        out = {}
        for i, j, k, c in self.mul.entries():
            out.setdefault((self.names[i], self.names[j]), {})[self.names[k]] = c
        return out

    def __repr__(self):
        return f"Algebra<{self.field}, dim {self.dim}>"


def multiply(alg: Algebra, u, v) -> tuple:
    return alg.mul(u, v)


def check_associative(alg: Algebra) -> Violation | None:
    """None if (e_i e_j) e_k = e_i (e_j e_k) for all basis triples, else the first failure."""
    n = alg.dim
    for i in range(n):
        for j in range(n):
            ij = alg.product(i, j)
            for k in range(n):
                lhs = alg.mul(ij, alg.basis_vector(k))
                rhs = alg.mul(alg.basis_vector(i), alg.product(j, k))
                if lhs != rhs:
                    return Violation("associativity", {"i": i, "j": j, "k": k}, lhs, rhs)
    return None


def is_commutative(alg: Algebra) -> bool:
    return all(alg.product(i, j) == alg.product(j, i)
               for i in range(alg.dim) for j in range(i + 1, alg.dim))


def find_unit(alg: Algebra) -> tuple | None:
    """The two-sided unit, found by solving u e_i = e_i u = e_i; None if none exists."""
    n = alg.dim
    if n == 0:
        return ()
    rows, rhs = [], []
    # row for coefficient k of u*e_i (resp. e_i*u) as a linear form in u
    for i in range(n):
        for k in range(n):
            rows.append([alg.c[m][i][k] for m in range(n)])
            rhs.append(alg.field.one if k == i else alg.field.zero)
            rows.append([alg.c[i][m][k] for m in range(n)])
            rhs.append(alg.field.one if k == i else alg.field.zero)
    return solve(Matrix(alg.field, rows, n), rhs)


def _check_ambient(alg: Algebra, s: Subspace):
    if s.ambient_dim != alg.dim:
        raise DimensionMismatch(f"subspace of ambient dim {s.ambient_dim} in a {alg.dim}-dim algebra")


def is_subalgebra(alg: Algebra, s: Subspace) -> bool:
    _check_ambient(alg, s)
    return all(alg.mul(u, v) in s for u in s.basis for v in s.basis)


def is_two_sided_ideal(alg: Algebra, s: Subspace) -> bool:
    _check_ambient(alg, s)
    for u in s.basis:
        for i in range(alg.dim):
            e = alg.basis_vector(i)
            if alg.mul(e, u) not in s or alg.mul(u, e) not in s:
                return False
    return True


def subalgebra_on_basis(alg: Algebra, s: Subspace, names=None) -> Algebra:
    """The algebra structure of a subalgebra, in the coordinates of its RREF basis."""
    if not is_subalgebra(alg, s):
        raise NotASubalgebra("subspace is not closed under multiplication")
    table = [[s.coordinates(alg.mul(u, v)) for v in s.basis] for u in s.basis]
    if names is None:
        names = [_vector_name(alg, u) for u in s.basis]
    return Algebra(alg.field, Bilinear(alg.field, (s.dim,) * 3, table), names)


def _vector_name(alg: Algebra, v) -> str:
    terms = [(k, c) for k, c in enumerate(v) if c]
    if len(terms) == 1 and terms[0][1] == alg.field.one:
        return alg.names[terms[0][0]]
    return "+".join(f"{c}*{alg.names[k]}" if c != alg.field.one else alg.names[k]
                    for k, c in terms)


def quotient_algebra(alg: Algebra, ideal: Subspace) -> Algebra:
    """E/I on the classes of the standard basis vectors at the non-pivot columns of I."""
    if not is_two_sided_ideal(alg, ideal):
        raise NotAnIdeal("subspace is not a two-sided ideal")
    keep = [c for c in range(alg.dim) if c not in ideal.pivots]

    def reduce(v):
        # subtract the ideal component; pivots of an RREF basis make this exact
        w = vsub(v, ideal.vector(tuple(v[c] for c in ideal.pivots)))
        return tuple(w[c] for c in keep)

    table = [[reduce(alg.product(i, j)) for j in keep] for i in keep]
    return Algebra(alg.field, Bilinear(alg.field, (len(keep),) * 3, table),
                   [alg.names[i] for i in keep])


def rebase(alg: Algebra, basis, names=None) -> Algebra:
    """Structure constants of alg in a new basis given by the ambient vectors ``basis``."""
    b = Matrix.from_columns(alg.field, basis, alg.dim)
    return Algebra(alg.field, alg.mul.transform(b, b, inverse(b)), names)


@dataclass(frozen=True)
class Factorization:
    """An ambient algebra E with subspaces A and X meant to satisfy E = A + X, A ∩ X = 0."""

    ambient: Algebra
    a: Subspace
    x: Subspace

    @property
    def field(self):
        return self.ambient.field

    def split_basis(self):
        """Ambient vectors of the A-basis followed by the X-basis."""
        return list(self.a.basis) + list(self.x.basis)

    def decompose(self, v):
        """Coordinates (a_coords, x_coords) with v = a + x, a in A, x in X."""
        m = Matrix.from_columns(self.field, self.split_basis(), self.ambient.dim)
        sol = solve(m, tuple(v))
        if sol is None:
            raise DimensionMismatch("vector is not in A + X")
        return sol[:self.a.dim], sol[self.a.dim:]

    def a_algebra(self) -> Algebra:
        return subalgebra_on_basis(self.ambient, self.a)

    def x_algebra(self) -> Algebra:
        return subalgebra_on_basis(self.ambient, self.x)


def check_factorization(f: Factorization) -> Violation | None:
    e = f.ambient
    for s in (f.a, f.x):
        if s.ambient_dim != e.dim:
            return Violation("dimension", detail=f"subspace in ambient dim {s.ambient_dim}, algebra has {e.dim}")
    if not is_subalgebra(e, f.a):
        return Violation("subalgebra", detail="A is not closed under multiplication")
    if not is_subalgebra(e, f.x):
        return Violation("subalgebra", detail="X is not closed under multiplication")
    _, pivots = rref_rows(list(f.a.basis) + list(f.x.basis), e.field, e.dim)
    if len(pivots) < f.a.dim + f.x.dim:
        return Violation("intersection", detail="A and X intersect nontrivially")
    if f.a.dim + f.x.dim != e.dim:
        return Violation("dimension", detail=f"dim A + dim X = {f.a.dim + f.x.dim} != dim E = {e.dim}")
    return None

