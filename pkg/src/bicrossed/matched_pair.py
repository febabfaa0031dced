"""Matched pairs of algebras and their bicrossed products.

A matched pair is two algebras A, X with four bilinear actions.  Here the
actions are named after where they land, which is how the canonical pair of
a factorization E = A + X produces them (x a and a x split into A- and
X-components):

    xa_to_a : X x A -> A    (x |> a)
    xa_to_x : X x A -> X    (x <| a)
    ax_to_a : A x X -> A    (a <- x)
    ax_to_x : A x X -> X    (a -> x)

Tensors follow the usual index order: left argument, right argument, output.
All tensors are expressed in the bases of the stored algebras ``a`` and ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Algebra,
    Bilinear,
    Factorization,
    Violation,
    check_associative,
    check_factorization,
)
from .errors import (
    InvalidMatchedPair,
    NotABimodule,
    NotAFactorization,
    NotAssociative,
    NotMultiplicativeBimodule,
)
from .linalg import Matrix, Subspace, inverse, unit_vector, vadd, zero_vector

ACTIONS = ("xa_to_a", "xa_to_x", "ax_to_a", "ax_to_x")


@dataclass(frozen=True)
class MatchedPair:
    a: Algebra
    x: Algebra
    xa_to_a: Bilinear
    xa_to_x: Bilinear
    ax_to_a: Bilinear
    ax_to_x: Bilinear

    def __post_init__(self):
        da, dx = self.a.dim, self.x.dim
        want = {"xa_to_a": (dx, da, da), "xa_to_x": (dx, da, dx),
                "ax_to_a": (da, dx, da), "ax_to_x": (da, dx, dx)}
        for name, dims in want.items():
            if getattr(self, name).dims != dims:
                raise InvalidMatchedPair(f"{name} has shape {getattr(self, name).dims}, expected {dims}")
        if self.a.field != self.x.field:
            raise InvalidMatchedPair("A and X over different fields")

    @property
    def field(self):
        return self.a.field

    @classmethod
    def trivial(cls, a: Algebra, x: Algebra) -> "MatchedPair":
        """All four actions zero; the bicrossed product is A x X."""
        f, da, dx = a.field, a.dim, x.dim
        return cls(a, x, Bilinear.zeros(f, dx, da, da), Bilinear.zeros(f, dx, da, dx),
                   Bilinear.zeros(f, da, dx, da), Bilinear.zeros(f, da, dx, dx))

    def replace(self, **changes) -> "MatchedPair":
        vals = {k: getattr(self, k) for k in ("a", "x") + ACTIONS}
        vals.update(changes)
        return MatchedPair(**vals)


# -- axioms ------------------------------------------------------------------

def _axioms(mp: MatchedPair):
    """(id, argument kinds, lhs, rhs) in the fixed reporting order."""
    A, X = mp.a.mul, mp.x.mul
    xa_a, xa_x, ax_a, ax_x = mp.xa_to_a, mp.xa_to_x, mp.ax_to_a, mp.ax_to_x
    return [
        # X is an A-bimodule via (ax_x, xa_x)
        ("BIMOD-X-left", "abx", lambda a, b, x: ax_x(A(a, b), x), lambda a, b, x: ax_x(a, ax_x(b, x))),
        ("BIMOD-X-right", "xab", lambda x, a, b: xa_x(x, A(a, b)), lambda x, a, b: xa_x(xa_x(x, a), b)),
        ("BIMOD-X-middle", "axb", lambda a, x, b: ax_x(a, xa_x(x, b)), lambda a, x, b: xa_x(ax_x(a, x), b)),
        # A is an X-bimodule via (xa_a, ax_a)
        ("BIMOD-A-left", "xya", lambda x, y, a: xa_a(X(x, y), a), lambda x, y, a: xa_a(x, xa_a(y, a))),
        ("BIMOD-A-right", "axy", lambda a, x, y: ax_a(a, X(x, y)), lambda a, x, y: ax_a(ax_a(a, x), y)),
        ("BIMOD-A-middle", "xay", lambda x, a, y: xa_a(x, ax_a(a, y)), lambda x, a, y: ax_a(xa_a(x, a), y)),
        ("MP1", "axy", lambda a, x, y: ax_x(a, X(x, y)),
         lambda a, x, y: vadd(X(ax_x(a, x), y), ax_x(ax_a(a, x), y))),
        ("MP2", "abx", lambda a, b, x: ax_a(A(a, b), x),
         lambda a, b, x: vadd(A(a, ax_a(b, x)), ax_a(a, ax_x(b, x)))),
        ("MP3", "xab", lambda x, a, b: xa_a(x, A(a, b)),
         lambda x, a, b: vadd(A(xa_a(x, a), b), xa_a(xa_x(x, a), b))),
        ("MP4", "xya", lambda x, y, a: xa_x(X(x, y), a),
         lambda x, y, a: vadd(xa_x(x, xa_a(y, a)), X(x, xa_x(y, a)))),
        ("MP5", "axb", lambda a, x, b: vadd(A(a, xa_a(x, b)), ax_a(a, xa_x(x, b))),
         lambda a, x, b: vadd(A(ax_a(a, x), b), xa_a(ax_x(a, x), b))),
        ("MP6", "xay", lambda x, a, y: vadd(xa_x(x, ax_a(a, y)), X(x, ax_x(a, y))),
         lambda x, a, y: vadd(ax_x(xa_a(x, a), y), X(xa_x(x, a), y))),
    ]


def _basis_tuples(mp: MatchedPair, kinds: str):
    f = mp.field
    da, dx = mp.a.dim, mp.x.dim

    def choices(kind):
        if kind in "ab":
            return [("a" if kind == "a" else "b", i, unit_vector(f, da, i)) for i in range(da)]
        return [(kind, i, unit_vector(f, dx, i)) for i in range(dx)]

    def rec(pos):
        if pos == len(kinds):
            yield ()
            return
        for c in choices(kinds[pos]):
            for rest in rec(pos + 1):
                yield (c,) + rest

    return rec(0)


def _first_violation(mp: MatchedPair, axiom_ids=None) -> Violation | None:
    for rule, kinds, lhs, rhs in _axioms(mp):
        if axiom_ids is not None and rule not in axiom_ids:
            continue
        for combo in _basis_tuples(mp, kinds):
            args = [v for _, _, v in combo]
            left, right = lhs(*args), rhs(*args)
            if left != right:
                return Violation(rule, {name: i for name, i, _ in combo}, left, right)
    return None


BIMODULE_X = ("BIMOD-X-left", "BIMOD-X-right", "BIMOD-X-middle")
BIMODULE_A = ("BIMOD-A-left", "BIMOD-A-right", "BIMOD-A-middle")


def check_matched_pair(mp: MatchedPair) -> Violation | None:
    """None if both bimodule structures and MP1-MP6 hold on every basis tuple.

    The first violation is reported in axiom order (bimodule axioms, then
    MP1..MP6), and lexicographically by basis indices within an axiom.
    """
    for which, alg in (("A", mp.a), ("X", mp.x)):
        v = check_associative(alg)
        if v is not None:
            raise NotAssociative(f"{which} is not associative: {v}")
    return _first_violation(mp)


def bicrossed_product(mp: MatchedPair, validate: bool = True) -> Algebra:
    """A ⋈ X on the basis (A-basis, X-basis)."""
    if validate:
        v = check_matched_pair(mp)
        if v is not None:
            raise InvalidMatchedPair(str(v))
    f = mp.field
    da, dx = mp.a.dim, mp.x.dim
    za, zx = zero_vector(f, da), zero_vector(f, dx)
    table = []
    for i in range(da + dx):
        row = []
        for j in range(da + dx):
            if i < da and j < da:
                row.append(mp.a.product(i, j) + zx)
            elif i < da:
                row.append(mp.ax_to_a.basis(i, j - da) + mp.ax_to_x.basis(i, j - da))
            elif j < da:
                row.append(mp.xa_to_a.basis(i - da, j) + mp.xa_to_x.basis(i - da, j))
            else:
                row.append(za + mp.x.product(i - da, j - da))
        table.append(row)
    return Algebra(f, Bilinear(f, (da + dx,) * 3, table), mp.a.names + mp.x.names)


def bicrossed_factorization(mp: MatchedPair, validate: bool = True) -> Factorization:
    """A ⋈ X together with its coordinate subalgebras A x 0 and 0 x X."""
    e = bicrossed_product(mp, validate)
    da, dx = mp.a.dim, mp.x.dim
    return Factorization(e, Subspace.coordinate(e.field, da + dx, range(da)),
                         Subspace.coordinate(e.field, da + dx, range(da, da + dx)))


def canonical_matched_pair(f: Factorization) -> MatchedPair:
    """Split x a and a x along E = A ⊕ X into the four actions."""
    v = check_factorization(f)
    if v is not None:
        raise NotAFactorization(str(v))
    e, field = f.ambient, f.field
    a_alg, x_alg = f.a_algebra(), f.x_algebra()
    da, dx = f.a.dim, f.x.dim
    split = inverse(Matrix.from_columns(field, f.split_basis(), e.dim))

    def parts(u, w):
        c = split.apply(e.mul(u, w))
        return c[:da], c[da:]

    xa = [[parts(x, a) for a in f.a.basis] for x in f.x.basis]
    ax = [[parts(a, x) for x in f.x.basis] for a in f.a.basis]
    return MatchedPair(
        a_alg, x_alg,
        Bilinear(field, (dx, da, da), [[p[0] for p in row] for row in xa]),
        Bilinear(field, (dx, da, dx), [[p[1] for p in row] for row in xa]),
        Bilinear(field, (da, dx, da), [[p[0] for p in row] for row in ax]),
        Bilinear(field, (da, dx, dx), [[p[1] for p in row] for row in ax]),
    )


def trivial_extension(a: Algebra, ax_to_x: Bilinear, xa_to_x: Bilinear, x_names=None) -> MatchedPair:
    """A with an A-bimodule X carrying zero multiplication."""
    dx = ax_to_x.dims[2]
    x = Algebra.zero_algebra(a.field, dx, x_names)
    mp = MatchedPair.trivial(a, x).replace(ax_to_x=ax_to_x, xa_to_x=xa_to_x)
    v = _first_violation(mp, BIMODULE_X)
    if v is not None:
        raise NotABimodule(str(v))
    return mp


def _multiplicative_violation(mp: MatchedPair) -> Violation | None:
    A_on_X, X_on_A, X = mp.ax_to_x, mp.xa_to_x, mp.x.mul
    identities = [
        ("a->(xy) = (a->x)y", "axy", lambda a, x, y: A_on_X(a, X(x, y)), lambda a, x, y: X(A_on_X(a, x), y)),
        ("(xy)<|a = x(y<|a)", "xya", lambda x, y, a: X_on_A(X(x, y), a), lambda x, y, a: X(x, X_on_A(y, a))),
        ("x(a->y) = (x<|a)y", "xay", lambda x, a, y: X(x, A_on_X(a, y)), lambda x, a, y: X(X_on_A(x, a), y)),
    ]
    for rule, kinds, lhs, rhs in identities:
        for combo in _basis_tuples(mp, kinds):
            args = [v for _, _, v in combo]
            left, right = lhs(*args), rhs(*args)
            if left != right:
                return Violation(rule, {name: i for name, i, _ in combo}, left, right)
    return None


def semidirect_product(a: Algebra, x: Algebra, ax_to_x: Bilinear, xa_to_x: Bilinear) -> MatchedPair:
    """Matched pair with zero xa_to_a, ax_to_a for a multiplicative A-bimodule algebra X."""
    mp = MatchedPair.trivial(a, x).replace(ax_to_x=ax_to_x, xa_to_x=xa_to_x)
    v = _first_violation(mp, BIMODULE_X) or _multiplicative_violation(mp)
    if v is not None:
        raise NotMultiplicativeBimodule(str(v))
    return mp


def change_x_basis(mp: MatchedPair, p: Matrix, names=None) -> MatchedPair:
    """Re-express the pair in a new X-basis whose vectors are the columns of p."""
    f = mp.field
    q = inverse(p)
    ia = Matrix.identity(f, mp.a.dim)
    x_new = Algebra(f, mp.x.mul.transform(p, p, q), names)
    return MatchedPair(
        mp.a, x_new,
        mp.xa_to_a.transform(p, ia, ia),
        mp.xa_to_x.transform(p, ia, q),
        mp.ax_to_a.transform(ia, p, ia),
        mp.ax_to_x.transform(ia, p, q),
    )


def permute_x_basis(mp: MatchedPair, perm) -> MatchedPair:
    """New X-basis x'_k = x_{perm[k]}."""
    f = mp.field
    n = mp.x.dim
    p = Matrix.from_columns(f, [unit_vector(f, n, perm[k]) for k in range(n)], n)
    return change_x_basis(mp, p, [mp.x.names[perm[k]] for k in range(n)])
