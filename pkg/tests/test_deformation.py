import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bicrossed.algebra import Factorization, check_associative, check_factorization, is_subalgebra
from bicrossed.catalog import M3_DEFORMED_TABLES, get_entry, known_deformations, m3_maps
from bicrossed.deformation import (
    DeformationMap,
    candidate_count,
    deform,
    enumerate_deformation_maps,
    extract_deformation,
    is_deformation_map,
    lift_complement,
    triangular_alpha,
    triangular_matrix,
    triangular_scalar_condition,
    triangular_scalar_mask,
)
from bicrossed.errors import (
    BudgetExceeded,
    DimensionMismatch,
    FieldNotFinite,
    NotAComplement,
    NotADeformationMap,
)
from bicrossed.linalg import Matrix, Subspace, matrix_array
from bicrossed.matched_pair import bicrossed_product
from bicrossed.scalar import QQ, FieldSpec

from oracles import (
    corner_constants,
    graph_deformation_maps,
    graph_mask,
    graph_product_table,
    matrix_algebra_constants,
)

F2, F3, F5 = FieldSpec.prime(2), FieldSpec.prime(3), FieldSpec.prime(5)

# (catalog id, kwargs, oracle constants of E)
GRAPH_CASES = [
    ("m2-split", {}, lambda: matrix_algebra_constants(2)),
    ("triangular-split", {"n": 2}, lambda: matrix_algebra_constants(2)),
    ("lastrow-split", {"n": 2}, lambda: matrix_algebra_constants(2)),
    ("bimodule-corner", {"m": 1}, lambda: corner_constants(1)),
    ("bimodule-corner", {"m": 2}, lambda: corner_constants(2)),
]


def coord_indices(s):
    out = []
    for v in s.basis:
        nz = [k for k, c in enumerate(v) if c]
        assert len(nz) == 1 and v[nz[0]] == 1
        out.append(nz[0])
    return out


def split_of(entry):
    f = entry.factorization
    return coord_indices(f.a), coord_indices(f.x)


def as_array(r):
    return np.array([[int(c) for c in row] for row in r.matrix.rows], dtype=np.int64)


# -- single maps ----------------------------------------------------------------

def test_zero_map_always_passes():
    for eid, kw, _ in GRAPH_CASES:
        mp = get_entry(eid, **kw).pair()
        r = Matrix.zeros(QQ, mp.a.dim, mp.x.dim)
        assert is_deformation_map(mp, r) is None
        assert deform(mp, r) == mp.x
        assert lift_complement(mp, r) == Subspace.coordinate(QQ, mp.a.dim + mp.x.dim,
                                                            range(mp.a.dim, mp.a.dim + mp.x.dim))


@pytest.mark.parametrize("a", [1, 2, -3, QQ.parse("1/2")])
def test_r_a_family_over_q(a):
    mp = get_entry("m2-split").pair()
    r = Matrix(QQ, [[a, a * a, -a]])
    assert is_deformation_map(mp, r) is None
    x_r = deform(mp, r)
    assert check_associative(x_r) is None
    # r_a(e12) = a^2 e21 is forced: any other coefficient fails
    bad = Matrix(QQ, [[a, a * a + 1, -a]])
    v = is_deformation_map(mp, bad)
    assert v is not None and v.lhs != v.rhs


def test_m3_maps_pass_exactly():
    for field in (QQ, F2, F3):
        mp = get_entry("m3-lastrow", field).pair()
        for name, r in m3_maps(field).items():
            assert is_deformation_map(mp, r) is None, name


def test_m3_deformed_tables():
    mp = get_entry("m3-lastrow").pair()
    for k, (name, r) in enumerate(m3_maps().items(), 1):
        x_r = deform(mp, r)
        want = {key: {out: QQ(1) for out in vals} for key, vals in M3_DEFORMED_TABLES[f"X{k}"].items()}
        assert x_r.table_by_name() == want, name


def test_validated_rejects():
    mp = get_entry("m2-split").pair()
    with pytest.raises(NotADeformationMap):
        DeformationMap.validated(mp, Matrix(QQ, [[0, 1, 0]]))


def test_shape_and_field_errors():
    mp = get_entry("m2-split").pair()
    with pytest.raises(DimensionMismatch):
        is_deformation_map(mp, Matrix(QQ, [[0, 0]]))
    with pytest.raises(DimensionMismatch):
        is_deformation_map(mp, Matrix(F3, [[0, 0, 0]]))


def test_lift_r1_is_subalgebra_of_bicrossed():
    mp = get_entry("m2-split").pair()
    r = known_deformations("m2-split", QQ, a=1)[0][0]
    s = lift_complement(mp, r)
    # spanned by (e21, e11), (e21, e12), (-e21, e22)
    want = Subspace.span(QQ, 4, [(1, 1, 0, 0), (1, 0, 1, 0), (-1, 0, 0, 1)])
    assert s == want
    assert is_subalgebra(bicrossed_product(mp), s)


# -- exhaustive enumeration against the subalgebra-graph oracle --------------------

@pytest.mark.parametrize("field", [F2, F3, F5], ids=str)
@pytest.mark.parametrize("eid,kw,consts", GRAPH_CASES, ids=lambda v: v if isinstance(v, str) else "")
def test_enumeration_matches_graph_oracle(field, eid, kw, consts):
    entry = get_entry(eid, field, **kw)
    mp = entry.pair()
    if candidate_count(mp) > 10 ** 5:
        pytest.skip("too many candidates for the oracle")
    a_idx, x_idx = split_of(entry)
    want = graph_deformation_maps(consts(), a_idx, x_idx, field.p)
    got = enumerate_deformation_maps(mp)
    assert len(got) == len(want)
    assert [as_array(r).tolist() for r in got] == want.tolist()  # both lexicographic


def test_m2_counts():
    for field in (F2, F3, F5):
        maps = enumerate_deformation_maps(get_entry("m2-split", field).pair())
        assert len(maps) == field.p
        for r in maps:
            a = r.matrix[0, 0]
            assert r.matrix == Matrix(field, [[a, a * a, -a]])


def test_corner_counts():
    for field in (F2, F3, F5):
        maps = enumerate_deformation_maps(get_entry("bimodule-corner", field, m=1).pair())
        assert len(maps) == 2 * field.p - 1
        assert all(not (r.matrix[0, 0] and r.matrix[1, 0]) for r in maps)


def test_m3_over_f2_matches_oracle():
    entry = get_entry("m3-lastrow", F2)
    mp = entry.pair()
    a_idx, x_idx = split_of(entry)
    c = matrix_algebra_constants(3)
    want = []
    for lo in range(0, 2 ** 18, 1 << 15):
        R = matrix_array(6, 3, 2, lo, lo + (1 << 15))
        want.extend(R[graph_mask(c, a_idx, x_idx, 2, R)].tolist())
    got = enumerate_deformation_maps(mp)
    assert len(got) == 128
    assert [as_array(r).tolist() for r in got] == want


def test_workers_do_not_change_result():
    mp = get_entry("bimodule-corner", F3, m=2).pair()
    assert enumerate_deformation_maps(mp, workers=1) == enumerate_deformation_maps(mp, workers=2)


def test_enumeration_errors():
    with pytest.raises(FieldNotFinite):
        enumerate_deformation_maps(get_entry("m2-split").pair())
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_deformation_maps(get_entry("m3-lastrow", F3).pair())
    assert exc.value.required == 3 ** 18
    with pytest.raises(BudgetExceeded):
        enumerate_deformation_maps(get_entry("m2-split", F5).pair(), budget=124)
    assert len(enumerate_deformation_maps(get_entry("m2-split", F5).pair(), budget=125)) == 5


# -- deformed products and complements ---------------------------------------------

@pytest.mark.parametrize("field", [F2, F3], ids=str)
@pytest.mark.parametrize("eid,kw,consts", GRAPH_CASES, ids=lambda v: v if isinstance(v, str) else "")
def test_deform_matches_product_inside_e(field, eid, kw, consts):
    entry = get_entry(eid, field, **kw)
    mp = entry.pair()
    a_idx, x_idx = split_of(entry)
    for r in enumerate_deformation_maps(mp):
        x_r = deform(mp, r)
        assert check_associative(x_r) is None
        want = graph_product_table(consts(), a_idx, x_idx, as_array(r).tolist(), field.p)
        got = np.array([[[int(c) for c in x_r.product(i, j)] for j in range(x_r.dim)]
                        for i in range(x_r.dim)], dtype=object)
        assert (got == want).all()


def test_deform_over_q_matches_product_inside_e():
    entry = get_entry("m3-lastrow")
    a_idx, x_idx = split_of(entry)
    mp = entry.pair()
    for r in m3_maps().values():
        x_r = deform(mp, r)
        want = graph_product_table(matrix_algebra_constants(3), a_idx, x_idx,
                                   [[int(c) for c in row] for row in r.rows])
        got = np.array([[list(x_r.product(i, j)) for j in range(3)] for i in range(3)], dtype=object)
        assert (got == want).all()


@pytest.mark.parametrize("field", [F2, F3], ids=str)
@pytest.mark.parametrize("eid,kw,consts", GRAPH_CASES, ids=lambda v: v if isinstance(v, str) else "")
def test_round_trips(field, eid, kw, consts):
    entry = get_entry(eid, field, **kw)
    f = entry.factorization
    mp = entry.pair()
    e = bicrossed_product(mp)
    da, dx = mp.a.dim, mp.x.dim
    fb = Factorization(e, Subspace.coordinate(field, da + dx, range(da)),
                       Subspace.coordinate(field, da + dx, range(da, da + dx)))
    a_idx, x_idx = split_of(entry)
    for r in enumerate_deformation_maps(mp):
        lifted = lift_complement(mp, r)
        assert check_factorization(Factorization(e, fb.a, lifted)) is None
        assert extract_deformation(fb, lifted) == r
        # the same complement spelled inside E itself
        vecs = []
        for col, xi in enumerate(x_idx):
            v = [field.zero] * f.ambient.dim
            v[xi] = field.one
            for row, ai in enumerate(a_idx):
                v[ai] = r.matrix[row, col]
            vecs.append(tuple(v))
        other = Subspace.span(field, f.ambient.dim, vecs)
        assert extract_deformation(f, other) == r
        assert extract_deformation(f, f.x, other) == r


def test_extract_identity_and_errors():
    f = get_entry("m2-split").factorization
    assert extract_deformation(f, f.x).matrix.is_zero()
    with pytest.raises(NotAComplement):
        extract_deformation(f, f.a)
    # not a subalgebra: span{e11, e12, e21 + e22}
    with pytest.raises(NotAComplement):
        extract_deformation(f, Subspace.span(QQ, 4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1)]))
    with pytest.raises(TypeError):
        extract_deformation(f)


def test_extract_inside_m2_gives_r1():
    # lift of r_1 pushed into M_2: e11 + e21, e12 + e21, e22 - e21
    f = get_entry("m2-split").factorization
    other = Subspace.span(QQ, 4, [(1, 0, 1, 0), (0, 1, 1, 0), (0, 0, -1, 1)])
    r = extract_deformation(f, other)
    assert r.matrix == Matrix(QQ, [[1, 1, -1]])


# -- the scalar form for the triangular split ---------------------------------------

def test_triangular_alpha_round_trip():
    n = 3
    r = Matrix(F3, matrix_array(3, 6, 3, 1234, 1235)[0].tolist())
    assert triangular_matrix(n, triangular_alpha(n, r), F3) == r


def test_triangular_r_a_family():
    for a in (1, 2, -5):
        alpha = {(2, 1, 1, 1): a, (2, 1, 1, 2): a * a, (2, 1, 2, 2): -a}
        assert triangular_scalar_condition(2, alpha, QQ) is None
    assert triangular_scalar_condition(2, {}, QQ) is None
    assert triangular_scalar_condition(2, {(2, 1, 1, 2): 1}, QQ) is not None


def test_triangular_bad_index():
    with pytest.raises(IndexError):
        triangular_scalar_condition(2, {(1, 2, 1, 1): 1}, QQ)
    with pytest.raises(IndexError):
        triangular_scalar_condition(2, {(2, 1, 2, 1): 1}, QQ)
    with pytest.raises(IndexError):
        triangular_scalar_condition(2, {(2, 1, 1): 1}, QQ)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_triangular_n2_exhaustive(p):
    field = FieldSpec.prime(p)
    mp = get_entry("triangular-split", field, n=2).pair()
    for k in range(p ** 3):
        r = Matrix(field, matrix_array(1, 3, p, k, k + 1)[0].tolist())
        a = triangular_scalar_condition(2, triangular_alpha(2, r), field) is None
        b = is_deformation_map(mp, r) is None
        assert a == b


@settings(max_examples=40)
@given(st.lists(st.integers(0, 2), min_size=18, max_size=18))
def test_triangular_n3_agrees(entries):
    mp = get_entry("triangular-split", F3, n=3).pair()
    r = Matrix(F3, [entries[k * 6:(k + 1) * 6] for k in range(3)])
    a = triangular_scalar_condition(3, triangular_alpha(3, r), F3) is None
    assert a == (is_deformation_map(mp, r) is None)


def test_triangular_mask_matches_exact():
    R = matrix_array(3, 6, 2, 0, 4096)
    mask = triangular_scalar_mask(3, R, 2)
    for k in range(0, 4096, 97):
        r = Matrix(F2, R[k].tolist())
        assert mask[k] == (triangular_scalar_condition(3, triangular_alpha(3, r), F2) is None)


# -- properties ---------------------------------------------------------------------

@settings(max_examples=30)
@given(st.integers(0, 3 ** 4 - 1))
def test_deformed_algebra_associative_iff_valid(k):
    # any valid map deforms to an associative algebra; invalid ones are rejected
    mp = get_entry("bimodule-corner", F3, m=2).pair()
    r = Matrix(F3, matrix_array(2, 2, 3, k, k + 1)[0].tolist())
    if is_deformation_map(mp, r) is None:
        assert check_associative(deform(mp, r)) is None
        assert check_factorization(Factorization(bicrossed_product(mp),
                                                 Subspace.coordinate(F3, 4, range(2)),
                                                 lift_complement(mp, r))) is None
