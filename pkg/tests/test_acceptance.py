"""Acceptance criteria, one test group per criterion.

Each check records a PASS/FAIL line (see acceptance_log); the per-criterion
summary is printed at the end of the pytest run.  Claims that the computation
contradicts are recorded as FAIL and marked strict-xfail, so they can't pass
silently and can't be hidden either.
"""

import itertools
import os
import time

import numpy as np
import pytest

from bicrossed.algebra import (
    Factorization,
    check_associative,
    check_factorization,
    find_unit,
    is_two_sided_ideal,
    quotient_algebra,
    rebase,
)
from bicrossed.catalog import M3_DEFORMED_TABLES, get_entry, m3_maps, normalize_table
from bicrossed.classify import (
    are_equivalent,
    are_isomorphic,
    classify_complements,
    exhaustive_gl_search,
    find_equivalence_direct,
)
from bicrossed.deformation import (
    DeformationMap,
    deform,
    deformation_mask,
    enumerate_deformation_maps,
    extract_deformation,
    is_deformation_map,
    lift_complement,
    pair_arrays,
    triangular_alpha,
    triangular_scalar_condition,
    triangular_scalar_mask,
)
from bicrossed.linalg import Matrix, Subspace, matrix_array
from bicrossed.matched_pair import bicrossed_product, canonical_matched_pair, check_matched_pair
from bicrossed.scalar import QQ, FieldSpec

from acceptance_log import record
from oracles import corner_constants, matrix_algebra_constants, pair_is_matched

F2, F3, F5 = FieldSpec.prime(2), FieldSpec.prime(3), FieldSpec.prime(5)
PRIMES = (2, 3, 5)

AXIOM_CASES = [("triangular-split", {"n": n}) for n in (2, 3, 4)] + \
              [("lastrow-split", {"n": n}) for n in (2, 3)] + \
              [("bimodule-corner", {"m": m}) for m in (1, 2)]


def _consts(alg):
    return np.array([[[int(c) for c in alg.product(i, j)] for j in range(alg.dim)] for i in range(alg.dim)])


def _coords(s):
    return [next(k for k, c in enumerate(v) if c) for v in s.basis]


# -- 1. axiom suite ---------------------------------------------------------------------

def test_criterion_1_axioms():
    t0 = time.perf_counter()
    bad = []
    for eid, kw in AXIOM_CASES:
        v = check_matched_pair(get_entry(eid, **kw).pair())
        if v is not None:
            bad.append(f"{eid}{kw}: {v}")
    elapsed = time.perf_counter() - t0
    record(1, "bimodule axioms and MP1-MP6 on 7 pairs", not bad, "; ".join(bad) or "all hold exactly")
    record(1, "runtime < 5 s", elapsed < 5, f"{elapsed:.2f} s")
    # independent: associativity of the raw bicrossed tensor
    oracle = all(pair_is_matched(get_entry(eid, **kw).pair()) for eid, kw in AXIOM_CASES)
    record(1, "oracle: raw bicrossed tensor associative", oracle)
    assert not bad and elapsed < 5 and oracle


# -- 2. reconstruction ----------------------------------------------------------------------

def test_criterion_2_reconstruction():
    bad = []
    for eid, kw in AXIOM_CASES:
        f = get_entry(eid, **kw).factorization
        e = bicrossed_product(canonical_matched_pair(f))
        # basis map (a_i, 0) -> a_i, (0, x_j) -> x_j
        want = rebase(f.ambient, list(f.a.basis) + list(f.x.basis))
        if e.mul != want.mul:
            bad.append(f"{eid}{kw}")
            continue
        # and against constants built from honest matrix products
        c = matrix_algebra_constants(kw["n"]) if "n" in kw else corner_constants(kw["m"])
        order = _coords(f.a) + _coords(f.x)
        if not (_consts(e) == c[np.ix_(order, order, order)]).all():
            bad.append(f"{eid}{kw} (oracle)")
    record(2, "bicrossed(canonical(f)) = E on A-then-X basis", not bad, ", ".join(bad) or "7 factorizations exact")
    assert not bad


# -- 3. M_2 = lower + upper ------------------------------------------------------------------

@pytest.fixture(scope="module")
def m2_runs():
    t0 = time.perf_counter()
    runs = {}
    for p in PRIMES:
        field = FieldSpec.prime(p)
        mp = get_entry("m2-split", field).pair()
        runs[p] = (mp, enumerate_deformation_maps(mp), classify_complements(mp, pair_id="m2-split"))
    return runs, time.perf_counter() - t0


def test_criterion_3_maps(m2_runs):
    runs, elapsed = m2_runs
    ok = True
    for p, (mp, maps, _) in runs.items():
        field = FieldSpec.prime(p)
        fam = sorted(Matrix(field, [[a, a * a, -a]]) for a in range(p))
        good = len(maps) == p and [r.matrix for r in maps] == fam
        ok &= good
        record(3, f"F{p}: exactly p maps, all r_a", good, f"{len(maps)} maps")
    record(3, "runtime < 5 s", elapsed < 5, f"{elapsed:.2f} s")
    assert ok and elapsed < 5


@pytest.mark.xfail(strict=True, reason="every X_{r_a} is unital and isomorphic to X; computed index is 1")
def test_criterion_3_index(m2_runs):
    runs, _ = m2_runs
    idx = {p: rep.factorization_index for p, (_, _, rep) in runs.items()}
    record(3, "index 2", all(v == 2 for v in idx.values()),
           "computed " + ", ".join(f"F{p}: {v}" for p, v in idx.items())
           + " (X_{r_a} = (1 + a e21) X (1 - a e21), so every complement is conjugate to X)")
    assert all(v == 2 for v in idx.values())


@pytest.mark.xfail(strict=True, reason="e11 + e22 is a unit of every X_{r_a}")
def test_criterion_3_units(m2_runs):
    runs, _ = m2_runs
    ok = True
    for p, (mp, maps, _) in runs.items():
        for r in maps:
            unit = find_unit(deform(mp, r))
            ok &= (unit is not None) == (r.matrix[0, 0] == 0)
    record(3, "r = 0 unital, a != 0 not unital", ok, "all unital, unit (1, 0, 1)" if not ok else "")
    assert ok


def test_criterion_3_phi_witness():
    # the isomorphism e12 -> a e12 between X_{r_a} and X_{r_1} does verify
    mp = get_entry("m2-split").pair()
    ok = all(are_isomorphic(deform(mp, Matrix(QQ, [[a, a * a, -a]])), deform(mp, Matrix(QQ, [[1, 1, -1]])),
                            witness=Matrix(QQ, [[1, 0, 0], [0, a, 0], [0, 0, 1]])).isomorphic
             for a in (2, 3, 7))
    record(3, "phi: e12 -> a e12 is an isomorphism X_{r_a} -> X_{r_1}", ok)
    assert ok


# -- 4. corner bimodule, m = 1 ---------------------------------------------------------------

@pytest.fixture(scope="module")
def corner_runs():
    t0 = time.perf_counter()
    runs = {}
    for p in PRIMES:
        mp = get_entry("bimodule-corner", FieldSpec.prime(p), m=1).pair()
        runs[p] = classify_complements(mp, pair_id="bimodule-corner(1)")
    return runs, time.perf_counter() - t0


def test_criterion_4_maps(corner_runs):
    runs, elapsed = corner_runs
    ok = True
    for p, rep in runs.items():
        locus = all(not (r.matrix[0, 0] and r.matrix[1, 0]) for r in rep.maps)
        good = len(rep.maps) == 2 * p - 1 and locus
        ok &= good
        record(4, f"F{p}: 2p - 1 maps on the alpha*beta = 0 locus", good, f"{len(rep.maps)} maps")
    record(4, "runtime < 5 s", elapsed < 5, f"{elapsed:.2f} s")
    assert ok and elapsed < 5


@pytest.mark.xfail(strict=True, reason="a 1-dimensional algebra has only two isomorphism types")
def test_criterion_4_index(corner_runs):
    runs, _ = corner_runs
    idx = {p: rep.factorization_index for p, rep in runs.items()}
    m2 = classify_complements(get_entry("bimodule-corner", F3, m=2).pair()).factorization_index
    record(4, "index 3", all(v == 3 for v in idx.values()),
           "computed " + ", ".join(f"F{p}: {v}" for p, v in idx.items())
           + f" (X_r is 1-dim: zero or idempotent product only; for m = 2 over F3 the index is {m2})")
    assert all(v == 3 for v in idx.values())


# -- 5. M_3 = rows 1-2 + row 3 -----------------------------------------------------------------

def test_criterion_5_maps_and_tables():
    valid = all(is_deformation_map(get_entry("m3-lastrow", f).pair(), r) is None
                for f in (QQ, F2, F3) for r in m3_maps(f).values())
    record(5, "r_1, r_2, r_3 valid over Q, F2, F3", valid)
    tables = True
    for field in (QQ, F2, F3):
        mp = get_entry("m3-lastrow", field).pair()
        for k, r in enumerate(m3_maps(field).values(), 1):
            tables &= deform(mp, r).table_by_name() == normalize_table(M3_DEFORMED_TABLES[f"X{k}"], field)
    record(5, "deform reproduces X_1, X_2, X_3 entry-exactly", tables)
    assert valid and tables


@pytest.mark.parametrize("field", [F2, F3], ids=str)
def test_criterion_5_pairwise_distinct(field):
    mp = get_entry("m3-lastrow", field).pair()
    algs = [mp.x] + [deform(mp, r) for r in m3_maps(field).values()]
    ok = True
    for a, b in itertools.combinations(algs, 2):
        ok &= exhaustive_gl_search(a, b) is None and are_isomorphic(a, b).status == "not_isomorphic"
    record(5, f"{field}: X, X_1, X_2, X_3 pairwise non-isomorphic (full GL_3 search)", ok)
    assert ok


def test_criterion_5_full_f2():
    mp = get_entry("m3-lastrow", F2).pair()
    t0 = time.perf_counter()
    rep = classify_complements(mp, pair_id="m3-lastrow")
    elapsed = time.perf_counter() - t0
    sizes = [c.size for c in rep.classes]
    record(5, "F2: all 2^18 candidates classified", rep.candidates == 2 ** 18 and rep.factorization_index >= 4,
           f"{len(rep.maps)} maps, {rep.factorization_index} classes, sizes {sizes}")
    record(5, "runtime < 10 min single worker", elapsed < 600, f"{elapsed:.1f} s")
    t0 = time.perf_counter()
    rep8 = classify_complements(mp, workers=8, pair_id="m3-lastrow")
    el8 = time.perf_counter() - t0
    same = [c.members for c in rep8.classes] == [c.members for c in rep.classes]
    record(5, "runtime < 2 min with 8 workers", el8 < 120 and same,
           f"{el8:.1f} s on {os.cpu_count()} CPU(s); speedup not measurable here")
    assert rep.factorization_index >= 4 and elapsed < 600 and same and el8 < 120


# -- 6. round trips -----------------------------------------------------------------------------

def _round_trip_failures(mp, maps):
    e = bicrossed_product(mp)
    da, dx = mp.a.dim, mp.x.dim
    f = Factorization(e, Subspace.coordinate(mp.field, da + dx, range(da)),
                      Subspace.coordinate(mp.field, da + dx, range(da, da + dx)))
    bad = 0
    for r in maps:
        s = lift_complement(mp, r)
        m = r.matrix if isinstance(r, DeformationMap) else r
        ok = (extract_deformation(f, s).matrix == m and check_associative(deform(mp, r)) is None
              and check_factorization(Factorization(e, f.a, s)) is None)
        bad += not ok
    return bad


def test_criterion_6_round_trips():
    total = bad = 0
    for p in PRIMES:
        field = FieldSpec.prime(p)
        for eid, kw in (("m2-split", {}), ("bimodule-corner", {"m": 1})):
            mp = get_entry(eid, field, **kw).pair()
            maps = enumerate_deformation_maps(mp)
            total += len(maps)
            bad += _round_trip_failures(mp, maps)
    mp = get_entry("m3-lastrow", F2).pair()
    maps = enumerate_deformation_maps(mp)
    total += len(maps)
    bad += _round_trip_failures(mp, maps)
    for field in (QQ, F3):
        mp = get_entry("m3-lastrow", field).pair()
        maps = list(m3_maps(field).values())
        total += len(maps)
        bad += _round_trip_failures(mp, maps)
    record(6, "extract(lift(r)) = r, X_r associative, lift is a complement", bad == 0,
           f"{total} maps, {bad} failures")
    assert bad == 0


# -- 7. scalar condition ------------------------------------------------------------------------

def test_criterion_7_scalar_condition():
    t0 = time.perf_counter()
    mismatches = {}
    counts = {}
    for n, rows, cols in ((2, 1, 3), (3, 3, 6)):
        mp = get_entry("triangular-split", F2, n=n).pair()
        total = 2 ** (rows * cols)
        bad = found = 0
        for lo in range(0, total, 1 << 14):
            R = matrix_array(rows, cols, 2, lo, min(total, lo + (1 << 14)))
            for arr in R:
                r = Matrix(F2, arr.tolist(), cols)
                a = triangular_scalar_condition(n, triangular_alpha(n, r), F2) is None
                b = is_deformation_map(mp, r) is None
                bad += a != b
                found += b
            # the batched forms must agree too
            bad += int((triangular_scalar_mask(n, R, 2) != deformation_mask(pair_arrays(mp), R)).sum())
        mismatches[n], counts[n] = bad, (total, found)
    elapsed = time.perf_counter() - t0
    ok = not any(mismatches.values())
    record(7, "scalar condition = deformation identity on every candidate", ok,
           "; ".join(f"n={n}: {counts[n][0]} candidates, {counts[n][1]} maps, {mismatches[n]} mismatches"
                     for n in counts) + f" ({elapsed:.0f} s)")
    assert ok


# -- 8. the ideal case --------------------------------------------------------------------------

def test_criterion_8_ideal():
    ok = True
    details = []
    for field in (F2, F3):
        entry = get_entry("ut2-ideal", field)
        f = entry.factorization
        ideal = is_two_sided_ideal(f.ambient, f.a)
        q = quotient_algebra(f.ambient, f.a)
        mp = entry.pair()
        rep = classify_complements(mp, pair_id="ut2-ideal")
        iso = all(are_isomorphic(deform(mp, r), q).isomorphic for r in rep.maps)
        ok &= ideal and iso and rep.factorization_index <= 1
        details.append(f"{field}: {len(rep.maps)} maps, index {rep.factorization_index}")
    record(8, "A ideal; every complement = E/A; index <= 1", ok, "; ".join(details))
    assert ok


# -- 9. the two definitions of equivalence ---------------------------------------------------------

def test_criterion_9_direct_sigma():
    mp = get_entry("m2-split", F3).pair()
    maps = enumerate_deformation_maps(mp)
    agree = 0
    pairs = list(itertools.product(maps, repeat=2))
    for r, s in pairs:
        direct = find_equivalence_direct(mp, r, s) is not None
        agree += direct == are_equivalent(mp, r, s).isomorphic
    record(9, "direct sigma search = isomorphism verdict", agree == len(pairs), f"{agree}/{len(pairs)} pairs agree")
    assert agree == len(pairs)
