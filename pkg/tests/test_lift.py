import itertools
import random
from fractions import Fraction

import pytest

from lambda2dd import intersection as it
from lambda2dd import lift as lf
from lambda2dd import mermin as mm
from lambda2dd import pauli as pc
from lambda2dd.polytope import exact_rank, tight_set

# R matrices as printed: rows II,XX..ZZ, one column per projected deterministic point
R_TABLES = {
    0: """1 1 1 1
1 1 1 1
1 1 -1 -1
1 -1 1 -1
-1 1 1 1
-1 1 -1 -1
-1 -1 1 -1
-1 -1 1 -1
-1 -1 -1 1
-1 1 1 1""",
    1: """1 1 1 1
1 1 1 1
1 -1 -1 1
1 1 -1 -1
-1 1 1 -1
-1 -1 -1 -1
-1 1 -1 1
1 1 -1 -1
1 -1 1 -1
1 1 1 1""",
    2: """1 1 1 1 1 1 1 1
1 -1 -1 1 -1 1 1 1
1 1 1 -1 1 -1 -1 1
1 -1 1 -1 1 1 -1 -1
-1 1 1 1 1 1 1 -1
-1 -1 -1 -1 -1 -1 -1 -1
-1 1 -1 -1 -1 1 -1 1
-1 1 -1 1 1 1 -1 -1
-1 -1 1 -1 -1 -1 1 -1
-1 1 1 -1 -1 1 1 1""",
    3: """1 1 1 1 1 1
-1 1 1 1 1 1
1 1 1 -1 -1 1
1 -1 1 1 -1 -1
1 1 -1 1 1 -1
-1 1 -1 -1 -1 -1
-1 -1 -1 1 -1 1
-1 -1 1 1 -1 -1
1 -1 1 -1 1 -1
1 1 1 1 1 1""",
}

# lifted deterministic points as printed: rows II, XI, YI, ZI, IX, IY, IZ
LIFT_TABLES = {
    0: """1 1 1 1
-1 -1 1 -1
1 -1 1 -1
1 1 1 1
-1 -1 1 -1
-1 -1 -1 1
-1 1 1 1""",
    1: """1 1 1 1
-1 -1 1 -1
1 -1 1 1
-1 -1 -1 1
-1 -1 1 -1
-1 1 -1 -1
-1 -1 -1 1""",
    2: """1 1 1 1
1 -1 -1 -1
-1 -1 -1 1
-1 -1 1 1
-1 -1 -1 -1
1 1 1 -1
1 -1 1 1""",
    3: """1 1 1 1 1 1
1 -1 1 -1 -1 -1
-1 -1 -1 -1 -1 1
1 1 1 -1 1 1
-1 -1 1 -1 -1 -1
1 -1 1 1 1 -1
1 1 1 -1 1 1""",
}

TIGHT_COUNTS = {"T1": 30, "T2": 33, "T3": 21, "T4": 15, "T5": 21, "T6": 20, "T7": 17, "T8": 15}
CL2_ORBIT_SIZES = {"T1": 192, "T2": 240, "T3": 3840, "T4": 2304, "T5": 1920, "T6": 5760, "T7": 5760, "T8": 2304}


def table(txt):
    return [[int(v) for v in line.split()] for line in txt.splitlines()]


def table_dec(i):
    cols = tuple(lf.ProjectedDet(z) for z in lf.TABLE_COLUMNS[i])
    return lf.Decomposition(cols, lf.TABLE_Q[i])


def test_det_vertex_examples():
    d = lf.det_vertex((0, 0, 0), (0, 0, 0))
    assert d.tableau == (1,) * 16
    e = lf.det_vertex((1, 1, 1), (1, 1, 1))
    for a in range(16):
        expected = d.tableau[a] if a in pc.NONLOCAL or a == 0 else -d.tableau[a]
        assert e.tableau[a] == expected
    with pytest.raises(ValueError):
        lf.det_vertex((0, 2, 0), (0, 0, 0))


def test_det_vertices_are_local_vertices():
    loc = lf.local_hpoly()
    assert len(loc.rows) == 36
    for d in lf.all_det_vertices():
        assert loc.contains(d.tableau)
        assert exact_rank(loc.subset(sorted(tight_set(loc, d.tableau)))) == 15
        xi = {a: d.xi(a) for a in range(16)}
        for a, b in itertools.combinations(pc.LOCAL, 2):
            if not pc.omega(a, b) and pc.add(a, b) in pc.LOCAL:
                assert (xi[a] + xi[b] + xi[pc.add(a, b)] + pc.beta(a, b)) % 2 == 0


def test_det_vertices_violate_nonlocal_rows():
    hp = lf.lambda2_hpoly()
    for d in lf.all_det_vertices():
        assert sum(1 for s in hp.slacks(d.tableau) if s < 0) == 3


def test_pairing_is_fixed_point_free_involution():
    dets = lf.all_det_vertices()
    assert len(dets) == 64
    for d in dets:
        assert d.complement != d and d.complement.complement == d
        assert lf.project(d.tableau) == lf.project(d.complement.tableau)
    assert len(lf.projected_dets()) == 32
    assert len({p.coords for p in lf.projected_dets()}) == 32


def test_canonical_z():
    assert lf.canonical_z((1, 1, 1, 1, 0, 1)) == (0, 0, 0, 0, 1, 0)
    assert lf.canonical_z((1, 0, 0, 1, 1, 0)) == (0, 1, 1, 0, 0, 1)
    assert lf.canonical_z((0, 1, 1, 0, 0, 1)) == (0, 1, 1, 0, 0, 1)


def test_project_rejects_wrong_length():
    with pytest.raises(ValueError):
        lf.project((1,) * 10)


def test_r_tables_match_columns():
    for i, txt in R_TABLES.items():
        cols = [lf.ProjectedDet(z) for z in lf.TABLE_COLUMNS[i]]
        assert lf.r_matrix(cols) == table(txt)
        assert set(cols) == set(lf.tight_dets(it.U_FIXTURES[i]))


def test_column_parities():
    par = [tuple(lf.ProjectedDet(z).parity for z in cols) for cols in lf.TABLE_COLUMNS]
    assert par[0] == (0, 0, 1, 1)
    assert par[1] == (1, 1, 1, 1)


def test_tight_facets_ui():
    counts = [tuple(len(v) for v in (f["nn"], f["chsh"])) for f in map(lf.tight_facets_ui, it.U_FIXTURES)]
    assert counts == [(1, 6), (3, 6), (1, 3), (1, 3)]
    assert [len(lf.tight_dets(u)) for u in it.U_FIXTURES] == [4, 4, 8, 6]


def test_decompositions():
    sols = [lf.solve_decomposition(u, [lf.ProjectedDet(z) for z in lf.TABLE_COLUMNS[i]])
            for i, u in enumerate(it.U_FIXTURES)]
    assert [len(s) for s in sols] == [1, 1, 3, 1]
    for i, s in enumerate(sols):
        assert lf.TABLE_Q[i] in [d.q for d in s]
        for d in s:
            w = {q for q in d.q if q}
            assert len(w) == 1  # uniform mixture over its support
            r = lf.r_matrix(list(d.support))
            assert [sum(a * b for a, b in zip(row, d.q)) for row in r] == list(it.U_FIXTURES[i])


def test_every_lift_is_feasible():
    hp, loc = lf.lambda2_hpoly(), lf.local_hpoly()
    for i in range(4):
        dec = table_dec(i)
        for alpha in itertools.product((0, 1), repeat=len(dec.active)):
            x = lf.classical_lift(dec, alpha)
            assert lf.project(x) == it.U_FIXTURES[i]
            assert hp.contains(x) and loc.contains(x)
    with pytest.raises(ValueError):
        lf.classical_lift(table_dec(0), (0, 1))


def test_lift_table_transcription_gives_fixtures():
    names = ("T3", "T5", "T6", "T7")
    for i, txt in LIFT_TABLES.items():
        dec = table_dec(i)
        alpha = []
        for (p, _), col in zip(dec.active, zip(*table(txt))):
            z = tuple((1 - v) // 2 for v in col[1:])
            assert lf.canonical_z(z) == p.z
            alpha.append(int(z == p.z))
        assert tuple(alpha) == lf.LIFT_TABLE_ALPHA[i]
        assert lf.classical_lift(dec, tuple(alpha)) == lf.FIXTURES[names[i]]


def test_printed_alpha_lifts():
    types = []
    for i in range(4):
        dec = table_dec(i)
        found = {r.alpha: r.report for r in lf.search_lifts(dec)}
        assert lf.LISTED_ALPHA[i] in found
        rep = found[lf.LISTED_ALPHA[i]]
        assert rep.is_vertex and rep.degenerate
        types.append(rep.orbit_type)
    # the printed u0 choice differs from the lift table in its tie column
    assert types == ["T6", "T5", "T6", "T7"]


def test_search_lift_types():
    kinds = [sorted({r.report.orbit_type for r in lf.search_lifts(table_dec(i))}) for i in range(4)]
    assert kinds == [["T3", "T6"], ["T5"], ["T5", "T6"], ["T7"]]
    assert [len(lf.search_lifts(table_dec(i))) for i in range(4)] == [6, 8, 6, 2]


def test_fixture_reports():
    for name, x in lf.FIXTURES.items():
        rep = lf.verify_lambda_vertex(x)
        assert rep.is_vertex and rep.tight_rank == 15
        assert rep.tight_count == TIGHT_COUNTS[name]
        assert rep.degenerate == (name not in ("T4", "T8"))
        assert rep.orbit_type == name


def test_projections_of_fixtures():
    bar = mm.mpbar_hpoly()
    for name in ("T4", "T8"):
        y = lf.project(lf.FIXTURES[name])
        assert bar.contains(y) and not it.is_mpbar_vertex(y)
    assert not bar.contains(lf.project(lf.FIXTURES["T2"]))
    assert mm.vertex_from_coords(lf.project(lf.FIXTURES["T1"])).kind == mm.T1
    assert mm.vertex_from_coords(lf.project(lf.FIXTURES["T2"])).kind == mm.T2


def test_cl2_orbit_sizes():
    table_ = lf._fixture_orbits()
    sizes = {}
    for name in table_.values():
        sizes[name] = sizes.get(name, 0) + 1
    assert sizes == CL2_ORBIT_SIZES


def test_cl2_orbit_type_invariance():
    rng = random.Random(11)
    group = pc.group_cl2()
    for _ in range(5):
        g = group.elements[rng.randrange(len(group))]
        assert lf.cl2_orbit_type(pc.apply_action(g, lf.FIXTURES["T5"])) == "T5"


def test_cl2_orbit_type_rejects_non_vertex():
    mixed = (Fraction(1),) + (Fraction(0),) * 15
    with pytest.raises(ValueError):
        lf.cl2_orbit_type(mixed)
    rep = lf.verify_lambda_vertex(mixed)
    assert rep.feasible and not rep.is_vertex and rep.orbit_type is None


def test_verify_rejects_bad_input():
    with pytest.raises(ValueError):
        lf.verify_lambda_vertex((2,) + (0,) * 15)
