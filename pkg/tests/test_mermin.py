import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest

from lambda2dd import mermin as mm
from lambda2dd import pauli as pc
from lambda2dd.intersection import classify_orbits
from lambda2dd.polytope import enumerate_vertices, exact_rank


@pytest.fixture(scope="module")
def verts():
    return mm.mp_vertices()


def test_cnc_census():
    cnc = mm.enumerate_cnc()
    assert Counter(c.kind for c in cnc) == {mm.T1: 6, mm.T2: 9}
    for c in cnc:
        assert mm.is_cnc(c.omega)
    assert len(mm.triangles()) == 6


def test_boundary_of_t2_set():
    c = mm.t2_representative().cnc
    assert len(mm.boundary(c)) == 4
    t1 = mm.t1_representative().cnc
    with pytest.raises(ValueError):
        mm.boundary(t1)


def test_row_counts():
    assert len(mm.mp_hpoly().rows) == 24
    assert len(mm.nn_hpoly().rows) == 18
    assert len(mm.chsh_family()) == 72
    assert len(mm.mpbar_hpoly().rows) == 114


def test_vertex_census_by_construction(verts):
    assert len(verts) == 120
    assert Counter(v.kind for v in verts) == {mm.T1: 48, mm.T2: 72}
    assert len({v.coords for v in verts}) == 120


def test_dd_agrees_with_cnc_construction(verts):
    got = enumerate_vertices(mm.mp_hpoly()).vertex_set()
    assert got == {v.coords for v in verts}


def test_g_orbits(verts):
    orbits = classify_orbits([v.coords for v in verts])
    assert sorted(o.size for o in orbits) == [48, 72]
    by_size = {o.size: o.members for o in orbits}
    assert mm.t1_representative().coords in by_size[48]
    assert mm.t2_representative().coords in by_size[72]


def test_tight_counts(verts):
    t2 = mm.t2_representative().coords
    assert mm.mp_tight_rank(t2) == 9
    assert mm.mp_tight_count(t2) == 14
    assert mm.mp_tight_rank(mm.t1_representative().coords) == 9


def test_chsh_string_form():
    assert str(mm.chsh_representative()) == "2-XX-XY-YX+YY"


def test_pairing_values(verts):
    for h in mm.chsh_family():
        vals = Counter(mm.pairing_value(h, v) for v in verts)
        assert vals[-2] == 1
        assert vals[0] == 24
        assert set(vals) <= {-2, 0, 2, 4, 6}


def test_phi_roundtrip(verts):
    duals = {mm.phi_dual(h) for h in mm.chsh_family()}
    assert duals == {v for v in verts if v.kind == mm.T2}
    for h in mm.chsh_family():
        assert mm.phi_inverse(mm.phi_dual(h)) == h
    with pytest.raises(ValueError):
        mm.phi_inverse(mm.t1_representative())


def test_tight_vertices_are_neighbors_of_dual():
    for h in random.Random(3).sample(mm.chsh_family(), 8):
        tv = set(mm.tight_vertices(h))
        assert len(tv) == 24
        assert tv == set(mm.neighbors(mm.phi_dual(h)))
        assert Counter(v.kind for v in tv) == {mm.T1: 8, mm.T2: 16}


def test_joint_rank_distribution_from_canonical_t2(verts):
    v = mm.t2_representative()
    dist = Counter(mm.mp_joint_rank(v, w) for w in verts if w != v)
    assert dist == {8: 24, 7: 32, 6: 54, 4: 8, 3: 1}


def test_loop_criterion_matches_rank_everywhere(verts):
    for v, w in itertools.permutations(verts, 2):
        assert mm.is_neighbor_by_loop(v, w) == (mm.mp_joint_rank(v, w) == 8)


def test_signed_graph_rank_sample(verts):
    pairs = random.Random(7).sample(list(itertools.combinations(verts, 2)), 300)
    for v, w in pairs:
        assert mm.joint_rank_signed_graph(v, w) == mm.mp_joint_rank(v, w)


def test_g_preserves_mp_rows():
    rows = {tuple(Fraction(x) for x in r) for r in mm.mp_hpoly().rows}
    maps = pc.coordinate_maps(pc.group_g(), 10)
    for m in maps[::37]:
        assert {tuple(s * r[i] for i, s in m) for r in rows} == rows


def test_mp_rows_have_full_rank():
    assert exact_rank(mm.mp_hpoly().rows) == 10
