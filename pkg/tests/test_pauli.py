import itertools

import pytest

from lambda2dd import gaussian as gm
from lambda2dd import pauli as pc


def commutes(a, b):
    ta, tb = pc.pauli_matrix(a), pc.pauli_matrix(b)
    return gm.matmul(ta, tb) == gm.matmul(tb, ta)


def test_label_order():
    assert pc.LABELS[:6] == ("II", "IX", "IY", "IZ", "XI", "XX")
    assert pc.LABELS[-1] == "ZZ"
    assert [pc.label(n) for n in pc.LABELS] == list(range(16))
    assert [pc.name(a) for a in pc.NL_COORDS] == ["II", "XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"]


def test_label_rejects_garbage():
    with pytest.raises(ValueError):
        pc.label("XQ")
    with pytest.raises(ValueError):
        pc.label("XYZ")


def test_local_nonlocal_split():
    assert len(pc.LOCAL) == 6 and len(pc.NONLOCAL) == 9
    assert set(pc.LOCAL) | set(pc.NONLOCAL) | {0} == set(range(16))


def test_omega_matches_matrix_commutator():
    for a, b in itertools.product(range(16), repeat=2):
        assert (pc.omega(a, b) == 0) == commutes(a, b), (a, b)


def test_beta_matches_matrix_product():
    for a, b in itertools.product(range(16), repeat=2):
        if pc.omega(a, b):
            with pytest.raises(ValueError):
                pc.beta(a, b)
            continue
        prod = gm.matmul(pc.pauli_matrix(a), pc.pauli_matrix(b))
        sign = (-1) ** pc.beta(a, b)
        assert prod == gm.scale(pc.pauli_matrix(pc.add(a, b)), sign)


def test_beta_cocycle_exhaustive():
    # beta(b,c) + beta(a,b+c) = beta(a,b) + beta(a+b,c) on pairwise commuting triples
    for a, b, c in itertools.product(range(16), repeat=3):
        if pc.omega(a, b) or pc.omega(b, c) or pc.omega(a, c):
            continue
        lhs = pc.beta(b, c) + pc.beta(a, pc.add(b, c))
        rhs = pc.beta(a, b) + pc.beta(pc.add(a, b), c)
        assert lhs % 2 == rhs % 2


def test_perp_sizes():
    assert pc.perp(0) == tuple(range(16))
    for a in range(1, 16):
        assert len(pc.perp(a)) == 8


def test_isotropic_subspaces_and_stabilizers():
    subs = pc.maximal_isotropics()
    assert len(subs) == 15
    assert sum(s.kind == "local" for s in subs) == 9
    assert len(pc.nonlocal_isotropics()) == 6
    groups = pc.enumerate_stabilizer_groups()
    assert len(groups) == 60
    assert sum(g.kind == "local" for g in groups) == 36
    for g in groups:
        assert pc.is_outcome_assignment(dict(g.gamma))


def test_outcome_assignment_on_a_triangle():
    # {XX, YY, ZZ}: XX.YY = -ZZ, so the product of signs must be -1
    tri = pc.span(pc.label("XX"), pc.label("YY"))
    gs = pc.outcome_assignments(tri)
    assert len(gs) == 4
    for g in gs:
        s = sum(g[pc.label(n)] for n in ("XX", "YY", "ZZ"))
        assert s % 2 == 1


def test_clifford_generators_preserve_omega():
    for g in pc.clifford2_generators():
        assert g.preserves_omega()
        assert g.perm[0] == 0


def test_signed_permutation_algebra():
    gens = pc.clifford2_generators()
    g, h = gens[0], gens[1]
    e = pc.SignedPermutation.identity()
    assert g @ g.inverse() == e
    x = tuple(range(1, 17))
    assert pc.apply_action(g @ h, x) == pc.apply_action(g, pc.apply_action(h, x))


def test_group_orders():
    assert len(pc.group_g()) == 1152
    assert len(pc.group_cl2()) == 11520


def test_g_preserves_nonlocal_block():
    for g in pc.group_g():
        assert {g.perm[a] for a in pc.NONLOCAL} == set(pc.NONLOCAL)


def test_apply_action_rejects_bad_length():
    with pytest.raises(ValueError):
        pc.apply_action(pc.SignedPermutation.identity(), (1, 2, 3))
