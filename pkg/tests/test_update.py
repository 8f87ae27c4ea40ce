import itertools
from fractions import Fraction

import pytest

from lambda2dd import lift as lf
from lambda2dd import pauli as pc
from lambda2dd import update as up

XI, XX = pc.label("XI"), pc.label("XX")


def mixture(i, alphas=lf.LIFT_TABLE_ALPHA):
    cols = tuple(lf.ProjectedDet(z) for z in lf.TABLE_COLUMNS[i])
    dec = lf.Decomposition(cols, lf.TABLE_Q[i])
    mix = [(w, p.pair[0] if a else p.pair[1]) for (p, w), a in zip(dec.active, alphas[i])]
    return mix, lf.classical_lift(dec, alphas[i])


def test_perp_decomposition_local():
    pd = up.perp_decomposition(XI)
    assert all(x in pc.LOCAL for x in (pd.c, pd.c1, pd.c2))
    assert set().union(*pd.subspaces) == set(pc.perp(XI))
    with pytest.raises(ValueError):
        up.perp_decomposition(0)


def test_perp_decomposition_nonlocal():
    for a in pc.NONLOCAL:
        for t in (0, 1):
            pd = up.perp_decomposition(a, t)
            assert pd.c in pc.LOCAL and pd.c1 in pc.NONLOCAL and pd.c2 in pc.NONLOCAL
            assert pc.beta(a, pd.c1) == t and pc.beta(a, pd.c2) != t
            assert set().union(*pd.subspaces) == set(pc.perp(a))
            assert all(pc.is_isotropic(s) for s in pd.subspaces)


def test_born_probability():
    d = lf.det_vertex((0, 0, 0), (0, 0, 0))
    assert up.born_probability(d.tableau, XI, 0) == 1
    mixed = (1,) + (0,) * 15
    assert all(up.born_probability(mixed, a, 0) == Fraction(1, 2) for a in range(1, 16))
    assert up.born_probability(lf.FIXTURES["T3"], pc.label("ZI"), 0) == 1


def test_oracle_implementations_agree():
    for name in ("T3", "T8"):
        x = lf.FIXTURES[name]
        for a in (1, 5, 11):
            assert up.oracle_conjugate(x, a, 0) == up.oracle_conjugate_dense(x, a, 0)


def test_oracle_idempotent_and_trace():
    x = lf.FIXTURES["T7"]
    for a, r in itertools.product(range(1, 16), (0, 1)):
        y = up.oracle_conjugate(x, a, r)
        assert up.oracle_conjugate(y, a, r) == y
        assert y[0] == up.born_probability(x, a, r)


def test_deterministic_updates_match_oracle():
    for d in lf.all_det_vertices():
        for a in range(1, 16):
            total = 0
            for r in (0, 1):
                res = up.update_deterministic(d, a, r)
                assert res.tableau == up.oracle_conjugate(d.tableau, a, r)
                assert res.tableau == up.conjugate_tableau(d.tableau, a, r)
                assert res.probability == up.born_probability(d.tableau, a, r)
                total += res.probability
            assert total == 1


def test_local_rule_shape():
    d = lf.det_vertex((0, 1, 0), (1, 0, 0))
    hit = up.update_deterministic(d, XI, d.xi(XI))
    assert hit.probability == 1 and len(hit.post) == 1
    assert hit.post[0][1].support == frozenset(pc.perp(XI))
    miss = up.update_deterministic(d, XI, 1 - d.xi(XI))
    assert miss.probability == 0 and miss.post == () and not any(miss.tableau)


def test_nonlocal_rule_shape():
    d = lf.det_vertex((0, 1, 0), (1, 0, 0))
    r = d.xi(XX)
    hit = up.update_deterministic(d, XX, r)
    assert [w for w, _ in hit.post] == [Fraction(1, 2)] * 2
    pd = up.perp_decomposition(XX, d.parity)
    (op0, op1) = (op for _, op in hit.post)
    assert dict(op0.chi)[pd.c2] == 0 and dict(op1.chi)[pd.c2] == 1
    assert op0.is_cnc() and op1.is_cnc()
    miss = up.update_deterministic(d, XX, 1 - r)
    assert miss.probability == 0
    nz = {b for b, v in enumerate(miss.remainder) if v}
    assert nz == {pd.c2, pc.add(XX, pd.c2)}


def test_singleton_mixture_is_deterministic_update():
    for d in lf.all_det_vertices()[::7]:
        for a, r in itertools.product((1, 5, 6, 15), (0, 1)):
            assert up.update_mixture([(1, d)], a, r).tableau == up.update_deterministic(d, a, r).tableau


def test_mixture_updates_match_oracle():
    for i in range(4):
        mix, x = mixture(i)
        for a in range(1, 16):
            total = 0
            for r in (0, 1):
                res = up.update_mixture(mix, a, r)
                assert res.tableau == up.oracle_conjugate(x, a, r)
                assert res.probability == up.born_probability(x, a, r)
                total += res.probability
            assert total == 1


def test_mixture_examples():
    mix0, _ = mixture(0)
    res = up.update_mixture(mix0, XI, 0)
    assert res.probability == Fraction(1, 4) and len(res.post) == 1 and not any(res.remainder)
    for i in (0, 1):
        mix, _ = mixture(i)
        res = up.update_mixture(mix, XX, 0, combine=False)
        assert res.probability == 1 and not any(res.remainder)
        assert [w for w, _ in res.post] == [Fraction(1, 8)] * 8
    mix2, _ = mixture(2)
    res = up.update_mixture(mix2, XX, 0)
    assert not any(res.remainder) and res.probability == Fraction(3, 4)
    assert all(op.is_cnc() and op.support == frozenset(pc.perp(XX)) for _, op in res.post)


def test_mixture_rejects_bad_weights():
    d = lf.det_vertex((0, 0, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        up.update_mixture([(Fraction(1, 2), d)], XI, 0)


def test_post_states_are_feasible_and_in_cnc_hull():
    hp = lf.lambda2_hpoly()
    for i in range(4):
        _, x = mixture(i)
        for a, r in itertools.product(range(1, 16), (0, 1)):
            y = up.oracle_conjugate(x, a, r)
            if not y[0]:
                continue
            z = tuple(v / y[0] for v in y)
            assert hp.contains(z)
            assert {b for b, v in enumerate(z) if v} <= set(pc.perp(a))
            hull = up.hull_decomposition(z, a, r)
            assert sum(w for w, _ in hull) == 1 and all(w > 0 for w, _ in hull)
            assert all(op.is_cnc() for _, op in hull)


def test_normalize():
    mix0, _ = mixture(0)
    res = up.update_mixture(mix0, XI, 0).normalize()
    assert res.normalized and res.probability == 1 and res.tableau[0] == 1
    with pytest.raises(ZeroDivisionError):
        up.update_deterministic(lf.det_vertex((0, 0, 0), (0, 0, 0)), XI, 1).normalize()


def test_cnc_operator_requires_identity():
    with pytest.raises(ValueError):
        up.CncOperator.from_dict({1: 0})
