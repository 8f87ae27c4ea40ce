"""Streamlined double description for MP n CLbar, and the full vertex set of MPbar.

When one polytope's violated rows are in bijection with the violating
vertices of the other (the CHSH duality), every new vertex of the
intersection is a combination ``u = p v + (1 - p) w`` of a T2 vertex ``v``
with a vertex ``w`` that becomes adjacent to it once the remaining rows are
in place.  This module checks the hypotheses, rebuilds the four families
from the canonical T2 vertex and classifies the full enumeration.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import mermin as mm
from . import pauli as pc
from .polytope import DDPair, VRep, exact_rank, rref, run_dd, tight_set

log = logging.getLogger(__name__)


# -- hypotheses -----------------------------------------------------------


@dataclass
class ConditionReport:
    passed: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, list] = field(default_factory=dict)
    sandwich: tuple[Fraction, Fraction] | None = None  # (max lhs, min rhs)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def verify_conditions() -> ConditionReport:
    """Check the three hypotheses on the pair (MP, CLbar).

    1. each CHSH row is violated by exactly one MP vertex, its dual, and
       the NN rows hold on every MP vertex;
    2. T1 vertices satisfy every CLbar row;
    3. ``(h_v.w)(h_w.v) >= (h_v.v)(h_w.w)`` for non-adjacent T2 pairs.
    """
    rep = ConditionReport()
    verts = mm.mp_vertices()

    bad1 = []
    for h in mm.chsh_family():
        viol = [v for v in verts if mm.pairing_value(h, v) < 0]
        if len(viol) != 1 or viol[0] != mm.phi_dual(h) or mm.pairing_value(h, viol[0]) != -2:
            bad1.append(str(h))
    for r in mm.nn_hpoly().rows:
        for v in verts:
            if mm.pairing_value(r, v) < 0:
                bad1.append((r, v.coords))
    rep.passed["condition 1"] = not bad1
    rep.witnesses["condition 1"] = bad1

    rows = mm.clbar_hpoly().rows
    bad2 = [
        (r, v.coords) for v in verts if v.kind == mm.T1 for r in rows if mm.pairing_value(r, v) < 0
    ]
    rep.passed["condition 2"] = not bad2
    rep.witnesses["condition 2"] = bad2

    t2 = [v for v in verts if v.kind == mm.T2]
    hrow = {v: mm.phi_inverse(v) for v in t2}
    bad3 = []
    max_lhs, min_rhs = None, None
    for i, v in enumerate(t2):
        for w in t2[i + 1:]:
            if mm.mp_joint_rank(v, w) == 8:
                continue
            lhs = mm.pairing_value(hrow[v], v) * mm.pairing_value(hrow[w], w)
            rhs = mm.pairing_value(hrow[v], w) * mm.pairing_value(hrow[w], v)
            max_lhs = lhs if max_lhs is None else max(max_lhs, lhs)
            min_rhs = rhs if min_rhs is None else min(min_rhs, rhs)
            if rhs < lhs:
                bad3.append((v.coords, w.coords))
    rep.passed["condition 3"] = not bad3
    rep.witnesses["condition 3"] = bad3
    rep.sandwich = (max_lhs, min_rhs)
    rep.passed["sandwich"] = max_lhs is not None and max_lhs <= 4 <= min_rhs
    return rep


# -- streamlined vertices -------------------------------------------------


@dataclass(frozen=True)
class StreamlinedVertex:
    v: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    p: Fraction
    coords: tuple[Fraction, ...]


def streamlined_vertex(v, w, h_v=None) -> StreamlinedVertex:
    """The point on segment ``[v, w]`` where ``h_v`` becomes tight."""
    x, y = mm._coords(v), mm._coords(w)
    if h_v is None:
        h_v = mm.phi_inverse(v)
    hv, hw = mm.pairing_value(h_v, x), mm.pairing_value(h_v, y)
    if hw < 0:
        raise ValueError("w violates h_v")
    if hv > 0:
        raise ValueError("v does not violate h_v")
    if hv == 0:
        p = Fraction(1)
    else:
        p = 1 / (1 - hv / hw) if hw else Fraction(0)
    u = tuple(p * a + (1 - p) * b for a, b in zip(x, y))
    return StreamlinedVertex(tuple(x), tuple(y), p, u)


def chsh_tight_by_criterion(v: mm.MerminVertex) -> list[mm.ChshInequality]:
    """CHSH rows tight at an MP vertex, from the support/sign rule."""
    out = []
    gv = v.values
    for h in mm.chsh_family():
        common = v.cnc.omega & h.boundary
        if len(common) == 2 and all(gv[a] == g ^ 1 for a, g in h.gamma if a in common):
            out.append(h)
    return out


def tight_chsh_pairs(v, w) -> list[mm.ChshInequality]:
    """CHSH rows tight at both ``v`` and ``w``."""
    if isinstance(v, mm.MerminVertex) and isinstance(w, mm.MerminVertex):
        tw = set(chsh_tight_by_criterion(w))
        return [h for h in chsh_tight_by_criterion(v) if h in tw]
    return [
        h for h in mm.chsh_family()
        if mm.pairing_value(h, v) == 0 and mm.pairing_value(h, w) == 0
    ]


def _cl_tight(x, skip: tuple) -> list[tuple[int, ...]]:
    return [
        r for r in mm.clbar_hpoly().rows if r != skip and mm.pairing_value(r, x) == 0
    ]


@dataclass(frozen=True)
class RankCertificate:
    mp_joint: int  # joint rank in MP
    with_cl: int  # after adding the CLbar rows tight at both (except h_v)
    at_u: int  # tight rank of u in MPbar


def rank_certificate(v, w, u) -> RankCertificate:
    hp = mm.mp_hpoly()
    h_v = mm.phi_inverse(v).h
    common = sorted(tight_set(hp, v.coords) & tight_set(hp, w.coords))
    mp_rows = [hp.rows[i] for i in common]
    cl = [r for r in _cl_tight(v, h_v) if r in set(_cl_tight(w, h_v))]
    bar = mm.mpbar_hpoly()
    return RankCertificate(
        exact_rank(mp_rows),
        exact_rank(mp_rows + cl),
        exact_rank(bar.subset(sorted(tight_set(bar, u)))),
    )


def new_constraints(v, w) -> list[tuple[Fraction, ...]]:
    """Equations on ``w`` beyond those implied by the joint MP tight rows.

    Returns a row-reduced basis, as rows over (x_0, x_a...) with the
    constant term in position 0, of the joint CHSH equations modulo the
    span of the joint MP rows.
    """
    hp = mm.mp_hpoly()
    common = sorted(tight_set(hp, v.coords) & tight_set(hp, w.coords))
    base = [hp.rows[i] for i in common]
    red, piv = rref(base)
    out = []
    for h in tight_chsh_pairs(v, w):
        r = [Fraction(x) for x in h.h]
        for row, c in zip(red, piv):
            if r[c]:
                f = r[c]
                r = [a - f * b for a, b in zip(r, row)]
        if any(r):
            out.append(tuple(r))
    if not out:
        return []
    red2, _ = rref(out)
    return [tuple(x) for x in red2]


# fixtures: canonical T2 vertex, its canonical T2 neighbor and w0..w3
V_CANON = mm.nl_tableau({"XX": 1, "XY": 1, "YX": 1, "YY": -1, "ZZ": 1})
V_PRIME = mm.nl_tableau({"XX": 1, "YY": -1, "YZ": -1, "ZY": -1, "ZZ": 1})
W_FIXTURES = (
    mm.nl_tableau({"XX": 1, "XY": -1, "YZ": -1, "ZX": -1, "ZY": -1}),
    mm.nl_tableau({"XX": 1, "XY": -1, "YX": -1, "YY": -1, "ZZ": 1}),
    mm.nl_tableau({"XY": -1, "YY": -1, "ZY": -1}),
    mm.nl_tableau({"XY": -1, "YX": -1, "YZ": -1, "ZX": -1, "ZZ": 1}),
)
H = Fraction(1, 2)
U_FIXTURES = (
    mm.nl_tableau({"XX": 1, "YX": H, "YY": -H, "YZ": -H, "ZX": -H, "ZY": -H, "ZZ": H}),
    mm.nl_tableau({"XX": 1, "YY": -1, "ZZ": 1}),
    mm.nl_tableau({"XX": H, "YX": H, "YY": -1, "ZY": -H, "ZZ": H}),
    mm.nl_tableau({
        "XX": Fraction(2, 3), "XY": Fraction(1, 3), "YX": Fraction(1, 3),
        "YY": Fraction(-2, 3), "YZ": Fraction(-1, 3), "ZX": Fraction(-1, 3), "ZZ": 1,
    }),
)
P_FIXTURES = (H, H, H, Fraction(2, 3))


@dataclass(frozen=True)
class Reconstruction:
    index: int
    w: tuple[Fraction, ...]
    vertex: StreamlinedVertex
    joint_chsh: tuple[str, ...]
    constraints: tuple[tuple[Fraction, ...], ...]
    certificate: RankCertificate
    is_mpbar_vertex: bool


def streamlined_candidates(v: mm.MerminVertex, v_prime: mm.MerminVertex):
    """All ``w`` adjacent to ``v_prime`` but not to ``v``, with their ``u``."""
    out = []
    hv = mm.phi_inverse(v)
    for w in mm.neighbors(v_prime):
        if w == v or mm.mp_joint_rank(v, w) == 8:
            continue
        if mm.pairing_value(hv, w) <= 0:
            continue
        out.append((w, streamlined_vertex(v, w, hv)))
    return out


def is_mpbar_vertex(x) -> bool:
    bar = mm.mpbar_hpoly()
    if not bar.contains(x):
        return False
    return exact_rank(bar.subset(sorted(tight_set(bar, x)))) == 9


def reconstruct_ui() -> list[Reconstruction]:
    """Rebuild u0..u3 from the canonical T2 vertex through its neighbor v'.

    Every candidate ``w`` is a common neighbor of ``v'`` and a non-neighbor
    of ``v``; the four returned are those equal to the w fixtures, each
    with its rank bookkeeping.
    """
    v = mm.vertex_from_coords(V_CANON)
    vp = mm.vertex_from_coords(V_PRIME)
    cands = {w.coords: (w, s) for w, s in streamlined_candidates(v, vp)}
    out = []
    for i, wf in enumerate(W_FIXTURES):
        if wf not in cands:
            raise LookupError(f"w{i} is not a streamlined candidate")
        w, s = cands[wf]
        out.append(
            Reconstruction(
                i,
                wf,
                s,
                tuple(str(h) for h in tight_chsh_pairs(v, w)),
                tuple(new_constraints(v, w)),
                rank_certificate(v, w, s.coords),
                is_mpbar_vertex(s.coords),
            )
        )
    return out


# -- full enumeration and orbits ------------------------------------------


def mp_pair() -> DDPair:
    return DDPair.from_vrep(mm.mp_hpoly().rows, [v.coords for v in mm.mp_vertices()])


@lru_cache(maxsize=4)
def enumerate_mpbar(seed: int | None = None) -> VRep:
    """Vertices of MPbar by DD from the known V-description of MP.

    With ``seed=None`` the NN rows go in first (they cut nothing), then the
    CHSH rows by fewest violations.  A seed shuffles all 90 rows instead.
    """
    pair = mp_pair()
    cl = mm.clbar_hpoly().rows
    if seed is None:
        n_nn = len(mm.nn_hpoly().rows)
        pair = run_dd(pair, cl[:n_nn], "given")
        pair = run_dd(pair, cl[n_nn:], "fewest-violations")
    else:
        order = list(range(len(cl)))
        random.Random(seed).shuffle(order)
        pair = run_dd(pair, cl, order)
    return pair.vrep()


def mpbar_vertices(seed: int | None = None) -> list[tuple[Fraction, ...]]:
    return sorted(enumerate_mpbar(seed).vertices())


@dataclass(frozen=True)
class Orbit:
    representative: tuple[Fraction, ...]
    size: int
    members: frozenset[tuple[Fraction, ...]]
    tags: tuple[str, ...]


def classify_orbits(points, group: pc.Group | None = None) -> list[Orbit]:
    """Partition ``points`` into orbits; representative = least member."""
    group = group or pc.group_g()
    maps = pc.coordinate_maps(group, len(points[0]))
    remaining = set(points)
    orbits = []
    while remaining:
        x = min(remaining)
        orb = frozenset(pc.orbit(group, x, maps))
        if not orb <= set(points):
            raise AssertionError("point set is not closed under the group")
        remaining -= orb
        orbits.append(Orbit(min(orb), len(orb), orb, ()))
    orbits.sort(key=lambda o: (o.size, o.representative))
    return orbits


def _tag(o: Orbit) -> tuple[str, ...]:
    tags = []
    t1 = {v.coords for v in mm.mp_vertices() if v.kind == mm.T1}
    if o.members <= t1:
        tags.append("T1bar")
    for i, u in enumerate(U_FIXTURES):
        if u in o.members:
            tags.append(f"u{i}")
    if nonlocal_stabilizer_images() <= o.members:
        tags.append("stabilizer")
    return tuple(tags)


@lru_cache(maxsize=None)
def nonlocal_stabilizer_images() -> frozenset[tuple[Fraction, ...]]:
    """Projections of the 24 nonlocal stabilizer states."""
    out = set()
    for s in pc.enumerate_stabilizer_groups():
        if s.kind == "nonlocal":
            x = [Fraction(0)] * 10
            x[0] = Fraction(1)
            for a, g in s.gamma:
                if a:
                    x[pc.NL_INDEX[a]] = Fraction((-1) ** g)
            out.add(tuple(x))
    return frozenset(out)


def classify_mpbar_orbits(seed: int | None = None, group: pc.Group | None = None) -> list[Orbit]:
    orbits = classify_orbits(mpbar_vertices(seed), group)
    return [Orbit(o.representative, o.size, o.members, _tag(o)) for o in orbits]
