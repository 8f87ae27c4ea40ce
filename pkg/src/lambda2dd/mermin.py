"""The Mermin polytope MP and the CHSH facets of the projected classical polytope.

Points live in the 10 homogenized coordinates ``NL_COORDS`` (II followed by
the nine nonlocal labels).  The nonlocal maximal isotropics are called
triangles here; each nonlocal label lies in exactly two of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import pauli as pc
from .pauli import IDENTITY, NL_COORDS, NL_INDEX, NONLOCAL, add, beta, omega
from .polytope import HPoly, exact_rank, intersect, tight_rank, tight_set

T1 = "T1"
T2 = "T2"


@dataclass(frozen=True)
class CncSet:
    omega: frozenset[int]
    kind: str
    apex: int | None = None

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(sorted(self.omega - {IDENTITY}))

    def __str__(self) -> str:
        return "{" + ",".join(pc.name(a) for a in self.nonzero) + "}"


def _closed(s: frozenset[int]) -> bool:
    for a in s:
        for b in s:
            if a != b and not omega(a, b) and add(a, b) not in s:
                return False
    return True


def is_cnc(s) -> bool:
    """Closed under sums of commuting pairs and admits an outcome assignment."""
    s = frozenset(s) | {IDENTITY}
    return _closed(s) and bool(pc.outcome_assignments(s))


@lru_cache(maxsize=None)
def triangles() -> tuple[tuple[int, int, int], ...]:
    return tuple(i.nonzero for i in pc.nonlocal_isotropics())


@lru_cache(maxsize=None)
def enumerate_cnc() -> tuple[CncSet, ...]:
    """Maximal cnc subsets of ``{0} u E^nloc``: 6 of type T1, 9 of type T2."""
    found = []
    for k in range(1, len(NONLOCAL) + 1):
        for sub in itertools.combinations(NONLOCAL, k):
            s = frozenset(sub) | {IDENTITY}
            if is_cnc(s):
                found.append(s)
    maximal = [s for s in found if not any(s < t for t in found)]
    out = []
    for s in maximal:
        nz = s - {IDENTITY}
        if len(nz) == 3 and all(omega(a, b) for a, b in itertools.combinations(nz, 2)):
            out.append(CncSet(s, T1))
            continue
        tris = [t for t in triangles() if set(t) <= nz]
        if len(tris) != 2 or set(tris[0]) | set(tris[1]) != nz:
            raise AssertionError(f"unexpected maximal cnc set {sorted(s)}")
        (apex,) = set(tris[0]) & set(tris[1])
        out.append(CncSet(s, T2, apex))
    out.sort(key=lambda c: (c.kind, c.nonzero))
    return tuple(out)


def boundary(c: CncSet) -> frozenset[int]:
    if c.kind != T2:
        raise ValueError("boundary is defined for T2 cnc sets only")
    return c.omega - {IDENTITY, c.apex}


# -- vertices -------------------------------------------------------------


@dataclass(frozen=True)
class MerminVertex:
    cnc: CncSet
    gamma: tuple[tuple[int, int], ...]

    @property
    def values(self) -> dict[int, int]:
        return dict(self.gamma)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * 10
        x[0] = Fraction(1)
        for a, g in self.gamma:
            if a != IDENTITY:
                x[NL_INDEX[a]] = Fraction((-1) ** g)
        return tuple(x)

    @property
    def kind(self) -> str:
        return self.cnc.kind


def vertex_from_coords(x) -> MerminVertex:
    """Inverse of ``MerminVertex.coords`` for MP vertices."""
    support = frozenset(a for a in NONLOCAL if x[NL_INDEX[a]] != 0) | {IDENTITY}
    for c in enumerate_cnc():
        if c.omega == support:
            gamma = {IDENTITY: 0}
            for a in c.nonzero:
                gamma[a] = 0 if x[NL_INDEX[a]] == 1 else 1
            return MerminVertex(c, tuple(sorted(gamma.items())))
    raise ValueError("not an MP vertex")


@lru_cache(maxsize=None)
def mp_vertices() -> tuple[MerminVertex, ...]:
    """All 120 vertices: 48 of type T1 followed by 72 of type T2."""
    out = []
    for c in enumerate_cnc():
        for g in pc.outcome_assignments(c.omega):
            out.append(MerminVertex(c, tuple(sorted(g.items()))))
    return tuple(out)


def t1_representative() -> MerminVertex:
    return vertex_from_coords(_nl({"XX": 1, "XY": 1, "XZ": 1}))


def t2_representative() -> MerminVertex:
    """The canonical T2 vertex (apex ZZ)."""
    return vertex_from_coords(_nl({"XX": 1, "XY": 1, "YX": 1, "YY": -1, "ZZ": 1}))


def _nl(entries: dict[str, object]) -> tuple[Fraction, ...]:
    x = [Fraction(0)] * 10
    x[0] = Fraction(1)
    for k, v in entries.items():
        x[NL_INDEX[pc.label(k)]] = Fraction(v)
    return tuple(x)


nl_tableau = _nl


# -- H-descriptions -------------------------------------------------------


def project_row(row16) -> tuple[int, ...]:
    return tuple(row16[a] for a in NL_COORDS)


@lru_cache(maxsize=None)
def _triangle_rows(t) -> tuple[tuple[tuple[int, int], ...], ...]:
    """The four sign patterns of the stabilizer rows on one triangle."""
    return tuple(
        tuple((a, g) for a, g in s.gamma if a != IDENTITY)
        for s in pc.enumerate_stabilizer_groups()
        if set(s.subspace.nonzero) == set(t)
    )


@lru_cache(maxsize=None)
def mp_rows() -> tuple[tuple[tuple[int, int], ...], ...]:
    """The 24 nonlocal stabilizer groups as (label, bit) assignments."""
    return tuple(s.gamma for s in pc.enumerate_stabilizer_groups() if s.kind == "nonlocal")


@lru_cache(maxsize=None)
def mp_hpoly() -> HPoly:
    rows = []
    labels = []
    for s in pc.enumerate_stabilizer_groups():
        if s.kind == "nonlocal":
            rows.append(project_row(s.row16()))
            labels.append("stab" + str(s))
    return HPoly(tuple(rows), tuple(labels))


@lru_cache(maxsize=None)
def nn_hpoly() -> HPoly:
    """The 18 rows ``1 +- x_a >= 0``."""
    rows, labels = [], []
    for a in NONLOCAL:
        for s in (1, -1):
            r = [0] * 10
            r[0] = 1
            r[NL_INDEX[a]] = s
            rows.append(tuple(r))
            labels.append(("+" if s > 0 else "-") + pc.name(a))
    return HPoly(tuple(rows), tuple(labels))


@dataclass(frozen=True)
class ChshInequality:
    """``2 + sum_{a in boundary} (-1)^gamma(a) x_a >= 0`` with odd gamma sum."""

    cnc: CncSet
    gamma: tuple[tuple[int, int], ...]

    @property
    def boundary(self) -> frozenset[int]:
        return boundary(self.cnc)

    @property
    def h(self) -> tuple[int, ...]:
        r = [0] * 10
        r[0] = 2
        for a, g in self.gamma:
            r[NL_INDEX[a]] = (-1) ** g
        return tuple(r)

    def __str__(self) -> str:
        terms = "".join(("-" if g else "+") + pc.name(a) for a, g in self.gamma)
        return f"2{terms}"


@lru_cache(maxsize=None)
def chsh_family() -> tuple[ChshInequality, ...]:
    out = []
    for c in enumerate_cnc():
        if c.kind != T2:
            continue
        bd = sorted(boundary(c))
        for bits in itertools.product((0, 1), repeat=4):
            if sum(bits) % 2:
                out.append(ChshInequality(c, tuple(zip(bd, bits))))
    return tuple(out)


def chsh_from_row(h) -> ChshInequality:
    h = tuple(h)
    for ineq in chsh_family():
        if ineq.h == h:
            return ineq
    raise ValueError("not a CHSH row")


def chsh_representative() -> ChshInequality:
    """The row 2 - XX - XY - YX + YY."""
    return chsh_from_row((2, -1, -1, 0, -1, 1, 0, 0, 0, 0))


@lru_cache(maxsize=None)
def chsh_hpoly() -> HPoly:
    fam = chsh_family()
    return HPoly(tuple(h.h for h in fam), tuple("chsh" + str(h) for h in fam))


@lru_cache(maxsize=None)
def clbar_hpoly() -> HPoly:
    """Facets of the projected classical polytope: NN rows, then CHSH rows."""
    return intersect(nn_hpoly(), chsh_hpoly())


@lru_cache(maxsize=None)
def mpbar_hpoly() -> HPoly:
    """MP rows (24), NN rows (18) and CHSH rows (72), in that order."""
    return intersect(mp_hpoly(), clbar_hpoly())


# -- pairing and duality --------------------------------------------------


def _coords(v) -> tuple:
    return v.coords if isinstance(v, MerminVertex) else tuple(v)


def _row(h) -> tuple:
    return h.h if isinstance(h, ChshInequality) else tuple(h)


def pairing_value(h, v) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(_row(h), _coords(v))), Fraction(0))


def phi_dual(h: ChshInequality) -> MerminVertex:
    """The T2 vertex on the same cnc set with the boundary signs flipped."""
    c = h.cnc
    gbar = {a: g ^ 1 for a, g in h.gamma}
    apex_vals = set()
    for t in triangles():
        if c.apex in t:
            b, d = (x for x in t if x != c.apex)
            apex_vals.add((gbar[b] + gbar[d] + beta(b, d)) % 2)
    if len(apex_vals) != 1:
        raise AssertionError("boundary assignment does not extend")
    gbar[c.apex] = apex_vals.pop()
    gbar[IDENTITY] = 0
    if not pc.is_outcome_assignment(gbar):
        raise AssertionError("extension is not an outcome assignment")
    return MerminVertex(c, tuple(sorted(gbar.items())))


def phi_inverse(v: MerminVertex) -> ChshInequality:
    if v.kind != T2:
        raise ValueError("only T2 vertices are dual to CHSH rows")
    bd = boundary(v.cnc)
    return ChshInequality(v.cnc, tuple(sorted((a, g ^ 1) for a, g in v.gamma if a in bd)))


def tight_vertices(h) -> list[MerminVertex]:
    return [v for v in mp_vertices() if pairing_value(h, v) == 0]


# -- neighbors and joint rank ---------------------------------------------


@lru_cache(maxsize=4096)
def _mp_tight(x: tuple) -> frozenset[int]:
    return tight_set(mp_hpoly(), x)


@lru_cache(maxsize=None)
def _rank_of(z: frozenset[int]) -> int:
    hp = mp_hpoly()
    return exact_rank(hp.subset(sorted(z)))


def mp_joint_rank(v, w) -> int:
    return _rank_of(_mp_tight(tuple(_coords(v))) & _mp_tight(tuple(_coords(w))))


def neighbors(v: MerminVertex) -> list[MerminVertex]:
    """Vertices sharing an edge of MP with ``v`` (joint rank 8)."""
    return [w for w in mp_vertices() if w != v and mp_joint_rank(v, w) == 8]


def is_neighbor_by_loop(v: MerminVertex, w: MerminVertex) -> bool:
    """Combinatorial edge test on the Mermin torus.

    One endpoint must be of type T2; call it ``v``.  Then ``v`` and ``w`` span
    an edge iff ``w`` meets the boundary of ``v`` in two labels, the
    assignments agree on the common support, and removing the symmetric
    difference of the supports leaves a cnc set.
    """
    if v == w:
        return False
    if v.kind != T2:
        if w.kind != T2:
            return False
        v, w = w, v
    if len(boundary(v.cnc) & w.cnc.omega) != 2:
        return False
    gv, gw = v.values, w.values
    if any(gv[a] != gw[a] for a in v.cnc.omega & w.cnc.omega):
        return False
    rest = frozenset(NL_COORDS) - (v.cnc.omega ^ w.cnc.omega)
    return is_cnc(rest)


@dataclass(frozen=True)
class SignedRankGraph:
    deterministic: frozenset[int]
    selected: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]  # (triangle, row)
    edges: tuple[tuple[int, int, int, int], ...]  # (label, node, node, sign)
    half_edges: tuple[tuple[int, int], ...]  # (label, node)
    balanced_components: int

    @property
    def rank(self) -> int:
        return len(self.deterministic) + len(self.selected) - self.balanced_components


def _row_value(gamma, u) -> Fraction:
    return 1 + sum((-1) ** g * u[NL_INDEX[a]] for a, g in gamma)


def signed_rank_graph(v, w) -> SignedRankGraph:
    x, y = _coords(v), _coords(w)
    u = tuple((a + b) / 2 for a, b in zip(x, y))
    det = frozenset(a for a in NONLOCAL if abs(u[NL_INDEX[a]]) == 1)
    selected = []
    for ti, t in enumerate(triangles()):
        nd = sum(1 for a in t if a in det)
        if nd == 3:
            continue
        tight = sorted(g for g in _triangle_rows(t) if _row_value(g, u) == 0)
        if nd == 0 and len(tight) > 1:
            raise AssertionError("two tight rows on a triangle without deterministic labels")
        if tight:
            selected.append((ti, tight[0]))
    # label -> list of (node, eta)
    inc: dict[int, list[tuple[int, int]]] = {}
    for node, (ti, g) in enumerate(selected):
        for a, bit in g:
            if a != IDENTITY and a not in det:
                inc.setdefault(a, []).append((node, (-1) ** bit))
    edges, halves = [], []
    for a, ends in sorted(inc.items()):
        if len(ends) == 2:
            (n1, e1), (n2, e2) = ends
            edges.append((a, n1, n2, -e1 * e2))
        else:
            halves.append((a, ends[0][0]))
    b = _balanced_components(len(selected), edges, [n for _, n in halves])
    return SignedRankGraph(det, tuple(selected), tuple(edges), tuple(halves), b)


def _balanced_components(n: int, edges, half_nodes) -> int:
    """Count balanced components by switching along spanning trees."""
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for _, p, q, s in edges:
        adj[p].append((q, s))
        adj[q].append((p, s))
    half = set(half_nodes)
    switch: dict[int, int] = {}
    count = 0
    for root in range(n):
        if root in switch:
            continue
        switch[root] = 1
        stack, comp, ok = [root], [], True
        while stack:
            p = stack.pop()
            comp.append(p)
            for q, s in adj[p]:
                if q not in switch:
                    switch[q] = switch[p] * s
                    stack.append(q)
                elif switch[q] != switch[p] * s:
                    ok = False
        if ok and not half.intersection(comp):
            count += 1
    return count


def joint_rank_signed_graph(v, w) -> int:
    """Joint rank of two MP points from the signed-graph formula."""
    return signed_rank_graph(v, w).rank


def mp_tight_rank(x) -> int:
    return tight_rank(mp_hpoly(), _coords(x))


def mp_tight_count(x) -> int:
    return len(tight_set(mp_hpoly(), _coords(x)))
