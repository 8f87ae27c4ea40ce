"""Deterministic vertices, convex decompositions in CLbar and classical lifts to Lambda_2.

A deterministic vertex is fixed by local outcome bits ``r`` (first qubit)
and ``s`` (second qubit), indexed X, Y, Z.  Its bit string is
``z = (r0, r1, r2, s0, s1, s2)``; ``z`` and its complement project to the
same point of CLbar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import mermin as mm
from . import pauli as pc
from .pauli import NL_COORDS
from .polytope import HPoly, basic_feasible_solutions, exact_rank, tight_set

Bits = tuple[int, ...]


def _f(v) -> Fraction:
    return Fraction(v)


def tableau16(rows: list[list]) -> tuple[Fraction, ...]:
    """Flatten a 4x4 tableau (rows: II.., XI.., YI.., ZI..)."""
    return tuple(_f(x) for row in rows for x in row)


# -- deterministic vertices ---------------------------------------------


@dataclass(frozen=True)
class DeterministicVertex:
    r: Bits
    s: Bits

    @property
    def z(self) -> Bits:
        return self.r + self.s

    def xi(self, a: int) -> int:
        p, q = divmod(a, 4)
        return ((self.r[p - 1] if p else 0) + (self.s[q - 1] if q else 0)) % 2

    @property
    def tableau(self) -> tuple[Fraction, ...]:
        return tuple(Fraction((-1) ** self.xi(a)) for a in range(16))

    @property
    def complement(self) -> "DeterministicVertex":
        return DeterministicVertex(tuple(1 - x for x in self.r), tuple(1 - x for x in self.s))

    @property
    def parity(self) -> int:
        return parity(self)


def det_vertex(r: Bits, s: Bits) -> DeterministicVertex:
    if len(r) != 3 or len(s) != 3 or any(b not in (0, 1) for b in r + s):
        raise ValueError("r and s must be three bits each")
    return DeterministicVertex(tuple(r), tuple(s))


def all_det_vertices() -> list[DeterministicVertex]:
    return [
        DeterministicVertex(z[:3], z[3:]) for z in itertools.product((0, 1), repeat=6)
    ]


def project(x) -> tuple:
    """Keep x_II and the nine nonlocal entries."""
    if len(x) != 16:
        raise ValueError("expected a 16-entry tableau")
    return tuple(x[a] for a in NL_COORDS)


def parity(d: DeterministicVertex) -> int:
    """0 if xi restricted to the nonlocal labels is additive on triangles, else 1."""
    par = set()
    for t in mm.triangles():
        par.add(sum(d.xi(a) for a in t) % 2)
    if len(par) != 1:
        raise AssertionError("parity differs between triangles")
    return par.pop()


def canonical_z(z: Bits) -> Bits:
    """Representative of ``{z, complement}``: lower weight, ties start with 0."""
    zb = tuple(1 - b for b in z)
    wz, wb = sum(z), sum(zb)
    if wz != wb:
        return z if wz < wb else zb
    return z if z[0] == 0 else zb


@dataclass(frozen=True)
class ProjectedDet:
    z: Bits  # canonical representative

    @property
    def pair(self) -> tuple[DeterministicVertex, DeterministicVertex]:
        d = DeterministicVertex(self.z[:3], self.z[3:])
        return d, d.complement

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return project(self.pair[0].tableau)

    @property
    def parity(self) -> int:
        return parity(self.pair[0])

    def __str__(self) -> str:
        return "".join(map(str, self.z))


@lru_cache(maxsize=None)
def projected_dets() -> tuple[ProjectedDet, ...]:
    return tuple(sorted({ProjectedDet(canonical_z(d.z)) for d in all_det_vertices()}, key=lambda p: p.z))


def projected_det_from_coords(x) -> ProjectedDet:
    x = tuple(_f(v) for v in x)
    for p in projected_dets():
        if p.coords == x:
            return p
    raise ValueError("not the projection of a deterministic vertex")


# -- the Lambda_2 H-description ------------------------------------------


@lru_cache(maxsize=None)
def lambda2_hpoly() -> HPoly:
    """All 60 stabilizer rows in 16 homogenized coordinates, local rows first."""
    groups = pc.enumerate_stabilizer_groups()
    return HPoly(tuple(s.row16() for s in groups), tuple(str(s) for s in groups))


@lru_cache(maxsize=None)
def local_hpoly() -> HPoly:
    groups = [s for s in pc.enumerate_stabilizer_groups() if s.kind == "local"]
    return HPoly(tuple(s.row16() for s in groups), tuple(str(s) for s in groups))


# -- tight facets and decompositions -------------------------------------


def tight_facets_ui(u) -> dict[str, list[tuple[int, ...]]]:
    """NN and CHSH rows of CLbar tight at ``u``."""
    u = tuple(_f(x) for x in u)
    nn = [r for r in mm.nn_hpoly().rows if mm.pairing_value(r, u) == 0]
    ch = [h.h for h in mm.chsh_family() if mm.pairing_value(h, u) == 0]
    if any(mm.pairing_value(r, u) < 0 for r in mm.clbar_hpoly().rows):
        raise ValueError("point lies outside CLbar")
    return {"nn": nn, "chsh": ch}


def tight_dets(u, order: list[Bits] | None = None) -> list[ProjectedDet]:
    """Projected deterministic points on every CLbar facet tight at ``u``.

    Sorted by (parity, canonical z) unless an explicit ``order`` of
    canonical strings is given.
    """
    f = tight_facets_ui(u)
    rows = f["nn"] + f["chsh"]
    cols = [p for p in projected_dets() if all(mm.pairing_value(r, p.coords) == 0 for r in rows)]
    if order is None:
        return sorted(cols, key=lambda p: (p.parity, p.z))
    by_z = {p.z: p for p in cols}
    if sorted(order) != sorted(by_z):
        raise ValueError("order does not list the tight columns")
    return [by_z[z] for z in order]


def r_matrix(cols: list[ProjectedDet]) -> list[list[Fraction]]:
    """10 x kappa matrix whose columns are the projected points."""
    return [[c.coords[i] for c in cols] for i in range(10)]


@dataclass(frozen=True)
class Decomposition:
    support: tuple[ProjectedDet, ...]
    q: tuple[Fraction, ...]

    @property
    def active(self) -> tuple[tuple[ProjectedDet, Fraction], ...]:
        return tuple((p, w) for p, w in zip(self.support, self.q) if w > 0)


def solve_decomposition(u, cols: list[ProjectedDet] | None = None) -> list[Decomposition]:
    """Vertices of ``{q >= 0 : R q = u}`` over the tight columns."""
    u = tuple(_f(x) for x in u)
    cols = tight_dets(u) if cols is None else cols
    sols = basic_feasible_solutions(r_matrix(cols), u)
    if not sols:
        raise ValueError("no nonnegative decomposition")
    return [Decomposition(tuple(cols), q) for q in sols]


def classical_lift(dec: Decomposition, alpha: Bits) -> tuple[Fraction, ...]:
    """``sum q (alpha d^z + (1 - alpha) d^zbar)`` over the positive weights."""
    act = dec.active
    if len(alpha) != len(act):
        raise ValueError(f"alpha needs {len(act)} entries")
    x = [Fraction(0)] * 16
    for (p, w), a in zip(act, alpha):
        d, dbar = p.pair
        src = d if a else dbar
        for i, v in enumerate(src.tableau):
            x[i] += w * v
    return tuple(x)


# -- Lambda_2 vertex reports and Clifford orbit types --------------------


@dataclass(frozen=True)
class LambdaVertexReport:
    tableau: tuple[Fraction, ...]
    feasible: bool
    tight_count: int
    tight_rank: int
    is_vertex: bool
    degenerate: bool
    orbit_type: str | None


def verify_lambda_vertex(x, classify: bool = True) -> LambdaVertexReport:
    x = tuple(_f(v) for v in x)
    if len(x) != 16 or x[0] != 1:
        raise ValueError("expected a 16-entry tableau with x_II = 1")
    hp = lambda2_hpoly()
    feasible = hp.contains(x)
    if feasible:
        z = tight_set(hp, x)
        count, rank = len(z), exact_rank(hp.subset(sorted(z)))
    else:
        s = hp.slacks(x)
        z = [i for i, v in enumerate(s) if v == 0]
        count, rank = len(z), exact_rank(hp.subset(z))
    vertex = feasible and rank == 15
    otype = cl2_orbit_type(x, check=False) if (vertex and classify) else None
    return LambdaVertexReport(x, feasible, count, rank, vertex, vertex and count > 15, otype)


FIXTURES: dict[str, tuple[Fraction, ...]] = {}


def _fix(name: str, rows):
    FIXTURES[name] = tableau16(rows)


_h, _q, _t = Fraction(1, 2), Fraction(1, 4), Fraction(1, 3)
_fix("T1", [[1, 0, 0, 0], [0, 1, 1, 1], [1, 0, 0, 0], [1, 0, 0, 0]])
_fix("T2", [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, 1]])
_fix("T3", [[1, -_h, -_h, _h], [-_h, 1, 0, 0], [0, _h, -_h, -_h], [1, -_h, -_h, _h]])
_fix("T4", [[1, _h, -_h, _h], [0, _h, _h, _h], [-_h, 0, 0, 0], [0, _h, _h, _h]])
_fix("T5", [[1, -_h, -_h, -_h], [-_h, 1, 0, 0], [_h, 0, -1, 0], [-_h, 0, 0, 1]])
_fix("T6", [[1, -1, _h, _h], [-_h, _h, 0, 0], [-_h, _h, -1, 0], [0, 0, -_h, _h]])
_fix("T7", [[1, -2 * _t, _t, 2 * _t], [-_t, 2 * _t, _t, 0], [-2 * _t, _t, -2 * _t, -_t], [2 * _t, -_t, 0, 1]])
_fix("T8", [[1, 3 * _q, _h, _h], [3 * _q, _h, 3 * _q, _q], [_q, _h, -_q, -_q], [3 * _q, _h, _q, 3 * _q]])


@lru_cache(maxsize=None)
def _fixture_orbits() -> dict[tuple[Fraction, ...], str]:
    group = pc.group_cl2()
    maps = pc.coordinate_maps(group, 16)
    table: dict[tuple[Fraction, ...], str] = {}
    for name, x in FIXTURES.items():
        for y in pc.orbit(group, x, maps):
            if y in table and table[y] != name:
                raise AssertionError(f"fixtures {name} and {table[y]} share an orbit")
            table[y] = name
    return table


def cl2_orbit_type(x, check: bool = True) -> str:
    """Label T1..T8 of the Clifford orbit containing the vertex ``x``, else "other"."""
    x = tuple(_f(v) for v in x)
    if check:
        hp = lambda2_hpoly()
        if len(x) != 16 or not hp.contains(x) or exact_rank(hp.subset(sorted(tight_set(hp, x)))) != 15:
            raise ValueError("not a Lambda_2 vertex")
    return _fixture_orbits().get(x, "other")


@dataclass(frozen=True)
class LiftResult:
    alpha: Bits
    report: LambdaVertexReport


def search_lifts(dec: Decomposition, only_vertices: bool = True) -> list[LiftResult]:
    """Every corner of the lift hypercube, or those that are Lambda_2 vertices."""
    out = []
    for alpha in itertools.product((0, 1), repeat=len(dec.active)):
        rep = verify_lambda_vertex(classical_lift(dec, alpha))
        if rep.is_vertex or not only_vertices:
            out.append(LiftResult(alpha, rep))
    return out


def _z(s: str) -> Bits:
    return tuple(int(c) for c in s)


# column orders of the reference R tables, and the listed alpha choices
TABLE_COLUMNS = (
    tuple(map(_z, ("011000", "001001", "000010", "001011"))),
    tuple(map(_z, ("010000", "000010", "001011", "011001"))),
    tuple(map(_z, ("011000", "100010", "010100", "000011", "011100", "000010", "001011", "011001"))),
    tuple(map(_z, ("010100", "001001", "010000", "000010", "001011", "011001"))),
)
LISTED_ALPHA = ((0, 0, 1, 1), (0, 0, 1, 0), (1, 0, 0, 0), (1, 0, 1, 0, 0, 0))
# alpha read off the table of lifted deterministic vertices; differs
# from LISTED_ALPHA only in the last u0 entry, and reproduces T3, T5, T6, T7
LIFT_TABLE_ALPHA = ((0, 0, 1, 0), (0, 0, 1, 0), (1, 0, 0, 0), (1, 0, 1, 0, 0, 0))
_Q4, _Q6 = Fraction(1, 4), Fraction(1, 6)
TABLE_Q = (
    (_Q4,) * 4,
    (_Q4,) * 4,
    (Fraction(0),) * 4 + (_Q4,) * 4,
    (_Q6,) * 6,
)
