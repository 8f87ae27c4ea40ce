"""Exact rational polyhedra in homogenized (cone) form and the DD method.

A polytope is stored as a cone ``{x : M x >= 0}`` with the homogenizing
coordinate ``x[0]``; the polytope itself is the slice ``x[0] = 1``.  All
arithmetic is exact: inequality rows and rays are integer tuples,
points are tuples of :class:`~fractions.Fraction`.

Tight sets are kept internally as integer bitmasks over row indices.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

Row = tuple[int, ...]


class InfeasibleError(ValueError):
    """A point violates an inequality it was required to satisfy."""


class RankDeficientError(ValueError):
    pass


class UnboundedError(ValueError):
    pass


# -- rational helpers ---------------------------------------------------


def frac_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def integer_row(row: Iterable) -> Row:
    """Positive rescaling of a rational vector to coprime integers."""
    fr = [Fraction(x) for x in row]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _reduce(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = math.gcd(g, x)
    if g > 1:
        return [x // g for x in row]
    return row


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    m = [list(integer_row(r)) for r in rows]
    m = [r for r in m if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        pc = p[col]
        for i in range(rank + 1, len(m)):
            f = m[i][col]
            if f:
                m[i] = _reduce([pc * x - f * y for x, y in zip(m[i], p)])
        rank += 1
        if rank == len(m):
            break
    return rank


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of the square-or-tall system ``a x = b``, else None."""
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug)
    n = len(a[0])
    if n in piv or len(piv) != n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return tuple(x)


def basic_feasible_solutions(a: Sequence[Sequence], b: Sequence) -> list[tuple[Fraction, ...]]:
    """All vertices of ``{q : a q = b, q >= 0}`` (exhaustive basis search).

    Suitable for the handful of unknowns that arise in decompositions.
    """
    a = [[Fraction(x) for x in r] for r in a]
    b = [Fraction(x) for x in b]
    n = len(a[0])
    red, piv = rref([r + [bi] for r, bi in zip(a, b)])
    if n in piv:
        return []
    # independent equations only
    eqs = [row[:n] for row in red]
    rhs = [row[n] for row in red]
    k = len(eqs)
    out = set()
    for basis in combinations(range(n), k):
        sub = [[row[j] for j in basis] for row in eqs]
        sol = solve(sub, rhs)
        if sol is None or any(x < 0 for x in sol):
            continue
        q = [Fraction(0)] * n
        for j, x in zip(basis, sol):
            q[j] = x
        out.add(tuple(q))
    return sorted(out, reverse=True)


# -- H-representation ---------------------------------------------------


@dataclass(frozen=True)
class HPoly:
    """Homogenized H-representation: P = {x : M x >= 0, x[0] = 1}."""

    rows: tuple[Row, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rows = tuple(integer_row(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("rows have inconsistent lengths")
        if self.labels is not None and len(self.labels) != len(rows):
            raise ValueError("one label per row required")

    @classmethod
    def from_inequalities(cls, a: Sequence[Sequence], b: Sequence, labels=None) -> "HPoly":
        """The polytope ``{y : a y >= b}`` in homogenized form."""
        return cls(tuple((-Fraction(bi),) + tuple(r) for r, bi in zip(a, b)), labels)

    @property
    def dim(self) -> int:
        """Ambient dimension of the cone (including x[0])."""
        return len(self.rows[0])

    def __len__(self) -> int:
        return len(self.rows)

    def slacks(self, x: Sequence) -> list:
        x = self._homog(x)
        return [dot(r, x) for r in self.rows]

    def _homog(self, x: Sequence) -> tuple:
        if len(x) == self.dim - 1:
            x = (1,) + tuple(x)
        if len(x) != self.dim:
            raise ValueError(f"point has {len(x)} entries, expected {self.dim}")
        return tuple(x)

    def contains(self, x: Sequence) -> bool:
        return all(s >= 0 for s in self.slacks(x))

    def subset(self, indices: Iterable[int]) -> list[Row]:
        return [self.rows[i] for i in indices]


def intersect(p1: HPoly, p2: HPoly) -> HPoly:
    """Row stacking: the feasible set of the result is P1 n P2."""
    if p1.dim != p2.dim:
        raise ValueError(f"dimension mismatch: {p1.dim} vs {p2.dim}")
    labels = None
    if p1.labels is not None and p2.labels is not None:
        labels = p1.labels + p2.labels
    return HPoly(p1.rows + p2.rows, labels)


def tight_set(p: HPoly, x: Sequence) -> frozenset[int]:
    """Indices of the rows with zero slack at ``x``."""
    s = p.slacks(x)
    bad = [i for i, v in enumerate(s) if v < 0]
    if bad:
        raise InfeasibleError(f"point violates {len(bad)} rows, first {bad[0]}")
    return frozenset(i for i, v in enumerate(s) if v == 0)


def tight_rank(p: HPoly, x: Sequence) -> int:
    return exact_rank(p.subset(sorted(tight_set(p, x))))


def joint_rank(p: HPoly, x: Sequence, y: Sequence) -> int:
    """Rank of the rows tight at both points."""
    z = tight_set(p, x) & tight_set(p, y)
    return exact_rank(p.subset(sorted(z)))


def is_vertex(p: HPoly, x: Sequence) -> bool:
    try:
        return tight_rank(p, x) == p.dim - 1
    except InfeasibleError:
        return False


# -- V-representation and the DD method ---------------------------------


def canonical_ray(v: Iterable) -> Row:
    """Coprime integer representative of the ray through ``v``."""
    r = integer_row(v)
    if not any(r):
        raise ValueError("zero ray")
    return r


def ray_to_point(r: Sequence[int]) -> tuple[Fraction, ...]:
    if r[0] <= 0:
        raise UnboundedError("ray does not meet the slice x0 = 1")
    return tuple(Fraction(x, r[0]) for x in r)


@dataclass(frozen=True)
class VRep:
    rays: tuple[Row, ...]

    def __len__(self) -> int:
        return len(self.rays)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        return [ray_to_point(r) for r in self.rays]

    def vertex_set(self) -> frozenset[tuple[Fraction, ...]]:
        return frozenset(self.vertices())


def _mask_rows(rows: Sequence[Row], mask: int) -> list[Row]:
    out = []
    while mask:
        low = mask & -mask
        out.append(rows[low.bit_length() - 1])
        mask ^= low
    return out


def _mask_of(rows: Sequence[Row], r: Sequence[int]) -> int:
    m = 0
    for i, h in enumerate(rows):
        if dot(h, r) == 0:
            m |= 1 << i
    return m


@dataclass
class DDPair:
    """Generating rows, extreme rays and each ray's tight mask over ``rows``."""

    rows: list[Row]
    rays: list[Row]
    masks: list[int]
    dim: int = field(default=0)

    def __post_init__(self):
        if not self.dim:
            self.dim = len(self.rows[0]) if self.rows else len(self.rays[0])

    @classmethod
    def from_vrep(cls, rows: Sequence[Sequence], rays: Iterable[Sequence]) -> "DDPair":
        """Wrap a known V-description of the cone generated by ``rows``."""
        rows = [integer_row(r) for r in rows]
        rays = sorted({canonical_ray(r) for r in rays})
        for r in rays:
            if any(dot(h, r) < 0 for h in rows):
                raise InfeasibleError("ray violates a generating row")
        return cls(rows, rays, [_mask_of(rows, r) for r in rays])

    def copy(self) -> "DDPair":
        return DDPair(list(self.rows), list(self.rays), list(self.masks), self.dim)

    def vrep(self) -> VRep:
        return VRep(tuple(sorted(self.rays)))


@dataclass(frozen=True)
class StepStats:
    plus: int
    zero: int
    minus: int
    new: int


def initial_pair(rows: Sequence[Row]) -> tuple[DDPair, list[int]]:
    """Simplicial cone from a greedily chosen nonsingular d-row subsystem.

    Returns the pair and the indices (into ``rows``) that were used.
    """
    d = len(rows[0])
    chosen: list[int] = []
    for i, r in enumerate(rows):
        if exact_rank([rows[j] for j in chosen] + [r]) > len(chosen):
            chosen.append(i)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise RankDeficientError(f"generating matrix has rank {len(chosen)} < {d}")
    sub = [rows[i] for i in chosen]
    rays = []
    for k in range(d):
        e = [0] * d
        e[k] = 1
        rays.append(canonical_ray(solve(sub, e)))
    pair = DDPair(list(sub), [], [], d)
    pair.rays = rays
    pair.masks = [_mask_of(sub, r) for r in rays]
    return pair, chosen


def dd_step(
    pair: DDPair, new_row: Sequence, adjacency: str = "rank", stats: list | None = None
) -> DDPair:
    """Insert one inequality, returning the DD pair for the enlarged system.

    Keeps rays on the positive side and on the hyperplane, and combines each
    adjacent (positive, negative) pair into a ray on the hyperplane.
    ``adjacency`` is ``"rank"`` (algebraic test) or ``"combinatorial"``.
    """
    d = pair.dim
    if exact_rank(pair.rows) < d:
        raise RankDeficientError("current generating matrix is rank deficient")
    h = integer_row(new_row)
    vals = [dot(h, r) for r in pair.rays]
    plus = [j for j, v in enumerate(vals) if v > 0]
    zero = [j for j, v in enumerate(vals) if v == 0]
    minus = [j for j, v in enumerate(vals) if v < 0]

    bit = 1 << len(pair.rows)
    rays = [pair.rays[j] for j in plus] + [pair.rays[j] for j in zero]
    masks = [pair.masks[j] for j in plus] + [pair.masks[j] | bit for j in zero]

    rank_cache: dict[int, int] = {}
    all_masks = pair.masks
    new = {}
    for jp in plus:
        mp = pair.masks[jp]
        for jm in minus:
            common = mp & pair.masks[jm]
            if common.bit_count() < d - 2:
                continue
            if adjacency == "rank":
                rk = rank_cache.get(common)
                if rk is None:
                    rk = exact_rank(_mask_rows(pair.rows, common))
                    rank_cache[common] = rk
                if rk != d - 2:
                    continue
            elif adjacency == "combinatorial":
                if any(
                    (m & common) == common
                    for k, m in enumerate(all_masks)
                    if k != jp and k != jm
                ):
                    continue
            else:
                raise ValueError(f"unknown adjacency test {adjacency!r}")
            vp, vm = vals[jp], vals[jm]
            r = canonical_ray(
                [vp * a - vm * b for a, b in zip(pair.rays[jm], pair.rays[jp])]
            )
            new[r] = common | bit
    for r, m in new.items():
        rays.append(r)
        masks.append(m)
    if stats is not None:
        stats.append(StepStats(len(plus), len(zero), len(minus), len(new)))
    return DDPair(pair.rows + [h], rays, masks, d)


def _violations(pair: DDPair, h: Row) -> int:
    return sum(1 for r in pair.rays if dot(h, r) < 0)


def run_dd(
    pair: DDPair,
    rows: Sequence[Sequence],
    order: str | Sequence[int] = "fewest-violations",
    adjacency: str = "rank",
    stats: list | None = None,
) -> DDPair:
    """Insert ``rows`` into ``pair``.

    ``order`` is ``"fewest-violations"`` (greedy: the remaining row that cuts
    the fewest current rays goes next), ``"given"``, or an explicit
    permutation of ``range(len(rows))``.
    """
    pending = [integer_row(r) for r in rows]
    if order == "given":
        seq = list(range(len(pending)))
    elif order == "fewest-violations":
        seq = None
    else:
        seq = list(order)
        if sorted(seq) != list(range(len(pending))):
            raise ValueError("order must be a permutation of the pending rows")
    step = 0
    remaining = list(range(len(pending)))
    while remaining:
        if seq is None:
            i = min(remaining, key=lambda k: (_violations(pair, pending[k]), k))
        else:
            i = seq[step]
        remaining.remove(i)
        pair = dd_step(pair, pending[i], adjacency, stats)
        step += 1
        log.debug("dd step %d: %d rays", step, len(pair.rays))
    return pair


def enumerate_vertices(
    p: HPoly,
    order: str | Sequence[int] = "fewest-violations",
    initial: DDPair | None = None,
    adjacency: str = "rank",
    seed: int | None = None,
    stats: list | None = None,
) -> VRep:
    """Vertices of a bounded full-dimensional polytope, as rays with x0 > 0.

    Without ``initial`` the DD method starts from a nonsingular subsystem
    (the homogenizing row ``x0 >= 0`` is appended).  With ``initial`` (a DD
    pair whose rows are the first rows of ``p``) only the remaining rows of
    ``p`` are inserted.  ``seed`` shuffles the insertion order.
    """
    rows = list(p.rows)
    if initial is None:
        e0 = (1,) + (0,) * (p.dim - 1)
        gen = rows + [e0]
        pair, used = initial_pair(gen)
        pending = [gen[i] for i in range(len(gen)) if i not in set(used)]
    else:
        k = len(initial.rows)
        if [integer_row(r) for r in rows[:k]] != list(initial.rows):
            raise ValueError("initial pair rows must be a prefix of the polytope rows")
        pair = initial.copy()
        pending = rows[k:]
    if seed is not None:
        idx = list(range(len(pending)))
        random.Random(seed).shuffle(idx)
        order = idx
    pair = run_dd(pair, pending, order, adjacency, stats)
    for r in pair.rays:
        if r[0] <= 0:
            raise UnboundedError(f"cone has a ray with x0 = {r[0]}: {r}")
    return pair.vrep()
