"""Measurement updates of Lambda_2 points under a two-qubit Pauli projector.

Operators are stored as tableaux ``y`` with ``A = (1/4) sum_b y_b T_b``;
for a unit-trace operator ``y_II = 1``.  A projector is
``Pi_a^r = (1 + (-1)^r T_a) / 2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import gaussian as gm
from . import pauli as pc
from .lift import DeterministicVertex
from .pauli import IDENTITY, LOCAL, NONLOCAL

Tableau = tuple[Fraction, ...]
ZERO16: Tableau = (Fraction(0),) * 16


@dataclass(frozen=True)
class CncOperator:
    """``A^chi_Gamma = (1/4) sum_{b in Gamma} (-1)^chi(b) T_b``."""

    chi: tuple[tuple[int, int], ...]  # sorted (label, bit); includes (0, 0)

    @classmethod
    def from_dict(cls, chi: dict[int, int]) -> "CncOperator":
        if chi.get(IDENTITY, 0) != 0 or IDENTITY not in chi:
            raise ValueError("chi must contain the identity with value 0")
        return cls(tuple(sorted((a, g % 2) for a, g in chi.items())))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.chi)

    @property
    def tableau(self) -> Tableau:
        y = [Fraction(0)] * 16
        for a, g in self.chi:
            y[a] = Fraction((-1) ** g)
        return tuple(y)

    def is_cnc(self) -> bool:
        return pc.is_outcome_assignment(dict(self.chi))

    def __str__(self) -> str:
        return "{" + ",".join(("-" if g else "") + pc.name(a) for a, g in self.chi) + "}"


@dataclass(frozen=True)
class UpdateResult:
    """``Pi A Pi = sum w_k A_k + remainder``; ``probability = sum w_k``."""

    probability: Fraction
    post: tuple[tuple[Fraction, CncOperator], ...]
    remainder: Tableau = ZERO16
    raw_remainders: tuple[Tableau, ...] = field(default=(), compare=False)
    normalized: bool = False

    @property
    def tableau(self) -> Tableau:
        y = list(self.remainder)
        for w, op in self.post:
            for b, v in enumerate(op.tableau):
                y[b] += w * v
        return tuple(y)

    def normalize(self) -> "UpdateResult":
        if self.probability == 0:
            raise ZeroDivisionError("outcome has probability zero")
        p = self.probability
        return UpdateResult(
            Fraction(1),
            tuple((w / p, op) for w, op in self.post),
            tuple(v / p for v in self.remainder),
            tuple(tuple(v / p for v in r) for r in self.raw_remainders),
            True,
        )


# -- the centralizer of a ------------------------------------------------


@dataclass(frozen=True)
class PerpDecomposition:
    a: int
    c: int
    c1: int
    c2: int

    @property
    def subspaces(self) -> tuple[frozenset[int], ...]:
        return tuple(pc.span(self.a, x) for x in (self.c, self.c1, self.c2))


def perp_decomposition(a: int, t: int = 0) -> PerpDecomposition:
    """Split ``<a>^perp`` as ``<a,c> u <a,c1> u <a,c2>``.

    For nonlocal ``a`` the generator ``c`` is local and ``c1`` is the
    nonlocal one with ``beta(a, c1) = t``.
    """
    if a == IDENTITY or not 0 <= a < 16:
        raise ValueError("a must be a nonidentity label")
    reps = sorted({min(b, pc.add(a, b)) for b in pc.perp(a) if b not in (IDENTITY, a)})
    if a in LOCAL:
        c, c1, c2 = reps
        return PerpDecomposition(a, c, c1, c2)
    (c,) = [b for b in reps if b in LOCAL]
    nl = [b for b in reps if b in NONLOCAL]
    for b in nl:
        assert pc.beta(a, b) == pc.beta(a, pc.add(a, b))
    c1s = [b for b in nl if pc.beta(a, b) == t]
    c2s = [b for b in nl if pc.beta(a, b) != t]
    assert len(c1s) == len(c2s) == 1
    return PerpDecomposition(a, c, c1s[0], c2s[0])


# -- symbolic rules ------------------------------------------------------


def born_probability(x, a: int, r: int) -> Fraction:
    x = tuple(Fraction(v) for v in x)
    if x[0] != 1:
        raise ValueError("expected x_II = 1")
    return (1 + (-1) ** r * x[a]) / 2


def conjugate_tableau(x, a: int, r: int) -> Tableau:
    """Tableau of ``Pi_a^r A Pi_a^r`` for any operator tableau ``x``."""
    s = (-1) ** r
    y = [Fraction(0)] * 16
    for c in pc.perp(a):
        ac = pc.add(a, c)
        y[c] = (Fraction(x[c]) + s * (-1) ** pc.beta(ac, a) * Fraction(x[ac])) / 2
    return tuple(y)


def _split(d: DeterministicVertex, a: int, r: int):
    """Symbolic update of ``D^xi``: (weighted cnc terms, remainder or None)."""
    chi = {b: d.xi(b) for b in pc.perp(a)}
    if a in LOCAL:
        if d.xi(a) == r:
            return [(Fraction(1), CncOperator.from_dict(chi))], None
        return [], None
    pd = perp_decomposition(a, d.parity)
    c2, ac2 = pd.c2, pc.add(a, pd.c2)
    if d.xi(a) == r:
        base = {b: g for b, g in chi.items() if b not in (c2, ac2)}
        terms = []
        for i in (0, 1):
            g = dict(base)
            g[c2] = i
            g[ac2] = (g[a] + i + pc.beta(a, c2)) % 2
            op = CncOperator.from_dict(g)
            assert op.is_cnc()
            terms.append((Fraction(1, 2), op))
        return terms, None
    rem = [Fraction(0)] * 16
    rem[c2] = Fraction((-1) ** d.xi(c2))
    rem[ac2] = Fraction((-1) ** d.xi(ac2))
    return [], tuple(rem)


def update_deterministic(d: DeterministicVertex, a: int, r: int) -> UpdateResult:
    terms, rem = _split(d, a, r)
    prob = sum((w for w, _ in terms), Fraction(0))
    return UpdateResult(prob, tuple(terms), rem or ZERO16, (rem,) if rem else ())


def _combine(terms) -> tuple[tuple[Fraction, CncOperator], ...]:
    acc: dict[CncOperator, Fraction] = {}
    for w, op in terms:
        acc[op] = acc.get(op, Fraction(0)) + w
    return tuple(sorted(((w, op) for op, w in acc.items() if w), key=lambda t: t[1].chi))


def update_mixture(weighted: list[tuple], a: int, r: int, combine: bool = True) -> UpdateResult:
    """Update of ``sum w D^xi``; remainders are paired with split terms when they complete a cnc operator.

    With ``combine`` equal operators are merged into one weighted term.
    """
    weights = [Fraction(w) for w, _ in weighted]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("weights must be nonnegative and sum to 1")
    whole: list[tuple[Fraction, CncOperator]] = []
    splits: list[list] = []  # [weight left, op0, op1, c2 pair]
    remainders: list[tuple[Fraction, Tableau]] = []
    for w, d in zip(weights, (d for _, d in weighted)):
        if w == 0:
            continue
        terms, rem = _split(d, a, r)
        if rem is not None:
            remainders.append((w, rem))
        elif len(terms) == 2:
            pair = frozenset(b for b, g in terms[0][1].chi if dict(terms[1][1].chi)[b] != g)
            splits.append([w, terms[0][1], terms[1][1], pair])
        else:
            whole.extend((w * tw, op) for tw, op in terms)

    leftover = [Fraction(0)] * 16
    for w, rem in remainders:
        pair = frozenset(b for b in range(16) if rem[b])
        for sp in splits:
            if sp[0] < w or sp[3] != pair:
                continue
            g = {b: v for b, v in sp[1].chi if b not in pair}
            g.update({b: 0 if rem[b] > 0 else 1 for b in pair})
            if pc.is_outcome_assignment(g):
                sp[0] -= w
                whole.append((w, CncOperator.from_dict(g)))
                break
        else:
            for b in range(16):
                leftover[b] += w * rem[b]
    for w, op0, op1, _ in splits:
        if w:
            whole.extend([(w / 2, op0), (w / 2, op1)])
    post = _combine(whole) if combine else tuple(whole)
    prob = sum((w for w, _ in post), Fraction(0))
    raw = tuple(tuple(w * v for v in rem) for w, rem in remainders)
    return UpdateResult(prob, post, tuple(leftover), raw)


def hull_decomposition(y, a: int, r: int) -> tuple[tuple[Fraction, CncOperator], ...]:
    """Convex weights over the eight ``A^gamma`` on ``<a>^perp`` with ``gamma(a) = r``.

    Within ``<a>^perp`` only the pairs ``{k, a+k}`` commute, so gamma is
    free on the generators ``c, c1, c2`` and a product distribution fits.
    """
    y = tuple(Fraction(v) for v in y)
    pd = perp_decomposition(a)
    gens = (pd.c, pd.c1, pd.c2)
    if any(abs(y[k]) > 1 for k in gens):
        raise ValueError("point lies outside the cnc hull")
    out = []
    acc = [Fraction(0)] * 16
    for bits in itertools.product((0, 1), repeat=3):
        w = Fraction(1)
        g = {IDENTITY: 0, a: r}
        for k, bit in zip(gens, bits):
            w *= (1 + (-1) ** bit * y[k]) / 2
            g[k] = bit
            g[pc.add(a, k)] = (r + bit + pc.beta(a, k)) % 2
        if w:
            op = CncOperator.from_dict(g)
            out.append((w, op))
            for b, v in enumerate(op.tableau):
                acc[b] += w * v
    if tuple(acc) != y:
        raise ValueError("point is not in the span of cnc operators on <a>^perp")
    return tuple(out)


# -- dense matrix oracle -------------------------------------------------
#
# Integer Gaussian matrices (re, im) keep the oracle exact and fast; the
# common denominator is divided out at the end.


def _int_pauli(b: int):
    m = pc.pauli_matrix(b)
    return (
        tuple(tuple(int(v.re) for v in row) for row in m),
        tuple(tuple(int(v.im) for v in row) for row in m),
    )


_PAULI_INT = tuple(_int_pauli(b) for b in range(16))


def _imul(x, y):
    (ar, ai), (br, bi) = x, y
    rr = [[0] * 4 for _ in range(4)]
    ri = [[0] * 4 for _ in range(4)]
    for i in range(4):
        for k in range(4):
            xr, xi = ar[i][k], ai[i][k]
            if not (xr or xi):
                continue
            for j in range(4):
                yr, yi = br[k][j], bi[k][j]
                rr[i][j] += xr * yr - xi * yi
                ri[i][j] += xr * yi + xi * yr
    return rr, ri


def _common_denominator(x) -> int:
    return math.lcm(*(Fraction(v).denominator for v in x))


def tableau_to_matrix(x) -> gm.Matrix:
    """``(1/4) sum_b x_b T_b`` as an exact Gaussian-rational matrix."""
    rows = [[gm.GQ() for _ in range(4)] for _ in range(4)]
    for b in range(16):
        xb = Fraction(x[b]) / 4
        if xb:
            m = pc.pauli_matrix(b)
            for i in range(4):
                for j in range(4):
                    rows[i][j] = rows[i][j] + m[i][j] * xb
    return tuple(tuple(r) for r in rows)


def matrix_to_tableau(m: gm.Matrix) -> Tableau:
    """``y_b = Tr(M T_b)``; the result must be real."""
    out = []
    for b in range(16):
        t = gm.trace(gm.matmul(m, pc.pauli_matrix(b)))
        if t.im:
            raise ValueError("matrix is not Hermitian")
        out.append(t.re)
    return tuple(out)


def oracle_conjugate(x, a: int, r: int) -> Tableau:
    """``Pi_a^r A Pi_a^r`` computed with exact 4x4 matrices, read back as a tableau."""
    x = tuple(Fraction(v) for v in x)
    if len(x) != 16:
        raise ValueError("expected a 16-entry tableau")
    den = _common_denominator(x)
    mr = [[0] * 4 for _ in range(4)]
    mi = [[0] * 4 for _ in range(4)]
    for b, v in enumerate(x):
        n = int(v * den)
        if n:
            pr, pi = _PAULI_INT[b]
            for i in range(4):
                for j in range(4):
                    mr[i][j] += n * pr[i][j]
                    mi[i][j] += n * pi[i][j]
    s = (-1) ** r
    tr, ti = _PAULI_INT[a]
    proj = (
        [[(i == j) + s * tr[i][j] for j in range(4)] for i in range(4)],
        [[s * ti[i][j] for j in range(4)] for i in range(4)],
    )
    out_r, out_i = _imul(_imul(proj, (mr, mi)), proj)
    # M = m / (4 den), Pi = proj / 2, y_b = Tr(Pi M Pi T_b)
    y = []
    for b in range(16):
        pr, pi = _PAULI_INT[b]
        re = im = 0
        for i in range(4):
            for j in range(4):
                re += out_r[i][j] * pr[j][i] - out_i[i][j] * pi[j][i]
                im += out_r[i][j] * pi[j][i] + out_i[i][j] * pr[j][i]
        if im:
            raise ValueError("operator is not Hermitian")
        y.append(Fraction(re, 16 * den))
    return tuple(y)


def oracle_conjugate_dense(x, a: int, r: int) -> Tableau:
    """Same as :func:`oracle_conjugate` through the generic Gaussian matrix type."""
    p = gm.scale(gm.add(gm.identity(4), gm.scale(pc.pauli_matrix(a), (-1) ** r)), Fraction(1, 2))
    return matrix_to_tableau(gm.matmul(gm.matmul(p, tableau_to_matrix(x)), p))
