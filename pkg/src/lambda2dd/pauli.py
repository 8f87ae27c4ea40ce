"""Two-qubit Pauli algebra over E = Z2^2 x Z2^2.

Labels are integers 0..15 in the canonical tableau order

    II IX IY IZ XI XX XY XZ YI YX YY YZ ZI ZX ZY ZZ

so that ``label = 4 * first + second`` with single-qubit codes I=0, X=1,
Y=2, Z=3.  The symplectic bits of a single-qubit code are (z, x) with
I=(0,0), X=(0,1), Y=(1,1), Z=(1,0).

The sign cocycle ``beta`` and the Clifford actions are read off explicit
4x4 matrix products (see :mod:`lambda2dd.gaussian`) rather than entered by
hand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import gaussian as gm

LETTERS = "IXYZ"
LABELS = tuple(p + q for p in LETTERS for q in LETTERS)
NUM_LABELS = 16
IDENTITY = 0

# single-qubit code -> (z, x) bits
_BITS = {0: (0, 0), 1: (0, 1), 2: (1, 1), 3: (1, 0)}
_CODE = {v: k for k, v in _BITS.items()}

LOCAL = tuple(a for a in range(16) if (a // 4 == 0) != (a % 4 == 0))
NONLOCAL = tuple(a for a in range(16) if a // 4 and a % 4)

# Coordinates of the 10-entry projected tableau: II followed by the
# nine nonlocal labels.
NL_COORDS = (IDENTITY,) + NONLOCAL
NL_INDEX = {a: i for i, a in enumerate(NL_COORDS)}


def label(name: str) -> int:
    """Label index of a two-letter Pauli name such as ``"XY"``."""
    name = name.upper()
    if len(name) != 2 or any(c not in LETTERS for c in name):
        raise ValueError(f"not a two-qubit Pauli label: {name!r}")
    return 4 * LETTERS.index(name[0]) + LETTERS.index(name[1])


def name(a: int) -> str:
    return LABELS[a]


def kind(a: int) -> str:
    """One of ``"zero"``, ``"local"``, ``"nonlocal"``."""
    if a == IDENTITY:
        return "zero"
    return "nonlocal" if a in NONLOCAL else "local"


def add(a: int, b: int) -> int:
    """Group addition in E (componentwise XOR of symplectic bits)."""
    return _ADD[a][b]


def _bits(a: int) -> tuple[int, int, int, int]:
    z1, x1 = _BITS[a // 4]
    z2, x2 = _BITS[a % 4]
    return z1, x1, z2, x2


def _add(a: int, b: int) -> int:
    ba, bb = _bits(a), _bits(b)
    z1, x1, z2, x2 = (u ^ v for u, v in zip(ba, bb))
    return 4 * _CODE[(z1, x1)] + _CODE[(z2, x2)]


def _omega(a: int, b: int) -> int:
    z1, x1, z2, x2 = _bits(a)
    w1, y1, w2, y2 = _bits(b)
    return (z1 * y1 + x1 * w1 + z2 * y2 + x2 * w2) % 2


_ADD = tuple(tuple(_add(a, b) for b in range(16)) for a in range(16))
_OMEGA = tuple(tuple(_omega(a, b) for b in range(16)) for a in range(16))


def omega(a: int, b: int) -> int:
    """Symplectic form: 0 if T_a and T_b commute, 1 if they anticommute."""
    return _OMEGA[a][b]


@lru_cache(maxsize=None)
def pauli_matrix(a: int) -> gm.Matrix:
    """The 4x4 matrix T_a = T_{a1} (x) T_{a2}."""
    return gm.kron(gm.PAULI_1Q[a // 4], gm.PAULI_1Q[a % 4])


def _match_pauli(m: gm.Matrix) -> tuple[int, int]:
    """Return (label, sign) with ``m == sign * T_label``; sign must be real."""
    for b in range(16):
        for s in (1, -1):
            if m == gm.scale(pauli_matrix(b), s):
                return b, s
    raise ValueError("matrix is not a signed Pauli operator")


def _beta_table() -> tuple[tuple[int | None, ...], ...]:
    rows = []
    for a in range(16):
        row: list[int | None] = []
        for b in range(16):
            if _OMEGA[a][b]:
                row.append(None)
                continue
            c, s = _match_pauli(gm.matmul(pauli_matrix(a), pauli_matrix(b)))
            assert c == _ADD[a][b]
            row.append(0 if s == 1 else 1)
        rows.append(tuple(row))
    return tuple(rows)


_BETA = _beta_table()


def beta(a: int, b: int) -> int:
    """Sign exponent in T_a T_b = (-1)^beta(a,b) T_{a+b} for commuting a, b."""
    v = _BETA[a][b]
    if v is None:
        raise ValueError(f"{name(a)} and {name(b)} anticommute")
    return v


def perp(a: int) -> tuple[int, ...]:
    """All b in E with omega(a, b) = 0 (includes 0 and a)."""
    return tuple(b for b in range(16) if not _OMEGA[a][b])


def span(*gens: int) -> frozenset[int]:
    out = {IDENTITY}
    for g in gens:
        out |= {_ADD[g][x] for x in out}
    return frozenset(out)


# -- isotropic subspaces and stabilizer groups ----------------------------


@dataclass(frozen=True)
class IsotropicSubspace:
    elements: frozenset[int]

    @property
    def kind(self) -> str:
        nz = self.elements - {IDENTITY}
        return "nonlocal" if nz <= set(NONLOCAL) else "local"

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements - {IDENTITY}))

    def __str__(self) -> str:
        return "{" + ",".join(name(a) for a in sorted(self.elements)) + "}"


def is_isotropic(elements: Iterable[int]) -> bool:
    el = list(elements)
    return all(_OMEGA[a][b] == 0 for a in el for b in el)


@lru_cache(maxsize=None)
def maximal_isotropics() -> tuple[IsotropicSubspace, ...]:
    """The 15 maximal isotropic subspaces, local ones first."""
    seen = set()
    for a, b in itertools.combinations(range(1, 16), 2):
        if _OMEGA[a][b] == 0:
            seen.add(span(a, b))
    subs = [IsotropicSubspace(s) for s in seen]
    subs.sort(key=lambda s: (s.kind != "local", s.nonzero))
    return tuple(subs)


def nonlocal_isotropics() -> tuple[IsotropicSubspace, ...]:
    return tuple(s for s in maximal_isotropics() if s.kind == "nonlocal")


def is_outcome_assignment(values: dict[int, int]) -> bool:
    """Check gamma(a)+gamma(b) = beta(a,b)+gamma(a+b) on commuting pairs."""
    for a, ga in values.items():
        for b, gb in values.items():
            if _OMEGA[a][b]:
                continue
            c = _ADD[a][b]
            if c in values and (ga + gb + _BETA[a][b] + values[c]) % 2:
                return False
    return True


def outcome_assignments(elements: Iterable[int]) -> list[dict[int, int]]:
    """All outcome assignments on a set of labels (brute force)."""
    el = sorted(elements)
    out = []
    for bits in itertools.product((0, 1), repeat=len(el)):
        g = dict(zip(el, bits))
        if g.get(IDENTITY, 0) == 0 and is_outcome_assignment(g):
            out.append(g)
    return out


@dataclass(frozen=True)
class StabilizerGroup:
    subspace: IsotropicSubspace
    gamma: tuple[tuple[int, int], ...]  # sorted (label, bit) pairs, gamma(0)=0

    @property
    def kind(self) -> str:
        return self.subspace.kind

    def signs(self) -> dict[int, int]:
        return {a: (-1) ** g for a, g in self.gamma}

    def row16(self) -> tuple[int, ...]:
        """Homogenized inequality row: 1 + sum_c (-1)^gamma(c) x_c >= 0."""
        row = [0] * 16
        for a, g in self.gamma:
            row[a] = (-1) ** g
        return tuple(row)

    def __str__(self) -> str:
        parts = []
        for a, g in self.gamma:
            parts.append(("-" if g else "") + name(a))
        return "{" + ",".join(parts) + "}"


@lru_cache(maxsize=None)
def enumerate_stabilizer_groups() -> tuple[StabilizerGroup, ...]:
    groups = []
    for sub in maximal_isotropics():
        for g in outcome_assignments(sub.elements):
            groups.append(StabilizerGroup(sub, tuple(sorted(g.items()))))
    return tuple(groups)


# -- signed permutations and the groups G, Cl2 -----------------------------


@dataclass(frozen=True)
class SignedPermutation:
    """g(T_a) = signs[a] * T_{perm[a]}, with perm[0] = 0 and signs[0] = 1."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.perm) != 16 or sorted(self.perm) != list(range(16)):
            raise ValueError("perm must be a bijection on the 16 labels")
        if self.perm[0] != 0 or self.signs[0] != 1:
            raise ValueError("the identity label must be fixed with sign +1")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls) -> "SignedPermutation":
        return cls(tuple(range(16)), (1,) * 16)

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        # (self @ other)(a) = self(other(a))
        perm = tuple(self.perm[other.perm[a]] for a in range(16))
        signs = tuple(other.signs[a] * self.signs[other.perm[a]] for a in range(16))
        return SignedPermutation(perm, signs)

    def inverse(self) -> "SignedPermutation":
        perm = [0] * 16
        signs = [1] * 16
        for a in range(16):
            perm[self.perm[a]] = a
            signs[self.perm[a]] = self.signs[a]
        return SignedPermutation(tuple(perm), tuple(signs))

    def preserves_omega(self) -> bool:
        p = self.perm
        return all(
            _OMEGA[p[a]][p[b]] == _OMEGA[a][b] for a in range(16) for b in range(16)
        )

    def key(self) -> tuple[int, ...]:
        return tuple(s * (p + 1) for p, s in zip(self.perm, self.signs))


def clifford_action(u: gm.Matrix) -> SignedPermutation:
    """Signed permutation induced by conjugation T -> U T U^dagger / k.

    ``u`` may be an unnormalized multiple of a unitary, U U^dagger = k I.
    """
    udag = gm.adjoint(u)
    k = gm.matmul(u, udag)[0][0]
    if k.im or k.re <= 0:
        raise ValueError("u is not a positive multiple of a unitary")
    perm, signs = [], []
    for a in range(16):
        m = gm.matmul(gm.matmul(u, pauli_matrix(a)), udag)
        b, s = _match_pauli(gm.scale(m, 1 / k.re))
        perm.append(b)
        signs.append(s)
    return SignedPermutation(tuple(perm), tuple(signs))


def _one_qubit_gates() -> dict[str, gm.Matrix]:
    h = gm.matrix([[1, 1], [1, -1]])
    s = gm.matrix([[1, 0], [0, 1j]])
    eye = gm.identity(2)
    return {
        "H1": gm.kron(h, eye),
        "H2": gm.kron(eye, h),
        "S1": gm.kron(s, eye),
        "S2": gm.kron(eye, s),
    }


SWAP = gm.matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
CZ = gm.matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])


@lru_cache(maxsize=None)
def local_clifford_generators(with_swap: bool = True) -> tuple[SignedPermutation, ...]:
    gens = [clifford_action(u) for u in _one_qubit_gates().values()]
    if with_swap:
        gens.append(clifford_action(SWAP))
    return tuple(gens)


@lru_cache(maxsize=None)
def clifford2_generators() -> tuple[SignedPermutation, ...]:
    return local_clifford_generators(False) + (clifford_action(CZ),)


class Group:
    """A finite group of signed permutations closed under composition."""

    def __init__(self, elements: Sequence[SignedPermutation]):
        self.elements = tuple(elements)
        self._index = {g.key(): i for i, g in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: SignedPermutation) -> bool:
        return g.key() in self._index

    def index(self, g: SignedPermutation) -> int:
        return self._index[g.key()]

    def compose(self, i: int, j: int) -> int:
        return self._index[(self.elements[i] @ self.elements[j]).key()]

    def table(self) -> list[list[int]]:
        """Full composition table; only sensible for small groups."""
        n = len(self)
        return [[self.compose(i, j) for j in range(n)] for i in range(n)]


def group_generate(generators: Iterable[SignedPermutation]) -> Group:
    """Closure of ``generators`` under composition (breadth first)."""
    gens = list(generators)
    for g in gens:
        if not g.preserves_omega():
            raise ValueError("generator does not preserve the symplectic form")
    e = SignedPermutation.identity()
    elements = [e]
    seen = {e.key()}
    frontier = [e]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = g @ h
                key = k.key()
                if key not in seen:
                    seen.add(key)
                    elements.append(k)
                    nxt.append(k)
        frontier = nxt
    return Group(elements)


@lru_cache(maxsize=None)
def group_g() -> Group:
    """Local Cliffords on each qubit together with SWAP (order 1152)."""
    return group_generate(local_clifford_generators(True))


@lru_cache(maxsize=None)
def group_cl2() -> Group:
    """Two-qubit Clifford group modulo phases (order 11520)."""
    return group_generate(clifford2_generators())


def apply_action(g: SignedPermutation, x: Sequence) -> tuple:
    """Act on a 16-entry tableau, or on a 10-entry nonlocal tableau.

    The result satisfies ``y[perm[a]] = signs[a] * x[a]``; the same formula
    transforms inequality rows, since signed permutations are orthogonal.
    """
    n = len(x)
    if n == 16:
        y = [None] * 16
        for a in range(16):
            y[g.perm[a]] = g.signs[a] * x[a]
        return tuple(y)
    if n == 10:
        y = [None] * 10
        for i, a in enumerate(NL_COORDS):
            b = g.perm[a]
            if b not in NL_INDEX:
                raise ValueError("action does not preserve the nonlocal coordinates")
            y[NL_INDEX[b]] = g.signs[a] * x[i]
        return tuple(y)
    raise ValueError(f"tableau must have 16 or 10 entries, got {n}")


def coordinate_maps(group: Group, dim: int) -> list[tuple[tuple[int, int], ...]]:
    """Per element, a tuple of (source index, sign) for each target index."""
    maps = []
    coords = range(16) if dim == 16 else NL_COORDS
    pos = {a: i for i, a in enumerate(coords)}
    for g in group:
        src = [None] * dim
        for i, a in enumerate(coords):
            src[pos[g.perm[a]]] = (i, g.signs[a])
        maps.append(tuple(src))
    return maps


def orbit(group: Group, x: Sequence, maps=None) -> set[tuple]:
    maps = maps or coordinate_maps(group, len(x))
    return {tuple(s * x[i] for i, s in m) for m in maps}
