"""Exact small complex matrices with Gaussian-rational entries.

Only what the Pauli/Clifford oracles need: construction, products,
Kronecker products, adjoints, scaling and traces.  Matrices are tuples of
row tuples of :class:`GQ`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class GQ:
    """Gaussian rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, complex):
            re, im = re.real, re.imag
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def of(cls, v) -> "GQ":
        return v if isinstance(v, GQ) else cls(v)

    def __add__(self, o):
        o = GQ.of(o)
        return GQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GQ.of(o)
        return GQ(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GQ(-self.re, -self.im)

    def __mul__(self, o):
        o = GQ.of(o)
        return GQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GQ":
        return GQ(self.re, -self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Rational, complex, float)):
            o = GQ(o)
        if not isinstance(o, GQ):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GQ({self.re}, {self.im})"


Matrix = tuple


def matrix(rows) -> Matrix:
    return tuple(tuple(GQ.of(v) for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def zeros(n: int) -> Matrix:
    return matrix([[0] * n for _ in range(n)])


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = GQ()
            for k in range(m):
                x, y = a[i][k], b[k][j]
                if (x.re or x.im) and (y.re or y.im):
                    acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(a: Matrix, c) -> Matrix:
    c = GQ.of(c)
    return tuple(tuple(c * x for x in row) for row in a)


def kron(a: Matrix, b: Matrix) -> Matrix:
    out = []
    for ra in a:
        for rb in b:
            out.append(tuple(x * y for x in ra for y in rb))
    return tuple(out)


def adjoint(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i].conjugate() for j in range(len(a))) for i in range(len(a[0])))


def trace(a: Matrix) -> GQ:
    acc = GQ()
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


PAULI_1Q = (
    matrix([[1, 0], [0, 1]]),
    matrix([[0, 1], [1, 0]]),
    matrix([[0, -1j], [1j, 0]]),
    matrix([[1, 0], [0, -1]]),
)
