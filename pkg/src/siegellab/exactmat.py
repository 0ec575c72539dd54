"""Exact linear algebra over Q and Q(i), symplectic similitudes and the
action of GSp(g, Q)+ on the Siegel upper half space.

Matrices are tuples of tuples.  Entries are ``int`` or ``Fraction``;
floats are rejected so that every comparison stays exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import ArgumentError, DimensionError, InconsistencyError

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def to_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise ArgumentError("booleans are not matrix entries")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x)
    raise ArgumentError(f"exact rational expected, got {type(x).__name__} {x!r}")


def mat(rows: Iterable[Iterable]) -> Matrix:
    """Build an exact matrix, validating that it is rectangular."""
    out = tuple(tuple(to_fraction(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise DimensionError("ragged matrix")
    return out


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise DimensionError(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt) for r in a)


def block(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    top = tuple(ra + rb for ra, rb in zip(a, b))
    bottom = tuple(rc + rd for rc, rd in zip(c, d))
    return top + bottom


def split_blocks(m: Matrix) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    n = len(m)
    if n % 2 or shape(m)[1] != n:
        raise DimensionError("square matrix of even size expected")
    g = n // 2
    a = tuple(r[:g] for r in m[:g])
    b = tuple(r[g:] for r in m[:g])
    c = tuple(r[:g] for r in m[g:])
    d = tuple(r[g:] for r in m[g:])
    return a, b, c, d


def is_symmetric(a: Matrix) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def is_integral(a: Matrix) -> bool:
    return all(Fraction(x).denominator == 1 for r in a for x in r)


def _exact(x):
    # QI entries pass through; everything else becomes a Fraction
    return x if isinstance(x, (Fraction, QI)) else to_fraction(x)


def det(a) -> Fraction | "QI":
    """Determinant by fraction-exact Gaussian elimination (works over Q(i) too)."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    m = [[_exact(x) for x in r] for r in a]
    result = m[0][0] * 0 + 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return m[0][0] * 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        pv = m[col][col]
        result = result * pv
        for r in range(col + 1, n):
            f = m[r][col] / pv
            if f != 0:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return result


def inverse(a) -> Matrix:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` when singular."""
    n = len(a)
    a = [[_exact(x) for x in r] for r in a]
    zero = a[0][0] * 0
    one = zero + 1
    m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(r[n:]) for r in m)


def J(g: int) -> Matrix:
    """The standard symplectic form (0 I; -I 0)."""
    i = identity(g)
    return block(zeros(g), i, scale(-1, i), zeros(g))


# -- Gaussian rationals -----------------------------------------------------


@dataclass(frozen=True)
class QI:
    """An element re + i*im of Q(i) with exact rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @staticmethod
    def lift(x) -> "QI":
        return x if isinstance(x, QI) else QI(to_fraction(x))

    def __add__(self, o):
        o = QI.lift(o)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-QI.lift(o))

    def __rsub__(self, o):
        return QI.lift(o) - self

    def __mul__(self, o):
        o = QI.lift(o)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        o = QI.lift(o)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        q = self * o.conj()
        return QI(q.re / n, q.im / n)

    def __rtruediv__(self, o):
        return QI.lift(o) / self

    def __eq__(self, o):
        try:
            o = QI.lift(o)
        except ArgumentError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QI({self.re}, {self.im})"


def complex_matrix(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(QI(a, b) for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def real_part(z: Matrix) -> Matrix:
    return tuple(tuple(e.re for e in r) for r in z)


def imag_part(z: Matrix) -> Matrix:
    return tuple(tuple(e.im for e in r) for r in z)


def _cmatmul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(r, c)), QI(0)) for c in bt) for r in a)


# -- domain types -----------------------------------------------------------


@dataclass(frozen=True)
class RationalSymMat:
    entries: Matrix

    def __post_init__(self):
        e = mat(self.entries)
        if shape(e)[0] != shape(e)[1]:
            raise DimensionError("symmetric matrix must be square")
        if not is_symmetric(e):
            raise ArgumentError("matrix is not symmetric")
        object.__setattr__(self, "entries", e)

    @property
    def g(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class EvenGramMat:
    """An integral symmetric matrix with even diagonal (the matrix 2T)."""

    entries: Matrix

    def __post_init__(self):
        e = mat(self.entries)
        if not (is_symmetric(e) and is_integral(e)):
            raise ArgumentError("even Gram matrix must be integral and symmetric")
        if any(e[i][i] % 2 for i in range(len(e))):
            raise ArgumentError("even Gram matrix needs an even diagonal")
        object.__setattr__(self, "entries", tuple(tuple(int(x) for x in r) for r in e))

    @property
    def g(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SiegelPoint:
    """A point X + iY of H_g with exact rational X, Y and Y > 0."""

    X: Matrix
    Y: Matrix

    def __post_init__(self):
        x = RationalSymMat(self.X).entries
        y = RationalSymMat(self.Y).entries
        if len(x) != len(y):
            raise DimensionError("X and Y differ in size")
        if not is_positive_definite(y):
            raise ArgumentError("imaginary part is not positive definite")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def g(self) -> int:
        return len(self.X)

    @classmethod
    def from_complex(cls, z: Matrix) -> "SiegelPoint":
        return cls(real_part(z), imag_part(z))

    def as_complex(self) -> Matrix:
        return complex_matrix(self.X, self.Y)

    def to_numpy(self):
        import numpy as np

        return np.array(self.X, dtype=float) + 1j * np.array(self.Y, dtype=float)


@dataclass(frozen=True)
class SimilitudeMatrix:
    M: Matrix
    l: Fraction

    def __post_init__(self):
        m = mat(self.M)
        factor = similitude_factor(m)
        if factor is None or factor != to_fraction(self.l):
            raise ArgumentError("matrix is not a symplectic similitude with the stated factor")
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "l", factor)

    @classmethod
    def of(cls, m) -> "SimilitudeMatrix":
        m = mat(m)
        factor = similitude_factor(m)
        if factor is None:
            raise ArgumentError("matrix is not a symplectic similitude")
        return cls(m, factor)

    @property
    def g(self) -> int:
        return len(self.M) // 2

    def __matmul__(self, other: "SimilitudeMatrix") -> "SimilitudeMatrix":
        return SimilitudeMatrix(matmul(self.M, other.M), self.l * other.l)


# -- operations -------------------------------------------------------------


def similitude_factor(m) -> Fraction | None:
    """Return l with tM J M = l J, or None when no such scalar exists."""
    m = mat(m)
    n = len(m)
    if n == 0 or n % 2 or shape(m)[1] != n:
        raise DimensionError("similitude test needs a square matrix of even size")
    g = n // 2
    jg = J(g)
    lhs = matmul(matmul(transpose(m), jg), m)
    l = lhs[0][g]
    if l == 0:
        return None
    return l if lhs == scale(l, jg) else None


def is_integral_symplectic(m) -> bool:
    m = mat(m)
    return is_integral(m) and similitude_factor(m) == 1


def is_positive_definite(s) -> bool:
    """Leading principal minors test, exact."""
    s = mat(s)
    return all(det(tuple(r[:k] for r in s[:k])) > 0 for k in range(1, len(s) + 1))


def act(m: SimilitudeMatrix | Matrix, omega: SiegelPoint) -> SiegelPoint:
    """(A Omega + B)(C Omega + D)^-1, exactly."""
    if not isinstance(m, SimilitudeMatrix):
        m = SimilitudeMatrix.of(m)
    if m.l <= 0:
        raise ArgumentError("only similitudes with positive factor act on H_g")
    if m.g != omega.g:
        raise DimensionError("matrix and point have different genus")
    a, b, c, d = split_blocks(m.M)
    z = omega.as_complex()
    num = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(_cmatmul(a, z), b))
    den = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(_cmatmul(c, z), d))
    try:
        den_inv = inverse(den)
    except ZeroDivisionError as exc:
        raise InconsistencyError("C*Omega + D is singular; input is not a similitude") from exc
    w = _cmatmul(num, den_inv)
    # symmetrise away nothing: the result is exactly symmetric
    return SiegelPoint.from_complex(w)


def gl_transform(y, u) -> Matrix:
    """U Y tU for unimodular integral U."""
    y = RationalSymMat(y).entries
    u = mat(u)
    if not is_integral(u) or abs(det(u)) != 1:
        raise ArgumentError("transform must be integral with determinant +-1")
    return matmul(matmul(u, y), transpose(u))


def gl_embed(u) -> Matrix:
    """diag(U, tU^-1) in Sp(g, Z)."""
    u = mat(u)
    g = len(u)
    return block(u, zeros(g), zeros(g), transpose(inverse(u)))


def translation(b) -> Matrix:
    b = mat(b)
    g = len(b)
    return block(identity(g), b, zeros(g), identity(g))


def cmat_det(z) -> QI:
    return det(z)


def random_unimodular(g: int, rng: random.Random, steps: int = 4) -> Matrix:
    u = [[int(i == j) for j in range(g)] for i in range(g)]
    if g == 1:
        return mat([[rng.choice((1, -1))]])
    for _ in range(steps):
        i, j = rng.sample(range(g), 2)
        c = rng.choice((-1, 1))
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    return mat(u)


def random_symplectic(g: int, rng: random.Random, length: int = 6) -> Matrix:
    """A word in J_g, translations (|b| <= 2) and GL embeddings."""
    m = identity(2 * g)
    for _ in range(length):
        kind = rng.randrange(3)
        if kind == 0:
            step = J(g)
        elif kind == 1:
            b = [[0] * g for _ in range(g)]
            for i in range(g):
                for j in range(i, g):
                    b[i][j] = b[j][i] = rng.randint(-2, 2)
            step = translation(b)
        else:
            step = gl_embed(random_unimodular(g, rng))
        m = matmul(step, m)
    return m


# -- JSON -------------------------------------------------------------------


def fraction_str(x) -> str:
    x = to_fraction(x)
    return str(x)


def matrix_to_json(m) -> dict:
    m = mat(m)
    return {"g": len(m), "rows": [[fraction_str(x) for x in r] for r in m]}


def matrix_from_json(obj) -> Matrix:
    """Inverse of matrix_to_json; a bare list of rows is accepted too."""
    if isinstance(obj, list):
        return mat(obj)
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ArgumentError("matrix JSON needs 'rows'")
    rows = mat(obj["rows"])
    if len(rows) != obj.get("g", len(rows)):
        raise DimensionError("'g' does not match the number of rows")
    return rows


def as_int_matrix(m: Sequence[Sequence]) -> tuple[tuple[int, ...], ...]:
    m = mat(m)
    if not is_integral(m):
        raise ArgumentError("integral matrix expected")
    return tuple(tuple(int(x) for x in r) for r in m)
