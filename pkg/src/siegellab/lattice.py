"""Integral lattices and short vector enumeration (Fincke-Pohst).

Pruning uses a floating point Cholesky factor with a little slack; every
vector that survives is re-checked with exact arithmetic, so the output
is exact even though the search tree is steered by floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import ArgumentError, ResourceError
from .exactmat import det, is_integral, is_positive_definite, is_symmetric, mat

DEFAULT_BUDGET = 5_000_000


def quadratic_value(gram, v) -> Fraction:
    n = len(v)
    return sum((gram[i][j] * v[i] * v[j] for i in range(n) for j in range(n)), Fraction(0))


def _ldl_float(gram) -> tuple[np.ndarray, np.ndarray]:
    """q[i, i] and q[i, j] (j > i) with Q(x) = sum_i q_ii (x_i + sum_j q_ij x_j)^2."""
    a = np.array([[float(x) for x in row] for row in gram])
    n = len(a)
    q = a.copy()
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]
    diag = np.diag(q).copy()
    upper = np.triu(q, 1)
    return diag, upper


def short_vectors_gram(gram, max_norm, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """All integer v with v G tv <= max_norm, sorted lexicographically.

    ``gram`` must be positive definite (rational entries allowed).
    ``budget`` caps the number of search-tree nodes.
    """
    gram = mat(gram)
    bound = Fraction(max_norm)
    if bound < 0:
        raise ArgumentError("max_norm must be non-negative")
    n = len(gram)
    diag, upper = _ldl_float(gram)
    slack = 1e-9 * max(1.0, float(bound))
    fbound = float(bound) + slack
    x = [0] * n
    center = [0.0] * n
    partial = [0.0] * (n + 1)  # partial[i]: contribution of coordinates i..n-1
    hi = [0] * n
    out: list[tuple[int, ...]] = []
    nodes = 0

    def set_range(i):
        c = -sum(upper[i, j] * x[j] for j in range(i + 1, n))
        center[i] = c
        rem = fbound - partial[i + 1]
        r = math.sqrt(max(rem, 0.0) / diag[i])
        x[i] = math.ceil(c - r - 1e-12)
        hi[i] = math.floor(c + r + 1e-12)

    i = n - 1
    set_range(i)
    while True:
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            x[i] += 1
            continue
        nodes += 1
        if nodes > budget:
            raise ResourceError(f"short vector enumeration exceeded budget of {budget} nodes")
        d = x[i] - center[i]
        partial[i] = partial[i + 1] + diag[i] * d * d
        if partial[i] > fbound:
            x[i] += 1
            continue
        if i == 0:
            out.append(tuple(x))
            x[0] += 1
            continue
        i -= 1
        set_range(i)

    if is_integral(gram):
        g_int = np.array([[int(v) for v in row] for row in gram], dtype=object)
        vs = np.array(out, dtype=object).reshape(len(out), n)
        norms = np.einsum("ij,jk,ik->i", vs, g_int, vs) if out else []
        keep = [v for v, nv in zip(out, norms) if nv <= bound]
    else:
        keep = [v for v in out if quadratic_value(gram, v) <= bound]
    keep.sort()
    return keep


@dataclass(frozen=True)
class EvenLattice:
    """A positive definite even lattice given by its Gram matrix."""

    name: str
    gram: tuple = field(repr=False)
    unimodular: bool = False

    def __post_init__(self):
        g = mat(self.gram)
        if not (is_symmetric(g) and is_integral(g)):
            raise ArgumentError("Gram matrix must be integral and symmetric")
        if any(g[i][i] % 2 for i in range(len(g))):
            raise ArgumentError("Gram matrix must have an even diagonal")
        if not is_positive_definite(g):
            raise ArgumentError("Gram matrix must be positive definite")
        if self.unimodular and det(g) != 1:
            raise ArgumentError("lattice flagged unimodular but det != 1")
        object.__setattr__(self, "gram", tuple(tuple(int(x) for x in r) for r in g))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def gram_array(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)

    def short_vectors(self, max_norm, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
        return short_vectors_gram(self.gram, max_norm, budget)


E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


def _d16_plus_gram() -> tuple:
    # D16 basis e_i - e_{i+1} (i < 15), e_15 + e_16 with e_1 - e_2 swapped for the glue h = (1/2,...,1/2);
    # h has coefficient 1/2 on e_1 - e_2, so the swap gives a basis of D16+
    n = 16
    rows = [[Fraction(1, 2)] * n]
    for i in range(1, n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        rows.append([Fraction(x) for x in v])
    v = [0] * n
    v[n - 2], v[n - 1] = 1, 1
    rows.append([Fraction(x) for x in v])
    gram = [[sum(a * b for a, b in zip(r, s)) for s in rows] for r in rows]
    return tuple(tuple(int(x) for x in r) for r in gram)


def block_diagonal(*grams) -> tuple:
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    off = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(g)
    return tuple(tuple(r) for r in out)


E8 = EvenLattice("E8", E8_GRAM, unimodular=True)
D16_PLUS = EvenLattice("D16+", _d16_plus_gram(), unimodular=True)
E8_E8 = EvenLattice("E8+E8", block_diagonal(E8_GRAM, E8_GRAM), unimodular=True)

BUILTIN_LATTICES = {lat.name: lat for lat in (E8, D16_PLUS, E8_E8)}


def lattice_by_name(name: str) -> EvenLattice:
    try:
        return BUILTIN_LATTICES[name]
    except KeyError:
        raise ArgumentError(f"unknown lattice {name!r}; choose from {sorted(BUILTIN_LATTICES)}") from None
