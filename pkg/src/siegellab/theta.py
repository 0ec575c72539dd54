"""Theta series of even unimodular lattices, theta constants and products of them.

Representation numbers A(S, T) are counted by grouping short vectors by
norm and histogramming their inner products with ``numpy``.  Theta
constants are expanded on the scale-4 exponent grid; products such as
chi_10 are collapsed back to the half-integral grid only after checking
that every surviving key lies on it.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ArgumentError, InconsistencyError, ResourceError, UnsupportedError
from .expansion import (
    FourierExpansion,
    Key,
    is_psd_key,
    key_det,
    key_size,
    key_trace,
    matrix_from_key,
    multiply,
)
from .lattice import (
    BUILTIN_LATTICES,
    D16_PLUS,
    DEFAULT_BUDGET,
    E8,
    E8_E8,
    EvenLattice,
    lattice_by_name,
    short_vectors_gram,
)

__all__ = [
    "BUILTIN_LATTICES",
    "D16_PLUS",
    "E8",
    "E8_E8",
    "EvenLattice",
    "ThetaCharacteristic",
    "chi10",
    "cusp_product_g3",
    "eisenstein_witt",
    "even_characteristics",
    "is_cuspidal_support",
    "is_singular_support",
    "lattice_by_name",
    "rep_number",
    "short_vectors",
    "siegel_phi",
    "theta_constant",
    "theta_expansion",
]


def short_vectors(lat: EvenLattice, max_norm, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    return lat.short_vectors(max_norm, budget)


@lru_cache(maxsize=16)
def _vectors_by_norm(lat: EvenLattice, max_norm: int, budget: int) -> dict[int, np.ndarray]:
    vecs = lat.short_vectors(max_norm, budget)
    arr = np.array(vecs, dtype=np.int64).reshape(len(vecs), lat.rank)
    norms = np.einsum("ij,jk,ik->i", arr, lat.gram_array, arr)
    return {int(n): arr[norms == n] for n in np.unique(norms)}


def _inner_histogram(lat: EvenLattice, va: np.ndarray, vb: np.ndarray) -> dict[int, int]:
    if len(va) == 0 or len(vb) == 0:
        return {}
    out: dict[int, int] = defaultdict(int)
    gb = vb @ lat.gram_array.T
    # chunk to keep the inner-product block modest
    step = max(1, 2_000_000 // max(1, len(vb)))
    for i in range(0, len(va), step):
        ip = va[i : i + step] @ gb.T
        vals, counts = np.unique(ip, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            out[v] += c
    return dict(out)


def rep_number(lat: EvenLattice, t, allow_n3: bool = False, budget: int = DEFAULT_BUDGET) -> int:
    """A(S, T) = #{G in Z^(r, n) : tG S G = T} for the even matrix T (= 2T in half-integral terms)."""
    t = [[int(x) for x in row] for row in t]
    n = len(t)
    if n == 0:
        return 1
    if n > 3 or (n == 3 and not allow_n3):
        raise UnsupportedError("rep_number supports n <= 2 (n = 3 with allow_n3)")
    key = tuple(t[i][j] for i in range(n) for j in range(i, n))
    if any(t[i][j] != t[j][i] for i in range(n) for j in range(n)) or not is_psd_key(key, n):
        raise ArgumentError("T must be symmetric positive semidefinite")
    if any(t[i][i] % 2 for i in range(n)):
        return 0
    top = max(t[i][i] for i in range(n))
    groups = _vectors_by_norm(lat, top, budget)
    empty = np.zeros((0, lat.rank), dtype=np.int64)
    cls = [groups.get(t[i][i], empty) for i in range(n)]
    if n == 1:
        return len(cls[0])
    if n == 2:
        return _inner_histogram(lat, cls[0], cls[1]).get(t[0][1], 0)
    g = lat.gram_array
    m12 = (cls[0] @ g @ cls[1].T) == t[0][1]
    m13 = ((cls[0] @ g @ cls[2].T) == t[0][2]).astype(np.int64)
    m23 = ((cls[1] @ g @ cls[2].T) == t[1][2]).astype(np.int64)
    if m13.size and m23.size and m12.size:
        return int(((m13 @ m23.T) * m12).sum())
    return 0


def theta_expansion(lat: EvenLattice, genus: int, bound: int, budget: int = DEFAULT_BUDGET) -> FourierExpansion:
    """theta_S^(g) truncated at trace(2T) <= bound; the coefficient at 2T is A(S, 2T)."""
    if not lat.unimodular:
        raise ArgumentError("theta_expansion expects an even unimodular lattice")
    if genus not in (0, 1, 2):
        raise UnsupportedError("theta_expansion supports genus <= 2")
    bound = int(bound)
    if bound < 0:
        raise ArgumentError("bound must be non-negative")
    weight = Fraction(lat.rank, 2)
    if genus == 0:
        return FourierExpansion(0, weight, bound, {(): 1})
    groups = _vectors_by_norm(lat, bound, budget)
    coeffs: dict[Key, int] = {}
    if genus == 1:
        for n, vs in groups.items():
            coeffs[(n,)] = len(vs)
        return FourierExpansion(1, weight, bound, coeffs)
    for a in range(0, bound + 1, 2):
        for c in range(0, bound - a + 1, 2):
            if a not in groups or c not in groups:
                continue
            for b, cnt in _inner_histogram(lat, groups[a], groups[c]).items():
                coeffs[(a, b, c)] = cnt
    return FourierExpansion(2, weight, bound, coeffs)


# -- theta constants ----------------------------------------------------------


@dataclass(frozen=True)
class ThetaCharacteristic:
    eps1: tuple[int, ...]
    eps2: tuple[int, ...]

    def __post_init__(self):
        e1 = tuple(int(x) for x in self.eps1)
        e2 = tuple(int(x) for x in self.eps2)
        if len(e1) != len(e2) or any(x not in (0, 1) for x in e1 + e2):
            raise ArgumentError("characteristic entries must be 0/1 vectors of equal length")
        object.__setattr__(self, "eps1", e1)
        object.__setattr__(self, "eps2", e2)

    @property
    def g(self) -> int:
        return len(self.eps1)

    @property
    def parity(self) -> int:
        return sum(a * b for a, b in zip(self.eps1, self.eps2)) % 2

    @property
    def is_even(self) -> bool:
        return self.parity == 0


def all_characteristics(g: int) -> list[ThetaCharacteristic]:
    cube = list(itertools.product((0, 1), repeat=g))
    return [ThetaCharacteristic(a, b) for a in cube for b in cube]


def even_characteristics(g: int) -> list[ThetaCharacteristic]:
    return [e for e in all_characteristics(g) if e.is_even]


_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def theta_constant(eps: ThetaCharacteristic, bound) -> FourierExpansion:
    """theta[eps] on the scale-4 grid: key w tw with w = 2m + eps', phase i^(w . eps'').

    Truncation is trace(2T) <= bound, i.e. |w|^2 <= 4 * bound.
    """
    g = eps.g
    if g > 3:
        raise UnsupportedError("theta constants are provided for g <= 3")
    bound = Fraction(bound)
    limit = int(4 * bound)
    weight = Fraction(1, 2)
    if not eps.is_even:
        return FourierExpansion(g, weight, bound, {}, 4)
    re: dict[Key, int] = defaultdict(int)
    im: dict[Key, int] = defaultdict(int)
    r = int(np.sqrt(limit)) + 2
    for m in itertools.product(range(-r, r + 1), repeat=g):
        w = [2 * mi + e for mi, e in zip(m, eps.eps1)]
        if sum(x * x for x in w) > limit:
            continue
        key = tuple(w[i] * w[j] for i in range(g) for j in range(i, g))
        pr, pi = _I_POWERS[sum(x * e for x, e in zip(w, eps.eps2)) % 4]
        re[key] += pr
        im[key] += pi
    if any(im.values()):
        raise InconsistencyError("even theta constant produced a non-real coefficient")
    return FourierExpansion(g, weight, bound, dict(re), 4)


def _theta_product(chars, bound, squared: bool) -> FourierExpansion:
    factors = []
    for e in chars:
        th = theta_constant(e, bound)
        factors.extend([th, th] if squared else [th])
    if factors[0].genus == 2:
        return _dense_product_g2(factors, Fraction(bound))
    return multiply(factors, bound)


def _dense_product_g2(factors: list[FourierExpansion], bound: Fraction) -> FourierExpansion:
    """Product of genus-2 expansions on a dense int64 grid (overflow guarded)."""
    s = factors[0].scale
    limit = int(bound * s)
    half = limit // 2
    shape = (limit + 1, 2 * half + 1, limit + 1)
    a_idx, _, c_idx = np.indices(shape)
    inside = (a_idx + c_idx) <= limit
    cur = np.zeros(shape, dtype=np.int64)
    cur[0, half, 0] = 1
    use_object = False
    for f in factors:
        if any(v.denominator != 1 for v in f.coeffs.values()):
            raise ArgumentError("dense product expects integral coefficients")
        l1 = sum(abs(int(v)) for v in f.coeffs.values())
        if not use_object and int(np.abs(cur).max()) * l1 >= 2**62:
            cur = cur.astype(object)
            use_object = True
        nxt = np.zeros(shape, dtype=cur.dtype)
        for (da, db, dc), v in f.coeffs.items():
            if da + dc > limit or abs(db) > half:
                continue
            v = int(v)
            src = cur[: limit + 1 - da, max(0, -db) : 2 * half + 1 - max(0, db), : limit + 1 - dc]
            nxt[da:, max(0, db) : 2 * half + 1 - max(0, -db), dc:] += v * src
        nxt[~inside] = 0
        cur = nxt
    coeffs = {}
    nz = np.argwhere(cur != 0)
    for a, bi, c in nz.tolist():
        coeffs[(a, bi - half, c)] = int(cur[a, bi, c])
    weight = sum((f.weight for f in factors), Fraction(0))
    return FourierExpansion(2, weight, bound, coeffs, s)


CHI10_CONSTANT = Fraction(-1, 2**14)
# computed reference value: the coefficient of chi10 at 2T = (2 1; 1 2)
CHI10_MIN_COEFF = Fraction(-1, 4)


def chi10(bound) -> FourierExpansion:
    """chi_10 = -2^-14 prod_{eps even} theta[eps]^2, collapsed to the half-integral grid.

    With this constant the coefficients lie in Z/4; see ``CHI10_MIN_COEFF``.
    """
    bound = int(bound)
    if bound < 2:
        raise ArgumentError("chi10 needs bound >= 2")
    prod = _theta_product(even_characteristics(2), bound, squared=True)
    for k, v in prod.coeffs.items():
        # the raw product is divisible by 2^12, so chi_10 has coefficients in Z/4
        if v.numerator % 2**12:
            raise InconsistencyError(f"theta product coefficient at {k} is not divisible by 2^12: {v}")
    prod = prod.scaled(CHI10_CONSTANT).rescaled(1)
    return prod.with_weight(10)


def cusp_product_g3(bound=12) -> FourierExpansion:
    """prod over the 36 even theta constants of genus 3, weight 18.

    The smallest index carried by the product has trace(2T) = 12, so any
    bound below 12 returns the zero expansion.
    """
    bound = int(bound)
    if bound > 12:
        raise ResourceError("cusp_product_g3 is limited to bound <= 12")
    prod = _theta_product(even_characteristics(3), bound, squared=False)
    prod = prod.rescaled(1)
    return prod.with_weight(18)


def eisenstein_witt(k: int = 4, genus: int = 2, bound: int = 4) -> FourierExpansion:
    """G_k as the weighted mean of theta series over the genus of rank 2k lattices.

    Only 2k = 8 is supported, where the genus holds the single class E8.
    """
    if k != 4:
        raise UnsupportedError("eisenstein_witt is implemented for k = 4 only (one-class genus)")
    return theta_expansion(E8, genus, bound)


# -- Siegel operator and support predicates -------------------------------------


def siegel_phi(f: FourierExpansion) -> FourierExpansion:
    """Phi f: keep indices of the shape T1 (+) 0 and drop the last row and column."""
    g = f.genus
    if g < 1:
        raise ArgumentError("siegel_phi needs genus >= 1")
    out = {}
    for k, v in f.coeffs.items():
        m = matrix_from_key(k, g)
        if all(x == 0 for x in m[g - 1]):
            out[tuple(m[i][j] for i in range(g - 1) for j in range(i, g - 1))] = v
    return FourierExpansion(g - 1, f.weight, f.bound, out, f.scale)


def is_cuspidal_support(f: FourierExpansion) -> bool:
    """Truncated statement: every stored nonzero coefficient has a positive definite index."""
    return all(key_det(k, f.genus) > 0 for k in f.coeffs) if f.genus else f.is_zero()


def is_singular_support(f: FourierExpansion) -> bool:
    """Truncated statement: every stored nonzero coefficient has a singular index."""
    return all(key_det(k, f.genus) == 0 for k in f.coeffs) if f.genus else True
