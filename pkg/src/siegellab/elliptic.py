"""Integer q-expansions of a few elliptic modular forms and their genus-1 embedding."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy

from .errors import ArgumentError
from .expansion import FourierExpansion


def _mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def delta_qexp(n: int) -> list[int]:
    """tau(0..n) from q prod (1 - q^m)^24."""
    if n < 0:
        raise ArgumentError("n must be non-negative")
    prod = np.zeros(n + 1, dtype=object)
    prod[0] = 1
    for m in range(1, n + 1):
        for _ in range(24):
            prod[m:] = prod[m:] - prod[:-m]
    return [0] + [int(x) for x in prod[:n]]


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def eisenstein_qexp(k: int, n: int) -> list[Fraction]:
    """E_k = 1 - (2k / B_k) sum sigma_{k-1}(m) q^m for even k >= 4."""
    if k < 4 or k % 2:
        raise ArgumentError("eisenstein_qexp needs even k >= 4")
    b = sympy.bernoulli(k)
    c = Fraction(-2 * k) / Fraction(int(b.p), int(b.q))
    return [Fraction(1)] + [c * sigma(k - 1, m) for m in range(1, n + 1)]


def e6_delta_qexp(n: int) -> list[int]:
    """The weight-18 cusp eigenform E_6 * Delta (S_18 is one-dimensional)."""
    e6 = [int(x) for x in eisenstein_qexp(6, n)]
    return _mul_trunc(e6, delta_qexp(n), n)


def qexp_to_expansion(coeffs, weight, bound: int | None = None) -> FourierExpansion:
    """Genus-1 expansion with key (2n,) carrying the q^n coefficient."""
    n = len(coeffs) - 1
    if bound is None:
        bound = 2 * n
    if bound > 2 * n + 1:
        raise ArgumentError("bound exceeds the supplied q-expansion")
    return FourierExpansion(1, weight, bound, {(2 * m,): c for m, c in enumerate(coeffs) if 2 * m <= bound})


def delta_expansion(n: int) -> FourierExpansion:
    return qexp_to_expansion(delta_qexp(n), 12)


def expansion_to_qexp(f: FourierExpansion) -> list[Fraction]:
    if f.genus != 1 or f.scale != 1:
        raise ArgumentError("genus-1 expansion on the half-integral grid expected")
    n = int(f.bound) // 2
    return [f.coeffs.get((2 * m,), Fraction(0)) for m in range(n + 1)]
