"""Truncated Fourier expansions of Siegel modular forms.

A key is the upper triangle (row-wise) of an integral symmetric matrix G.
With exponent scale s the key stands for the index 2T = G / s, i.e. the
term a(T) e^{2 pi i sigma(T Omega)}.  Scale 1 is the usual half-integral
grid; theta constants live on scale 4.

Truncation is always ``trace(2T) <= bound`` and is carried with the data.
Binary operations intersect bounds instead of guessing beyond them.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ArgumentError, DimensionError, TruncationError
from .exactmat import fraction_str, to_fraction

Key = tuple  # tuple[int, ...], upper triangle of G


def key_size(g: int) -> int:
    return g * (g + 1) // 2


def key_from_matrix(m) -> Key:
    g = len(m)
    return tuple(int(m[i][j]) for i in range(g) for j in range(i, g))


def matrix_from_key(key: Key, g: int) -> list[list[int]]:
    if len(key) != key_size(g):
        raise DimensionError(f"key {key} does not describe a {g}x{g} matrix")
    m = [[0] * g for _ in range(g)]
    it = iter(key)
    for i in range(g):
        for j in range(i, g):
            m[i][j] = m[j][i] = next(it)
    return m


def key_trace(key: Key, g: int) -> int:
    out, pos = 0, 0
    for i in range(g):
        out += key[pos]
        pos += g - i
    return out


def key_det(key: Key, g: int) -> int:
    m = matrix_from_key(key, g)
    if g == 0:
        return 1
    if g == 1:
        return m[0][0]
    if g == 2:
        return m[0][0] * m[1][1] - m[0][1] ** 2
    if g == 3:
        a = m
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )
    from .exactmat import det

    return int(det(m))


def is_psd_key(key: Key, g: int) -> bool:
    """Positive semidefinite test for integral symmetric matrices (all principal minors)."""
    from itertools import combinations

    from .exactmat import det

    m = matrix_from_key(key, g)
    for r in range(1, g + 1):
        for idx in combinations(range(g), r):
            if det([[m[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def sorted_keys(keys: Iterable[Key]) -> list[Key]:
    return sorted(keys)


def psd_keys(g: int, bound: int, even: bool = True) -> list[Key]:
    """PSD keys of size g with trace <= bound (even diagonal when ``even``)."""
    step = 2 if even else 1
    out = []
    if g == 1:
        return [(a,) for a in range(0, bound + 1, step)]
    if g == 2:
        for a in range(0, bound + 1, step):
            for c in range(0, bound - a + 1, step):
                r = math.isqrt(a * c)
                for b in range(-r, r + 1):
                    if b * b <= a * c:
                        out.append((a, b, c))
        return out
    for diag in itertools.product(range(0, bound + 1, step), repeat=g):
        if sum(diag) > bound:
            continue
        offs = [(i, j) for i in range(g) for j in range(i + 1, g)]
        ranges = [range(-math.isqrt(diag[i] * diag[j]), math.isqrt(diag[i] * diag[j]) + 1) for i, j in offs]
        for vals in itertools.product(*ranges):
            m = [[0] * g for _ in range(g)]
            for i in range(g):
                m[i][i] = diag[i]
            for (i, j), v in zip(offs, vals):
                m[i][j] = m[j][i] = v
            key = tuple(m[i][j] for i in range(g) for j in range(i, g))
            if is_psd_key(key, g):
                out.append(key)
    return sorted(out)


# -- GL(2, Z) reduction of binary forms --------------------------------------


def reduce_binary(a: int, b: int, c: int) -> tuple[tuple[int, int, int], int]:
    """Lagrange-reduce the PSD form (a b; b c) to 0 <= 2b <= a <= c.

    Returns the reduced triple and det(U) of the transform used.
    Reduction minimises the trace within the GL(2, Z) class.
    """
    if a < 0 or c < 0 or b * b > a * c:
        raise ArgumentError("binary form is not positive semidefinite")
    sign = 1
    while True:
        if a > c:
            a, c = c, a
            sign = -sign
        if a == 0:
            # PSD forces b == 0 here
            break
        n = -((2 * b + a) // (2 * a))  # n = -round(b / a), ties toward the upper end
        if n:
            c = c + 2 * n * b + n * n * a
            b = b + n * a
            continue
        break
    if b < 0:
        b = -b
        sign = -sign
    return (a, b, c), sign


# -- expansions --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FourierExpansion:
    """Truncated expansion sum a(T) e^{2 pi i sigma(T Omega)} with exact coefficients."""

    genus: int
    weight: Fraction
    bound: Fraction
    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)
    scale: int = 1

    def __post_init__(self):
        if self.genus < 0:
            raise ArgumentError("genus must be non-negative")
        if self.scale < 1:
            raise ArgumentError("scale must be a positive integer")
        object.__setattr__(self, "weight", to_fraction(self.weight))
        object.__setattr__(self, "bound", to_fraction(self.bound))
        size = key_size(self.genus)
        clean = {}
        for k, v in self.coeffs.items():
            k = tuple(int(x) for x in k)
            if len(k) != size:
                raise DimensionError(f"key {k} has the wrong length for genus {self.genus}")
            v = to_fraction(v)
            if v == 0:
                continue
            if Fraction(key_trace(k, self.genus), self.scale) > self.bound:
                raise TruncationError(f"key {k} lies outside the truncation bound {self.bound}")
            clean[k] = v
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # access

    def in_bound(self, key: Key) -> bool:
        return Fraction(key_trace(key, self.genus), self.scale) <= self.bound

    def coeff(self, key) -> Fraction:
        """Coefficient at a stored-grid key; raises outside the truncation bound."""
        key = tuple(int(x) for x in key)
        if not self.in_bound(key):
            need = Fraction(key_trace(key, self.genus), self.scale)
            raise TruncationError(
                f"coefficient at {key} needs trace bound {need}, have {self.bound}",
                required_bound=need,
            )
        return self.coeffs.get(key, Fraction(0))

    def coeff_gl(self, key) -> Fraction:
        """Coefficient at any PSD key, using a(tU T U) = det(U)^k a(T) to reach the bound.

        Needs scale 1, integral weight and genus <= 2.
        """
        key = tuple(int(x) for x in key)
        if self.genus == 0:
            return self.coeff(key)
        if self.scale != 1 or self.weight.denominator != 1:
            raise ArgumentError("GL-reduced lookup needs scale 1 and integral weight")
        if self.genus == 1:
            if key[0] < 0:
                raise ArgumentError("index is not positive semidefinite")
            return self.coeff(key)
        if self.genus != 2:
            raise ArgumentError("GL-reduced lookup is implemented for genus <= 2")
        red, sign = reduce_binary(*key)
        val = self.coeff(red)
        if sign < 0 and self.weight.numerator % 2:
            val = -val
        return val

    def items(self):
        return self.coeffs.items()

    def __eq__(self, other):
        if not isinstance(other, FourierExpansion):
            return NotImplemented
        return (
            self.genus == other.genus
            and self.weight == other.weight
            and self.bound == other.bound
            and self.scale == other.scale
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.genus, self.weight, self.bound, self.scale, tuple(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    # arithmetic

    def truncate(self, bound) -> "FourierExpansion":
        bound = min(to_fraction(bound), self.bound)
        keep = {k: v for k, v in self.coeffs.items() if Fraction(key_trace(k, self.genus), self.scale) <= bound}
        return FourierExpansion(self.genus, self.weight, bound, keep, self.scale)

    def scaled(self, c) -> "FourierExpansion":
        c = to_fraction(c)
        return FourierExpansion(self.genus, self.weight, self.bound, {k: c * v for k, v in self.coeffs.items()}, self.scale)

    def _check_compatible(self, other: "FourierExpansion"):
        if self.genus != other.genus or self.scale != other.scale:
            raise ArgumentError("expansions differ in genus or exponent scale")

    def __add__(self, other: "FourierExpansion") -> "FourierExpansion":
        self._check_compatible(other)
        if self.weight != other.weight:
            raise ArgumentError("cannot add expansions of different weight")
        bound = min(self.bound, other.bound)
        a, b = self.truncate(bound), other.truncate(bound)
        out = dict(a.coeffs)
        for k, v in b.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return FourierExpansion(self.genus, self.weight, bound, out, self.scale)

    def __sub__(self, other: "FourierExpansion") -> "FourierExpansion":
        return self + other.scaled(-1)

    def __mul__(self, other: "FourierExpansion") -> "FourierExpansion":
        return multiply([self, other])

    def with_weight(self, weight) -> "FourierExpansion":
        return FourierExpansion(self.genus, weight, self.bound, self.coeffs, self.scale)

    def rescaled(self, new_scale: int) -> "FourierExpansion":
        """Move to a coarser grid; every key must be divisible (asserted, never rounded)."""
        if self.scale % new_scale:
            raise ArgumentError("new scale must divide the current scale")
        f = self.scale // new_scale
        out = {}
        for k, v in self.coeffs.items():
            if any(x % f for x in k):
                raise ArgumentError(f"key {k} does not lie on the scale-{new_scale} grid")
            out[tuple(x // f for x in k)] = v
        res = FourierExpansion(self.genus, self.weight, self.bound, out, new_scale)
        if new_scale == 1:
            for k in res.coeffs:
                m = matrix_from_key(k, self.genus)
                if any(m[i][i] % 2 for i in range(self.genus)):
                    raise ArgumentError(f"key {k} has an odd diagonal on the half-integral grid")
        return res

    # serialization

    def to_json_obj(self) -> dict:
        bound = self.bound
        return {
            "genus": self.genus,
            "weight": fraction_str(self.weight),
            "scale": self.scale,
            "trunc": {"trace": _num_json(bound)},
            "coeffs": [{"t": list(k), "v": _val_json(v)} for k, v in self.coeffs.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "FourierExpansion":
        try:
            genus = int(obj["genus"])
            coeffs = {tuple(e["t"]): Fraction(str(e["v"])) for e in obj["coeffs"]}
            return cls(genus, Fraction(str(obj["weight"])), Fraction(str(obj["trunc"]["trace"])), coeffs, int(obj.get("scale", 1)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ArgumentError):
                raise
            raise ArgumentError(f"malformed expansion JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "FourierExpansion":
        return cls.from_json_obj(json.loads(text))


def _num_json(x: Fraction):
    return x.numerator if x.denominator == 1 else fraction_str(x)


def _val_json(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else fraction_str(x)


def zero_expansion(genus: int, weight, bound, scale: int = 1) -> FourierExpansion:
    return FourierExpansion(genus, weight, bound, {}, scale)


def constant_expansion(genus: int, value=1, bound=0, weight=0) -> FourierExpansion:
    return FourierExpansion(genus, weight, bound, {(0,) * key_size(genus): value})


def _min_trace(f: FourierExpansion) -> int:
    return min((key_trace(k, f.genus) for k in f.coeffs), default=0)


def multiply(factors: list[FourierExpansion], bound=None) -> FourierExpansion:
    """Product of expansions on a common grid, pruned by the smallest trace still to come.

    ``bound`` (trace of 2T) defaults to the smallest factor bound.
    """
    if not factors:
        raise ArgumentError("empty product")
    g, s = factors[0].genus, factors[0].scale
    for f in factors:
        if f.genus != g or f.scale != s:
            raise ArgumentError("expansions differ in genus or exponent scale")
    b = min(f.bound for f in factors)
    if bound is not None:
        b = min(b, to_fraction(bound))
    weight = sum((f.weight for f in factors), Fraction(0))
    if any(f.is_zero() for f in factors):
        return FourierExpansion(g, weight, b, {}, s)
    limit = int(b * s)  # bound on trace of stored keys
    # min trace still contributed by factors after position i
    tail = [0] * (len(factors) + 1)
    for i in range(len(factors) - 1, -1, -1):
        tail[i] = tail[i + 1] + _min_trace(factors[i])
    trace_pos = [sum(g - j for j in range(i)) for i in range(g)]
    cur: dict[Key, Fraction] = {(0,) * key_size(g): Fraction(1)}
    for i, f in enumerate(factors):
        room = limit - tail[i + 1]
        terms = [(k, v, sum(k[p] for p in trace_pos)) for k, v in f.coeffs.items()]
        nxt: dict[Key, Fraction] = {}
        for k1, v1 in cur.items():
            t1 = sum(k1[p] for p in trace_pos)
            for k2, v2, t2 in terms:
                if t1 + t2 > room:
                    continue
                k = tuple(x + y for x, y in zip(k1, k2))
                nxt[k] = nxt.get(k, Fraction(0)) + v1 * v2
        cur = {k: v for k, v in nxt.items() if v}
    return FourierExpansion(g, weight, b, cur, s)
