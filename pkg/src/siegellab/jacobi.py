"""Degree-1 Jacobi forms: Fourier-Jacobi layers, theta decomposition, the plus space and the Maass lift.

A Jacobi form of weight k and index m is stored by its coefficients c(n, r)
for 0 <= n <= nmax and r^2 <= 4nm.  Inside a genus-2 expansion the layer
phi_m sits at the keys (2n, r, 2m), i.e. 2T = (2n r; r 2m).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ArgumentError, InconsistencyError, TruncationError
from .exactmat import fraction_str, to_fraction
from .expansion import FourierExpansion, psd_keys


def _window(n: int, m: int) -> range:
    rmax = math.isqrt(4 * n * m)
    return range(-rmax, rmax + 1)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True, eq=False)
class JacobiFormExpansion:
    """c(n, r) for n <= nmax; zero entries are dropped."""

    weight: int
    index: int
    nmax: int
    coeffs: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.index < 0:
            raise ArgumentError("Jacobi index must be non-negative")
        if self.nmax < 0:
            raise ArgumentError("nmax must be non-negative")
        clean = {}
        for (n, r), v in self.coeffs.items():
            n, r, v = int(n), int(r), to_fraction(v)
            if v == 0:
                continue
            if n < 0 or n > self.nmax:
                raise TruncationError(f"c({n}, {r}) lies outside nmax = {self.nmax}")
            if 4 * n * self.index - r * r < 0:
                raise InconsistencyError(f"c({n}, {r}) has negative discriminant")
            clean[(n, r)] = v
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        self._check_classes()

    def _check_classes(self):
        # c depends only on (4nm - r^2, r mod 2m)
        m = self.index
        if m == 0:
            return
        seen: dict[tuple[int, int], Fraction] = {}
        for n in range(self.nmax + 1):
            for r in _window(n, m):
                cls = (4 * n * m - r * r, r % (2 * m))
                v = self.coeffs.get((n, r), Fraction(0))
                if cls in seen and seen[cls] != v:
                    raise InconsistencyError(
                        f"c({n}, {r}) = {v} disagrees with another coefficient of discriminant {cls[0]}"
                    )
                seen.setdefault(cls, v)

    def c(self, n: int, r: int) -> Fraction:
        if n > self.nmax:
            raise TruncationError(f"c({n}, {r}) needs nmax >= {n}, have {self.nmax}", required_bound=n)
        if n < 0 or 4 * n * self.index < r * r:
            return Fraction(0)
        return self.coeffs.get((n, r), Fraction(0))

    def is_cusp(self) -> bool:
        return all(4 * n * self.index - r * r > 0 for n, r in self.coeffs)

    def truncate(self, nmax: int) -> "JacobiFormExpansion":
        nmax = min(nmax, self.nmax)
        return JacobiFormExpansion(
            self.weight, self.index, nmax, {k: v for k, v in self.coeffs.items() if k[0] <= nmax}
        )

    def __eq__(self, other):
        if not isinstance(other, JacobiFormExpansion):
            return NotImplemented
        return (self.weight, self.index, self.nmax, self.coeffs) == (
            other.weight,
            other.index,
            other.nmax,
            other.coeffs,
        )

    def __hash__(self):
        return hash((self.weight, self.index, self.nmax, tuple(self.coeffs.items())))

    def to_json_obj(self) -> dict:
        return {
            "weight": self.weight,
            "index": self.index,
            "nmax": self.nmax,
            "coeffs": [{"n": n, "r": r, "v": fraction_str(v)} for (n, r), v in self.coeffs.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "JacobiFormExpansion":
        coeffs = {(int(e["n"]), int(e["r"])): Fraction(str(e["v"])) for e in obj["coeffs"]}
        nmax = obj.get("nmax", max((n for n, _ in coeffs), default=0))
        return cls(int(obj["weight"]), int(obj["index"]), int(nmax), coeffs)

    @classmethod
    def from_json(cls, text: str) -> "JacobiFormExpansion":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True, eq=False)
class HalfIntegralWeightExpansion:
    """sum a(N) q^N of weight k - 1/2 for N <= bound, supported on N = 0, 3 mod 4."""

    weight: Fraction
    bound: int
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "weight", to_fraction(self.weight))
        clean = {}
        for n, v in self.coeffs.items():
            n, v = int(n), to_fraction(v)
            if v == 0:
                continue
            if n < 0 or n > self.bound:
                raise TruncationError(f"a({n}) lies outside the bound {self.bound}")
            if n % 4 not in (0, 3):
                raise InconsistencyError(f"a({n}) = {v} violates the plus-space support condition")
            clean[n] = v
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def a(self, n: int) -> Fraction:
        if n > self.bound:
            raise TruncationError(f"a({n}) needs bound >= {n}, have {self.bound}", required_bound=n)
        return self.coeffs.get(n, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, HalfIntegralWeightExpansion):
            return NotImplemented
        return (self.weight, self.bound, self.coeffs) == (other.weight, other.bound, other.coeffs)

    def __hash__(self):
        return hash((self.weight, self.bound, tuple(self.coeffs.items())))

    def to_json_obj(self) -> dict:
        return {
            "weight": fraction_str(self.weight),
            "bound": self.bound,
            "coeffs": [{"n": n, "v": fraction_str(v)} for n, v in self.coeffs.items()],
        }


@dataclass(frozen=True)
class ThetaComponent:
    """f_gamma = sum h(D) q^(D / 4m) over discriminants D = 4nm - r^2 with r = gamma mod 2m."""

    gamma: int
    index: int
    dmax: int
    coeffs: Mapping[int, Fraction]


# -- Fourier-Jacobi layers ----------------------------------------------------


def jacobi_reach(bound, m: int) -> int:
    """Largest n with (2n, r, 2m) inside trace(2T) <= bound, or -1."""
    return (int(math.floor(to_fraction(bound))) - 2 * m) // 2


def fourier_jacobi(f: FourierExpansion, m: int) -> JacobiFormExpansion:
    """The m-th layer phi_m with c(n, r) = a(T), 2T = (2n r; r 2m)."""
    if f.genus != 2:
        raise ArgumentError("fourier_jacobi needs a genus-2 expansion")
    if m < 0:
        raise ArgumentError("index m must be non-negative")
    if f.weight.denominator != 1:
        raise ArgumentError("integral weight expected")
    if f.scale != 1:
        f = f.rescaled(1)
    nmax = jacobi_reach(f.bound, m)
    if nmax < 0:
        raise TruncationError(f"layer m = {m} needs trace bound >= {2 * m}, have {f.bound}", required_bound=2 * m)
    coeffs = {}
    for n in range(nmax + 1):
        for r in _window(n, m):
            v = f.coeffs.get((2 * n, r, 2 * m))
            if v:
                coeffs[(n, r)] = v
    return JacobiFormExpansion(int(f.weight), m, nmax, coeffs)


# -- theta decomposition --------------------------------------------------------


def theta_decompose(phi: JacobiFormExpansion) -> list[ThetaComponent]:
    """Split phi into the 2m components f_gamma, gamma in Z/2m."""
    m = phi.index
    if m < 1:
        raise ArgumentError("theta decomposition needs index >= 1")
    out = []
    for gamma in range(2 * m):
        rmin = min(gamma, 2 * m - gamma)
        dmax = 4 * m * phi.nmax - rmin * rmin
        coeffs = {}
        for n in range(phi.nmax + 1):
            for r in _window(n, m):
                if r % (2 * m) == gamma:
                    v = phi.coeffs.get((n, r))
                    if v:
                        coeffs[4 * n * m - r * r] = v
        out.append(ThetaComponent(gamma, m, dmax, dict(sorted(coeffs.items()))))
    return out


def reconstruct(components: list[ThetaComponent], weight: int, nmax: int) -> JacobiFormExpansion:
    """Inverse of theta_decompose for n <= nmax."""
    if not components:
        raise ArgumentError("no components supplied")
    m = components[0].index
    if len(components) != 2 * m or sorted(c.gamma for c in components) != list(range(2 * m)):
        raise ArgumentError(f"index {m} needs exactly {2 * m} components")
    by_gamma = {c.gamma: c for c in components}
    coeffs = {}
    for n in range(nmax + 1):
        for r in _window(n, m):
            comp = by_gamma[r % (2 * m)]
            d = 4 * n * m - r * r
            if d > comp.dmax:
                raise TruncationError(f"component {comp.gamma} stops at discriminant {comp.dmax}")
            v = comp.coeffs.get(d)
            if v:
                coeffs[(n, r)] = v
    return JacobiFormExpansion(weight, m, nmax, coeffs)


def kohnen_plus(phi: JacobiFormExpansion) -> HalfIntegralWeightExpansion:
    """a(4n - r^2) = c(n, r) for index 1."""
    if phi.index != 1:
        raise ArgumentError("kohnen_plus needs index 1")
    coeffs = {}
    for (n, r), v in phi.coeffs.items():
        coeffs[4 * n - r * r] = v
    return HalfIntegralWeightExpansion(Fraction(2 * phi.weight - 1, 2), 4 * phi.nmax, coeffs)


# -- V operators and the lift -----------------------------------------------------


def v_operator(phi: JacobiFormExpansion, m: int, nmax: int | None = None) -> JacobiFormExpansion:
    """(V_m phi)(n, r) = sum over d | (n, r, m) of d^(k-1) c(mn/d^2, r/d)."""
    if phi.index != 1:
        raise ArgumentError("v_operator is defined on index-1 forms")
    if m < 1:
        raise ArgumentError("m must be positive")
    if nmax is None:
        nmax = phi.nmax // m
    if m * nmax > phi.nmax:
        need = m * nmax
        raise TruncationError(f"V_{m} up to n = {nmax} needs phi with nmax >= {need}", required_bound=need)
    k = phi.weight
    coeffs = {}
    for n in range(nmax + 1):
        for r in _window(n, m):
            g = math.gcd(math.gcd(n, r), m)
            v = sum(
                (Fraction(d) ** (k - 1) * phi.c(m * n // (d * d), r // d) for d in _divisors(g)),
                Fraction(0),
            )
            if v:
                coeffs[(n, r)] = v
    return JacobiFormExpansion(k, m, nmax, coeffs)


def lift_requirement(bound) -> int:
    """nmax of phi needed for maass_lift at this trace bound."""
    b = int(math.floor(to_fraction(bound)))
    return max((m * ((b - 2 * m) // 2) for m in range(1, b // 2 + 1)), default=0)


def maass_lift(phi: JacobiFormExpansion, bound) -> FourierExpansion:
    """Genus-2 expansion assembled from the layers V_m phi, m >= 1; the m = 0 layer is zero."""
    if phi.index != 1:
        raise ArgumentError("maass_lift needs an index-1 form")
    if not phi.is_cusp():
        raise ArgumentError("maass_lift accepts cusp forms only (c(n, r) = 0 when 4n = r^2)")
    b = int(math.floor(to_fraction(bound)))
    need = lift_requirement(b)
    if need > phi.nmax:
        raise TruncationError(f"lift to bound {b} needs phi with nmax >= {need}, have {phi.nmax}", required_bound=need)
    coeffs = {}
    for m in range(1, b // 2 + 1):
        layer = v_operator(phi, m, (b - 2 * m) // 2)
        for (n, r), v in layer.coeffs.items():
            coeffs[(2 * n, r, 2 * m)] = v
    return FourierExpansion(2, phi.weight, b, coeffs)


def is_maass_space(f: FourierExpansion) -> bool:
    """Maass relation a(n, r, m) = sum d^(k-1) a(nm/d^2, r/d, 1) at every checkable index.

    Indices with m = 0 are moved to m = n by swapping the diagonal.  An index
    whose right-hand side falls outside the truncation is skipped.
    """
    if f.genus != 2:
        raise ArgumentError("is_maass_space needs a genus-2 expansion")
    if f.weight.denominator != 1:
        return False
    if f.scale != 1:
        f = f.rescaled(1)
    k = int(f.weight)
    for key in psd_keys(2, int(math.floor(f.bound))):
        a, r, c = key
        if a == 0 and c == 0:
            continue
        lhs = f.coeffs.get(key, Fraction(0))
        n, m = a // 2, c // 2
        sign = 1
        if m == 0:
            n, m = m, n
            sign = -1 if k % 2 else 1
        try:
            rhs = sum(
                (
                    Fraction(d) ** (k - 1) * f.coeff_gl((2 * n * m // (d * d), r // d, 2))
                    for d in _divisors(math.gcd(math.gcd(n, abs(r)), m))
                ),
                Fraction(0),
            )
        except TruncationError:
            continue
        if lhs != sign * rhs:
            return False
    return True


__all__ = [
    "JacobiFormExpansion",
    "HalfIntegralWeightExpansion",
    "ThetaComponent",
    "jacobi_reach",
    "fourier_jacobi",
    "theta_decompose",
    "reconstruct",
    "kohnen_plus",
    "v_operator",
    "lift_requirement",
    "maass_lift",
    "is_maass_space",
]
