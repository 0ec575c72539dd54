"""Local Euler factors as exact polynomials in t = p^-s."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ArgumentError, InconsistencyError, TruncationError, UnsupportedError
from .exactmat import fraction_str, to_fraction
from .hecke import SatakeData


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def series_inverse(a: Sequence[Fraction], order: int) -> list[Fraction]:
    """1 / a mod t^order for a with constant term 1."""
    if not a or a[0] != 1:
        raise ArgumentError("series_inverse needs constant term 1")
    out = [Fraction(0)] * order
    for n in range(order):
        acc = Fraction(1 if n == 0 else 0)
        for j in range(1, min(n, len(a) - 1) + 1):
            acc -= a[j] * out[n - j]
        out[n] = acc
    return out


@dataclass(frozen=True)
class EulerFactor:
    """1 + c_1 t + ... + c_d t^d with exact coefficients; ``degree`` is the nominal degree."""

    p: int
    degree: int
    coeffs: tuple

    def __post_init__(self):
        c = [to_fraction(x) for x in self.coeffs]
        if not c or c[0] != 1:
            raise InconsistencyError("an Euler factor has constant term 1")
        if len(c) > self.degree + 1:
            if any(x != 0 for x in c[self.degree + 1 :]):
                raise InconsistencyError(f"polynomial exceeds the declared degree {self.degree}")
            c = c[: self.degree + 1]
        c += [Fraction(0)] * (self.degree + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    def __call__(self, t) -> Fraction:
        t = to_fraction(t)
        return sum((c * t**i for i, c in enumerate(self.coeffs)), Fraction(0))

    def __mul__(self, other: "EulerFactor") -> "EulerFactor":
        if self.p != other.p:
            raise ArgumentError("factors at different primes")
        return EulerFactor(self.p, self.degree + other.degree, tuple(poly_mul(self.coeffs, other.coeffs)))

    def to_json_obj(self) -> dict:
        return {"p": self.p, "coeffs": [fraction_str(c) for c in self.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "EulerFactor":
        coeffs = tuple(Fraction(str(c)) for c in obj["coeffs"])
        return cls(int(obj["p"]), int(obj.get("degree", len(coeffs) - 1)), coeffs)


def linear_factor(p: int, root) -> EulerFactor:
    """1 - root t."""
    return EulerFactor(p, 1, (Fraction(1), -to_fraction(root)))


def hecke_factor_g1(a_p, k: int, p: int) -> EulerFactor:
    """1 - a(p) t + p^(k-1) t^2."""
    return EulerFactor(p, 2, (Fraction(1), -to_fraction(a_p), Fraction(p) ** (k - 1)))


def spinor_factor(sd: SatakeData) -> EulerFactor:
    """Degree 2^g spinor factor from the symmetric data of ``satake_solve``."""
    L, P = sd.L, sd.P
    if sd.g == 1:
        return EulerFactor(sd.p, 2, (Fraction(1), -L, P))
    if sd.g == 2:
        if sd.K is None:
            raise ArgumentError("genus-2 Satake data without K")
        K = sd.K
        return EulerFactor(sd.p, 4, (Fraction(1), -L, K + 2 * P, -P * L, P * P))
    raise UnsupportedError("spinor_factor is implemented for g <= 2")


def standard_sigmas(sd: SatakeData) -> tuple[Fraction, Fraction]:
    """(e1, e2) of sigma_i = alpha_i + 1/alpha_i; for g = 1 e2 is 0."""
    L, P = sd.L, sd.P
    if P == 0:
        raise InconsistencyError("vanishing similitude product")
    if sd.g == 1:
        return L * L / P - 2, Fraction(0)
    if sd.g == 2:
        K = sd.K
        return K / P, L * L / P - 2 * K / P - 4
    raise UnsupportedError("standard_factor is implemented for g <= 2")


def standard_factor(sd: SatakeData) -> EulerFactor:
    """(1 - t) prod (1 - alpha_i t)(1 - alpha_i^-1 t), degree 2g + 1."""
    e1, e2 = standard_sigmas(sd)
    if sd.g == 1:
        inner = (Fraction(1), -e1, Fraction(1))
    else:
        inner = (Fraction(1), -e1, 2 + e2, -e1, Fraction(1))
    return EulerFactor(sd.p, 2 * sd.g + 1, tuple(poly_mul((Fraction(1), Fraction(-1)), inner)))


def divide_one_minus_t(f: EulerFactor) -> tuple[Fraction, ...]:
    """f / (1 - t), exact; raises if t = 1 is not a root."""
    if f(1) != 0:
        raise InconsistencyError("t = 1 is not a root")
    c = list(f.coeffs)
    q = []
    acc = Fraction(0)
    for x in c[:-1]:
        acc += x
        q.append(acc)
    return tuple(q)


def is_palindromic(c: Sequence[Fraction]) -> bool:
    return list(c) == list(reversed(c))


def sk_factorization_check(sd: SatakeData, a_f, k: int) -> bool:
    """spinor == (1 - p^(k-1) t)(1 - p^(k-2) t)(1 - a_f t + p^(2k-3) t^2)."""
    if sd.g != 2:
        raise ArgumentError("sk_factorization_check needs genus-2 data")
    p = sd.p
    rhs = linear_factor(p, Fraction(p) ** (k - 1)) * linear_factor(p, Fraction(p) ** (k - 2)) * hecke_factor_g1(a_f, 2 * k - 2, p)
    return spinor_factor(sd) == rhs


def standard_identity_check_g1(qexp: Sequence, k: int, p: int, order: int = 4, form: str = "corrected") -> bool:
    """Local g = 1 identity between the standard factor and sum_j a(p^2j) t^j, mod t^order.

    ``corrected``: 1 / D(p^(k-1) t) == sum_j a(p^2j) t^j / (1 - p^(2k-2) t^2).
    ``printed``: the same with the multiplier 1 / (1 + p^(k-1) t); this one
    already disagrees at order t for every nonzero eigenform.
    """
    need = p ** (2 * (order - 1))
    if len(qexp) <= need:
        raise TruncationError(f"need a(n) up to n = {need}", required_bound=need)
    a = [to_fraction(x) for x in qexp]
    if a[1] != 1:
        raise ArgumentError("normalized eigenform expected (a(1) = 1)")
    w = Fraction(p) ** (k - 1)
    if form == "corrected":
        mult = [Fraction(1), Fraction(0), -w * w]
    elif form == "printed":
        mult = [Fraction(1), w]
    else:
        raise ArgumentError(f"unknown form {form!r}")
    sd = SatakeData(1, p, k, a[p], w)
    d_scaled = [c * w**i for i, c in enumerate(standard_factor(sd).coeffs)]
    rhs = series_inverse(d_scaled, order)
    lhs = poly_mul([a[p ** (2 * j)] for j in range(order)], series_inverse(mult, order))[:order]
    return lhs == rhs


__all__ = [
    "EulerFactor",
    "poly_mul",
    "series_inverse",
    "linear_factor",
    "hecke_factor_g1",
    "spinor_factor",
    "standard_sigmas",
    "standard_factor",
    "divide_one_minus_t",
    "is_palindromic",
    "sk_factorization_check",
    "standard_identity_check_g1",
]
