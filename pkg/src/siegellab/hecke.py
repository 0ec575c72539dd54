"""Hecke operators for Sp(g, Z), g <= 2, acting on truncated Fourier expansions.

Right cosets Gamma M with similitude l = p^delta are enumerated in the
normal form M = (A B; 0 D): A upper triangular with p-power diagonal and
off-diagonal entries reduced modulo the diagonal entry below, D = l tA^-1,
and X = B D^-1 a symmetric matrix with entries in (1/l)Z taken modulo 1.
This form is canonical, so distinct tuples are distinct cosets; the tests
confirm it with the exact Gamma-equivalence check.

The slash action is normalised by l^(gk - g(g+1)/2), which reproduces the
classical eigenvalues at g = 1.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .errors import ArgumentError, InconsistencyError, NotEigenformError, TruncationError, UnsupportedError
from .exactmat import det, inverse, is_integral, mat, matmul
from .expansion import FourierExpansion, Key, key_trace, matrix_from_key, psd_keys, reduce_binary

# -- cosets -----------------------------------------------------------------


def _vp(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def _check_pg(p: int, g: int):
    if not _is_prime(p):
        raise ArgumentError(f"{p} is not a prime")
    if g not in (1, 2):
        raise UnsupportedError("Hecke operators are implemented for g = 1, 2")


IntMat = tuple  # tuple[tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class CosetRep:
    """Representative (A B; 0 D) of a right coset, in normal form."""

    A: IntMat
    B: IntMat
    D: IntMat

    @property
    def g(self) -> int:
        return len(self.A)

    @property
    def l(self) -> int:
        return sum(self.A[i][0] * self.D[i][0] for i in range(self.g))

    @property
    def matrix(self) -> IntMat:
        g = self.g
        top = [list(self.A[i]) + list(self.B[i]) for i in range(g)]
        bot = [[0] * g + list(self.D[i]) for i in range(g)]
        return tuple(tuple(r) for r in top + bot)

    @property
    def X(self) -> tuple:
        """B D^-1 (symmetric, rational)."""
        return matmul(mat(self.B), inverse(mat(self.D)))

    def diag_exponents(self, p: int) -> tuple[int, ...]:
        return tuple(_vp(self.A[i][i], p) for i in range(self.g))

    def rank_mod(self, p: int) -> int:
        return _rank_mod_p(self.matrix, p)

    def to_json_obj(self, mult: int = 1) -> dict:
        return {"A": [list(r) for r in self.A], "B": [list(r) for r in self.B], "D": [list(r) for r in self.D], "mult": mult}


def _rank_mod_p(m, p: int) -> int:
    rows = [[int(x) % p for x in r] for r in m]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _upper_triangular_forms(g: int, p: int, delta: int):
    """A in Hermite normal form with p-power diagonal dividing l = p^delta."""
    for exps in itertools.product(range(delta + 1), repeat=g):
        diag = [p**e for e in exps]
        if g == 1:
            yield ((diag[0],),)
            continue
        for a12 in range(diag[1]):
            yield ((diag[0], a12), (0, diag[1]))


def _sym_fraction_mats(g: int, l: int):
    cells = [(i, j) for i in range(g) for j in range(i, g)]
    for vals in itertools.product(range(l), repeat=len(cells)):
        x = [[Fraction(0)] * g for _ in range(g)]
        for (i, j), v in zip(cells, vals):
            x[i][j] = x[j][i] = Fraction(v, l)
        yield tuple(tuple(r) for r in x)


@lru_cache(maxsize=None)
def cosets_of_level(g: int, p: int, delta: int) -> tuple[CosetRep, ...]:
    """All right cosets Gamma M with M integral and l(M) = p^delta, sorted."""
    _check_pg(p, g)
    l = p**delta
    out = []
    for a in _upper_triangular_forms(g, p, delta):
        am = mat(a)
        d = tuple(tuple(int(l * x) if (l * x).denominator == 1 else None for x in r) for r in inverse(am))
        # D = l tA^-1
        d = tuple(tuple(r) for r in zip(*d))
        if any(x is None for r in d for x in r):
            continue
        dm = mat(d)
        for x in _sym_fraction_mats(g, l):
            b = matmul(x, dm)
            if not is_integral(b):
                continue
            out.append(CosetRep(a, tuple(tuple(int(v) for v in r) for r in b), d))
    return tuple(sorted(out))


def gamma_equivalent(m1, m2) -> bool:
    """Gamma M1 == Gamma M2, i.e. M1 M2^-1 is integral symplectic."""
    q = matmul(mat(m1), inverse(mat(m2)))
    if not is_integral(q):
        return False
    from .exactmat import is_integral_symplectic

    return is_integral_symplectic(q)


# -- Hecke elements -------------------------------------------------------------


def parse_op(op: str, g: int) -> tuple[int, int | None]:
    """Label -> (delta, i): 'T(p)' -> (1, None), 'T1(p2)' / 'T_1(p^2)' -> (2, 1)."""
    s = op.replace(" ", "").replace("p^2", "p2")
    m = re.fullmatch(r"T(?:_?(\d))?\(p(2?)\)", s)
    if not m:
        raise ArgumentError(f"unknown Hecke operator label {op!r}")
    idx, sq = m.group(1), m.group(2)
    if not sq:
        if idx is not None:
            raise ArgumentError(f"unknown Hecke operator label {op!r}")
        return 1, None
    if idx is None:
        return 2, -1  # the full T(p^2)
    i = int(idx)
    if not 0 <= i <= g:
        raise ArgumentError(f"T_{i}(p^2) needs 0 <= i <= g = {g}")
    return 2, i


@dataclass(frozen=True)
class HeckeElement:
    g: int
    p: int
    cosets: tuple  # tuple[tuple[CosetRep, int], ...], sorted
    label: str = ""

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.cosets)

    @property
    def delta(self) -> int:
        if not self.cosets:
            return 0
        return _vp(self.cosets[0][0].l, self.p)

    def multiset(self) -> Counter:
        return Counter({c: m for c, m in self.cosets})

    def to_json_obj(self) -> dict:
        return {
            "g": self.g,
            "p": self.p,
            "label": self.label,
            "cosets": [c.to_json_obj(m) for c, m in self.cosets],
        }

    @classmethod
    def from_json_obj(cls, obj) -> "HeckeElement":
        cos = []
        for e in obj["cosets"]:
            rep = CosetRep(*(tuple(tuple(int(x) for x in r) for r in e[k]) for k in ("A", "B", "D")))
            cos.append((rep, int(e.get("mult", 1))))
        return cls(int(obj["g"]), int(obj["p"]), tuple(sorted(cos)), obj.get("label", ""))


def identity_element(g: int, p: int) -> HeckeElement:
    eye = tuple(tuple(int(i == j) for j in range(g)) for i in range(g))
    zero = tuple((0,) * g for _ in range(g))
    return HeckeElement(g, p, ((CosetRep(eye, zero, eye), 1),), "1")


def coset_reps(op: str, p: int, g: int) -> HeckeElement:
    """Right cosets of T(p), T(p^2) or T_i(p^2)."""
    _check_pg(p, g)
    delta, i = parse_op(op, g)
    reps = cosets_of_level(g, p, delta)
    if delta == 2 and i is not None and i >= 0:
        reps = tuple(r for r in reps if g - r.rank_mod(p) == i)
        label = f"T{i}(p2)"
    elif delta == 2:
        label = "T(p2)"
    else:
        label = "T(p)"
    return HeckeElement(g, p, tuple((r, 1) for r in reps), label)


@lru_cache(maxsize=None)
def _adjoint_stack(g: int, p: int, delta: int) -> np.ndarray:
    """J^-1 tR J for every normal-form R; R^-1 equals this divided by l."""
    jg = np.block([[np.zeros((g, g), dtype=np.int64), np.eye(g, dtype=np.int64)],
                   [-np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)]])
    reps = cosets_of_level(g, p, delta)
    arr = np.array([r.matrix for r in reps], dtype=np.int64)
    return np.einsum("ij,njk,kl->nil", jg.T, arr.transpose(0, 2, 1), jg)


def _match_coset(m, g: int, p: int, delta: int) -> CosetRep:
    l = p**delta
    prods = np.asarray(m, dtype=np.int64) @ _adjoint_stack(g, p, delta)
    hits = np.flatnonzero((prods % l == 0).all(axis=(1, 2)))
    if len(hits) != 1:
        raise InconsistencyError(f"product matrix matches {len(hits)} normal-form cosets")
    return cosets_of_level(g, p, delta)[hits[0]]


def hecke_multiply(e1: HeckeElement, e2: HeckeElement) -> HeckeElement:
    """(Gamma M Gamma)(Gamma N) = sum_j Gamma M_j N, extended linearly."""
    if e1.p != e2.p or e1.g != e2.g:
        raise ArgumentError("Hecke elements must share p and g")
    g, p = e1.g, e1.p
    delta = e1.delta + e2.delta
    acc: Counter = Counter()
    cache: dict = {}
    for r1, m1 in e1.cosets:
        for r2, m2 in e2.cosets:
            prod = tuple(map(tuple, np.array(r1.matrix, dtype=np.int64) @ np.array(r2.matrix, dtype=np.int64)))
            if prod not in cache:
                cache[prod] = _match_coset(prod, g, p, delta)
            acc[cache[prod]] += m1 * m2
    label = f"({e1.label})*({e2.label})"
    return HeckeElement(g, p, tuple(sorted(acc.items())), label)


def elementary_divisors(m) -> tuple[int, ...]:
    """Smith invariants of an integer matrix via determinantal divisors."""
    m = [[int(x) for x in r] for r in m]
    n = len(m)
    out, prev = [], 1
    for k in range(1, n + 1):
        gk = 0
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                gk = math.gcd(gk, int(det([[m[i][j] for j in cols] for i in rows])))
        if gk == 0:
            break
        out.append(gk // prev)
        prev = gk
    return tuple(out)


def double_coset_decomposition(e: HeckeElement) -> dict[tuple[int, ...], int]:
    """Write e as sum c_i (Gamma M_i Gamma); keys are Smith invariants of M_i."""
    groups: dict = defaultdict(list)
    for rep, mlt in e.cosets:
        groups[elementary_divisors(rep.matrix)].append(mlt)
    delta = e.delta
    sizes = Counter(elementary_divisors(r.matrix) for r in cosets_of_level(e.g, e.p, delta))
    out = {}
    for inv, mults in groups.items():
        if len(set(mults)) != 1 or len(mults) != sizes[inv]:
            raise InconsistencyError(f"multiplicities are not constant on the double coset {inv}")
        out[inv] = mults[0]
    return dict(sorted(out.items()))


# -- action on expansions --------------------------------------------------------


def _coset_groups(e: HeckeElement):
    """Group cosets by (A, D); each group carries its list of X matrices and multiplicities."""
    groups: dict = defaultdict(list)
    for rep, mlt in e.cosets:
        groups[(rep.A, rep.D)].append((rep.X, mlt))
    return sorted(groups.items())


def _pulled_key(g: int, key: Key, d, l: int) -> Key | None:
    """2T = D (2T') tD / l when it is even integral, else None."""
    gm = matrix_from_key(key, g)
    prod = [[sum(d[i][a] * gm[a][b] * d[j][b] for a in range(g) for b in range(g)) for j in range(g)] for i in range(g)]
    if any(x % l for r in prod for x in r):
        return None
    q = [[x // l for x in r] for r in prod]
    if any(q[i][i] % 2 for i in range(g)):
        return None
    return tuple(q[i][j] for i in range(g) for j in range(i, g))


def _cyclotomic_reduce(counts: list, l: int, p: int) -> tuple:
    """Reduce sum_j counts[j] zeta_l^j modulo Phi_l (l = p^delta) to the power basis."""
    q = l // p
    phi = l - q
    out = list(counts[:phi])
    for e in range(phi, l):
        c = counts[e]
        if c:
            r = e - phi
            for t in range(p - 1):
                out[r + t * q] -= c
    return tuple(out)


def _character_sum(g: int, key: Key, xs, l: int, p: int) -> tuple | None:
    """sum over X (with multiplicity) of e(sigma(T X)) in Q(zeta_l); None when it vanishes."""
    gm = matrix_from_key(key, g)
    counts = [0] * l
    for x, mlt in xs:
        tr = sum(Fraction(gm[i][j]) * x[j][i] for i in range(g) for j in range(g)) / 2
        j = tr * l
        if j.denominator != 1:
            raise InconsistencyError("character value outside the l-th roots of unity")
        counts[int(j) % l] += mlt
    if l == 1:
        return (counts[0],) if counts[0] else None
    red = _cyclotomic_reduce(counts, l, p)
    return red if any(red) else None


def _reduced_trace(g: int, key: Key) -> int:
    if g == 1:
        return key[0]
    red, _ = reduce_binary(*key)
    return red[0] + red[2]


def _required_trace(g: int, groups, key: Key, l: int, p: int) -> int:
    need = 0
    for (_, d), xs in groups:
        src = _pulled_key(g, key, d, l)
        if src is None or _character_sum(g, src, xs, l, p) is None:
            continue
        need = max(need, _reduced_trace(g, src))
    return need


@dataclass(frozen=True)
class _Action:
    """Pre-processed data for applying one Hecke element to one expansion."""

    f: FourierExpansion
    e: HeckeElement
    groups: tuple
    l: int
    norm: Fraction

    @classmethod
    def build(cls, f: FourierExpansion, op, p: int | None) -> "_Action":
        if isinstance(op, HeckeElement):
            e = op
        else:
            if p is None:
                raise ArgumentError("p is required with an operator label")
            e = coset_reps(op, p, f.genus)
        if f.genus != e.g:
            raise ArgumentError("expansion genus differs from the operator genus")
        if f.scale != 1 or f.weight.denominator != 1:
            raise ArgumentError("hecke_apply needs an integral-weight expansion on the half-integral grid")
        ls = {rep.l for rep, _ in e.cosets}
        if len(ls) != 1:
            raise ArgumentError("all cosets must share one similitude factor")
        l = ls.pop()
        g, k = f.genus, int(f.weight)
        norm = Fraction(l) ** (g * k - g * (g + 1) // 2)
        return cls(f, e, tuple(_coset_groups(e)), l, norm)

    def required(self, key: Key) -> int:
        return _required_trace(self.f.genus, self.groups, key, self.l, self.e.p)

    def coeff(self, key: Key) -> Fraction:
        g, k, p, l = self.f.genus, int(self.f.weight), self.e.p, self.l
        total = [Fraction(0)] * max(1, l - l // p)
        for (_, d), xs in self.groups:
            src = _pulled_key(g, key, d, l)
            if src is None:
                continue
            w = _character_sum(g, src, xs, l, p)
            if w is None:
                continue
            val = self.f.coeff_gl(src)
            if val:
                c = self.norm * Fraction(int(det(mat(d)))) ** (-k) * val
                for i, wi in enumerate(w):
                    total[i] += wi * c
        if any(total[1:]):
            raise InconsistencyError(f"coefficient at {key} is not rational; the coset set is not a Hecke element")
        return total[0]


def hecke_apply(f: FourierExpansion, op, p: int | None = None, out_bound: int | None = None) -> FourierExpansion:
    """Apply T(p) or T_i(p^2) (label) or a HeckeElement to a scalar-weight expansion.

    The output bound is the largest trace bound whose coefficients are all
    determined by ``f``; requesting more raises TruncationError.
    """
    act = _Action.build(f, op, p)
    g = f.genus
    reach = -1
    need_for_request = 0
    for t in range(0, (out_bound if out_bound is not None else int(f.bound)) + 1):
        keys = [key for key in psd_keys(g, t) if key_trace(key, g) == t]
        need = max((act.required(key) for key in keys), default=0)
        need_for_request = max(need_for_request, need)
        if need <= f.bound and reach == t - 1:
            reach = t
        elif out_bound is None:
            break
    if out_bound is not None and reach < out_bound:
        raise TruncationError(
            f"output bound {out_bound} needs input trace bound {need_for_request}, have {f.bound}",
            required_bound=need_for_request,
        )
    bound = reach if out_bound is None else out_bound
    coeffs = {key: act.coeff(key) for key in psd_keys(g, bound)}
    return FourierExpansion(g, f.weight, bound, coeffs)


def comparable_indices(f: FourierExpansion, op, p: int | None = None) -> list[Key]:
    """Indices of trace <= f.bound whose image coefficient is determined by f."""
    act = _Action.build(f, op, p)
    return [key for key in psd_keys(f.genus, int(f.bound)) if act.required(key) <= f.bound]


def eigenvalue(f: FourierExpansion, op, p: int | None = None) -> Fraction:
    """lambda with T f = lambda f, checked at every comparable index.

    The reference index is the first stored nonzero coefficient whose image
    is determined by ``f``.
    """
    if f.is_zero():
        raise NotEigenformError("zero expansion has no reference coefficient")
    act = _Action.build(f, op, p)
    keys = comparable_indices(f, act.e)
    ref = next((k for k in keys if f.coeffs.get(k)), None)
    if ref is None:
        need = min(act.required(k) for k in f.coeffs)
        raise TruncationError(
            f"no nonzero coefficient of f has a computable image; needs trace bound {need}, have {f.bound}",
            required_bound=need,
        )
    lam = act.coeff(ref) / f.coeffs[ref]
    for key in keys:
        if act.coeff(key) != lam * f.coeffs.get(key, 0):
            raise NotEigenformError(f"ratio at {key} differs from {lam}")
    return lam


# -- Satake polynomial map -------------------------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial in X_0..X_g with exact rational coefficients."""

    nvars: int
    terms: tuple = ()  # sorted ((exponents, coeff), ...)

    @classmethod
    def from_dict(cls, nvars: int, d) -> "LaurentPoly":
        return cls(nvars, tuple(sorted((tuple(e), Fraction(c)) for e, c in d.items() if c)))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = defaultdict(Fraction, self.as_dict())
        for e, c in other.terms:
            d[e] += c
        return LaurentPoly.from_dict(self.nvars, d)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        d: dict = defaultdict(Fraction)
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                d[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return LaurentPoly.from_dict(self.nvars, d)

    def substitute(self, images) -> "LaurentPoly":
        """Apply a monomial substitution X_i -> images[i] (each an exponent vector)."""
        d: dict = defaultdict(Fraction)
        for e, c in self.terms:
            new = [0] * self.nvars
            for i, ei in enumerate(e):
                for j, v in enumerate(images[i]):
                    new[j] += ei * v
            d[tuple(new)] += c
        return LaurentPoly.from_dict(self.nvars, d)

    def evaluate(self, values) -> object:
        total = 0
        for e, c in self.terms:
            term = c
            for v, ei in zip(values, e):
                term = term * v**ei
            total = total + term
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"X{i}^{x}" if x != 1 else f"X{i}" for i, x in enumerate(e) if x)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def weyl_generators(g: int) -> list[tuple]:
    """Monomial substitutions generating W_g on X_0..X_g.

    w_j: X_0 -> X_0 X_j, X_j -> X_j^-1; plus transpositions of X_1..X_g.
    """
    n = g + 1
    gens = []
    for j in range(1, n):
        imgs = [tuple(int(i == k) for k in range(n)) for i in range(n)]
        imgs[0] = tuple(1 if k in (0, j) else 0 for k in range(n))
        imgs[j] = tuple(-1 if k == j else 0 for k in range(n))
        gens.append(tuple(imgs))
    for a in range(1, n - 1):
        imgs = [tuple(int(i == k) for k in range(n)) for i in range(n)]
        imgs[a], imgs[a + 1] = imgs[a + 1], imgs[a]
        gens.append(tuple(imgs))
    return gens


def is_weyl_invariant(q: LaurentPoly) -> bool:
    return all(q.substitute(w) == q for w in weyl_generators(q.nvars - 1))


def satake_Q(e: HeckeElement) -> LaurentPoly:
    """Sum over cosets of X_0^delta prod (p^-nu X_nu)^k_nu |det A|^(g+1) l^(-g(g+1)/2)."""
    g, p = e.g, e.p
    d: dict = defaultdict(Fraction)
    for rep, mlt in e.cosets:
        l = rep.l
        delta = _vp(l, p)
        ks = rep.diag_exponents(p)
        coeff = Fraction(abs(int(det(mat(rep.A))))) ** (g + 1) * Fraction(l) ** (-(g * (g + 1) // 2))
        for nu, kn in enumerate(ks, start=1):
            coeff *= Fraction(p) ** (-nu * kn)
        d[(delta,) + ks] += mlt * coeff
    return LaurentPoly.from_dict(g + 1, d)


# -- corank counts and Satake parameters -----------------------------------------


@lru_cache(maxsize=None)
def m_count(s: int, i: int, p: int) -> int:
    """#{A symmetric s x s over F_p with corank i}, by exhaustive enumeration."""
    if not (0 <= s <= 3 and _is_prime(p) and p <= 7):
        raise ArgumentError("m_count supports s <= 3 and primes p <= 7")
    if not 0 <= i <= s:
        return 0
    if s == 0:
        return 1 if i == 0 else 0
    cells = [(a, b) for a in range(s) for b in range(a, s)]
    count = 0
    for vals in itertools.product(range(p), repeat=len(cells)):
        m = [[0] * s for _ in range(s)]
        for (a, b), v in zip(cells, vals):
            m[a][b] = m[b][a] = v
        if s - _rank_mod_p(m, p) == i:
            count += 1
    return count


def eigenvalue_formula(i: int, g: int, p: int) -> LaurentPoly:
    """lambda(T_i(p^2)) as a polynomial in X_0 and the elementary symmetric functions.

    sum_{j,k >= 0, j + i <= k} m_{k-j}(i) p^-C(k-j+1, 2) X_0^2 E_j E_k

    Valid for 1 <= i <= g only; at i = 0 it disagrees with ``satake_Q``.
    """
    if not 1 <= i <= g:
        raise ArgumentError(f"the closed formula covers 1 <= i <= g, got i = {i}")
    n = g + 1
    elem = []
    for j in range(g + 1):
        d: dict = defaultdict(Fraction)
        for sub in itertools.combinations(range(1, n), j):
            d[tuple(1 if v in sub else 0 for v in range(n))] += 1
        elem.append(LaurentPoly.from_dict(n, d))
    x0sq = LaurentPoly.from_dict(n, {(2,) + (0,) * g: 1})
    total = LaurentPoly(n)
    for j in range(g + 1):
        for k in range(g + 1):
            if j + i > k:
                continue
            c = Fraction(m_count(k - j, i, p)) * Fraction(p) ** (-math.comb(k - j + 1, 2))
            if c:
                total = total + LaurentPoly.from_dict(n, {(0,) * n: c}) * x0sq * elem[j] * elem[k]
    return total


@dataclass(frozen=True)
class SatakeData:
    """Symmetric Satake data in exact rationals.

    g = 1: L = alpha_0 (1 + alpha_1), P = alpha_0^2 alpha_1.
    g = 2: L = s(1 + E1 + E2), P = s^2 E2, K = s^2 E1 (1 + E2) with s = alpha_0;
    ``s2_roots`` lists the rational solutions s^2 of the elimination quartic.
    """

    g: int
    p: int
    k: int
    L: Fraction
    P: Fraction
    K: Fraction | None = None
    s2_roots: tuple = field(default=())

    def to_json_obj(self) -> dict:
        from .exactmat import fraction_str

        out = {"g": self.g, "p": self.p, "k": self.k, "L": fraction_str(self.L), "P": fraction_str(self.P)}
        if self.K is not None:
            out["K"] = fraction_str(self.K)
            out["s2_roots"] = [fraction_str(r) for r in self.s2_roots]
        return out


def satake_solve_g1(a_p, k: int, p: int) -> SatakeData:
    """alpha_0 (1 + alpha_1) = a(p), alpha_0^2 alpha_1 = p^(k-1)."""
    return SatakeData(1, p, k, Fraction(a_p), Fraction(p) ** (k - 1))


def satake_solve(g: int, k: int, p: int, lam_tp, lam_t1, lam_t2) -> SatakeData:
    """Solve for symmetric Satake data from lambda(T(p)), lambda(T_1(p^2)), lambda(T_2(p^2))."""
    if g != 2:
        raise UnsupportedError("satake_solve handles g = 2; use satake_solve_g1 for g = 1")
    lam_tp, lam_t1, lam_t2 = Fraction(lam_tp), Fraction(lam_t1), Fraction(lam_t2)
    P = Fraction(p) ** 3 * lam_t2
    expected = Fraction(p) ** (2 * k - 3)
    if P != expected:
        raise InconsistencyError(f"s^2 E_2 = {P} but alpha_0^2 alpha_1 alpha_2 must be p^(2k-3) = {expected}")
    K = p * (lam_t1 - Fraction(p * p - 1, p**3) * P)
    L = lam_tp
    u = sympy.Symbol("u")
    Ls, Ps, Ks = (sympy.Rational(x.numerator, x.denominator) for x in (L, P, K))
    poly = sympy.Poly(sympy.expand(u * Ls**2 * (u + Ps) ** 2 - ((u + Ps) ** 2 + Ks * u) ** 2), u)
    if poly.is_zero:
        raise InconsistencyError("degenerate elimination polynomial")
    roots = sorted(Fraction(int(r.p), int(r.q)) for r in sympy.roots(poly, filter="Q") if r.is_rational and r > 0)
    return SatakeData(2, p, k, L, P, K, tuple(roots))
