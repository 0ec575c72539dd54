"""Minkowski reduction on P_g, Siegel reduction to F_g and the volume of F_g.

Minkowski reduction is done greedily: at stage k the k-th basis vector is
replaced by a shortest lattice vector whose tail (a_k, ..., a_g) is
primitive, found by exact enumeration.  This realises condition (M.1) for
every k; (M.2) is then arranged by sign flips.

Siegel reduction follows the highest point loop: Minkowski-reduce Im,
translate Re into [-1/2, 1/2], and apply any witness from a finite set
that raises det Im.  The witness set is documented in
:func:`siegel_witnesses`; for g >= 2 its completeness for (S.1) is not
proved, and the tests compare against brute force instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .errors import ArgumentError, InconsistencyError, UnsupportedError
from .exactmat import (
    QI,
    Matrix,
    _cmatmul,
    SiegelPoint,
    act,
    block,
    det,
    gl_embed,
    identity,
    inverse,
    is_positive_definite,
    mat,
    matmul,
    scale,
    split_blocks,
    transpose,
    translation,
    zeros,
)
from .lattice import short_vectors_gram

MAX_SIEGEL_STEPS = 100_000


@dataclass(frozen=True)
class ReductionResult:
    reduced: object  # Matrix for Minkowski, SiegelPoint for Siegel
    transform: Matrix
    steps: int
    det_history: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class ExactVolume:
    rational: Fraction
    pi_power: int
    float_value: float


# -- Minkowski --------------------------------------------------------------


def _complete_to_unimodular(tail: tuple[int, ...]) -> list[list[int]]:
    """A unimodular integer matrix whose first row is the primitive vector ``tail``."""
    n = len(tail)
    # column operations R with tail @ R = e_1; then R^-1 has first row tail
    r = [[int(i == j) for j in range(n)] for i in range(n)]
    t = list(tail)
    for j in range(1, n):
        # combine columns 0 and j so that t[j] becomes 0
        a, b = t[0], t[j]
        if b == 0:
            continue
        g, x, y = _xgcd(a, b)
        # new col0 = x*c0 + y*cj, new colj = (-b/g)*c0 + (a/g)*cj  (det = 1)
        for row in r:
            c0, cj = row[0], row[j]
            row[0], row[j] = x * c0 + y * cj, -(b // g) * c0 + (a // g) * cj
        t[0], t[j] = g, 0
    if t[0] == -1:
        for row in r:
            row[0] = -row[0]
        t[0] = 1
    if t[0] != 1:
        raise ArgumentError(f"vector {tail} is not primitive")
    inv = inverse(mat(r))
    return [[int(x) for x in row] for row in inv]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _primitive_tail(v, k: int) -> bool:
    return math.gcd(*v[k:]) == 1


def minkowski_reduce(y, budget: int = 2_000_000) -> ReductionResult:
    """Minkowski-reduce a positive definite rational Y (g <= 4).

    Returns the reduced matrix R and U with R = U Y tU.
    """
    y = mat(y)
    g = len(y)
    if g > 4:
        raise UnsupportedError("Minkowski reduction is supported for g <= 4")
    if not is_positive_definite(y):
        raise ArgumentError("Y must be positive definite")
    u = identity(g)
    cur = y
    steps = 0
    for k in range(g):
        bound = cur[k][k]
        cands = [
            v
            for v in short_vectors_gram(cur, bound, budget)
            if any(v) and _primitive_tail(v, k)
        ]
        norms = {v: _qv(cur, v) for v in cands}
        best = min(norms.values())
        ek = tuple(int(i == k) for i in range(g))
        if norms.get(ek) == best:
            continue
        a = min(v for v in cands if norms[v] == best)
        tail_basis = _complete_to_unimodular(a[k:])
        v = [[int(i == j) for j in range(g)] for i in range(k)]
        v.append(list(a))
        for row in tail_basis[1:]:
            v.append([0] * k + row)
        vm = mat(v)
        cur = matmul(matmul(vm, cur), transpose(vm))
        u = matmul(vm, u)
        steps += 1
    for k in range(g - 1):
        if cur[k][k + 1] < 0:
            flip = [[int(i == j) * (-1 if i == k + 1 else 1) for j in range(g)] for i in range(g)]
            fm = mat(flip)
            cur = matmul(matmul(fm, cur), fm)
            u = matmul(fm, u)
            steps += 1
    if matmul(matmul(u, y), transpose(u)) != cur:
        raise InconsistencyError("Minkowski transform does not reproduce the reduced matrix")
    return ReductionResult(cur, u, steps)


def _qv(y, v) -> Fraction:
    n = len(v)
    return sum((y[i][j] * v[i] * v[j] for i in range(n) for j in range(n)), Fraction(0))


def default_search_bound(g: int) -> int:
    return 3 if g >= 4 else 2


def is_minkowski_reduced(y, search_bound: int | None = None) -> bool:
    """Check (M.2) exactly and (M.1) for all a with sup-norm <= search_bound."""
    y = mat(y)
    g = len(y)
    if search_bound is None:
        search_bound = default_search_bound(g)
    # necessary conditions as a cheap pre-filter (boundary points have |2 y_ij| = y_ii)
    for i in range(g):
        if i + 1 < g and y[i][i] > y[i + 1][i + 1]:
            return False
        for j in range(i + 1, g):
            if 2 * abs(y[i][j]) > y[i][i]:
                return False
    if any(y[k][k + 1] < 0 for k in range(g - 1)):
        return False
    rng = range(-search_bound, search_bound + 1)
    for a in itertools.product(rng, repeat=g):
        if not any(a):
            continue
        val = None
        for k in range(g):
            if _primitive_tail(a, k):
                if val is None:
                    val = _qv(y, a)
                if val < y[k][k]:
                    return False
    return True


# -- Siegel -----------------------------------------------------------------


def _embedded_inversion(g: int, i: int, s: int) -> Matrix:
    """The SL2 element (0 -1; 1 s) acting in coordinate i."""
    a = [[int(r == c and r != i) for c in range(g)] for r in range(g)]
    b = [[-1 if (r == c == i) else 0 for c in range(g)] for r in range(g)]
    c = [[1 if (r == cc == i) else 0 for cc in range(g)] for r in range(g)]
    d = [[(1 if r != i else s) if r == cc else 0 for cc in range(g)] for r in range(g)]
    return block(mat(a), mat(b), mat(c), mat(d))


def _embedded_genus2_inversion(g: int, i: int, j: int, s: Matrix) -> Matrix:
    """(0 -I; I S) acting on coordinates {i, j}, identity elsewhere."""
    idx = (i, j)
    a = [[int(r == c and r not in idx) for c in range(g)] for r in range(g)]
    b = [[0] * g for _ in range(g)]
    c = [[0] * g for _ in range(g)]
    d = [[int(r == cc and r not in idx) for cc in range(g)] for r in range(g)]
    for p, r in enumerate(idx):
        b[r][r] = -1
        c[r][r] = 1
        for q, cc in enumerate(idx):
            d[r][cc] = s[p][q]
    return block(mat(a), mat(b), mat(c), mat(d))


def _sym_mats(g: int, bound: int):
    cells = [(i, j) for i in range(g) for j in range(i, g)]
    for vals in itertools.product(range(-bound, bound + 1), repeat=len(cells)):
        s = [[0] * g for _ in range(g)]
        for (i, j), v in zip(cells, vals):
            s[i][j] = s[j][i] = v
        yield mat(s)


@lru_cache(maxsize=None)
def siegel_witnesses(g: int) -> tuple[Matrix, ...]:
    """Finite witness set used for (S.1), in a fixed order.

    * (0 -I; I S) for symmetric integral S with entries in [-2, 2]
      ([-1, 1] for g = 3), which contains J_g (S = 0);
    * for every primitive v in {-1, 0, 1}^g up to sign and s in {-1, 0, 1},
      the SL2 inversion with translation s acting along v (conjugated by a
      GL(g, Z) element whose first row is v);
    * for g = 3, genus-2 inversions (0 -I; I S) on each coordinate pair with
      entries of S in [-1, 1].
    """
    if g > 3:
        raise UnsupportedError("Siegel reduction is supported for g <= 3")
    out = []
    sb = 2 if g <= 2 else 1
    eye = identity(g)
    for s in _sym_mats(g, sb):
        out.append(block(zeros(g), scale(-1, eye), eye, s))
    seen = set()
    for v in itertools.product((-1, 0, 1), repeat=g):
        if not any(v):
            continue
        first = next(x for x in v if x)
        if first < 0 or v in seen:
            continue
        seen.add(v)
        w = _complete_to_unimodular(v) if g > 1 else [[1]]
        conj = gl_embed(mat(w))
        conj_inv = inverse(conj)
        for s in (-1, 0, 1):
            emb = _embedded_inversion(g, 0, s)
            out.append(matmul(conj_inv, matmul(emb, conj)))
    if g == 3:
        for i, j in itertools.combinations(range(3), 2):
            for s in _sym_mats(2, 1):
                out.append(_embedded_genus2_inversion(3, i, j, s))
    return tuple(out)


def _det_factor(gamma: Matrix, omega: SiegelPoint) -> Fraction:
    """|det(C Omega + D)|^2, which divides det Im under the action."""
    _, _, c, d = split_blocks(gamma)
    z = omega.as_complex()
    cz = _cmatmul(c, z)
    m = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(cz, d))
    return QI.lift(det(m)).abs2()


@lru_cache(maxsize=None)
def _witness_blocks(witnesses: tuple) -> tuple[np.ndarray, np.ndarray]:
    g = len(witnesses[0]) // 2
    arr = np.array([[[float(x) for x in row] for row in w] for w in witnesses])
    return arr[:, g:, :g], arr[:, g:, g:]


def _candidate_witnesses(witnesses: tuple, omega: SiegelPoint, slack: float = 1e-6):
    """Witnesses whose float |det(C Omega + D)|^2 is below 1 + slack, in order.

    The float pass only filters; the decision is always made exactly.
    """
    c, d = _witness_blocks(witnesses)
    vals = np.abs(np.linalg.det(c @ omega.to_numpy() + d)) ** 2
    return [w for w, v in zip(witnesses, vals) if v < 1 + slack]


def _translate_real_part(omega: SiegelPoint) -> tuple[SiegelPoint, Matrix]:
    g = omega.g
    b = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            x = omega.X[i][j]
            n = math.ceil(x - Fraction(1, 2))
            b[i][j] = b[j][i] = -n
    t = translation(b)
    return act(t, omega), t


def siegel_reduce(omega: SiegelPoint, max_steps: int = MAX_SIEGEL_STEPS) -> ReductionResult:
    """Reduce an exact point of H_g (g <= 3) into the Siegel domain.

    ``det_history`` records det Im after every applied move.
    """
    g = omega.g
    if g > 3:
        raise UnsupportedError("Siegel reduction is supported for g <= 3")
    witnesses = siegel_witnesses(g)
    gamma = identity(2 * g)
    cur = omega
    history = [det(cur.Y)]
    steps = 0
    while True:
        mr = minkowski_reduce(cur.Y)
        if mr.transform != identity(g):
            emb = gl_embed(mr.transform)
            cur = act(emb, cur)
            gamma = matmul(emb, gamma)
            steps += 1
            history.append(det(cur.Y))
        moved, t = _translate_real_part(cur)
        if moved != cur:
            cur = moved
            gamma = matmul(t, gamma)
            steps += 1
            history.append(det(cur.Y))
        best, best_w = Fraction(1), None
        for w in _candidate_witnesses(witnesses, cur):
            f = _det_factor(w, cur)
            if f < best:
                best, best_w = f, w
        if best_w is None:
            break
        cur = act(best_w, cur)
        gamma = matmul(best_w, gamma)
        steps += 1
        history.append(det(cur.Y))
        if steps > max_steps:
            raise InconsistencyError(f"Siegel reduction did not terminate within {max_steps} steps")
    if act(gamma, omega) != cur:
        raise InconsistencyError("accumulated transform does not reproduce the reduced point")
    return ReductionResult(cur, gamma, steps, tuple(history))


def is_siegel_reduced(omega: SiegelPoint, witnesses=None) -> bool:
    g = omega.g
    if any(abs(x) > Fraction(1, 2) for row in omega.X for x in row):
        return False
    if not is_minkowski_reduced(omega.Y):
        return False
    witnesses = siegel_witnesses(g) if witnesses is None else tuple(witnesses)
    return all(_det_factor(w, omega) >= 1 for w in _candidate_witnesses(witnesses, omega))


def in_f1_numeric(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorised membership in the classical F_1 (same boundary convention)."""
    return (np.abs(x) <= 0.5) & (x * x + y * y >= 1.0)


def monte_carlo_volume_f1(samples: int = 1_000_000, seed: int = 0) -> float:
    """Estimate vol(F_1) = int_{F_1} y^-2 dx dy by importance sampling.

    y is drawn from the density (sqrt(3)/2) y^-2 on [sqrt(3)/2, inf) and x
    uniformly from [-1/2, 1/2]; points outside F_1 are rejected.
    """
    rng = np.random.default_rng(seed)
    y0 = math.sqrt(3) / 2
    y = y0 / (1.0 - rng.random(samples))
    x = rng.random(samples) - 0.5
    inside = in_f1_numeric(x, y)
    return float(inside.mean() / y0)


def siegel_volume(g: int) -> ExactVolume:
    """2 prod_k pi^-k Gamma(k) zeta(2k) as rational * pi^power."""
    if not 1 <= g <= 8:
        raise ArgumentError("g must lie in 1..8")
    coeff = Fraction(2)
    power = 0
    for k in range(1, g + 1):
        b = sympy.bernoulli(2 * k)
        b2k = Fraction(int(b.p), int(b.q))
        # zeta(2k) = |B_2k| (2 pi)^{2k} / (2 (2k)!)
        zeta_coeff = abs(b2k) * 2 ** (2 * k) / (2 * math.factorial(2 * k))
        coeff *= math.factorial(k - 1) * zeta_coeff
        power += 2 * k - k
    return ExactVolume(coeff, power, float(coeff) * math.pi**power)
