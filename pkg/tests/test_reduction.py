from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import min_diagonal_bruteforce, random_spd_integral
from siegellab.errors import ArgumentError, UnsupportedError
from siegellab.exactmat import SiegelPoint, act, det, identity, is_integral_symplectic, mat, matmul, transpose
from siegellab.reduction import (
    in_f1_numeric,
    is_minkowski_reduced,
    is_siegel_reduced,
    minkowski_reduce,
    monte_carlo_volume_f1,
    siegel_reduce,
    siegel_volume,
    siegel_witnesses,
)


def random_point(g, rng, den=7, spread=3):
    x = [[Fraction(0)] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            x[i][j] = x[j][i] = Fraction(rng.randint(-spread * den, spread * den), den)
    while True:
        a = [[Fraction(rng.randint(-4, 4), den) for _ in range(g)] for _ in range(g)]
        y = matmul(a, transpose(a))
        y = [[y[i][j] + (Fraction(1, den) if i == j else 0) for j in range(g)] for i in range(g)]
        return SiegelPoint(mat(x), mat(y))


def test_minkowski_examples():
    res = minkowski_reduce([[2, 1], [1, 2]])
    assert res.reduced == mat([[2, 1], [1, 2]])
    res = minkowski_reduce([[1, 0], [0, 1]])
    assert res.transform == identity(2)
    res = minkowski_reduce([[5, 3], [3, 2]])
    assert [res.reduced[i][i] for i in range(2)] == [1, 1]


@pytest.mark.parametrize("g", [2, 3])
def test_minkowski_against_bruteforce(g):
    rng = random.Random(100 + g)
    for _ in range(25):
        y = random_spd_integral(g, rng)
        res = minkowski_reduce(y)
        assert tuple(res.reduced[i][i] for i in range(g)) == min_diagonal_bruteforce(y)


@given(st.integers(0, 10_000), st.integers(2, 4))
def test_minkowski_output_is_reduced_and_equivalent(seed, g):
    rng = random.Random(seed)
    y = random_spd_integral(g, rng, bound=4)
    res = minkowski_reduce(y)
    assert abs(det(res.transform)) == 1
    assert matmul(matmul(res.transform, mat(y)), transpose(res.transform)) == res.reduced
    assert is_minkowski_reduced(res.reduced)


def test_minkowski_rejects():
    with pytest.raises(ArgumentError):
        minkowski_reduce([[1, 2], [2, 1]])
    with pytest.raises(UnsupportedError):
        minkowski_reduce(identity(5))


def test_is_minkowski_reduced_examples():
    assert is_minkowski_reduced([[2, 1], [1, 2]])
    assert not is_minkowski_reduced([[2, -1], [-1, 2]])
    assert not is_minkowski_reduced([[3, 0], [0, 2]])


def test_siegel_g1_example():
    z = SiegelPoint(mat([[Fraction(3, 10)]]), mat([[Fraction(2, 5)]]))
    res = siegel_reduce(z)
    assert (res.reduced.X, res.reduced.Y) == (mat([[Fraction(-1, 5)]]), mat([[Fraction(8, 5)]]))
    assert act(res.transform, z) == res.reduced
    assert is_integral_symplectic(res.transform)


@given(st.integers(0, 10_000), st.integers(1, 2))
def test_siegel_reduce_properties(seed, g):
    z = random_point(g, random.Random(seed))
    res = siegel_reduce(z)
    w = res.reduced
    assert all(abs(x) <= Fraction(1, 2) for r in w.X for x in r)
    assert is_minkowski_reduced(w.Y)
    assert all(b >= a for a, b in zip(res.det_history, res.det_history[1:]))
    assert act(res.transform, z) == w
    assert is_siegel_reduced(w)


def test_siegel_reduce_g3_smoke():
    z = random_point(3, random.Random(5), den=5, spread=1)
    res = siegel_reduce(z)
    assert is_siegel_reduced(res.reduced)


def test_g1_witnesses_cover_classical_domain():
    # in genus 1 the witness test agrees with |tau| >= 1 on a grid
    ws = siegel_witnesses(1)
    for a in range(-5, 6):
        for b in range(1, 12):
            z = SiegelPoint(mat([[Fraction(a, 10)]]), mat([[Fraction(b, 10)]]))
            assert is_siegel_reduced(z, ws) == (Fraction(a, 10) ** 2 + Fraction(b, 10) ** 2 >= 1)


def test_witness_counts():
    assert [len(siegel_witnesses(g)) for g in (1, 2)] == [8, 137]


def test_volumes_exact():
    expect = {1: (Fraction(1, 3), 1), 2: (Fraction(1, 270), 3), 3: (Fraction(1, 127575), 6), 4: (Fraction(1, 200930625), 10)}
    for g, (r, k) in expect.items():
        v = siegel_volume(g)
        assert (v.rational, v.pi_power) == (r, k)
        assert v.float_value == pytest.approx(float(r) * math.pi**k)


def test_monte_carlo_small_and_cross_check():
    est = monte_carlo_volume_f1(200_000, seed=1)
    assert abs(est - math.pi / 3) < 0.03
    # the vectorised predicate agrees with the exact witness test
    import numpy as np

    rng = np.random.default_rng(0)
    xs = rng.integers(-60, 61, 200)
    ys = rng.integers(1, 150, 200)
    ws = siegel_witnesses(1)
    for x, y in zip(xs, ys):
        z = SiegelPoint(mat([[Fraction(int(x), 100)]]), mat([[Fraction(int(y), 100)]]))
        assert bool(in_f1_numeric(np.array(x / 100), np.array(y / 100))) == is_siegel_reduced(z, ws)
