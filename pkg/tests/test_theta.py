from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import d16_plus_vectors_upto4, e8_vectors, e8e8_vectors_upto4, random_spd_integral, rep_counts_binary
from siegellab.elliptic import delta_expansion
from siegellab.errors import ResourceError, TruncationError, UnsupportedError
from siegellab.expansion import multiply, psd_keys
from siegellab.jacobi import is_maass_space
from siegellab.lattice import D16_PLUS, E8, E8_E8, short_vectors_gram
from siegellab.theta import (
    CHI10_MIN_COEFF,
    ThetaCharacteristic,
    all_characteristics,
    chi10,
    cusp_product_g3,
    eisenstein_witt,
    even_characteristics,
    is_cuspidal_support,
    rep_number,
    siegel_phi,
    theta_constant,
    theta_expansion,
)


@given(st.integers(0, 10_000), st.integers(2, 3), st.integers(1, 12))
def test_short_vectors_against_box(seed, g, max_norm):
    gram = random_spd_integral(g, random.Random(seed), bound=4)
    inv = np.linalg.inv(np.array(gram, dtype=float))
    r = [math.isqrt(int(max_norm * inv[i, i]) + 1) + 1 for i in range(g)]
    box = [
        v
        for v in itertools.product(*[range(-x, x + 1) for x in r])
        if int(np.dot(np.dot(v, gram), v)) <= max_norm
    ]
    assert short_vectors_gram(gram, max_norm) == sorted(box)


def test_short_vectors_budget():
    with pytest.raises(ResourceError):
        short_vectors_gram(E8.gram, 6, budget=100)


def test_e8_genus1_coefficients():
    f = theta_expansion(E8, 1, 6)
    oracle = np.bincount((e8_vectors(6) ** 2).sum(axis=1) // 4)
    assert [f.coeff((2 * n,)) for n in range(4)] == [1, 240, 2160, 6720]
    assert [f.coeff((2 * n,)) for n in range(1, 4)] == [int(oracle[2 * n]) for n in range(1, 4)]


def test_e8_genus2_rep_numbers():
    roots = e8_vectors(2)
    assert rep_number(E8, [[2, 0], [0, 2]]) == rep_counts_binary(roots, 2, 0, 2) == 30240
    assert rep_number(E8, [[2, 1], [1, 2]]) == rep_counts_binary(roots, 2, 1, 2) == 13440
    assert rep_number(E8, [[2, 0], [0, 4]]) == rep_counts_binary(e8_vectors(4), 2, 0, 4)


def test_witt_coincidence_trace4():
    d16, e8e8 = d16_plus_vectors_upto4(), e8e8_vectors_upto4()
    for n in (0, 2, 4):
        assert rep_number(E8_E8, [[n]]) == rep_number(D16_PLUS, [[n]])
    for key in psd_keys(2, 4):
        a, b, c = key
        t = [[a, b], [b, c]]
        lhs, rhs = rep_number(E8_E8, t), rep_number(D16_PLUS, t)
        assert lhs == rhs
        if a and c:
            assert lhs == rep_counts_binary(e8e8, a, b, c) == rep_counts_binary(d16, a, b, c)


def test_rep_number_n3_gl_invariant():
    t = np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
    u = np.array([[1, 0, 0], [0, 1, 0], [1, 1, -1]])
    t2 = u @ t @ u.T
    n = rep_number(E8, t.tolist(), allow_n3=True)
    assert n > 0
    assert n == rep_number(E8, t2.tolist(), allow_n3=True)
    with pytest.raises(UnsupportedError):
        rep_number(E8, t.tolist())


def test_theta_expansion_gl_invariance():
    f = theta_expansion(E8, 2, 6)
    for key, v in f.items():
        a, b, c = key
        assert f.coeff((c, b, a)) == v
        assert f.coeff((a, -b, c)) == v


def test_siegel_phi_of_theta():
    assert siegel_phi(theta_expansion(E8, 2, 6)) == theta_expansion(E8, 1, 6)


def test_eisenstein_witt():
    assert eisenstein_witt(4, 2, 4) == theta_expansion(E8, 2, 4)
    with pytest.raises(UnsupportedError):
        eisenstein_witt(6, 2, 4)


def test_characteristic_counts():
    for g, n in ((1, 3), (2, 10), (3, 36)):
        assert len(even_characteristics(g)) == n == 2 ** (g - 1) * (2**g + 1)
        assert len(all_characteristics(g)) == 4**g


def test_odd_characteristics_vanish():
    for g in (1, 2):
        for eps in all_characteristics(g):
            if not eps.is_even:
                assert theta_constant(eps, 4).is_zero()


def test_g1_even_triple_gives_delta():
    # the odd characteristic (1, 1) is excluded; the even triple gives 2^8 Delta
    assert not ThetaCharacteristic((1,), (1,)).is_even
    chars = even_characteristics(1)
    assert {(e.eps1, e.eps2) for e in chars} == {((0,), (0,)), ((0,), (1,)), ((1,), (0,))}
    factors = [theta_constant(e, 12) for e in chars for _ in range(8)]
    prod = multiply(factors, 12).rescaled(1)
    assert prod.coeffs == delta_expansion(6).scaled(256).coeffs


def test_chi10_basics(chi10_8):
    f = chi10_8
    assert f.weight == 10
    assert is_cuspidal_support(f)
    assert f.coeff((2, 1, 2)) == CHI10_MIN_COEFF == Fraction(-1, 4)
    assert f.coeff((2, 0, 2)) == Fraction(1, 2)
    # Maass relation instance a(2,2,2) = a(4,2,1) + 2^9 a(1,1,1) in (n, r, m) coordinates
    assert f.coeff((4, 2, 4)) == f.coeff_gl((8, 2, 2)) + 2**9 * f.coeff((2, 1, 2)) == -60
    assert all(4 * v == int(4 * v) for v in f.coeffs.values())


def test_chi10_bound6_maass_and_cuspidal():
    f = chi10(6)
    assert is_cuspidal_support(f)
    assert is_maass_space(f)


def test_cusp_product_g3():
    f = cusp_product_g3(12)
    assert f.coeffs
    assert all(sum(k[i] for i in (0, 3, 5)) == 12 for k in f.coeffs)
    assert is_cuspidal_support(f)
    assert cusp_product_g3(10).is_zero()
    with pytest.raises(ResourceError):
        cusp_product_g3(14)


def test_truncation_raises():
    f = theta_expansion(E8, 1, 4)
    with pytest.raises(TruncationError):
        f.coeff((6,))
