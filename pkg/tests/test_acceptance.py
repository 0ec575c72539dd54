"""Acceptance criteria 1-11; every test prints one PASS/FAIL line with its wall time."""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

import oracles
from siegellab import geometry as G
from siegellab.elliptic import delta_expansion
from siegellab.exactmat import SiegelPoint, act, mat, matmul, random_symplectic, transpose
from siegellab.expansion import psd_keys
from siegellab.hecke import coset_reps, eigenvalue, is_weyl_invariant, satake_Q, satake_solve
from siegellab.jacobi import fourier_jacobi, is_maass_space, maass_lift, v_operator
from siegellab.lattice import D16_PLUS, E8, E8_E8
from siegellab.lfn import hecke_factor_g1, linear_factor, sk_factorization_check, spinor_factor
from siegellab.reduction import (
    is_minkowski_reduced,
    is_siegel_reduced,
    minkowski_reduce,
    monte_carlo_volume_f1,
    siegel_reduce,
    siegel_volume,
)
from siegellab.theta import (
    all_characteristics,
    chi10,
    even_characteristics,
    is_cuspidal_support,
    rep_number,
    theta_constant,
    theta_expansion,
)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            ok = ok and elapsed < limit
            with capsys.disabled():
                status = "PASS" if ok else "FAIL"
                print(f"\n[criterion {number:2d}] {status} {title} ({elapsed:.2f} s, limit {limit:g} s)")
        assert elapsed < limit, f"criterion {number} took {elapsed:.1f} s, limit {limit} s"

    return run


def test_criterion_01_volumes(criterion):
    expected = {1: (Fraction(1, 3), 1), 2: (Fraction(1, 270), 3), 3: (Fraction(1, 127575), 6), 4: (Fraction(1, 200930625), 10)}
    with criterion(1, "exact fundamental-domain volumes g = 1..4", 1):
        for g, (q, k) in expected.items():
            v = siegel_volume(g)
            assert (v.rational, v.pi_power) == (q, k)
            assert v.float_value == pytest.approx(float(q) * math.pi**k, rel=1e-12)


def test_criterion_02_monte_carlo(criterion):
    with criterion(2, "Monte Carlo volume of F1 within 1% at 1e6 samples", 30):
        est = monte_carlo_volume_f1(1_000_000, seed=0)
        assert abs(est - math.pi / 3) <= 0.01 * math.pi / 3


def _rational_point(g, rng, den=7, spread=3):
    x = [[Fraction(0)] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            x[i][j] = x[j][i] = Fraction(rng.randint(-spread * den, spread * den), den)
    a = [[Fraction(rng.randint(-4, 4), den) for _ in range(g)] for _ in range(g)]
    y = matmul(a, transpose(a))
    y = [[y[i][j] + (Fraction(1, den) if i == j else 0) for j in range(g)] for i in range(g)]
    return SiegelPoint(mat(x), mat(y))


def test_criterion_03_reduction(criterion):
    with criterion(3, "Minkowski vs brute force (100 SPD) and Siegel reduction (100 points)", 60):
        rng = random.Random(0)
        for i in range(100):
            g = 2 + i % 2
            y = oracles.random_spd_integral(g, rng)
            res = minkowski_reduce(y)
            diag = tuple(int(res.reduced[j][j]) for j in range(g))
            assert diag == oracles.min_diagonal_bruteforce(y, box=3)
            assert is_minkowski_reduced(res.reduced)
        rng = random.Random(1)
        for i in range(100):
            z = _rational_point(1 + i % 2, rng)
            res = siegel_reduce(z)
            w = res.reduced
            assert all(abs(x) <= Fraction(1, 2) for r in w.X for x in r)
            assert is_siegel_reduced(w)
            assert all(b >= a for a, b in zip(res.det_history, res.det_history[1:]))
            assert act(res.transform, z) == w


def test_criterion_04_theta(criterion):
    with criterion(4, "E8 theta coefficients, A(E8, diag(2,2)), Witt coincidence to trace 4", 300):
        f = theta_expansion(E8, 1, 6)
        assert [f.coeff((2 * n,)) for n in range(4)] == [1, 240, 2160, 6720]
        vecs = oracles.e8_vectors(6)
        assert [1] + [int(((vecs * vecs).sum(axis=1) == 8 * n).sum()) for n in (1, 2, 3)] == [1, 240, 2160, 6720]
        roots = oracles.e8_vectors(2)
        assert rep_number(E8, [[2, 0], [0, 2]]) == oracles.rep_counts_binary(roots, 2, 0, 2) == 30240
        d16, e8e8 = oracles.d16_plus_vectors_upto4(), oracles.e8e8_vectors_upto4()
        for key in psd_keys(1, 4):
            assert rep_number(E8_E8, [[key[0]]]) == rep_number(D16_PLUS, [[key[0]]])
        for a, b, c in psd_keys(2, 4):
            t = [[a, b], [b, c]]
            lhs = rep_number(E8_E8, t)
            assert lhs == rep_number(D16_PLUS, t)
            if a and c:
                assert lhs == oracles.rep_counts_binary(e8e8, a, b, c) == oracles.rep_counts_binary(d16, a, b, c)
        for a, b, c, d, e, h in psd_keys(3, 4):
            t = [[a, b, c], [b, d, e], [c, e, h]]
            assert rep_number(E8_E8, t, allow_n3=True) == rep_number(D16_PLUS, t, allow_n3=True)


def test_criterion_05_theta_constants(criterion):
    with criterion(5, "even characteristic counts, odd vanish, chi10 cuspidal and Maass at bound 6", 600):
        assert [len(even_characteristics(g)) for g in (1, 2, 3)] == [3, 10, 36]
        assert [2 ** (g - 1) * (2**g + 1) for g in (1, 2, 3)] == [3, 10, 36]
        for g in (1, 2):
            for eps in all_characteristics(g):
                if not eps.is_even:
                    assert theta_constant(eps, 4).is_zero()
        f = chi10(6)
        assert not f.is_zero()
        assert is_cuspidal_support(f)
        assert is_maass_space(f)


def test_criterion_06_hecke_calibration(criterion):
    with criterion(6, "eigenvalue(Delta, T(p)) = tau(p) for p = 2, 3, 5; theta_E8 T(2) = 9", 60):
        tau = oracles.tau_eta(5)
        assert tau == [0] + [int(x) for x in oracles.tau_eisenstein(5)[1:]]
        assert (tau[2], tau[3], tau[5]) == (-24, 252, 4830)
        f = delta_expansion(30)
        for p in (2, 3, 5):
            assert eigenvalue(f, "T(p)", p) == tau[p]
        assert eigenvalue(theta_expansion(E8, 1, 8), "T(p)", 2) == 9


def test_criterion_07_flagship(criterion):
    with criterion(7, "eigenvalue(chi10, T(2)) = 240 = a_f(2) + 2^9 + 2^8", 600):
        lam = eigenvalue(chi10(8), "T(p)", 2)
        a_f = oracles.e6_delta(2)[2]
        assert a_f == -528
        assert lam == 240 == a_f + 2**9 + 2**8


def test_criterion_08_satake_spinor(criterion, chi10_20):
    with criterion(8, "spinor factor of chi10 and Saito-Kurokawa check at p = 2, 3", 600):
        for p in (2, 3):
            ev = [eigenvalue(chi10_20, op, p) for op in ("T(p)", "T1(p2)", "T2(p2)")]
            sd = satake_solve(2, 10, p, *ev)
            if p == 2:
                rhs = linear_factor(2, 2**9) * linear_factor(2, 2**8) * hecke_factor_g1(-528, 18, 2)
                assert spinor_factor(sd) == rhs
            assert sk_factorization_check(sd, oracles.e6_delta(p)[p], 10)


def test_criterion_09_lift_roundtrip(criterion, chi10_8, chi10_20):
    with criterion(9, "V(phi_1(chi10)) = chi10 to bound 6, V_1 = id, phi_1(V phi) = phi", 120):
        phi = fourier_jacobi(chi10_8, 1)
        lifted = maass_lift(phi, 6)
        assert lifted == chi10_8.truncate(6)
        for form in (phi, fourier_jacobi(chi10_20, 1)):
            assert v_operator(form, 1) == form
        assert fourier_jacobi(lifted, 1) == phi.truncate(2)
        big = fourier_jacobi(chi10_20, 1)
        assert fourier_jacobi(maass_lift(big, 12), 1) == big.truncate(5)


def test_criterion_10_satake_map(criterion):
    with criterion(10, "Weyl invariance of satake_Q for g = 1, 2, p = 2, 3; T_g(p^2) monomial", 120):
        for p in (2, 3):
            assert is_weyl_invariant(satake_Q(coset_reps("T(p)", p, 1)))
            assert is_weyl_invariant(satake_Q(coset_reps("T1(p2)", p, 1)))
            for op in ("T(p)", "T0(p2)", "T1(p2)", "T2(p2)"):
                assert is_weyl_invariant(satake_Q(coset_reps(op, p, 2)))
            for g in (1, 2):
                q = satake_Q(coset_reps(f"T{g}(p2)", p, g)).as_dict()
                expected_exps = (2,) + (1,) * g
                assert q == {expected_exps: Fraction(1, p ** (g * (g + 1) // 2))}


def _random_point(g, rng):
    a = rng.normal(size=(g, g))
    x = rng.normal(size=(g, g))
    return (x + x.T) / 2 + 1j * (a @ a.T + 0.5 * np.eye(g))


def _random_disk_point(g, rng):
    a = rng.normal(size=(g, g)) + 1j * rng.normal(size=(g, g))
    w = (a + a.T) / 2
    return w / (1.5 * np.linalg.norm(w, 2))


def test_criterion_11_geometry(criterion):
    with criterion(11, "distance invariance, log t closed form, Cayley compatibility, torus orthonormality", 120):
        rng = np.random.default_rng(2024)
        for seed in range(100):
            g = 1 + seed % 3
            m = np.array(random_symplectic(g, random.Random(seed)), dtype=float)
            p, q = _random_point(g, rng), _random_point(g, rng)
            d = G.geodesic_distance(p, q)
            assert G.geodesic_distance(G.act(m, p), G.act(m, q)) == pytest.approx(d, rel=1e-9)
        for t in (1.5, 2.0, 7.0, 100.0):
            assert G.geodesic_distance(np.array([[1j]]), np.array([[1j * t]])) == pytest.approx(math.log(t), rel=1e-10)
        for seed in range(100):
            g = 1 + seed % 2
            m = np.array(random_symplectic(g, random.Random(1000 + seed)), dtype=float)
            w = _random_disk_point(g, rng)
            lhs = G.act(m, G.cayley(w))
            rhs = G.cayley(G.disk_act(G.disk_transform(m), w))
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(lhs)))
        omega = np.array([[0.3 + 1.1j]])
        idx = [G.TorusCharIndex((a,), (b,)) for a in (-1, 0, 1) for b in (-1, 0, 1)]
        for i, u in enumerate(idx):
            for j, v in enumerate(idx):
                val = G.torus_inner_product(omega, u, v, grid_n=64)
                assert abs(val - (1 if i == j else 0)) < 1e-6
