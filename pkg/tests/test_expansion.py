from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegellab.errors import ArgumentError, TruncationError
from siegellab.expansion import (
    FourierExpansion,
    constant_expansion,
    is_psd_key,
    key_det,
    key_trace,
    multiply,
    psd_keys,
    reduce_binary,
    zero_expansion,
)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@st.composite
def expansions(draw, genus=2, bound=6, weight=10):
    keys = psd_keys(genus, bound)
    chosen = draw(st.lists(st.sampled_from(keys), max_size=12, unique=True))
    return FourierExpansion(genus, weight, bound, {k: draw(fracs) for k in chosen})


@st.composite
def psd_binary(draw):
    a = draw(st.integers(0, 40))
    c = draw(st.integers(0, 40))
    r = int((a * c) ** 0.5)
    b = draw(st.integers(-r, r))
    return a, b, c


@given(expansions())
def test_json_roundtrip(f):
    text = f.to_json()
    assert FourierExpansion.from_json(text) == f
    assert FourierExpansion.from_json(text).to_json() == text


def test_json_format():
    f = FourierExpansion(2, 10, 6, {(2, 1, 2): Fraction(-1, 4), (2, 0, 2): 1})
    obj = f.to_json_obj()
    assert obj["weight"] == "10" and obj["trunc"] == {"trace": 6} and obj["scale"] == 1
    assert [e["t"] for e in obj["coeffs"]] == [[2, 0, 2], [2, 1, 2]]
    assert obj["coeffs"][1]["v"] == "-1/4"
    json.dumps(obj)


def test_malformed_json():
    with pytest.raises(ArgumentError):
        FourierExpansion.from_json('{"genus": 2}')


@given(psd_binary())
def test_reduce_binary(abc):
    a, b, c = abc
    (ra, rb, rc), sign = reduce_binary(a, b, c)
    assert 0 <= 2 * rb <= ra <= rc
    assert ra * rc - rb * rb == a * c - b * b
    assert ra + rc <= a + c
    assert sign in (1, -1)


def test_reduce_binary_sign():
    assert reduce_binary(2, -1, 2) == ((2, 1, 2), -1)
    assert reduce_binary(4, 0, 2) == ((2, 0, 4), -1)
    assert reduce_binary(2, 2, 8) == ((2, 0, 6), 1)


def test_psd_keys():
    keys = psd_keys(2, 4)
    assert (2, 1, 2) in keys and (2, 2, 2) in keys and (2, 3, 2) not in keys
    assert all(is_psd_key(k, 2) and key_trace(k, 2) <= 4 for k in keys)
    assert len(psd_keys(1, 6)) == 4
    k3 = psd_keys(3, 4)
    assert all(key_det(k, 3) >= 0 for k in k3)


def test_truncation_and_bounds():
    f = FourierExpansion(1, 4, 4, {(0,): 1, (2,): 240, (4,): 2160})
    with pytest.raises(TruncationError) as err:
        f.coeff((6,))
    assert err.value.required_bound == 6
    with pytest.raises(TruncationError):
        FourierExpansion(1, 4, 2, {(4,): 1})
    g = FourierExpansion(1, 4, 2, {(0,): 1})
    assert (f + g).bound == 2
    assert (f - f).is_zero()


@given(expansions(bound=4, weight=2), expansions(bound=4, weight=3), expansions(bound=4, weight=5))
def test_multiply_commutative_associative(a, b, c):
    assert multiply([a, b]) == multiply([b, a])
    assert multiply([multiply([a, b]), c]) == multiply([a, multiply([b, c])]) == multiply([a, b, c])


@given(expansions(bound=4, weight=2))
def test_multiply_by_one(a):
    one = constant_expansion(2, 1, bound=4)
    assert (a * one).coeffs == a.coeffs


def test_coeff_gl():
    f = FourierExpansion(2, 10, 4, {(2, 1, 2): 3})
    assert f.coeff_gl((2, -1, 2)) == 3
    assert f.coeff_gl((2, 3, 6)) == 3  # GL-equivalent, trace 8
    odd = FourierExpansion(2, 35, 4, {(2, 1, 2): 3})
    assert odd.coeff_gl((2, -1, 2)) == -3


def test_rescaled():
    f = FourierExpansion(1, 1, 2, {(0,): 1, (8,): 2}, scale=4)
    assert f.rescaled(1) == FourierExpansion(1, 1, 2, {(0,): 1, (2,): 2})
    with pytest.raises(ArgumentError):
        FourierExpansion(1, 1, 2, {(4,): 1}, scale=4).rescaled(1)


def test_zero_expansion():
    assert zero_expansion(2, 10, 6).is_zero()
