import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypercross.index_sets import (characteristic, format_levels, gamma_perp_weighted_norm, gamma_set,
                                   index_family, kappa_set, lambda_prime_and_cubes, lambda_set, q_set)
from hypercross.modulus import at_dyadic, power, power_log
from hypercross.norms import sequence_norm
from hypercross.spectral import block_of


def test_gamma_set_small():
    g = gamma_set(power(1, 1), 4)
    assert g == {s for s in itertools.product(range(3), repeat=2) if sum(s) <= 2}
    assert len(g) == 6
    assert gamma_set(power(1, 1), 1) == {(0, 0)}


@given(st.integers(0, 10), st.integers(0, 4))
def test_gamma_monotone(a, b):
    om = power(1, 2)
    assert gamma_set(om, 2**a) <= gamma_set(om, 2 ** (a + b))


def test_lambda_set_small():
    lam = lambda_set(power(1, 1, order=1), 4)
    assert lam == {(0, 3), (1, 2), (2, 1), (3, 0)}


@pytest.mark.parametrize("n", range(1, 12))
def test_lambda_diagonal_count(n):
    assert len(lambda_set(power(1, 1, order=1), 2**n)) == n + 2


@pytest.mark.parametrize("om", [power(1, 2, order=2), power_log((1, 1.5), (0.5, 0), order=2)])
def test_lambda_sandwich(om):
    N = 300.0
    lam = lambda_set(om, N)
    assert lam
    for s in lam:
        v = at_dyadic(om, s)
        assert 1 / (2**om.order * N) <= v < 1 / N
    brute = {s for s in itertools.product(range(40), repeat=2)
             if 1 / (2**om.order * N) <= at_dyadic(om, s) < 1 / N}
    assert lam == brute


def test_q_set():
    Q = q_set(power(1, 1), 4)
    assert set(Q.materialize()) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert (1, 1) in Q and (2, 1) not in Q and (0, 1) not in Q
    assert len(q_set(power(1, 1), 1)) == 0
    assert q_set(power(1, 1), 8).issubset(q_set(power(1, 1), 64))


def test_q_membership_matches_blocks():
    om = power(1, 2)
    Q = q_set(om, 256)
    G = gamma_set(om, 256)
    for k in itertools.product(range(-20, 21), repeat=2):
        expect = all(k) and block_of(k) in G
        assert (k in Q) == bool(expect)


def test_index_family_consistent():
    fam = index_family(power(1, 1), 64)
    assert fam.gamma_levels == gamma_set(power(1, 1), 64)
    assert fam.lambda_levels == lambda_set(power(1, 1), 64)


def test_kappa_small():
    assert set(kappa_set(3, (1, 1))) == {(0, 3), (1, 2), (2, 1), (3, 0)}
    k = kappa_set(Fraction(5, 2), (Fraction(1), Fraction(1, 2)))
    assert set(k) == {(s1, s2) for s1 in range(3) for s2 in range(6) if Fraction(s1) + Fraction(s2, 2) == Fraction(5, 2)}


@pytest.mark.parametrize("tau2", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 7, 20])
def test_kappa_characteristic_closed_form(n, tau2):
    v = sequence_norm(characteristic(kappa_set(n, (1, 1))), (2, tau2))
    assert v == pytest.approx((n + 1) ** (1 / tau2), rel=1e-12)


def test_lambda_prime_cubes():
    cu = lambda_prime_and_cubes(power(1, 1), 2**12, 1)
    assert len(cu.lambda_bar) == cu.v**2
    assert cu.v == math.floor(len(cu.lambda_prime) ** 0.5)
    assert list(cu.lambda_bar) == sorted(cu.lambda_bar)
    grid = {-math.pi + math.pi * (2 * i + 1) / cu.v for i in range(cu.v)}
    assert all(set(c) <= grid for c in cu.centers.values())
    assert len(set(cu.centers.values())) == cu.v**2


@pytest.mark.parametrize("n", [8, 11, 14])
def test_lambda_prime_band(n):
    size = len(lambda_prime_and_cubes(power(1, 1), 2**n, 1).lambda_prime)
    assert 1 / 8 <= size / n <= 8


def test_gamma_perp_geometric_oracle():
    # power(2,2), beta = 0, theta = (1,1): sum over the diagonals k = s1+s2 >= K of (k+1) 4^-k
    n = 7
    K = n // 2 + 1
    x = 0.25
    expect = x**K * ((K + 1) / (1 - x) + x / (1 - x) ** 2)
    got = gamma_perp_weighted_norm(power(2, 2, order=3), 2**n, (0, 0), (1, 1))
    assert got == pytest.approx(expect, rel=1e-9)


def test_gamma_perp_tolerance_contract():
    om = power(1, 1)
    a = gamma_perp_weighted_norm(om, 64, (0.5, 0.5), (2, 2), tolerance=1e-6)
    b = gamma_perp_weighted_norm(om, 64, (0.5, 0.5), (2, 2), tolerance=5e-7)
    assert abs(a - b) <= 1e-6 * abs(b)


def test_gamma_perp_divergent_rejected():
    with pytest.raises(ValueError):
        gamma_perp_weighted_norm(power(1, 1), 64, (1.5, 0), (2, 2))


def test_format_levels():
    assert format_levels([(1, 0), (0, 2)]) == "0 2\n1 0\n"
