import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_tensor
from hypercross import _jit
from hypercross.modulus import power
from hypercross.norms import (LorentzParams, besov_functional, exponents, lorentz_norm_1d, mixed_lebesgue_norm,
                              mixed_lorentz_norm, rearrangement, sequence_norm, tensor_lebesgue_norm,
                              tensor_lorentz_norm)
from hypercross.spectral import CoefficientTensor, SampleGrid
from hypercross.witnesses import block_exponential, dirichlet_kernel

TWO_PI = 2 * math.pi


def test_rearrangement_sorts_descending():
    vals, h = rearrangement(np.array([3.0, 1.0, 2.0]))
    assert list(vals) == [3.0, 2.0, 1.0]
    assert h == pytest.approx(TWO_PI / 3)


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
def test_rearrangement_preserves_distribution(xs):
    vals, _ = rearrangement(np.array(xs))
    assert np.allclose(np.sort(np.abs(xs)), np.sort(vals))
    assert np.all(np.diff(vals) <= 0)


@pytest.mark.parametrize("p,theta", [(2, 1.5), (3, 3), (1.5, 4), (4, 1)])
def test_lorentz_of_constant(p, theta):
    c = 2.5
    expect = c * (p / theta) ** (1 / theta) * TWO_PI ** (1 / p)
    assert lorentz_norm_1d(np.full(64, c), p, theta) == pytest.approx(expect, rel=1e-12)


def test_lorentz_constant_against_quadrature():
    # midpoint rule on the defining integral of a constant
    p, theta, c = 2.0, 1.5, 1.0
    t = (np.arange(10**6) + 0.5) * TWO_PI / 10**6
    quad = (np.sum(c**theta * t ** (theta / p - 1)) * TWO_PI / 10**6) ** (1 / theta)
    assert lorentz_norm_1d(np.ones(16), p, theta) == pytest.approx(quad, rel=1e-3)


def test_lorentz_of_indicator():
    p, theta = 2.0, 3.0
    x = np.zeros(64)
    x[:16] = 1.0
    expect = (p / theta) ** (1 / theta) * (TWO_PI * 0.25) ** (1 / p)
    assert lorentz_norm_1d(x, p, theta) == pytest.approx(expect, rel=1e-12)


def test_lorentz_equals_lebesgue_when_p_equals_theta(rng):
    x = rng.standard_normal(128)
    direct = (np.sum(np.abs(x) ** 3) * TWO_PI / 128) ** (1 / 3)
    assert lorentz_norm_1d(x, 3, 3) == pytest.approx(direct, rel=1e-12)


def test_tensor_product_multiplicative():
    x = 2 * np.pi * np.arange(64) / 64
    g, h = np.abs(np.cos(x)), np.abs(np.sin(x)) + 0.1
    prod = SampleGrid(np.outer(g, h))
    p, th = (2.0, 3.0), (1.5, 4.0)
    lhs = mixed_lorentz_norm(prod, p, th)
    rhs = lorentz_norm_1d(g, p[0], th[0]) * lorentz_norm_1d(h, p[1], th[1])
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_mixed_lorentz_matches_lebesgue(rng):
    g = SampleGrid(rng.standard_normal((32, 16)))
    p = (2.0, 3.0)
    assert mixed_lorentz_norm(g, p, p) == pytest.approx(mixed_lebesgue_norm(g, p), rel=1e-10)


def test_zero_grid_norm():
    assert mixed_lorentz_norm(SampleGrid(np.zeros((8, 8))), (2, 2), (1, 1)) == 0.0


def test_mixed_lebesgue_closed_forms(rng):
    p = (2.0, 4.0)
    assert mixed_lebesgue_norm(SampleGrid(np.full((8, 8), 3.0)), p) == pytest.approx(
        3.0 * TWO_PI ** (1 / 2 + 1 / 4))
    wave = CoefficientTensor(2, {(1, -2): 1.0})
    assert tensor_lebesgue_norm(wave, p) == pytest.approx(TWO_PI ** 0.75)
    x = rng.standard_normal((16, 16))
    direct = (np.sum(np.abs(x) ** 3) * (TWO_PI / 16) ** 2) ** (1 / 3)
    assert mixed_lebesgue_norm(SampleGrid(x), (3, 3)) == pytest.approx(direct, rel=1e-12)


def test_mixed_norm_axis_order():
    # x1 is integrated first: swapping the exponents changes the answer
    g = SampleGrid(np.outer(np.linspace(0.1, 2, 16), np.ones(16)) + np.eye(16))
    assert mixed_lebesgue_norm(g, (1.5, 4.0)) != pytest.approx(mixed_lebesgue_norm(g, (4.0, 1.5)))


def test_sequence_norm_examples():
    assert sequence_norm({(3, 4): -2.0}, (1, 1)) == pytest.approx(2.0)
    ones = {(i, j): 1.0 for i in range(5) for j in range(5)}
    assert sequence_norm(ones, (1, 1)) == pytest.approx(25.0)
    assert sequence_norm(ones, (math.inf, 2)) == pytest.approx(5**0.5)
    assert sequence_norm({}, (2, 2)) == 0.0


def test_sequence_norm_extreme_scales():
    a = {(0,): 1e-300, (1,): 1e-300}
    assert sequence_norm(a, (2,)) == pytest.approx(1e-300 * 2**0.5)


def test_besov_single_block_is_one():
    omega = power(1, 1)
    s = (2, 3)
    b = block_exponential(s)
    scale = 2.0 ** -5 / tensor_lorentz_norm(b, (2, 2), (2, 2))
    assert besov_functional(b * scale, omega, (2, 2), (2, 2), (2, 2)) == pytest.approx(1.0, rel=1e-10)


def test_besov_homogeneous(rng):
    c = random_tensor(rng, 2, 6, nonzero=True)
    args = (power(1, 1), (2, 2), (1.5, 1.5), (2, 2))
    assert besov_functional(c * -3.0, *args) == pytest.approx(3.0 * besov_functional(c, *args), rel=1e-10)
    assert besov_functional(CoefficientTensor.zeros(2), *args) == 0.0


def test_exponent_validation():
    with pytest.raises(ValueError):
        exponents((1.0, 2.0), "p")
    with pytest.raises(ValueError):
        exponents((2.0,), "p", dim=2)
    assert exponents((math.inf,), "tau") == (math.inf,)
    with pytest.raises(ValueError):
        LorentzParams(2.0, math.inf)


def test_lebesgue_exact_under_refinement():
    c = dirichlet_kernel(16)
    a, b = tensor_lebesgue_norm(c, (2,)), tensor_lebesgue_norm(c, (2,), oversample=2)
    assert abs(a / b - 1) < 1e-12


def test_lorentz_refinement_converges():
    c = dirichlet_kernel(16)
    v = [tensor_lorentz_norm(c, (2,), (1.5,), ov) for ov in (1, 2, 4, 8)]
    steps = [abs(v[i + 1] / v[i] - 1) for i in range(3)]
    assert steps[0] > steps[1] > steps[2]
    assert steps[2] < 1e-4


exponent = st.one_of(st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.5, 8.0]), st.floats(1.05, 9.0))


@pytest.mark.skipif(not _jit.HAVE_NUMBA, reason="numba not installed")
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), exponent, exponent, st.integers(0, 2**31))
def test_jit_matches_numpy(nf, length, p, theta, seed):
    x = np.random.default_rng(seed).random((nf, length))
    w = _jit.lorentz_weights(length, p, theta)
    assert np.allclose(_jit._lorentz_reduce_jit(x, w, theta), _jit._lorentz_reduce_numpy(x, w, theta), rtol=1e-12)
    cell = 2 * np.pi / length
    assert np.allclose(_jit._lebesgue_reduce_jit(x, cell, p), _jit._lebesgue_reduce_numpy(x, cell, p), rtol=1e-12)
    for tau in (p, math.inf):
        assert np.allclose(_jit._lp_reduce_jit(x, tau), _jit._lp_reduce_numpy(x, tau), rtol=1e-12)


def test_exact_power_dispatch():
    assert _jit._exact_power(1.5) and _jit._exact_power(3.0)
    assert not _jit._exact_power(2.7) and not _jit._exact_power(math.inf) and not _jit._exact_power(12.0)


def test_env_flag_selects_numpy_backend():
    import os
    import subprocess
    import sys
    env = dict(os.environ, HYPERCROSS_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", "from hypercross import _jit; print(_jit.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
