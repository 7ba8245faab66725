import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_tensor
from hypercross.modulus import power
from hypercross.index_sets import q_set
from hypercross.spectral import (AliasingError, CoefficientTensor, SampleGrid, analyze, block_decomposition,
                                 block_of, complement_sum, default_grid_sizes, delta_block, dyadic_block,
                                 partial_sum, step_hyperbolic_sum, synthesize)


def test_dyadic_block_small_cases():
    assert dyadic_block((1,)) == {(-1,), (1,)}
    assert dyadic_block((2,)) == {(-3,), (-2,), (2,), (3,)}
    assert dyadic_block((1, 0)) == set()


@settings(deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=3))
def test_block_contents_match_brute_force(s):
    w = 2 ** max(s) + 1
    brute = {k for k in itertools.product(range(-w, w + 1), repeat=len(s))
             if all(2 ** (sj - 1) <= abs(kj) < 2**sj for kj, sj in zip(k, s))}
    assert dyadic_block(s) == brute


def test_block_of():
    assert block_of((1, -1)) == (1, 1)
    assert block_of((4, 7)) == (3, 3)
    with pytest.raises(ValueError):
        block_of((0, 3))


@given(st.lists(st.integers(-300, 300).filter(bool), min_size=1, max_size=4))
def test_block_of_inverts_dyadic_block(k):
    s = block_of(k)
    assert all(2 ** (sj - 1) <= abs(kj) < 2**sj for kj, sj in zip(k, s))


def test_synthesize_single_mode():
    g = synthesize(CoefficientTensor(1, {(1,): 1.0}), [8])
    assert np.allclose(g.values, np.exp(1j * 2 * np.pi * np.arange(8) / 8))


def test_synthesize_empty_tensor():
    g = synthesize(CoefficientTensor.zeros(2), [4, 4])
    assert g.values.shape == (4, 4) and not g.values.any()


def test_round_trip(rng):
    c = random_tensor(rng, 2, 3)
    back = analyze(synthesize(c, [8, 8]), c.maxfreq)
    assert back.allclose(c, rtol=1e-10)


def test_analyze_constant_and_plane_wave():
    a = analyze(SampleGrid(np.ones((8, 8))), (2, 2))
    assert a[(0, 0)] == pytest.approx(1.0)
    assert all(abs(v) < 1e-14 for k, v in a.items() if k != (0, 0))
    x = 2 * np.pi * np.arange(8) / 8
    g = np.exp(1j * (2 * x[:, None] + x[None, :]))
    a = analyze(SampleGrid(g), (3, 3))
    assert a[(2, 1)] == pytest.approx(1.0)


def test_analyze_linear(rng):
    g, h = rng.standard_normal((2, 16, 16))
    lhs = analyze(SampleGrid(2.0 * g - 3.0 * h), (7, 7))
    rhs = analyze(SampleGrid(g), (7, 7)) * 2.0 - analyze(SampleGrid(h), (7, 7)) * 3.0
    assert lhs.allclose(rhs, rtol=1e-12, atol=1e-14)


def test_aliasing_rejected():
    with pytest.raises(AliasingError):
        synthesize(CoefficientTensor(1, {(5,): 1.0}), [8])


def test_default_grid_is_power_of_two():
    assert default_grid_sizes((3, 0)) == (16, 4)
    assert default_grid_sizes((5,), oversample=2) == (64,)


def test_delta_block():
    c = CoefficientTensor(1, {(1,): 1, (3,): 2})
    assert dict(delta_block(c, (1,)).items()) == {(1,): 1}
    assert len(delta_block(c, (0,))) == 0


def test_block_partition_reassembles(rng):
    c = random_tensor(rng, 2, 15, nonzero=True)
    total = CoefficientTensor.zeros(2)
    for s in itertools.product(range(1, 5), repeat=2):
        total = total + delta_block(c, s)
    assert total.allclose(c)
    assert sum(len(b) for b in block_decomposition(c).values()) == len(c)


def test_partial_sum_trivial_sets(rng):
    c = random_tensor(rng, 2, 4)
    assert partial_sum(c, c.support()).allclose(c)
    assert len(partial_sum(c, set())) == 0


def test_residual_vanishes_inside_q():
    Q = q_set(power(1, 1), 64)
    c = CoefficientTensor(2, {k: 1.0 for k in Q.materialize()})
    assert len(complement_sum(c, Q).chop()) == 0


def test_step_hyperbolic_sum():
    c = CoefficientTensor(2, {(1, 1): 1, (2, 2): 1})
    assert set(step_hyperbolic_sum(c, (1, 1), 3).support()) == {(1, 1)}
    assert len(step_hyperbolic_sum(c, (1, 1), 1)) == 0
    d = CoefficientTensor(2, {(0, 1): 1, (1, 1): 2})
    assert set(step_hyperbolic_sum(d, (1, 1), 1e9).support()) == {(1, 1)}


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 9), st.integers(0, 2**32 - 1))
def test_round_trip_property(dim, degree, seed):
    c = random_tensor(np.random.default_rng(seed), dim, degree, density=0.5)
    assert analyze(synthesize(c), c.maxfreq).allclose(c, rtol=1e-10, atol=1e-12)
