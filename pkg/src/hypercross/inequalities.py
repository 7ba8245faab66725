"""Ratio checks for the Littlewood-Paley type and embedding inequalities.

Each ``check_theorem*`` returns ``lhs / rhs`` for one polynomial.  The
inequalities hold with unknown constants, so callers look at how the
ensemble extremes behave across a degree ladder rather than at a fixed bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .norms import block_norms, exponents, sequence_norm, tensor_lebesgue_norm, tensor_lorentz_norm
from .spectral import CoefficientTensor, block_exponential_sum


@dataclass(frozen=True)
class EnsembleSpec:
    """Random polynomials with unit-modulus coefficients on ``1 <= |k_j| <= degree``."""

    dim: int
    degree: int
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("ensemble count must be >= 1")
        if self.degree < 1:
            raise ValueError("ensemble degree must be >= 1")
        if not 1 <= self.dim <= 4:
            raise ValueError("ensemble dimension must be in 1..4")

    def frequencies(self) -> np.ndarray:
        axis = [k for k in range(-self.degree, self.degree + 1) if k != 0]
        return np.array(list(itertools.product(axis, repeat=self.dim)), dtype=np.int64)

    def generate(self) -> list[CoefficientTensor]:
        rng = np.random.default_rng(self.seed)
        keys = self.frequencies()
        out = []
        for _ in range(self.count):
            phases = rng.uniform(0.0, 2.0 * math.pi, size=len(keys))
            out.append(CoefficientTensor.from_arrays(keys, np.exp(1j * phases)))
        return out


def _nonzero(f: CoefficientTensor) -> None:
    if not f.support():
        raise ValueError("zero polynomial: ratio undefined")


def check_theorem1(f: CoefficientTensor, q) -> float:
    """``||f||_q / (sum_s ||delta_s f||_q^beta)^(1/beta)`` with ``beta = min(q_1..q_m, 2)``."""
    q = exponents(q, "q", f.dim)
    _nonzero(f)
    beta = min(min(q), 2.0)
    blocks = block_norms(f, q)
    den = sum(v**beta for v in blocks.values()) ** (1.0 / beta)
    if den == 0:
        raise ValueError("polynomial has no dyadic block content")
    return tensor_lebesgue_norm(f, q) / den


def check_theorem2(f: CoefficientTensor, p, theta1, q, theta2) -> float:
    """``||f||_{q,theta2} / sigma(f)`` where ``sigma`` weights block ``(p, theta1)`` norms by ``2^(s_j (1/p_j - 1/q_j))``."""
    m = f.dim
    p = exponents(p, "p", m)
    q = exponents(q, "q", m)
    theta1 = exponents(theta1, "theta", m)
    theta2 = exponents(theta2, "theta", m)
    if any(pj >= qj for pj, qj in zip(p, q)):
        raise ValueError("hypothesis violated: need p_j < q_j")
    if m > 1 and max(theta2[:-1]) >= min(q[1:]):
        raise ValueError("hypothesis violated: need max_{j<m} theta2_j < min_{j>1} q_j")
    _nonzero(f)
    seq = {}
    for s, nrm in block_norms(f, p, theta1).items():
        seq[s] = nrm * 2.0 ** sum(sj * (1 / pj - 1 / qj) for sj, pj, qj in zip(s, p, q))
    sigma = sequence_norm(seq, theta2)
    if sigma == 0:
        raise ValueError("sigma(f) vanishes")
    return tensor_lorentz_norm(f, q, theta2) / sigma


def lacunary_polynomial(b: dict) -> CoefficientTensor:
    """``sum_s b_s sum_{k in rho(s)} e^{i<k,x>}``; levels with a zero component are skipped."""
    return block_exponential_sum(b)


def check_theorem3(b: dict, q, theta, lam) -> float:
    """``||f||_{q,theta}`` over the weighted block sum with ``(lambda, theta)`` block norms."""
    if not b:
        raise ValueError("empty coefficient sequence")
    m = len(next(iter(b)))
    q = exponents(q, "q", m)
    lam = exponents(lam, "lambda", m)
    theta = exponents(theta, "theta", m)
    if any(not qj < lj for qj, lj in zip(q, lam)):
        raise ValueError("hypothesis violated: need q_j < lambda_j")
    if any(t <= 1 for t in theta):
        raise ValueError("hypothesis violated: need theta_j > 1")
    f = lacunary_polynomial(b)
    _nonzero(f)
    seq = {}
    for s, nrm in block_norms(f, lam, theta).items():
        seq[s] = nrm * 2.0 ** sum(sj * (1 / lj - 1 / qj) for sj, lj, qj in zip(s, lam, q))
    return tensor_lorentz_norm(f, q, theta) / sequence_norm(seq, theta)


def ensemble_ratios(spec: EnsembleSpec, check, *args) -> np.ndarray:
    """Apply ``check(f, *args)`` to every ensemble member."""
    return np.array([check(f, *args) for f in spec.generate()])
