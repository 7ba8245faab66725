"""Lorentz, mixed Lebesgue and iterated sequence norms.

All grid norms treat samples as a step function with equal-measure cells on
``[0, 2pi)`` per axis.  The Lorentz weight ``t**(theta/p - 1)`` is integrated in
closed form on each cell of the rearrangement, so the only discretization is
the sampling of ``f`` itself.  Mixed norms iterate one axis at a time with axis
1 (array axis 0) innermost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _jit
from .spectral import CoefficientTensor, SampleGrid, block_decomposition, default_grid_sizes, synthesize

TWO_PI = 2.0 * math.pi

_ROLE_BOUNDS = {
    # role: (lower, lower_open, upper, upper_open)
    "p": (1.0, True, math.inf, True),
    "q": (1.0, True, math.inf, True),
    "lambda": (1.0, True, math.inf, True),
    "theta": (1.0, False, math.inf, True),
    "tau": (1.0, False, math.inf, False),
    "gamma": (0.0, True, math.inf, True),
    "r": (0.0, True, math.inf, True),
    "epsilon": (1.0, False, math.inf, False),
    "beta": (0.0, False, math.inf, True),
    "alpha": (0.0, True, math.inf, True),
}


@dataclass(frozen=True)
class ExponentVector:
    """A validated vector of exponents playing one named role."""

    values: tuple[float, ...]
    role: str

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if self.role not in _ROLE_BOUNDS:
            raise ValueError(f"unknown exponent role {self.role!r}")
        lo, lo_open, hi, hi_open = _ROLE_BOUNDS[self.role]
        for v in vals:
            if math.isnan(v):
                raise ValueError(f"{self.role}: NaN exponent")
            bad_lo = v <= lo if lo_open else v < lo
            bad_hi = v >= hi if hi_open else v > hi
            if bad_lo or bad_hi:
                raise ValueError(f"{self.role} exponent {v} out of range")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def exponents(values, role: str, dim: int | None = None) -> tuple[float, ...]:
    """Validate ``values`` for ``role`` and return them as a float tuple."""
    if isinstance(values, ExponentVector):
        vec = values if values.role == role else ExponentVector(values.values, role)
    else:
        if np.isscalar(values):
            values = (values,) * (dim or 1)
        vec = ExponentVector(tuple(values), role)
    if dim is not None and len(vec) != dim:
        raise ValueError(f"{role} has length {len(vec)}, expected {dim}")
    return vec.values


@dataclass(frozen=True)
class LorentzParams:
    p: float
    theta: float

    def __post_init__(self):
        if not 1.0 < self.p < math.inf:
            raise ValueError(f"Lorentz exponent p={self.p} must lie in (1, inf)")
        if math.isinf(self.theta):
            raise ValueError("theta = inf (weak-type Lorentz norm) is not supported")
        if not self.theta >= 1.0:
            raise ValueError(f"Lorentz exponent theta={self.theta} must be >= 1")


# ---------------------------------------------------------------------------
# one-dimensional pieces


def rearrangement(samples, total_measure: float = TWO_PI) -> tuple[np.ndarray, float]:
    """Non-increasing rearrangement of ``|samples|`` as a step profile.

    Returns the sorted values and the common cell width.
    """
    a = np.abs(np.asarray(samples, dtype=np.complex128 if np.iscomplexobj(samples) else np.float64)).ravel()
    if a.size == 0:
        raise ValueError("cannot rearrange an empty array")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite samples")
    return np.sort(a)[::-1].copy(), total_measure / a.size


def lorentz_norm_1d(samples, p: float, theta: float) -> float:
    """Lorentz ``(p, theta)`` norm of a step function sampled on ``[0, 2pi)``."""
    prm = LorentzParams(p, theta)
    srt, _ = rearrangement(samples)
    w = _jit.lorentz_weights(srt.size, prm.p, prm.theta)
    return float(np.dot(srt**prm.theta, w) ** (1.0 / prm.theta))


def _fibers(arr: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """View the leading axis of ``arr`` as the fiber axis: returns (fibers, rest_shape)."""
    rest = arr.shape[1:]
    fib = np.ascontiguousarray(np.moveaxis(arr, 0, -1).reshape(-1, arr.shape[0]))
    return fib, rest


def _grid_moduli(g, dim: int | None) -> np.ndarray:
    vals = g.values if isinstance(g, SampleGrid) else np.asarray(g)
    if dim is not None and vals.ndim != dim:
        raise ValueError(f"dimension mismatch: grid has {vals.ndim} axes, exponents have {dim}")
    a = np.abs(vals).astype(np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError("grid contains non-finite values")
    return a


def mixed_lorentz_norm(g, p: Sequence[float], theta: Sequence[float]) -> float:
    """Iterated Lorentz norm ``||...||f||_{p1,th1}...||_{pm,thm}`` of grid samples."""
    a = _grid_moduli(g, len(p))
    params = [LorentzParams(pj, tj) for pj, tj in zip(p, theta)]
    if len(params) != a.ndim:
        raise ValueError("p and theta must have one entry per axis")
    for prm in params:
        fib, rest = _fibers(a)
        w = _jit.lorentz_weights(fib.shape[1], prm.p, prm.theta)
        a = _jit.lorentz_reduce(fib, w, float(prm.theta)).reshape(rest)
    return float(a)


def mixed_lebesgue_norm(g, p: Sequence[float]) -> float:
    """Iterated rectangle-rule ``L_p`` norm with axis 1 innermost."""
    a = _grid_moduli(g, len(p))
    for pj in p:
        pj = float(pj)
        if not pj >= 1.0 or math.isinf(pj):
            raise ValueError(f"Lebesgue exponent {pj} must lie in [1, inf)")
        fib, rest = _fibers(a)
        a = _jit.lebesgue_reduce(fib, TWO_PI / fib.shape[1], pj).reshape(rest)
    return float(a)


# ---------------------------------------------------------------------------
# sequence norms


def _sequence_array(a: Mapping[Sequence[int], float]) -> np.ndarray | None:
    if not a:
        return None
    keys = np.array([tuple(k) for k in a.keys()], dtype=np.int64)
    vals = np.abs(np.array(list(a.values()), dtype=np.float64))
    if not np.all(np.isfinite(vals)):
        raise ValueError("sequence contains non-finite values")
    lo = keys.min(axis=0)
    shape = tuple(keys.max(axis=0) - lo + 1)
    dense = np.zeros(shape)
    dense[tuple((keys - lo).T)] = vals
    return dense


def sequence_norm(a: Mapping[Sequence[int], float], tau: Sequence[float]) -> float:
    """Iterated ``l_tau`` norm of a finitely supported multi-sequence (axis 1 innermost).

    ``tau_j = inf`` takes the supremum along axis ``j``.
    """
    tau = exponents(tau, "tau")
    dense = _sequence_array(a)
    if dense is None:
        return 0.0
    if dense.ndim != len(tau):
        raise ValueError("tau length does not match sequence dimension")
    top = dense.max()
    if top == 0.0:
        return 0.0
    x = dense / top
    for t in tau:
        fib, rest = _fibers(x)
        x = _jit.lp_reduce(fib, float(t)).reshape(rest)
    return float(top * x)


# ---------------------------------------------------------------------------
# tensor norms and the class functional


def tensor_lorentz_norm(c: CoefficientTensor, p, theta, oversample: int = 1) -> float:
    """Mixed Lorentz norm of a coefficient tensor on its default grid."""
    if len(c) == 0:
        return 0.0
    grid = synthesize(c, default_grid_sizes(c.maxfreq, oversample))
    return mixed_lorentz_norm(grid, p, theta)


def tensor_lebesgue_norm(c: CoefficientTensor, p, oversample: int = 1) -> float:
    """Mixed Lebesgue norm of a coefficient tensor on its default grid."""
    if len(c) == 0:
        return 0.0
    grid = synthesize(c, default_grid_sizes(c.maxfreq, oversample))
    return mixed_lebesgue_norm(grid, p)


def block_norms(c: CoefficientTensor, p, theta=None, oversample: int = 1) -> dict[tuple[int, ...], float]:
    """Norms of every nonzero dyadic block ``delta_s(c)``.

    Lorentz ``(p, theta)`` when ``theta`` is given, mixed Lebesgue ``p`` otherwise.
    """
    out = {}
    for s, blk in block_decomposition(c).items():
        if theta is None:
            out[s] = tensor_lebesgue_norm(blk, p, oversample)
        else:
            out[s] = tensor_lorentz_norm(blk, p, theta, oversample)
    return out


def besov_functional(c: CoefficientTensor, omega, p, theta, tau, oversample: int = 1) -> float:
    """``|| { Omega(2^-s)^-1 ||delta_s c||_{p,theta} }_s ||_{l_tau}``.

    ``theta=None`` uses mixed Lebesgue block norms (the ``p = theta`` class).
    """
    from .modulus import log2_at_dyadic

    p = exponents(p, "p", c.dim)
    if theta is not None:
        theta = exponents(theta, "theta", c.dim)
    tau = exponents(tau, "tau", c.dim)
    seq = {}
    for s, nrm in block_norms(c, p, theta, oversample).items():
        seq[s] = nrm * 2.0 ** (-log2_at_dyadic(omega, s))
    return sequence_norm(seq, tau)
