"""Fiber reductions used by the norm routines.

Each kernel reduces a C-contiguous ``(fibers, length)`` float array along its
last axis.  Two implementations exist: numba-compiled loops and plain numpy.
Set ``HYPERCROSS_DISABLE_JIT=1`` to force the numpy path (useful for debugging
and for environments without a working numba).
"""

from __future__ import annotations

import os

import numpy as np

# prefer OpenMP: avoids probing an outdated TBB and is safe for concurrent callers
os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp tbb workqueue")

_DISABLED = os.environ.get("HYPERCROSS_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("disabled by HYPERCROSS_DISABLE_JIT")
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def lorentz_weights(count: int, p: float, theta: float, measure: float = 2.0 * np.pi) -> np.ndarray:
    """Exact integrals of t**(theta/p - 1) over the cells of a uniform partition.

    Cell ``i`` (1-based) is ``[(i-1)h, ih)`` with ``h = measure / count``.
    """
    a = theta / p
    h = measure / count
    w = np.empty(count)
    w[0] = h**a
    i = np.arange(2, count + 1, dtype=np.float64)
    # (ih)^a - ((i-1)h)^a written to avoid cancellation for large i
    w[1:] = (i * h) ** a * -np.expm1(a * np.log1p(-1.0 / i))
    return w / a


def _lorentz_reduce_numpy(fibers: np.ndarray, weights: np.ndarray, theta: float) -> np.ndarray:
    srt = -np.sort(-fibers, axis=1)
    return (srt**theta @ weights) ** (1.0 / theta)


def _lebesgue_reduce_numpy(fibers: np.ndarray, cell: float, p: float) -> np.ndarray:
    return (cell * np.sum(fibers**p, axis=1)) ** (1.0 / p)


def _lp_reduce_numpy(fibers: np.ndarray, tau: float) -> np.ndarray:
    if np.isinf(tau):
        return fibers.max(axis=1)
    return np.sum(fibers**tau, axis=1) ** (1.0 / tau)


def _exact_power(e: float) -> bool:
    """True when ``x**e`` can be formed by a few multiplications and one sqrt."""
    return e > 0 and (2.0 * e).is_integer() and e <= 8.0


if HAVE_NUMBA:
    import math

    @njit(inline="always")
    def _ipow(v, k, half):
        r = 1.0
        for _ in range(k):
            r *= v
        if half:
            r *= math.sqrt(v)
        return r

    @njit(parallel=True, cache=True)
    def _lorentz_sorted_jit(srt, weights, theta):
        nf, n = srt.shape
        k = int(theta)
        half = theta - k == 0.5
        out = np.empty(nf)
        for r in prange(nf):
            acc = 0.0
            for i in range(n):
                acc += _ipow(srt[r, i], k, half) * weights[i]
            out[r] = acc ** (1.0 / theta)
        return out

    @njit(parallel=True, cache=True)
    def _power_sum_jit(fibers, e):
        nf, n = fibers.shape
        k = int(e)
        half = e - k == 0.5
        out = np.empty(nf)
        for r in prange(nf):
            acc = 0.0
            for i in range(n):
                acc += _ipow(fibers[r, i], k, half)
            out[r] = acc
        return out

    # numpy keeps the sort, max and generic pow (its SIMD versions beat compiled
    # scalar loops); the compiled loops take the exact-exponent power sums
    def _lorentz_reduce_jit(fibers, weights, theta):
        if not _exact_power(theta):
            return _lorentz_reduce_numpy(fibers, weights, theta)
        srt = np.ascontiguousarray(-np.sort(-fibers, axis=1))
        return _lorentz_sorted_jit(srt, weights, float(theta))

    def _lebesgue_reduce_jit(fibers, cell, p):
        if not _exact_power(p):
            return _lebesgue_reduce_numpy(fibers, cell, p)
        return (cell * _power_sum_jit(np.ascontiguousarray(fibers), float(p))) ** (1.0 / p)

    def _lp_reduce_jit(fibers, tau):
        if not _exact_power(tau):
            return _lp_reduce_numpy(fibers, tau)
        return _power_sum_jit(np.ascontiguousarray(fibers), float(tau)) ** (1.0 / tau)

    lorentz_reduce = _lorentz_reduce_jit
    lebesgue_reduce = _lebesgue_reduce_jit
    lp_reduce = _lp_reduce_jit
else:  # pragma: no cover
    lorentz_reduce = _lorentz_reduce_numpy
    lebesgue_reduce = _lebesgue_reduce_numpy
    lp_reduce = _lp_reduce_numpy

BACKEND = "numba" if HAVE_NUMBA else "numpy"
