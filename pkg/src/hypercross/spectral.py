"""Sparse spectral representation of multivariate trigonometric polynomials.

A polynomial ``f(x) = sum_k a_k exp(i<k, x>)`` on ``[0, 2pi)^m`` is stored as a
:class:`CoefficientTensor`: a map from integer frequency tuples to complex
amplitudes.  Frequencies are grouped into dyadic blocks

    rho(s) = {k : 2**(s_j - 1) <= |k_j| < 2**s_j for every j},

which are empty as soon as some ``s_j == 0``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_DIM = 4


class AliasingError(ValueError):
    """Raised when a grid cannot resolve the requested spectrum."""


def _as_tuple(k: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(v) for v in k)


class CoefficientTensor:
    """Immutable finite map ``frequency tuple -> complex amplitude``.

    Absent keys mean amplitude zero.  ``maxfreq`` is a per-axis bound on
    ``|k_j|``; when not given it is the tightest bound for the stored keys.
    """

    __slots__ = ("dim", "_entries", "_maxfreq", "_arrays")

    def __init__(self, dim: int, entries: Mapping[Sequence[int], complex] | None = None,
                 maxfreq: Sequence[int] | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        ent: dict[tuple[int, ...], complex] = {}
        for k, v in (entries or {}).items():
            key = _as_tuple(k)
            if len(key) != self.dim:
                raise ValueError(f"frequency {key} does not have dimension {self.dim}")
            ent[key] = complex(v)
        self._entries = ent
        tight = tuple(max((abs(k[j]) for k in ent), default=0) for j in range(self.dim))
        if maxfreq is None:
            self._maxfreq = tight
        else:
            mf = _as_tuple(maxfreq)
            if len(mf) != self.dim:
                raise ValueError("maxfreq has wrong length")
            if any(t > b for t, b in zip(tight, mf)):
                raise ValueError(f"stored frequencies exceed maxfreq {mf}")
            self._maxfreq = mf
        self._arrays = None

    # construction helpers -------------------------------------------------
    @classmethod
    def from_arrays(cls, keys: np.ndarray, values: np.ndarray, maxfreq=None) -> "CoefficientTensor":
        keys = np.asarray(keys, dtype=np.int64)
        if keys.ndim != 2:
            raise ValueError("keys must be a (K, m) array")
        values = np.asarray(values, dtype=np.complex128).ravel()
        if len(values) != len(keys):
            raise ValueError("keys and values differ in length")
        # trusted fast path: tolist() yields python ints and complexes directly
        out = cls(keys.shape[1])
        out._entries = dict(zip(map(tuple, keys.tolist()), values.tolist()))
        if len(out._entries) == len(keys):
            out._arrays = (keys.copy(), values.copy())
        tight = tuple(int(v) for v in np.abs(keys).max(axis=0)) if len(keys) else (0,) * out.dim
        if maxfreq is None:
            out._maxfreq = tight
        else:
            mf = _as_tuple(maxfreq)
            if len(mf) != out.dim or any(t > b for t, b in zip(tight, mf)):
                raise ValueError(f"stored frequencies exceed maxfreq {mf}")
            out._maxfreq = mf
        return out

    @classmethod
    def zeros(cls, dim: int) -> "CoefficientTensor":
        return cls(dim, {})

    # mapping-like access --------------------------------------------------
    @property
    def entries(self) -> dict[tuple[int, ...], complex]:
        return dict(self._entries)

    @property
    def maxfreq(self) -> tuple[int, ...]:
        return self._maxfreq

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, k) -> bool:
        return _as_tuple(k) in self._entries

    def __getitem__(self, k) -> complex:
        return self._entries.get(_as_tuple(k), 0j)

    def items(self):
        return self._entries.items()

    def support(self) -> set[tuple[int, ...]]:
        return {k for k, v in self._entries.items() if v != 0}

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Keys as a ``(K, m)`` int array and amplitudes as a ``(K,)`` complex array."""
        if self._arrays is None:
            if self._entries:
                keys = np.array(list(self._entries.keys()), dtype=np.int64)
                vals = np.array(list(self._entries.values()), dtype=np.complex128)
            else:
                keys = np.zeros((0, self.dim), dtype=np.int64)
                vals = np.zeros(0, dtype=np.complex128)
            self._arrays = (keys, vals)
        return self._arrays

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "CoefficientTensor") -> None:
        if not isinstance(other, CoefficientTensor):
            raise TypeError("expected a CoefficientTensor")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "CoefficientTensor") -> "CoefficientTensor":
        self._check(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0j) + v
        return CoefficientTensor(self.dim, {k: v for k, v in out.items() if v != 0})

    def __neg__(self) -> "CoefficientTensor":
        return CoefficientTensor(self.dim, {k: -v for k, v in self._entries.items()}, self._maxfreq)

    def __sub__(self, other: "CoefficientTensor") -> "CoefficientTensor":
        return self + (-other)

    def __mul__(self, alpha) -> "CoefficientTensor":
        alpha = complex(alpha)
        if alpha == 0:
            return CoefficientTensor(self.dim, {})
        return CoefficientTensor(self.dim, {k: alpha * v for k, v in self._entries.items()}, self._maxfreq)

    __rmul__ = __mul__

    def restrict(self, keep) -> "CoefficientTensor":
        """Entries whose key satisfies the predicate ``keep``."""
        return CoefficientTensor(self.dim, {k: v for k, v in self._entries.items() if keep(k)})

    def chop(self, tol: float = 1e-12) -> "CoefficientTensor":
        """Drop amplitudes with modulus ``<= tol * max modulus``."""
        if not self._entries:
            return self
        top = max(abs(v) for v in self._entries.values())
        return CoefficientTensor(self.dim, {k: v for k, v in self._entries.items() if abs(v) > tol * top})

    def to_dense(self, maxfreq: Sequence[int] | None = None) -> np.ndarray:
        """Dense array over the box ``|k_j| <= M_j``; index ``k_j + M_j`` on axis ``j``."""
        mf = self._maxfreq if maxfreq is None else _as_tuple(maxfreq)
        out = np.zeros(tuple(2 * b + 1 for b in mf), dtype=np.complex128)
        keys, vals = self.arrays()
        if len(vals):
            idx = keys + np.asarray(mf)
            if np.any(idx < 0) or np.any(idx >= np.array(out.shape)):
                raise ValueError("tensor does not fit inside the requested box")
            out[tuple(idx.T)] = vals
        return out

    def allclose(self, other: "CoefficientTensor", rtol: float = 1e-10, atol: float = 0.0) -> bool:
        self._check(other)
        mf = tuple(max(a, b) for a, b in zip(self._maxfreq, other._maxfreq))
        a, b = self.to_dense(mf), other.to_dense(mf)
        scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0))
        return bool(np.abs(a - b).max(initial=0.0) <= atol + rtol * scale)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientTensor):
            return NotImplemented
        return self.dim == other.dim and self.support() == other.support() and all(
            self._entries[k] == other._entries[k] for k in self.support())

    def __hash__(self):
        return hash((self.dim, frozenset((k, v) for k, v in self._entries.items() if v != 0)))

    def __repr__(self) -> str:
        return f"CoefficientTensor(dim={self.dim}, nnz={len(self)}, maxfreq={self._maxfreq})"


@dataclass(frozen=True)
class SampleGrid:
    """Complex samples on the uniform grid ``x_j = 2*pi*i / n_j``.

    ``values`` has shape ``sizes``; array axis ``j`` carries coordinate ``x_{j+1}``.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim < 1 or v.ndim > MAX_DIM:
            raise ValueError(f"grid dimension must be in 1..{MAX_DIM}")
        if any(n < 1 for n in v.shape):
            raise ValueError("grid sizes must be >= 1")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid contains non-finite values")
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.values.shape

    def points(self, axis: int) -> np.ndarray:
        n = self.sizes[axis]
        return 2.0 * np.pi * np.arange(n) / n

    def __add__(self, other: "SampleGrid") -> "SampleGrid":
        return SampleGrid(self.values + other.values)

    def __mul__(self, alpha) -> "SampleGrid":
        return SampleGrid(alpha * self.values)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# dyadic blocks


def dyadic_block(s: Sequence[int]) -> set[tuple[int, ...]]:
    """All integer vectors ``k`` with ``2**(s_j-1) <= |k_j| < 2**s_j``."""
    s = _as_tuple(s)
    if any(v < 0 for v in s):
        raise ValueError("dyadic levels must be nonnegative")
    if any(v == 0 for v in s):
        return set()
    axes = []
    for v in s:
        pos = range(1 << (v - 1), 1 << v)
        axes.append([-k for k in reversed(pos)] + list(pos))
    return set(itertools.product(*axes))


def block_of(k: Sequence[int]) -> tuple[int, ...]:
    """Dyadic level vector of a frequency with no zero component."""
    k = _as_tuple(k)
    if any(v == 0 for v in k):
        raise ValueError(f"frequency {k} lies outside all dyadic blocks")
    return tuple(abs(v).bit_length() for v in k)


def block_levels(keys: np.ndarray) -> np.ndarray:
    """Vectorized :func:`block_of`; rows with a zero component get level 0 there."""
    keys = np.abs(np.asarray(keys, dtype=np.int64))
    # frexp exponent of |k| equals its bit length, and is 0 for k = 0
    return np.frexp(keys.astype(np.float64))[1].astype(np.int64)


def block_decomposition(c: CoefficientTensor) -> dict[tuple[int, ...], CoefficientTensor]:
    """Split ``c`` into its nonzero dyadic blocks; zero-component frequencies are dropped."""
    keys, vals = c.arrays()
    if not len(vals):
        return {}
    lev = block_levels(keys)
    valid = np.all(lev > 0, axis=1) & (vals != 0)
    groups: dict[tuple[int, ...], dict] = {}
    for k, s, v in zip(keys[valid], lev[valid], vals[valid]):
        groups.setdefault(tuple(int(x) for x in s), {})[tuple(int(x) for x in k)] = complex(v)
    return {s: CoefficientTensor(c.dim, ent) for s, ent in sorted(groups.items())}


# ---------------------------------------------------------------------------
# transforms


def default_grid_sizes(maxfreq: Sequence[int], oversample: int = 1) -> tuple[int, ...]:
    """Least power of two ``>= 4 * max(M_j, 1) * oversample`` per axis."""
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    return tuple(1 << math.ceil(math.log2(4 * max(int(m), 1) * int(oversample))) for m in maxfreq)


def _check_aliasing(sizes: Sequence[int], maxfreq: Sequence[int]) -> None:
    for n, m in zip(sizes, maxfreq):
        if n < 2 * m + 1:
            raise AliasingError(f"grid too coarse for spectrum: n={n} < 2*{m}+1")


def synthesize(c: CoefficientTensor, sizes: Sequence[int] | None = None) -> SampleGrid:
    """Evaluate ``sum_k a_k exp(i<k, x>)`` on the uniform grid with the given sizes."""
    if sizes is None:
        sizes = default_grid_sizes(c.maxfreq)
    sizes = _as_tuple(sizes)
    if len(sizes) != c.dim:
        raise ValueError("grid dimension does not match tensor dimension")
    _check_aliasing(sizes, c.maxfreq)
    dense = np.zeros(sizes, dtype=np.complex128)
    keys, vals = c.arrays()
    if len(vals):
        idx = np.mod(keys, np.asarray(sizes))
        dense[tuple(idx.T)] = vals
    values = np.fft.ifftn(dense) * float(np.prod(sizes))
    return SampleGrid(values)


def analyze(g: SampleGrid | np.ndarray, maxfreq: Sequence[int]) -> CoefficientTensor:
    """Discrete Fourier coefficients for all ``|k_j| <= M_j`` (normalization ``1 / prod n_j``)."""
    values = g.values if isinstance(g, SampleGrid) else np.asarray(g)
    maxfreq = _as_tuple(maxfreq)
    if len(maxfreq) != values.ndim:
        raise ValueError("maxfreq does not match grid dimension")
    _check_aliasing(values.shape, maxfreq)
    spec = np.fft.fftn(values) / float(values.size)
    ranges = [np.arange(-m, m + 1) for m in maxfreq]
    mesh = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, len(maxfreq))
    idx = np.mod(mesh, np.asarray(values.shape))
    return CoefficientTensor.from_arrays(mesh, spec[tuple(idx.T)], maxfreq=maxfreq)


# ---------------------------------------------------------------------------
# restriction operators


def delta_block(c: CoefficientTensor, s: Sequence[int]) -> CoefficientTensor:
    """Restriction of ``c`` to the dyadic block ``rho(s)``."""
    s = np.asarray(_as_tuple(s), dtype=np.int64)
    if s.shape != (c.dim,):
        raise ValueError("level vector has wrong dimension")
    keys, vals = c.arrays()
    if not len(vals) or np.any(s == 0):
        return CoefficientTensor(c.dim, {})
    mask = np.all(block_levels(keys) == s, axis=1)
    return CoefficientTensor.from_arrays(keys[mask], vals[mask]) if mask.any() else CoefficientTensor(c.dim, {})


def partial_sum(c: CoefficientTensor, Q) -> CoefficientTensor:
    """Restriction of ``c`` to the frequency set ``Q``.

    ``Q`` may be any container supporting ``in`` on frequency tuples
    (a set, or a :class:`~hypercross.index_sets.FrequencySet`).
    """
    return c.restrict(lambda k: k in Q)


def complement_sum(c: CoefficientTensor, Q) -> CoefficientTensor:
    """``c - partial_sum(c, Q)`` computed by restriction (no cancellation)."""
    return c.restrict(lambda k: k not in Q)


def step_hyperbolic_sum(c: CoefficientTensor, gamma: Sequence[float], n: float) -> CoefficientTensor:
    """Sum of the blocks ``delta_s(c)`` over ``<s, gamma> < n``."""
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.shape != (c.dim,) or np.any(gamma <= 0):
        raise ValueError("gamma must be a positive vector of the tensor dimension")
    keys, vals = c.arrays()
    if not len(vals):
        return CoefficientTensor(c.dim, {})
    lev = block_levels(keys)
    keep = np.all(lev > 0, axis=1) & (lev @ gamma < n)
    return CoefficientTensor.from_arrays(keys[keep], vals[keep]) if keep.any() else CoefficientTensor(c.dim, {})


def block_exponential_sum(b: Mapping[Sequence[int], complex]) -> CoefficientTensor:
    """``sum_s b_s sum_{k in rho(s)} e^{i<k,x>}``; levels with a zero component contribute nothing."""
    if not b:
        raise ValueError("empty block coefficient map")
    dim = len(next(iter(b)))
    ent = {}
    for s, bs in sorted((tuple(s), complex(v)) for s, v in b.items()):
        if bs == 0 or any(v == 0 for v in s):
            continue
        for k in dyadic_block(s):
            ent[k] = bs
    return CoefficientTensor(dim, ent)
