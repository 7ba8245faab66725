"""Level sets driven by a mixed modulus.

    Gamma(Omega, N)   = {s : Omega(2^-s) >= 1/N}
    Gamma_perp        = Z_+^m minus Gamma
    Lambda(Omega, N)  = {s : 1/(2^l N) <= Omega(2^-s) < 1/N}
    Q(Omega, N)       = union of rho(s) over s in Gamma

All comparisons use ``log2 Omega(2^-s)``, which is exact for power moduli
with dyadic exponents and power-of-two ``N``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .modulus import MixedModulus, check_S_conditions, is_valid_modulus, log2_at_dyadic
from .norms import exponents, sequence_norm
from .spectral import block_of, dyadic_block

MAX_LEVEL = 400

Level = tuple[int, ...]


def _require_modulus(omega: MixedModulus) -> None:
    if not is_valid_modulus(omega):
        raise ValueError(f"{omega!r} fails the modulus axiom check")


def _axis_caps(omega: MixedModulus, threshold: float) -> tuple[int, ...]:
    """Smallest ``s`` per axis with ``log2 Omega(2^-s e_j) < threshold``."""
    caps = []
    for j in range(omega.dim):
        e = np.zeros((MAX_LEVEL + 1, omega.dim))
        e[:, j] = np.arange(MAX_LEVEL + 1)
        below = np.nonzero(log2_at_dyadic(omega, e) < threshold)[0]
        if not below.size:
            raise ValueError(f"{omega!r} does not decay below the threshold along axis {j + 1}")
        caps.append(int(below[0]))
    return tuple(caps)


def _box(caps: Sequence[int]) -> np.ndarray:
    axes = [np.arange(c) for c in caps]
    if any(c == 0 for c in caps):
        return np.zeros((0, len(caps)), dtype=np.int64)
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(caps))


def _as_levels(arr: np.ndarray) -> frozenset[Level]:
    return frozenset(tuple(int(v) for v in row) for row in arr)


def gamma_set(omega: MixedModulus, N: float) -> frozenset[Level]:
    """``{s in Z_+^m : Omega(2^-s) >= 1/N}``."""
    if N <= 0:
        raise ValueError("N must be positive")
    _require_modulus(omega)
    thr = -math.log2(N)
    box = _box(_axis_caps(omega, thr))
    if not len(box):
        return frozenset()
    return _as_levels(box[log2_at_dyadic(omega, box) >= thr])


def lambda_set(omega: MixedModulus, N: float, l: int | None = None) -> frozenset[Level]:
    """``Gamma_perp(Omega, N) minus Gamma_perp(Omega, 2^l N)``."""
    if N <= 1:
        raise ValueError("N must be > 1")
    _require_modulus(omega)
    l = omega.order if l is None else int(l)
    hi = -math.log2(N)
    lo = hi - l
    box = _box(_axis_caps(omega, lo))
    L = log2_at_dyadic(omega, box)
    return _as_levels(box[(L >= lo) & (L < hi)])


class FrequencySet:
    """The hyperbolic cross ``Q(Omega, N)``: union of blocks over a level set.

    Membership is decided through :func:`block_of`, so the set never has to be
    materialized; :meth:`materialize` lists it explicitly.
    """

    def __init__(self, levels: Iterable[Level]):
        self.levels = frozenset(tuple(s) for s in levels)
        self._nonempty = sorted(s for s in self.levels if all(v > 0 for v in s))

    def __contains__(self, k) -> bool:
        if any(v == 0 for v in k):
            return False
        return block_of(k) in self.levels

    def __len__(self) -> int:
        return sum(2 ** sum(s) for s in self._nonempty)

    def __iter__(self):
        for s in self._nonempty:
            yield from sorted(dyadic_block(s))

    def materialize(self) -> set[tuple[int, ...]]:
        return set(iter(self))

    def issubset(self, other: "FrequencySet") -> bool:
        return set(self._nonempty) <= set(other._nonempty)


def q_set(omega: MixedModulus, N: float) -> FrequencySet:
    """``Q(Omega, N)``."""
    return FrequencySet(gamma_set(omega, N))


@dataclass(frozen=True)
class IndexSetFamily:
    omega: MixedModulus
    N: float
    l: int
    gamma_levels: frozenset
    lambda_levels: frozenset
    q_frequencies: FrequencySet
    box: tuple[int, ...]


def index_family(omega: MixedModulus, N: float, l: int | None = None) -> IndexSetFamily:
    l = omega.order if l is None else int(l)
    gam = gamma_set(omega, N)
    lam = lambda_set(omega, N, l)
    caps = _axis_caps(omega, -math.log2(N) - l)
    return IndexSetFamily(omega, N, l, gam, lam, FrequencySet(gam), caps)


# ---------------------------------------------------------------------------
# hyperplane sets


@dataclass(frozen=True)
class KappaSet:
    n: float
    gamma: tuple
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


def _rational(x, max_den: int = 10**6) -> Fraction | None:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    fr = Fraction(float(x)).limit_denominator(max_den)
    return fr if abs(float(fr) - float(x)) <= 1e-15 * max(1.0, abs(float(x))) else None


def kappa_set(n, gamma: Sequence, cap: Sequence[int] | None = None) -> KappaSet:
    """``{s in Z_+^m : <s, gamma> = n}``, restricted to ``s_j <= cap_j``.

    Rational data (ints, Fractions, or floats equal to a fraction with
    denominator <= 10^6) is compared exactly; otherwise within 1e-9.
    """
    g_float = exponents([float(g) for g in gamma], "gamma")
    m = len(g_float)
    if cap is None:
        cap = tuple(int(math.floor(float(n) / g + 1e-9)) for g in g_float)
    if float(n) < 0:
        return KappaSet(n, tuple(gamma), frozenset())
    box = _box([c + 1 for c in cap])
    g_rat = [_rational(g) for g in gamma]
    n_rat = _rational(n)
    if all(v is not None for v in g_rat) and n_rat is not None:
        den = math.lcm(*(v.denominator for v in g_rat), n_rat.denominator)
        g_int = np.array([int(v * den) for v in g_rat], dtype=object)
        target = int(n_rat * den)
        dots = box.astype(object) @ g_int if len(box) else np.zeros(0)
        mask = np.array([d == target for d in dots], dtype=bool)
    else:
        mask = np.abs(box @ np.asarray(g_float) - float(n)) <= 1e-9
    members = _as_levels(box[mask]) if len(box) else frozenset()
    assert all(len(s) == m for s in members)
    return KappaSet(n, tuple(gamma), members)


def characteristic(levels: Iterable[Level]) -> dict[Level, float]:
    """The indicator sequence of a finite level set."""
    return {tuple(s): 1.0 for s in levels}


# ---------------------------------------------------------------------------
# cube partition for the f3 witness


@dataclass(frozen=True)
class CubeAssignment:
    lambda_prime: tuple[Level, ...]
    lambda_bar: tuple[Level, ...]
    v: int
    centers: dict

    def __post_init__(self):
        if len(self.lambda_bar) != self.v ** len(self.lambda_bar[0]):
            raise ValueError("lambda_bar must hold v^m levels")


def lambda_prime_and_cubes(omega: MixedModulus, N: float, l: int | None = None, C3: float = 1.0) -> CubeAssignment:
    """Levels of Lambda with every ``s_j > log2(C3 N) / (2 m l)``, and a cube per chosen level.

    ``[-pi, pi]^m`` is cut into ``v^m`` cubes with ``v = floor(|Lambda'|^(1/m))``;
    the first ``v^m`` levels of Lambda' (lexicographic) are paired with the
    cubes in lexicographic order of their integer coordinates.
    """
    l = omega.order if l is None else int(l)
    m = omega.dim
    lam = sorted(lambda_set(omega, N, l))
    bound = math.log2(C3 * N) / (2 * m * l)
    lam_prime = tuple(s for s in lam if all(v > bound for v in s))
    if not lam_prime:
        raise ValueError("N too small for the f3 witness: Lambda' is empty")
    v = int(math.floor(len(lam_prime) ** (1.0 / m) + 1e-12))
    while (v + 1) ** m <= len(lam_prime):
        v += 1
    while v**m > len(lam_prime):
        v -= 1
    lam_bar = lam_prime[: v**m]
    centers = {}
    for s, cube in zip(lam_bar, itertools.product(range(v), repeat=m)):
        centers[s] = tuple(-math.pi + math.pi * (2 * i + 1) / v for i in cube)
    return CubeAssignment(lam_prime, lam_bar, v, centers)


# ---------------------------------------------------------------------------
# weighted sequence norms over level sets


def weighted_sequence(omega: MixedModulus, levels: Iterable[Level], beta) -> dict[Level, float]:
    """``s -> Omega(2^-s) prod 2^(s_j beta_j)`` over ``levels``."""
    levels = sorted(levels)
    if not levels:
        return {}
    arr = np.asarray(levels, dtype=np.float64)
    logs = log2_at_dyadic(omega, arr) + arr @ np.asarray(beta, dtype=np.float64)
    return {s: float(np.exp2(v)) for s, v in zip(levels, np.atleast_1d(logs))}


def _admits_S_above(omega: MixedModulus, beta: Sequence[float]) -> bool:
    for j, b in enumerate(beta):
        if b >= 1:
            return False
    # probe a ladder of alpha values strictly between beta and 1 on each axis
    for frac in np.linspace(0.05, 0.95, 19):
        alpha = [b + frac * (1 - b) for b in beta]
        if check_S_conditions(omega, alpha, kind="S").ok:
            return True
    return False


def gamma_perp_weighted_norm(omega: MixedModulus, N: float, beta, theta, tolerance: float = 1e-10,
                             step: int = 4) -> float:
    """``|| {Omega(2^-s) prod 2^(s_j beta_j)}_{s in Gamma_perp(N)} ||_{l_theta}``.

    The infinite index set is truncated to a box that grows by ``step`` levels
    per axis until the relative change of the norm drops below ``tolerance``.
    """
    m = omega.dim
    beta = exponents(beta, "beta", m)
    theta = exponents(theta, "theta", m)
    if not _admits_S_above(omega, beta):
        raise ValueError("non-convergent configuration: Omega has no (S) exponent alpha_j > beta_j")
    thr = -math.log2(N)
    caps = [c + 1 for c in _axis_caps(omega, thr - omega.order)]
    prev = None
    while True:
        box = _box(caps)
        L = log2_at_dyadic(omega, box)
        perp = box[L < thr]
        vals = np.exp2(L[L < thr] + perp @ np.asarray(beta))
        cur = sequence_norm({tuple(int(x) for x in s): v for s, v in zip(perp, vals)}, theta)
        if prev is not None and abs(cur - prev) <= tolerance * abs(cur):
            return cur
        if max(caps) > MAX_LEVEL:
            raise ValueError("weighted norm over Gamma_perp did not converge")
        prev = cur
        caps = [c + step for c in caps]


def format_levels(levels: Iterable[Sequence[int]]) -> str:
    """One multi-index per line, space-separated, in lexicographic order."""
    return "".join(" ".join(str(v) for v in s) + "\n" for s in sorted(tuple(s) for s in levels))
