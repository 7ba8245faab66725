"""Mixed moduli of continuity type and numerical checks of their axioms.

Only dyadic arguments ``t = 2^-s`` are used downstream, so every family
exposes ``log2 Omega(2^-s)`` directly; for the power family with dyadic
rational exponents these values are exact in floating point.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .norms import exponents

DEFAULT_DEPTH = 20


@dataclass(frozen=True)
class MixedModulus:
    """``Omega(t)`` from one of three closed-form families.

    * ``power``: ``prod t_j^r_j``
    * ``power_log``: ``prod t_j^r_j (1 + log2(1/t_j))^b_j``
    * ``derived``: ``base(t) * prod t_j^-shift_j``
    """

    family: str
    order: int
    r: tuple[float, ...] = ()
    b: tuple[float, ...] = ()
    base: "MixedModulus | None" = None
    shift: tuple[float, ...] = ()

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError("order l must be a positive integer")
        if self.family in ("power", "power_log"):
            if not self.r or any(v <= 0 for v in self.r):
                raise ValueError("power exponents r_j must be positive")
            if self.family == "power_log" and len(self.b) != len(self.r):
                raise ValueError("power_log needs one log exponent per axis")
        elif self.family == "derived":
            if self.base is None or len(self.shift) != self.base.dim:
                raise ValueError("derived modulus needs a base and a shift of matching length")
        else:
            raise ValueError(f"unknown modulus family {self.family!r}")

    @property
    def dim(self) -> int:
        return len(self.r) if self.family != "derived" else self.base.dim

    def __repr__(self) -> str:
        if self.family == "power":
            return f"power{self.r}[l={self.order}]"
        if self.family == "power_log":
            return f"power_log({self.r};{self.b})[l={self.order}]"
        return f"derived({self.base!r}, shift={self.shift})"


def power(*r: float, order: int | None = None) -> MixedModulus:
    """``prod t_j^r_j``; the order defaults to ``ceil(max r)``."""
    if len(r) == 1 and not np.isscalar(r[0]):
        r = tuple(r[0])
    r = tuple(float(v) for v in r)
    if order is None:
        order = max(1, math.ceil(max(r)))
    return MixedModulus("power", int(order), r=r)


def power_log(r: Sequence[float], b: Sequence[float], order: int | None = None) -> MixedModulus:
    r = tuple(float(v) for v in r)
    if order is None:
        order = max(1, math.ceil(max(r)))
    return MixedModulus("power_log", int(order), r=r, b=tuple(float(v) for v in b))


def log2_at_dyadic(omega: MixedModulus, s) -> np.ndarray | float:
    """``log2 Omega(2^-s)`` for a level vector or an ``(..., m)`` array of them."""
    s_arr = np.asarray(s, dtype=np.float64)
    if s_arr.shape[-1] != omega.dim:
        raise ValueError("level vector has wrong dimension")
    if omega.family == "power":
        out = -(s_arr @ np.asarray(omega.r))
    elif omega.family == "power_log":
        out = -(s_arr @ np.asarray(omega.r)) + np.log2(1.0 + s_arr) @ np.asarray(omega.b)
    else:
        out = log2_at_dyadic(omega.base, s_arr) + s_arr @ np.asarray(omega.shift)
    return float(out) if np.ndim(out) == 0 else out


def at_dyadic(omega: MixedModulus, s) -> float:
    """``Omega(2^-s1, ..., 2^-sm)``."""
    return float(np.exp2(log2_at_dyadic(omega, s)))


def evaluate(omega: MixedModulus, t: Sequence[float]) -> float:
    """``Omega(t)`` for ``0 < t_j <= 1``."""
    t = np.asarray(t, dtype=np.float64)
    if t.shape != (omega.dim,):
        raise ValueError("argument has wrong dimension")
    if np.any(t <= 0) or np.any(t > 1):
        raise ValueError("Omega is evaluated only on (0, 1]^m")
    if omega.family == "power":
        return float(np.prod(t ** np.asarray(omega.r)))
    if omega.family == "power_log":
        return float(np.prod(t ** np.asarray(omega.r) * (1.0 - np.log2(t)) ** np.asarray(omega.b)))
    return evaluate(omega.base, t) * float(np.prod(t ** -np.asarray(omega.shift)))


def omega1_derived(omega: MixedModulus, p, q) -> MixedModulus:
    """``Omega(t) * prod t_j^-(1/p_j - 1/q_j)`` for ``1 < p_j < q_j < inf``."""
    p = exponents(p, "p", omega.dim)
    q = exponents(q, "q", omega.dim)
    if any(pj >= qj for pj, qj in zip(p, q)):
        raise ValueError("derived modulus needs p_j < q_j on every axis")
    shift = tuple(1.0 / pj - 1.0 / qj for pj, qj in zip(p, q))
    return MixedModulus("derived", omega.order, base=omega, shift=shift)


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    passed: dict[str, bool] = field(default_factory=dict)
    witness: dict[str, tuple[int, ...] | None] = field(default_factory=dict)
    constants: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def _lattice(dim: int, depth: int) -> np.ndarray:
    axes = [np.arange(depth + 1)] * dim
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def _argmax_point(values: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(values)), values.shape))


def check_modulus_axioms(omega: MixedModulus, depth: int = DEFAULT_DEPTH, atol: float = 1e-12) -> AxiomReport:
    """Check axioms 1-3 on the dyadic lattice ``s_j <= depth``.

    Axiom 1 is checked as positivity plus strict decay along every axis,
    axiom 2 as monotonicity between lattice neighbours, axiom 3 with the
    multipliers ``k_j in {1, 2, 4}`` that keep ``k_j t_j <= 1``.  Continuity
    (axiom 4) holds for the closed-form families and is recorded as assumed.
    """
    if depth < 2:
        raise ValueError("lattice depth must be >= 2")
    m = omega.dim
    lat = _lattice(m, depth)
    L = log2_at_dyadic(omega, lat)
    rep = AxiomReport()

    finite = np.isfinite(L)
    steps = [np.diff(L, axis=j) for j in range(m)]  # L(s + e_j) - L(s)
    worst_step = max(float(d.max()) for d in steps)
    rep.passed["1"] = bool(finite.all()) and worst_step < 0
    rep.constants["1"] = worst_step
    rep.witness["1"] = None
    if not rep.passed["1"]:
        j = int(np.argmax([d.max() for d in steps]))
        rep.witness["1"] = _argmax_point(steps[j])

    rep.passed["2"] = worst_step <= atol
    rep.constants["2"] = float(2.0**worst_step)
    rep.witness["2"] = rep.witness["1"] if not rep.passed["2"] else None

    # axiom 3: log2 Omega(k t) - l * log2(prod k) - log2 Omega(t) <= 0
    worst = -np.inf
    worst_at = None
    for a in itertools.product(range(3), repeat=m):
        a_arr = np.asarray(a)
        if not a_arr.any():
            continue
        sl = tuple(slice(int(aj), None) for aj in a_arr)
        Ls = L[sl]
        Lk = L[tuple(slice(0, L.shape[j] - int(a_arr[j])) for j in range(m))]
        excess = Lk - omega.order * a_arr.sum() - Ls
        e = float(excess.max())
        if e > worst:
            worst = e
            pt = _argmax_point(excess)
            worst_at = tuple(int(x + aj) for x, aj in zip(pt, a_arr))
    rep.passed["3"] = worst <= atol
    rep.constants["3"] = float(2.0**worst)
    rep.witness["3"] = None if rep.passed["3"] else worst_at

    rep.passed["4"] = True
    rep.constants["4"] = float("nan")
    rep.witness["4"] = None
    return rep


@functools.lru_cache(maxsize=128)
def is_valid_modulus(omega: MixedModulus, depth: int = DEFAULT_DEPTH) -> bool:
    return check_modulus_axioms(omega, depth).ok


def _almost_constants(G: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """log2 of the almost-increase and almost-decrease constants per fiber start.

    ``G`` holds ``log2 g(2^-s)`` and ``t`` decreases as ``s`` grows along ``axis``.
    """
    rev = np.flip(G, axis=axis)
    suffix_max = np.flip(np.maximum.accumulate(rev, axis=axis), axis=axis)
    suffix_min = np.flip(np.minimum.accumulate(rev, axis=axis), axis=axis)
    return suffix_max - G, G - suffix_min


def check_S_conditions(omega: MixedModulus, alpha, depth: int = DEFAULT_DEPTH, kind: str = "both",
                       max_constant: float = 2.0) -> AxiomReport:
    """Measure how far ``t_j^-alpha_j Omega(t)`` is from monotone along each axis.

    ``(S)``: almost increasing in ``t_j``, needs ``0 < alpha_j < 1``.
    ``(S_l)``: almost decreasing in ``t_j``, needs ``0 < alpha_j < l``.
    Constants for both conditions are always reported; ``kind`` selects which
    of them must stay within ``max_constant`` (an exactly monotone function
    measures 1).
    """
    if kind not in ("S", "S_l", "both"):
        raise ValueError("kind must be 'S', 'S_l' or 'both'")
    alpha = exponents(alpha, "alpha", omega.dim)
    if kind in ("S", "both") and any(not 0 < a < 1 for a in alpha):
        raise ValueError("condition (S) needs 0 < alpha_j < 1")
    if kind in ("S_l", "both") and any(not 0 < a < omega.order for a in alpha):
        raise ValueError(f"condition (S_l) needs 0 < alpha_j < l = {omega.order}")
    lat = _lattice(omega.dim, depth)
    L = log2_at_dyadic(omega, lat)
    rep = AxiomReport()
    for j, a in enumerate(alpha):
        G = L + a * lat[..., j]
        inc, dec = _almost_constants(G, j)
        for name, arr in ((f"S[{j + 1}]", inc), (f"S_l[{j + 1}]", dec)):
            c = float(2.0 ** arr.max())
            rep.constants[name] = c
            cond = name.split("[")[0]
            if kind == "both" or kind == cond:
                rep.passed[name] = c <= max_constant
                rep.witness[name] = None if rep.passed[name] else _argmax_point(arr)
    return rep


# ---------------------------------------------------------------------------
# configuration syntax

_OMEGA_RE = re.compile(r"^\s*(power|power_log)\s*\((.*)\)\s*$")


def parse_omega(text: str, order: int | None = None) -> MixedModulus:
    """Parse ``power(r1,...,rm)`` or ``power_log(r1,...,rm; b1,...,bm)``."""
    mt = _OMEGA_RE.match(text)
    if not mt:
        raise ValueError(f"cannot parse modulus {text!r}")
    fam, body = mt.groups()
    try:
        if fam == "power":
            r = [float(v) for v in body.split(",")]
            return power(*r, order=order)
        r_txt, b_txt = body.split(";")
        return power_log([float(v) for v in r_txt.split(",")], [float(v) for v in b_txt.split(",")], order=order)
    except ValueError as exc:
        raise ValueError(f"cannot parse modulus {text!r}: {exc}") from None
