"""Kernels and extremal functions used in the rate experiments.

Every builder returns a :class:`CoefficientTensor`; translations and
modulations are realized as coefficient phases and shifts, so all witnesses
are exact trigonometric polynomials.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .index_sets import CubeAssignment, kappa_set, lambda_prime_and_cubes, lambda_set
from .modulus import MixedModulus, at_dyadic, check_S_conditions, log2_at_dyadic, omega1_derived, power
from .norms import exponents
from .spectral import CoefficientTensor, dyadic_block


def dirichlet_kernel(n: int) -> CoefficientTensor:
    """``1/2 + sum_{k=1}^n e^{ikx}``."""
    if n < 1:
        raise ValueError("Dirichlet kernel order must be >= 1")
    ent = {(0,): 0.5}
    ent.update({(k,): 1.0 for k in range(1, n + 1)})
    return CoefficientTensor(1, ent)


def fejer_kernel(u: int) -> CoefficientTensor:
    """Fejer kernel of order ``u``: coefficients ``1 - |k|/(u+1)`` for ``|k| <= u``."""
    if u < 1:
        raise ValueError("Fejer kernel order must be >= 1")
    return CoefficientTensor(1, {(k,): 1.0 - abs(k) / (u + 1) for k in range(-u, u + 1)})


def block_exponential(s: Sequence[int]) -> CoefficientTensor:
    """Unit coefficients on the dyadic block ``rho(s)``."""
    s = tuple(int(v) for v in s)
    if any(v < 1 for v in s):
        raise ValueError(f"dyadic block {s} is empty")
    return CoefficientTensor(len(s), {k: 1.0 for k in dyadic_block(s)})


def _log_prefactor(N: float, tau: Sequence[float]) -> float:
    """``(log2 N)^(-sum_{j>=2} 1/tau_j)``."""
    return math.log2(N) ** -sum(1.0 / t for t in tau[1:])


def _has_S(omega: MixedModulus, lower: Sequence[float], upper: float, kind: str) -> bool:
    for frac in np.linspace(0.02, 0.98, 25):
        alpha = [lo + frac * (upper - lo) for lo in lower]
        if check_S_conditions(omega, alpha, kind=kind).ok:
            return True
    return False


def check_theorem4_hypotheses(omega: MixedModulus, p, q, tau=None) -> None:
    """Raise ``ValueError`` unless ``1 < p_j < q_j`` and (S), (S_l) hold with ``alpha_j > 1/p_j - 1/q_j``."""
    m = omega.dim
    p = exponents(p, "p", m)
    q = exponents(q, "q", m)
    if any(pj >= qj for pj, qj in zip(p, q)):
        raise ValueError("need p_j < q_j")
    if tau is not None and any(math.isinf(t) for t in exponents(tau, "tau", m)):
        raise ValueError("need finite tau_j")
    delta = [1 / pj - 1 / qj for pj, qj in zip(p, q)]
    if not _has_S(omega, delta, 1.0, "S"):
        raise ValueError("Omega does not satisfy (S) with alpha_j > 1/p_j - 1/q_j")
    if not _has_S(omega, [0.0] * m, float(omega.order), "S_l"):
        raise ValueError("Omega does not satisfy (S_l)")


def choose_level(omega: MixedModulus, levels) -> tuple[int, ...]:
    """Pick the level with a nonempty block and the largest ``Omega(2^-s)``.

    Ties go to the most balanced level (largest minimum component), then to
    the lexicographically smallest.
    """
    cands = sorted(s for s in levels if all(v >= 1 for v in s))
    if not cands:
        raise ValueError("no level with a nonempty dyadic block")
    return max(cands, key=lambda s: (log2_at_dyadic(omega, s), min(s), tuple(-v for v in s)))


def build_f0(omega: MixedModulus, N: float, l: int | None, p, tau, q) -> CoefficientTensor:
    """Lower-bound witness over all blocks of ``Lambda(Omega_1, N)``.

    Amplitude on ``rho(s)``: ``(log2 N)^(-sum_{j>=2} 1/tau_j) Omega(2^-s) prod 2^(-s_j (1 - 1/p_j))``.
    """
    m = omega.dim
    p = exponents(p, "p", m)
    tau = exponents(tau, "tau", m)
    check_theorem4_hypotheses(omega, p, q, tau)
    omega1 = omega1_derived(omega, p, q)
    lam = lambda_set(omega1, N, l)
    if not lam:
        raise ValueError("Lambda(Omega_1, N) is empty")
    pre = _log_prefactor(N, tau)
    ent = {}
    for s in sorted(lam):
        if any(v == 0 for v in s):
            continue
        amp = pre * at_dyadic(omega, s) * 2.0 ** -sum(sj * (1 - 1 / pj) for sj, pj in zip(s, p))
        for k in dyadic_block(s):
            ent[k] = amp
    return CoefficientTensor(m, ent)


def build_f1(omega: MixedModulus, s_tilde: Sequence[int], p, q, N: float, l: int | None = None) -> CoefficientTensor:
    """Single-block witness ``Omega(2^-s) 2^(-sum s_j (1 - 1/p_j)) sum_{k in rho(s)} e^{i<k,x>}``."""
    m = omega.dim
    p = exponents(p, "p", m)
    s_tilde = tuple(int(v) for v in s_tilde)
    lam = lambda_set(omega1_derived(omega, p, q), N, l)
    if s_tilde not in lam:
        raise ValueError(f"level {s_tilde} is not in Lambda(Omega_1, N)")
    amp = at_dyadic(omega, s_tilde) * 2.0 ** -sum(sj * (1 - 1 / pj) for sj, pj in zip(s_tilde, p))
    return block_exponential(s_tilde) * amp


def build_single_harmonic(omega: MixedModulus, N: float, l: int | None = None) -> tuple[CoefficientTensor, tuple[int, ...]]:
    """``Omega(2^-s) e^{i<k,x>}`` with ``k_j = 2^(s_j - 1)`` for a level ``s`` of ``Lambda(Omega, N)``.

    Its block sequence has a single term, so it lies in the class up to the
    constant ``||e^{i<k,x>}||_p``; the residual after ``S_Q`` is the whole function.
    """
    s = choose_level(omega, lambda_set(omega, N, l))
    k = tuple(1 << (v - 1) for v in s)
    return CoefficientTensor(omega.dim, {k: at_dyadic(omega, s)}), s


def fejer_exponent(p: Sequence[float]) -> float:
    """Exponent ``E`` in ``u = floor(|Lambda|^E)``; zero for ``m = 1``."""
    m = len(p)
    if m == 1:
        return 0.0
    tot = sum(1 - 1 / pj for pj in p)
    return sum(1 - 1 / pj for pj in p[1:]) / tot / (m - 1)


@dataclass
class PsiWitness:
    psi: CoefficientTensor
    f3: CoefficientTensor
    u: int
    cubes: CubeAssignment
    lambda_size: int


def build_psi_f3(omega: MixedModulus, N: float, l: int | None, p, tau, C3: float = 1.0, q=None) -> PsiWitness:
    """Sum of modulated, translated Fejer kernels over the chosen Lambda-bar levels.

    ``Psi(x) = sum_s e^{i<k^s, x>} K_u(x - x^s)``, ``k^s_j = 2^s_j + 2^(s_j - 1)``,
    ``K_u(x) = 2^m prod_j K_u(x_j)``, and ``f3 = Psi / (N (log2 N)^(sum_{j>=2} 1/tau_j) u^(sum_j (1 - 1/p_j)))``.
    """
    m = omega.dim
    p = exponents(p, "p", m)
    tau = exponents(tau, "tau", m)
    if any(pj > 2 for pj in p):
        raise ValueError("the Fejer witness needs 1 < p_j <= 2")
    if q is not None:
        q = exponents(q, "q", m)
        if any(qj >= pj for qj, pj in zip(q, p)):
            raise ValueError("the Fejer witness needs q_j < p_j")
    if any(min(p) >= t for t in tau):
        raise ValueError("the Fejer witness needs min(p) < tau_j")
    cubes = lambda_prime_and_cubes(omega, N, l, C3)
    lam_size = len(lambda_set(omega, N, l))
    u = int(math.floor(2.0 ** (fejer_exponent(p) * math.log2(lam_size)) + 1e-9))
    if u < 1:
        raise ValueError("Fejer order u < 1")
    weights = {j: 1.0 - abs(j) / (u + 1) for j in range(-u, u + 1)}
    ent: dict[tuple[int, ...], complex] = {}
    for s in cubes.lambda_bar:  # lexicographic, so overlapping spectra are summed in a fixed order
        ks = [(1 << v) + (1 << (v - 1)) for v in s]
        xs = cubes.centers[s]
        for jv in itertools.product(range(-u, u + 1), repeat=m):
            amp = 2.0**m * math.prod(weights[j] for j in jv)
            phase = cmath.exp(-1j * sum(j * x for j, x in zip(jv, xs)))
            k = tuple(a + j for a, j in zip(ks, jv))
            ent[k] = ent.get(k, 0j) + amp * phase
    psi = CoefficientTensor(m, ent)
    scale = 1.0 / N * _log_prefactor(N, tau) * u ** -sum(1 - 1 / pj for pj in p)
    return PsiWitness(psi, psi * scale, u, cubes, lam_size)


def weighted_block(s: Sequence[int], p: float) -> CoefficientTensor:
    """``sum_{k in rho(s)} prod_j (|k_j| - 2^(s_j-1) + 1)^(1/p - 1) e^{i<k,x>}``.

    Negative frequencies use ``|k_j|`` (symmetric extension).
    """
    s = tuple(int(v) for v in s)
    if any(v < 1 for v in s):
        raise ValueError(f"dyadic block {s} is empty")
    ex = 1.0 / p - 1.0
    ent = {}
    for k in dyadic_block(s):
        ent[k] = math.prod((abs(kj) - (1 << (sj - 1)) + 1) ** ex for kj, sj in zip(k, s))
    return CoefficientTensor(len(s), ent)


def step_level(r: Sequence[float], N: float) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Level ``n = log2(N) / r_1`` and direction ``gamma_j = r_j / r_1`` as exact rationals."""
    lg = math.log2(N)
    lg_rat = Fraction(round(lg)) if abs(lg - round(lg)) < 1e-12 else Fraction(lg).limit_denominator(10**6)
    r_rat = [Fraction(str(float(v))) for v in r]
    return lg_rat / r_rat[0], tuple(v / r_rat[0] for v in r_rat)


def check_theorem6_hypotheses(r, p: float, theta, tau) -> None:
    m = len(r)
    exponents(r, "r", m)
    if min(r) != r[0]:
        raise ValueError("r_1 must be the smallest smoothness exponent")
    if not 2 <= p < math.inf:
        raise ValueError("need 2 <= p < inf")
    theta = exponents(theta, "theta", m)
    tau = exponents(tau, "tau", m)
    if any(not p < t < math.inf for t in theta):
        raise ValueError("need p < theta_j < inf")
    if any(not 2 <= t < math.inf for t in tau):
        raise ValueError("need 2 <= tau_j < inf")


def build_f4(r: Sequence[float], N: float, p: float, theta, tau) -> CoefficientTensor:
    """Witness over the blocks on the hyperplane ``<s, gamma> = log2(N) / r_1``.

    Amplitude at ``k in rho(s)``:
    ``(log2 N)^(-sum_{j>=2} 1/tau_j) prod 2^(-s_j r_j) s_j^(-1/theta_j) (|k_j| - 2^(s_j-1) + 1)^(1/p - 1)``.
    """
    m = len(r)
    theta = exponents(theta, "theta", m)
    tau = exponents(tau, "tau", m)
    check_theorem6_hypotheses(r, p, theta, tau)
    n, gamma = step_level(r, N)
    levels = [s for s in kappa_set(n, gamma) if all(v >= 1 for v in s)]
    if not levels:
        raise ValueError(f"no nonempty block on the level <s, gamma> = {n}")
    pre = _log_prefactor(N, tau)
    ent = {}
    for s in levels:
        amp = pre * math.prod(2.0 ** (-sj * rj) * sj ** (-1.0 / tj) for sj, rj, tj in zip(s, r, theta))
        for k, v in weighted_block(s, p).items():
            ent[k] = amp * v
    return CoefficientTensor(m, ent)


@dataclass
class WitnessSpec:
    """Parameters for one of the witness builders (``kind`` in f0, f1, f2, f3, f4)."""

    kind: str
    params: dict = field(default_factory=dict)

    def build(self) -> CoefficientTensor:
        P = self.params
        if self.kind == "f0":
            return build_f0(P["omega"], P["N"], P.get("l"), P["p"], P["tau"], P["q"])
        if self.kind == "f1":
            s = P.get("s_tilde")
            if s is None:
                s = choose_level(omega1_derived(P["omega"], P["p"], P["q"]),
                                 lambda_set(omega1_derived(P["omega"], P["p"], P["q"]), P["N"], P.get("l")))
            return build_f1(P["omega"], s, P["p"], P["q"], P["N"], P.get("l"))
        if self.kind == "f2":
            return build_single_harmonic(P["omega"], P["N"], P.get("l"))[0]
        if self.kind == "f3":
            return build_psi_f3(P["omega"], P["N"], P.get("l"), P["p"], P["tau"], P.get("C3", 1.0), P.get("q")).f3
        if self.kind == "f4":
            return build_f4(P["r"], P["N"], P["p"], P["theta"], P["tau"])
        raise ValueError(f"unknown witness kind {self.kind!r}")


def format_tensor(c: CoefficientTensor) -> str:
    """One line ``k1 ... km re im`` per stored coefficient, lexicographic order."""
    lines = []
    for k in sorted(c):
        v = c[k]
        lines.append(" ".join(str(x) for x in k) + f" {v.real!r} {v.imag!r}\n")
    return "".join(lines)
