"""Experiment suites: lemma tables, rate ladders, inequality ensembles.

Every suite returns ``(header, rows)``; rows are plain tuples so that
:func:`emit_csv` alone decides the text format.
"""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import ConfigError, ExperimentConfig
from .index_sets import (characteristic, format_levels, gamma_perp_weighted_norm, gamma_set, kappa_set,
                         lambda_prime_and_cubes, lambda_set, q_set, weighted_sequence)
from .inequalities import EnsembleSpec, check_theorem1, check_theorem2, check_theorem3
from .modulus import omega1_derived
from .norms import exponents, sequence_norm, tensor_lebesgue_norm, tensor_lorentz_norm
from .spectral import CoefficientTensor, complement_sum, step_hyperbolic_sum
from .witnesses import (block_exponential, build_f0, build_f1, build_f4, build_psi_f3, build_single_harmonic,
                        check_theorem4_hypotheses, check_theorem6_hypotheses, choose_level, dirichlet_kernel,
                        fejer_kernel, format_tensor, step_level, weighted_block)

log = logging.getLogger("hypercross")

LEMMA_HEADER = ("lemma", "n", "N", "exact", "predicted", "ratio")
RATE_HEADER = ("N", "error", "predicted", "ratio", "upper", "wall_ms")
INEQUALITY_HEADER = ("theorem", "degree", "count", "max_ratio", "min_ratio")
NORM_HEADER = ("kind", "param", "value", "predicted", "ratio")


def _need(cfg: ExperimentConfig, *keys: str) -> None:
    missing = [k for k in keys if not getattr(cfg, "lam" if k == "lambda" else k)]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")


def _validated(fn: Callable, *args):
    try:
        return fn(*args)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _map_ladder(cfg: ExperimentConfig, fn: Callable[[int], list]) -> list:
    """Run ``fn`` on every ladder point, in parallel threads, rows sorted by N."""
    if cfg.threads > 1 and len(cfg.ladder) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            chunks = list(ex.map(fn, cfg.ladder))
    else:
        chunks = [fn(N) for N in cfg.ladder]
    rows = [r for chunk in chunks for r in chunk]
    return sorted(rows, key=lambda r: r[0] if isinstance(r[0], (int, float)) else r[2])


def _sum_inv(vals: Sequence[float]) -> float:
    return sum(1.0 / v for v in vals)


# ---------------------------------------------------------------------------
# lemmas


def run_lemma_suite(cfg: ExperimentConfig):
    _need(cfg, "tau", "omega")
    m = cfg.m
    tau = _validated(exponents, cfg.tau, "tau", m)
    gamma = cfg.gamma or (1.0,) * m
    gamma_p = cfg.gamma_prime or gamma
    beta = cfg.beta or (0.0,) * m
    theta = cfg.theta1 or tau
    omega = cfg.omega
    nu = next((j for j in range(m) if gamma_p[j] != gamma[j]), m)
    tail = _sum_inv(tau[1:])

    def point(N: int) -> list:
        n = int(round(math.log2(N)))
        rows = []
        kap = kappa_set(n, gamma)
        v = sequence_norm(characteristic(kap), tau)
        rows.append(("lemma1", n, N, v, n**tail, v / n**tail))
        weights = {s: 2.0 ** (-cfg.alpha * float(np.dot(s, gamma_p))) for s in kap}
        v = sequence_norm(weights, tau)
        pred = 2.0 ** (-n * cfg.alpha) * n ** _sum_inv(tau[1:nu])
        rows.append(("lemma2", n, N, v, pred, v / pred))
        lam = lambda_set(omega, N)
        v = gamma_perp_weighted_norm(omega, N, beta, theta)
        pred = sequence_norm(weighted_sequence(omega, lam, beta), theta)
        rows.append(("lemma3", n, N, v, pred, v / pred))
        v = sequence_norm(characteristic(lam), tau)
        rows.append(("lemma4", n, N, v, n**tail, v / n**tail))
        pred = float(n ** (m - 1))
        rows.append(("eq4", n, N, float(len(lam)), pred, len(lam) / pred))
        return rows

    rows = _map_ladder(cfg, point)
    order = {"lemma1": 0, "lemma2": 1, "lemma3": 2, "lemma4": 3, "eq4": 4}
    return LEMMA_HEADER, sorted(rows, key=lambda r: (order[r[0]], r[2]))


# ---------------------------------------------------------------------------
# rates


def _rate_plan(cfg: ExperimentConfig):
    """Validate the theorem's hypotheses; return ``point(N) -> (error, predicted, upper)``."""
    th = cfg.theorem
    if th is None:
        raise ConfigError("the rates suite needs 'theorem'")
    m, omega, l = cfg.m, cfg.omega, cfg.l
    ov = cfg.oversample
    logsum = lambda N, e: math.log2(N) ** e  # noqa: E731

    if th in ("T4.1", "T4.2"):
        _need(cfg, "omega", "p", "q", "tau", "theta1", "theta2")
        _validated(check_theorem4_hypotheses, omega, cfg.p, cfg.q, cfg.tau)
        _validated(exponents, cfg.theta2, "theta", m)
        omega1 = _validated(omega1_derived, omega, cfg.p, cfg.q)
        if th == "T4.1":
            if any(not a < b for a, b in zip(cfg.theta2, cfg.tau)):
                raise ConfigError("T4.1 needs theta2_j < tau_j")
            ex = sum(1 / a - 1 / b for a, b in zip(cfg.theta2[1:], cfg.tau[1:]))

            def point(N):
                f = build_f0(omega, N, l, cfg.p, cfg.tau, cfg.q)
                err = tensor_lorentz_norm(complement_sum(f, q_set(omega1, N)), cfg.q, cfg.theta2, ov)
                pred = logsum(N, ex) / N
                return err, pred, pred
        else:
            if any(not a <= b for a, b in zip(cfg.tau, cfg.theta2)):
                raise ConfigError("T4.2 needs tau_j <= theta2_j")

            def point(N):
                lam = lambda_set(omega1, N, l)
                s = tuple(cfg.s_tilde) if cfg.s_tilde else choose_level(omega1, lam)
                f = build_f1(omega, s, cfg.p, cfg.q, N, l)
                err = tensor_lorentz_norm(complement_sum(f, q_set(omega1, N)), cfg.q, cfg.theta2, ov)
                return err, 1.0 / N, 1.0 / N
        return point

    if th in ("T5.2", "T5.3"):
        _need(cfg, "omega", "p", "q", "tau", "theta2")
        p = _validated(exponents, cfg.p, "p", m)
        q = _validated(exponents, cfg.q, "q", m)
        tau = _validated(exponents, cfg.tau, "tau", m)
        _validated(exponents, cfg.theta2, "theta", m)
        if any(qj >= pj for qj, pj in zip(q, p)):
            raise ConfigError("T5 needs q_j < p_j")
        if th == "T5.2":
            if any(pj < 2 for pj in p) or any(t > 2 for t in tau):
                raise ConfigError("T5.2 needs p_j >= 2 and tau_j <= 2")

            def point(N):
                f, _ = build_single_harmonic(omega, N, l)
                err = tensor_lorentz_norm(complement_sum(f, q_set(omega, N)), q, cfg.theta2, ov)
                return err, 1.0 / N, 1.0 / N
        else:
            p0 = min(p)
            if any(pj > 2 for pj in p) or any(t <= p0 or math.isinf(t) for t in tau):
                raise ConfigError("T5.3 needs p_j <= 2 and min(p) < tau_j < inf")
            lo = sum(1 / pj - 1 / t for pj, t in zip(p[1:], tau[1:]))
            hi = sum(1 / p0 - 1 / t for t in tau[1:])

            def point(N):
                f = build_psi_f3(omega, N, l, p, tau, cfg.C3, q).f3
                err = tensor_lorentz_norm(complement_sum(f, q_set(omega, N)), q, cfg.theta2, ov)
                return err, logsum(N, lo) / N, logsum(N, hi) / N
        return point

    # T6
    r = cfg.r or (omega.r if omega is not None and omega.family == "power" else ())
    if not r:
        raise ConfigError("T6 needs 'r' or a power omega")
    _need(cfg, "p", "theta1", "tau")
    if len(set(cfg.p)) != 1:
        raise ConfigError("T6 lower bound needs p_1 = ... = p_m")
    p = cfg.p[0]
    _validated(check_theorem6_hypotheses, r, p, cfg.theta1, cfg.tau)
    for N in cfg.ladder:
        n, gamma = step_level(r, N)
        if not any(all(v >= 1 for v in s) for s in kappa_set(n, gamma)):
            raise ConfigError(f"N={N}: no nonempty block on the level <s, gamma> = {n}; "
                              f"choose a ladder with log2(N)/r_1 attainable", cfg.lines.get("ladder"))
    lo = sum(1 / p - 1 / t for t in cfg.theta1) + sum(1 / p - 1 / t for t in cfg.tau[1:])
    hi = sum(1 / p - 1 / t for t in cfg.theta1) + sum(0.5 - 1 / t for t in cfg.tau[1:])

    def point(N):
        f = build_f4(r, N, p, cfg.theta1, cfg.tau)
        n, gamma = step_level(r, N)
        resid = f - step_hyperbolic_sum(f, [float(g) for g in gamma], float(n))
        err = tensor_lebesgue_norm(resid, cfg.p, ov)
        # 2^(-r_1 n) with n = log2(N) / r_1, which is 1/N
        decay = 2.0 ** (-r[0] * float(n))
        return err, decay * logsum(N, lo), decay * logsum(N, hi)
    return point


def run_rate_experiment(cfg: ExperimentConfig, theorem: str | None = None):
    if theorem is not None:
        cfg.theorem = theorem
    point = _rate_plan(cfg)

    def row(N: int) -> list:
        t0 = time.perf_counter()
        err, pred, upper = point(N)
        ms = (time.perf_counter() - t0) * 1e3
        log.info("%s N=%d error=%.6g ratio=%.6g", cfg.theorem, N, err, err / pred)
        return [(N, err, pred, err / pred, upper, ms)]

    return RATE_HEADER, _map_ladder(cfg, row)


# ---------------------------------------------------------------------------
# inequalities


def _lacunary_ensemble(m: int, degree: int, count: int, seed: int) -> list[dict]:
    top = max(1, int(degree).bit_length())
    rng = np.random.default_rng(seed)
    levels = [tuple(int(x) for x in s) for s in np.ndindex(*(top,) * m)]
    out = []
    for _ in range(count):
        vals = rng.uniform(0.5, 1.5, size=len(levels))
        out.append({tuple(v + 1 for v in s): float(b) for s, b in zip(levels, vals)})
    return out


def run_inequality_suite(cfg: ExperimentConfig):
    _need(cfg, "q")
    m = cfg.m
    q = _validated(exponents, cfg.q, "q", m)
    do_t2 = bool(cfg.p and cfg.theta1 and cfg.theta2)
    if do_t2:
        _validated(check_theorem2, CoefficientTensor(m, {(1,) * m: 1.0}), cfg.p, cfg.theta1, q, cfg.theta2)
    do_t3 = bool(cfg.lam and cfg.theta1)
    if do_t3:
        _validated(check_theorem3, {(1,) * m: 1.0}, q, cfg.theta1, cfg.lam)

    def point(deg: int) -> list:
        ens = EnsembleSpec(m, deg, cfg.count, cfg.seed).generate()
        rows = []
        r = [check_theorem1(f, q) for f in ens]
        rows.append(("T1", deg, len(r), max(r), min(r)))
        if do_t2:
            r = [check_theorem2(f, cfg.p, cfg.theta1, q, cfg.theta2) for f in ens]
            rows.append(("T2", deg, len(r), max(r), min(r)))
        if do_t3:
            r = [check_theorem3(b, q, cfg.theta1, cfg.lam) for b in _lacunary_ensemble(m, deg, cfg.count, cfg.seed)]
            rows.append(("T3", deg, len(r), max(r), min(r)))
        return rows

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            chunks = list(ex.map(point, cfg.degrees))
    else:
        chunks = [point(d) for d in cfg.degrees]
    rows = [r for c in chunks for r in c]
    return INEQUALITY_HEADER, sorted(rows, key=lambda r: (r[0], r[1]))


# ---------------------------------------------------------------------------
# norm laws


def run_norm_suite(cfg: ExperimentConfig):
    """Kernel norm laws over the ladder, block relations over levels ``1..smax``."""
    _need(cfg, "p", "theta1")
    m = cfg.m
    p = _validated(exponents, cfg.p, "p", m)
    th = _validated(exponents, cfg.theta1, "theta", m)
    ov = cfg.oversample
    rows = []
    for n in cfg.ladder:
        v = tensor_lorentz_norm(dirichlet_kernel(n), p[:1], th[:1], ov)
        pred = n ** (1 - 1 / p[0])
        rows.append(("dirichlet", n, v, pred, v / pred))
    for n in cfg.ladder:
        v = tensor_lebesgue_norm(fejer_kernel(n), p[:1], ov)
        pred = n ** (1 - 1 / p[0])
        rows.append(("fejer", n, v, pred, v / pred))
    for k in range(1, cfg.smax + 1):
        s = (k,) * m
        v = tensor_lorentz_norm(block_exponential(s), p, th, ov)
        pred = math.prod(2.0 ** (sj * (1 - 1 / pj)) for sj, pj in zip(s, p))
        rows.append(("block", k, v, pred, v / pred))
    for k in range(1, cfg.smax + 1):
        s = (k,) * m
        v = tensor_lorentz_norm(weighted_block(s, p[0]), p, th, ov)
        pred = math.prod((sj + 1) ** (1 / tj) for sj, tj in zip(s, th))
        rows.append(("weighted_block", k, v, pred, v / pred))
    return NORM_HEADER, rows


# ---------------------------------------------------------------------------
# text exports


def sets_text(cfg: ExperimentConfig) -> str:
    _need(cfg, "omega")
    N, omega = cfg.point, cfg.omega
    kind = cfg.set
    if kind == "gamma":
        return format_levels(gamma_set(omega, N))
    if kind == "lambda":
        return format_levels(lambda_set(omega, N, cfg.l))
    if kind == "lambda_prime":
        return format_levels(lambda_prime_and_cubes(omega, N, cfg.l, cfg.C3).lambda_prime)
    if kind == "lambda_bar":
        return format_levels(lambda_prime_and_cubes(omega, N, cfg.l, cfg.C3).lambda_bar)
    if kind == "kappa":
        return format_levels(kappa_set(int(round(math.log2(N))), cfg.gamma or (1,) * cfg.m))
    if kind == "q":
        return format_levels(q_set(omega, N))
    raise ConfigError(f"unknown set {kind!r}; use gamma, lambda, lambda_prime, lambda_bar, kappa or q",
                      cfg.lines.get("set"))


def witness_tensor(cfg: ExperimentConfig) -> CoefficientTensor:
    kind, N, omega, l = cfg.witness, cfg.point, cfg.omega, cfg.l
    if kind is None:
        raise ConfigError("the witness suite needs 'witness'")
    if kind == "f0":
        _need(cfg, "omega", "p", "q", "tau")
        return _validated(build_f0, omega, N, l, cfg.p, cfg.tau, cfg.q)
    if kind == "f1":
        _need(cfg, "omega", "p", "q")
        omega1 = _validated(omega1_derived, omega, cfg.p, cfg.q)
        s = tuple(cfg.s_tilde) if cfg.s_tilde else choose_level(omega1, lambda_set(omega1, N, l))
        return _validated(build_f1, omega, s, cfg.p, cfg.q, N, l)
    if kind == "f2":
        _need(cfg, "omega")
        return build_single_harmonic(omega, N, l)[0]
    if kind == "f3":
        _need(cfg, "omega", "p", "tau")
        return _validated(build_psi_f3, omega, N, l, cfg.p, cfg.tau, cfg.C3, cfg.q or None).f3
    if kind == "f4":
        _need(cfg, "p", "theta1", "tau")
        r = cfg.r or (omega.r if omega is not None else ())
        return _validated(build_f4, r, N, cfg.p[0], cfg.theta1, cfg.tau)
    raise ConfigError(f"unknown witness {kind!r}; use f0, f1, f2, f3 or f4", cfg.lines.get("witness"))


def witness_text(cfg: ExperimentConfig) -> str:
    return format_tensor(witness_tensor(cfg))


# ---------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(header: Sequence[str], rows: Iterable[Sequence], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(v) for v in r])
