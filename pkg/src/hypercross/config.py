"""Line-based experiment configuration.

Syntax: one ``key = value`` per line, ``#`` starts a comment, vectors are
comma separated, ladder entries may be written ``2^k``.  Unknown and
duplicate keys are errors reported with their line number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .modulus import MixedModulus, parse_omega


class ConfigError(ValueError):
    """Invalid configuration; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _number(tok: str) -> float:
    tok = tok.strip()
    if tok.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if "^" in tok:
        base, ex = tok.split("^")
        return float(base) ** float(ex)
    if "/" in tok:
        a, b = tok.split("/")
        return float(a) / float(b)
    return float(tok)


def _vector(text: str) -> tuple[float, ...]:
    return tuple(_number(t) for t in text.split(","))


def _integer(text: str) -> int:
    v = _number(text)
    if v != int(v):
        raise ValueError(f"{text!r} is not an integer")
    return int(v)


_VECTOR_KEYS = {"p", "q", "theta1", "theta2", "tau", "lambda", "gamma", "gamma_prime", "beta", "r", "s_tilde"}
_INT_KEYS = {"m", "order", "oversample", "seed", "threads", "count", "smax"}
_FLOAT_KEYS = {"C3", "alpha", "N"}
_STR_KEYS = {"omega", "theorem", "witness", "set", "out"}
_LIST_KEYS = {"ladder", "degrees"}
KNOWN_KEYS = _VECTOR_KEYS | _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _LIST_KEYS

THEOREMS = ("T4.1", "T4.2", "T5.2", "T5.3", "T6")


@dataclass
class ExperimentConfig:
    m: int
    p: tuple = ()
    theta1: tuple = ()
    theta2: tuple = ()
    q: tuple = ()
    tau: tuple = ()
    lam: tuple = ()
    omega: MixedModulus | None = None
    order: int | None = None
    ladder: tuple = (16, 32, 64, 128, 256, 512)
    oversample: int = 1
    seed: int = 0
    threads: int = 1
    out: str | None = None
    C3: float = 1.0
    theorem: str | None = None
    r: tuple = ()
    gamma: tuple = ()
    gamma_prime: tuple = ()
    alpha: float = 1.0
    beta: tuple = ()
    degrees: tuple = (16, 64)
    count: int = 10
    witness: str | None = None
    N: float | None = None
    set: str = "lambda"
    s_tilde: tuple | None = None
    smax: int = 6
    lines: dict = field(default_factory=dict)

    @property
    def l(self) -> int:
        return self.omega.order if self.omega is not None else (self.order or 1)

    @property
    def point(self) -> float:
        """The single ``N`` used by the ``sets`` and ``witness`` suites."""
        return self.N if self.N is not None else self.ladder[-1]


def parse_text(text: str) -> ExperimentConfig:
    raw: dict[str, tuple[str, int]] = {}
    for no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", no)
        key, val = (t.strip() for t in body.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", no)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r} (first set on line {raw[key][1]})", no)
        if not val:
            raise ConfigError(f"empty value for {key!r}", no)
        raw[key] = (val, no)

    vals: dict = {}
    for key, (val, no) in raw.items():
        try:
            if key in _VECTOR_KEYS:
                v = _vector(val)
                vals[key] = tuple(int(x) for x in v) if key == "s_tilde" else v
            elif key in _INT_KEYS:
                vals[key] = _integer(val)
            elif key in _FLOAT_KEYS:
                vals[key] = _number(val)
            elif key in _LIST_KEYS:
                vals[key] = tuple(_integer(t) for t in val.split(","))
            else:
                vals[key] = val
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", no) from None
    lines = {k: no for k, (_, no) in raw.items()}

    if "omega" in vals:
        try:
            vals["omega"] = parse_omega(vals["omega"], vals.get("order"))
        except ValueError as exc:
            raise ConfigError(str(exc), lines["omega"]) from None

    m = vals.get("m")
    if m is None:
        for key in ("p", "q", "tau", "theta1", "r", "gamma"):
            if key in vals:
                m = len(vals[key])
                break
        else:
            if "omega" in vals:
                m = vals["omega"].dim
    if m is None:
        raise ConfigError("cannot determine the dimension m (set 'm' or a vector key)")
    if not 1 <= m <= 4:
        raise ConfigError("m must lie in 1..4", lines.get("m"))
    for key in _VECTOR_KEYS:
        if key in vals and len(vals[key]) != m:
            raise ConfigError(f"{key!r} has {len(vals[key])} entries, expected m={m}", lines[key])
    if "omega" in vals and vals["omega"].dim != m:
        raise ConfigError(f"omega has dimension {vals['omega'].dim}, expected m={m}", lines["omega"])

    if "ladder" in vals:
        lad = vals["ladder"]
        if any(b <= a for a, b in zip(lad, lad[1:])):
            raise ConfigError("ladder must be strictly increasing", lines["ladder"])
        if any(n < 2 or n & (n - 1) for n in lad):
            raise ConfigError("ladder entries must be powers of two >= 2", lines["ladder"])
    if "theorem" in vals and vals["theorem"] not in THEOREMS:
        raise ConfigError(f"theorem must be one of {', '.join(THEOREMS)}", lines["theorem"])
    for key in ("oversample", "threads", "count", "smax"):
        if key in vals and vals[key] < 1:
            raise ConfigError(f"{key!r} must be >= 1", lines[key])

    if "lambda" in vals:
        vals["lam"] = vals.pop("lambda")
    cfg = ExperimentConfig(m=m, **{k: v for k, v in vals.items() if k != "m"})
    cfg.lines = lines
    return cfg


def parse_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_text(text)
