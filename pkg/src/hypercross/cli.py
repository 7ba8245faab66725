"""Command line entry point: ``hypercross <suite> --config PATH --out PATH``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .config import ConfigError, parse_config

log = logging.getLogger("hypercross")

SUITES = ("lemmas", "rates", "inequalities", "sets", "witness", "norms")

_CSV_SUITES = {
    "lemmas": harness.run_lemma_suite,
    "rates": harness.run_rate_experiment,
    "inequalities": harness.run_inequality_suite,
    "norms": harness.run_norm_suite,
}


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("thread count must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypercross", description="Hyperbolic-cross approximation experiments.")
    ap.add_argument("suite", choices=SUITES)
    ap.add_argument("--config", required=True, help="key = value experiment file")
    ap.add_argument("--out", help="output path (defaults to the config's 'out' key)")
    ap.add_argument("--seed", type=_u64, help="override the config seed")
    ap.add_argument("--threads", type=_positive, help="override the config thread count")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = parse_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.threads = args.threads
        out = args.out or cfg.out
        if not out:
            raise ConfigError("no output path: pass --out or set 'out'")
    except ConfigError as exc:
        log.error("%s: %s", args.config, exc)
        return 1

    try:
        if args.suite in _CSV_SUITES:
            header, rows = _CSV_SUITES[args.suite](cfg)
            harness.emit_csv(header, rows, out)
        else:
            text = harness.sets_text(cfg) if args.suite == "sets" else harness.witness_text(cfg)
            with open(out, "w") as fh:
                fh.write(text)
    except ConfigError as exc:
        log.error("%s: %s", args.config, exc)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.error("%s failed: %s", args.suite, exc)
        log.debug("traceback", exc_info=True)
        return 2
    log.info("wrote %s", out)
    return 0


def main() -> None:
    sys.exit(run())
