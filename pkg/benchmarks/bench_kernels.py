"""Compare the numba and numpy reduction kernels, plus one end-to-end norm.

    python3 benchmarks/bench_kernels.py [--fibers 4096] [--length 1024] [--repeat 5]

The end-to-end timing runs in a subprocess per backend since the backend is
chosen at import time from HYPERCROSS_DISABLE_JIT.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from hypercross import _jit


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(fibers, length, repeat):
    rng = np.random.default_rng(0)
    x = rng.random((fibers, length))
    w = _jit.lorentz_weights(length, 2.0, 1.5)
    cell = 2 * np.pi / length
    cases = {
        "lorentz 1.5": (_jit._lorentz_reduce_numpy, getattr(_jit, "_lorentz_reduce_jit", None), (x, w, 1.5)),
        "lorentz 2.7": (_jit._lorentz_reduce_numpy, getattr(_jit, "_lorentz_reduce_jit", None), (x, w, 2.7)),
        "lebesgue 3": (_jit._lebesgue_reduce_numpy, getattr(_jit, "_lebesgue_reduce_jit", None), (x, cell, 3.0)),
        "lp 2.5": (_jit._lp_reduce_numpy, getattr(_jit, "_lp_reduce_jit", None), (x, 2.5)),
        "lp inf": (_jit._lp_reduce_numpy, getattr(_jit, "_lp_reduce_jit", None), (x, np.inf)),
    }
    print(f"kernels on a {fibers}x{length} array, best of {repeat}")
    print(f"{'kernel':<14}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, (np_fn, jit_fn, args) in cases.items():
        t_np = best_of(lambda: np_fn(*args), repeat)
        if jit_fn is None:
            print(f"{name:<14}{t_np * 1e3:12.2f}{'n/a':>12}")
            continue
        jit_fn(*args)  # compile
        assert np.allclose(np_fn(*args), jit_fn(*args), rtol=1e-12)
        t_jit = best_of(lambda: jit_fn(*args), repeat)
        print(f"{name:<14}{t_np * 1e3:12.2f}{t_jit * 1e3:12.2f}{t_np / t_jit:10.2f}")


END_TO_END = """
import timeit
from hypercross import _jit
from hypercross.norms import tensor_lorentz_norm
from hypercross.witnesses import block_exponential
c = block_exponential((6, 6))
tensor_lorentz_norm(c, (2, 2), (1.5, 1.5))
t = min(timeit.repeat(lambda: tensor_lorentz_norm(c, (2, 2), (1.5, 1.5)), number=1, repeat={repeat}))
print(_jit.BACKEND, t)
"""


def bench_end_to_end(repeat):
    print("\nblock (6,6) mixed Lorentz norm on a 256x256 grid")
    for flag in ("1", "0"):
        env = dict(os.environ, HYPERCROSS_DISABLE_JIT=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(repeat=repeat)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        print(f"{out[0]:<10}{float(out[1]) * 1e3:12.2f} ms")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fibers", type=int, default=4096)
    ap.add_argument("--length", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _jit.HAVE_NUMBA:
        print("numba is unavailable or disabled; only the numpy path can be timed")
    bench_kernels(args.fibers, args.length, args.repeat)
    bench_end_to_end(args.repeat)


if __name__ == "__main__":
    main()
