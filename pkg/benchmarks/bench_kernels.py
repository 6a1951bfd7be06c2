"""Compare the numpy and numba flavours of each hot kernel.

    python3 benchmarks/bench_kernels.py [--n 4096] [--repeat 20]

Also times one full ZP-AFDM frame (transmit, channel, noise, equalize) in a
subprocess per backend so the ``ZPAFDM_NO_NUMBA`` switch is honoured.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from zpafdm import kernels
from zpafdm._accel import NUMBA_AVAILABLE

FRAME_SNIPPET = """
import numpy as np, timeit
from zpafdm.channel import add_awgn, apply_channel, channel_source
from zpafdm.params import build_config
from zpafdm.zp_afdm import equalize, transmit
cfg = build_config(9, 4, 5, {n}, cpp_len=5)
rng = np.random.default_rng(0)
chan = channel_source("eva", cfg)(rng)
bits = rng.integers(0, 2, 2 * cfg.n_d, dtype=np.uint8)
def frame():
    _, s = transmit(bits, cfg)
    equalize(add_awgn(apply_channel(s, chan, cfg), 0.01, 1), chan, cfg, 0.01)
frame()
print(min(timeit.repeat(frame, number=1, repeat={repeat})))
"""


def _cases(n):
    rng = np.random.default_rng(0)
    s = rng.standard_normal(n + 5) + 1j * rng.standard_normal(n + 5)
    gains = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    delays = np.arange(6, dtype=np.int64) % 6
    dopplers = rng.integers(-4, 5, 6).astype(np.int64)
    phi = rng.uniform(-50, 50, n)
    l_hat = rng.integers(0, 400, n).astype(np.float64)
    n_d = min(n, 512)
    sym = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    bits = rng.integers(0, 2, 2 * n, dtype=np.uint8)
    return {
        "apply_channel": (s, gains, delays, dopplers, 5, n),
        "kappa": (n, l_hat, phi),
        f"foa_matrix (N_d={n_d})": (n_d, gains, delays * 81 + 4, dopplers * n_d / (81 * n)),
        "qpsk_bit_errors": (sym, bits),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        sys.exit("numba is not installed; nothing to compare")

    print(f"kernel timings, N={args.n}, best of {args.repeat} (ms)")
    print(f"{'kernel':28s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for label, call_args in _cases(args.n).items():
        name = label.split()[0]
        numpy_impl, numba_impl = kernels.IMPLEMENTATIONS[name]
        numba_impl(*call_args)  # compile outside the timed region
        a, b = numpy_impl(*call_args), numba_impl(*call_args)
        assert np.allclose(a, b), f"{name}: backends disagree"
        t_np = min(timeit.repeat(lambda: numpy_impl(*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: numba_impl(*call_args), number=1, repeat=args.repeat))
        print(f"{label:28s} {1e3 * t_np:10.3f} {1e3 * t_nb:10.3f} {t_np / t_nb:7.1f}x")

    print(f"\nfull frame (chi=9, N={args.n}), best of {args.repeat} (ms)")
    code = FRAME_SNIPPET.format(n=args.n, repeat=args.repeat)
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, ZPAFDM_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        print(f"{label:28s} {1e3 * float(out.stdout):10.3f}")


if __name__ == "__main__":
    main()
