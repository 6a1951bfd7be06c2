"""Independent reference computations shared by the tests.

Nothing here imports the package's transform or channel code.
"""

import numpy as np


def idaft_direct(x, c1, c2):
    n_pts = len(x)
    out = np.zeros(n_pts, dtype=complex)
    for n in range(n_pts):
        for m in range(n_pts):
            out[n] += x[m] * np.exp(2j * np.pi * (c1 * n * n + c2 * m * m + m * n / n_pts))
    return out / np.sqrt(n_pts)


def daft_direct(r, c1, c2):
    n_pts = len(r)
    out = np.zeros(n_pts, dtype=complex)
    for m in range(n_pts):
        for n in range(n_pts):
            out[m] += r[n] * np.exp(-2j * np.pi * (c1 * n * n + c2 * m * m + m * n / n_pts))
    return out / np.sqrt(n_pts)


def dft_direct(v):
    n_pts = len(v)
    k = np.arange(n_pts)
    return np.array([np.sum(v * np.exp(-2j * np.pi * k * q / n_pts)) for q in range(n_pts)]) / np.sqrt(n_pts)


def kappa_direct(n_d, l_hat, phi):
    m = np.arange(l_hat, n_d + l_hat)
    return np.sum(np.exp(2j * np.pi * m * phi / n_d)) / n_d


def channel_direct(s_cpp, paths, cpp_len, n_pts):
    """r_cpp[n] = sum h s_cpp[n - l] exp(j 2 pi k n / N), zero before the frame."""
    out = np.zeros(len(s_cpp), dtype=complex)
    for pos in range(len(s_cpp)):
        n = pos - cpp_len
        for h, l, k in paths:
            if pos - l >= 0:
                out[pos] += h * s_cpp[pos - l] * np.exp(2j * np.pi * k * n / n_pts)
    return out


def random_paths(rng, n_paths, l_max, k_max):
    gains = (rng.standard_normal(n_paths) + 1j * rng.standard_normal(n_paths)) / np.sqrt(2 * n_paths)
    delays = rng.integers(0, l_max + 1, n_paths)
    dopplers = rng.integers(-k_max, k_max + 1, n_paths)
    return gains, delays, dopplers


def crandn(rng, n):
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
