"""Unitary DAFT/IDAFT, DFT/IDFT and the kappa leakage kernel."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels


class DimensionError(ValueError):
    """Input length does not match the transform size."""


@dataclass(frozen=True)
class ChirpParams:
    """Post-chirp rate ``c1``, pre-chirp rate ``c2`` and transform size."""

    c1: float
    c2: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError(f"n_points must be positive, got {self.n_points}")


def _integer_denominator(rate, n_points):
    """Return an integer D with rate == r/D for integer r, or None."""
    if rate == 0:
        return 1
    for den in (2 * n_points, round(1.0 / rate)):
        if den <= 0 or den > 2**31:
            continue
        num = rate * den
        if abs(num - round(num)) < 1e-9 * max(1.0, abs(num)):
            return int(den)
    return None


def chirp_fraction(rate, idx, n_points):
    """``rate * idx`` reduced mod 1, exactly when ``rate`` is a simple rational.

    ``idx`` must hold integers. For the AFDM rates picked by ``select_params``
    both c1 (denominator 2N) and c2 (numerator 1) are rational, so the large
    quadratic phases never lose precision.
    """
    idx = np.asarray(idx, dtype=np.int64)
    den = _integer_denominator(rate, n_points)
    if den is None:
        return np.mod(rate * idx.astype(np.float64), 1.0)
    num = int(round(rate * den))
    return np.mod(num * np.mod(idx, den), den) / den


@lru_cache(maxsize=64)
def _chirps(p):
    idx = np.arange(p.n_points, dtype=np.int64) ** 2
    post = np.exp(2j * np.pi * chirp_fraction(p.c1, idx, p.n_points))
    pre = np.exp(2j * np.pi * chirp_fraction(p.c2, idx, p.n_points))
    post.flags.writeable = False
    pre.flags.writeable = False
    return post, pre


def _check(v, n):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != n:
        raise DimensionError(f"expected a length-{n} vector, got shape {v.shape}")
    return v


def idaft(x, p):
    """Inverse DAFT: s[n] = 1/sqrt(N) sum_m x[m] exp(j2pi(c1 n^2 + c2 m^2 + mn/N))."""
    x = _check(x, p.n_points)
    post, pre = _chirps(p)
    return post * np.fft.ifft(pre * x, norm="ortho")


def daft(r, p):
    """Forward DAFT, the exact inverse of :func:`idaft`."""
    r = _check(r, p.n_points)
    post, pre = _chirps(p)
    return np.conj(pre) * np.fft.fft(np.conj(post) * r, norm="ortho")


def dft(v):
    """Unitary DFT of any length."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a nonempty vector, got shape {v.shape}")
    return np.fft.fft(v, norm="ortho")


def idft(v):
    """Unitary inverse DFT of any length."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a nonempty vector, got shape {v.shape}")
    return np.fft.ifft(v, norm="ortho")


def kappa(n_d, l_hat, phi):
    """Sinc-like leakage kernel.

    ``kappa(N_d, l, phi) = 1/N_d * sum_{m=l}^{N_d+l-1} exp(j 2 pi m phi / N_d)``,
    evaluated as a closed-form geometric sum. Accepts scalars or arrays for
    ``l_hat`` and ``phi``; returns a scalar for scalar input.
    """
    if n_d < 1:
        raise ValueError(f"n_d must be >= 1, got {n_d}")
    out = kernels.kappa(n_d, l_hat, phi)
    if np.ndim(phi) == 0 and np.ndim(l_hat) == 0:
        return complex(out[0])
    return out


def daft_matrix(p):
    """Dense unitary DAFT matrix, built entry by entry (test oracle, O(N^2))."""
    n = np.arange(p.n_points)
    ph = p.c1 * n[None, :] ** 2 + p.c2 * n[:, None] ** 2 + np.outer(n, n) / p.n_points
    return np.exp(-2j * np.pi * ph) / np.sqrt(p.n_points)


def dft_matrix(n):
    """Dense unitary DFT matrix."""
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)
