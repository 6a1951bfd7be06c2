"""Effective channel matrices, the boundary phase terms, and brute-force oracles.

Analytic builders:

====== ============================================ =========
kind   relation                                      shape
====== ============================================ =========
aff    y = H_aff x (affine domain, no padding)       N x N
zp     y = H_aff_zp x_d (zero-padded input)          N x N_d
recon  y_d = H_aff_recon x_d (after folding)         N_d x N_d
foa    Y_d = H_foa X_d (FoA domain)                  N_d x N_d
freq   classical CP-OFDM frequency-domain channel    N x N
time   time-domain channel incl. prefix handling     N x N
====== ============================================ =========

The ``brute_*`` functions build the same matrices as literal products of
elementwise-constructed transform, prefix and channel matrices. They are
O(N^3) and meant for N <= a few hundred.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .transforms import ChirpParams, chirp_fraction, daft_matrix, dft_matrix
from .zp_afdm import path_terms

KINDS = ("aff", "zp", "recon", "foa", "freq", "time")


class ContractError(ValueError):
    """A builder was asked for a form whose preconditions do not hold."""


@dataclass(frozen=True)
class EffectiveMatrix:
    kind: str
    entries: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def shape(self):
        return self.entries.shape


def _delay_shift(chirp):
    q = 2 * chirp.c1 * chirp.n_points
    if abs(q - round(q)) > 1e-9:
        raise ContractError(f"2 c1 N = {q} is not an integer; affine shifts leave the grid")
    return int(round(q))


def _affine_shift(path, chirp):
    """k - 2 c1 N l, the affine-domain displacement of one path."""
    return path.doppler - _delay_shift(chirp) * path.delay


def additional_phase_general(path, m, chirp):
    """Boundary phase D_i[m] for arbitrary c2 (unit modulus, 1 off the boundary)."""
    m = np.asarray(m, dtype=np.int64)
    n = chirp.n_points
    a = _affine_shift(path, chirp)
    out = np.ones(m.shape, dtype=np.complex128)
    if a < 0:
        hit = m >= n + a
        arg = n - 2 * (m - a)
    else:
        hit = m < a
        arg = n + 2 * (m - a)
    ph = chirp.c2 * n * arg.astype(np.float64)
    out[hit] = np.exp(2j * np.pi * ph[hit])
    return out


def _check_simplified(chirp):
    n = chirp.n_points
    if abs(4 * chirp.c1 * chirp.c2 * n * n - 1) > 1e-12:
        raise ContractError("the simplified form needs 4 c1 c2 N^2 = 1")


def additional_phase_simplified(path, m, chirp):
    """Boundary phase D'_i[m], valid when 4 c1 c2 N^2 = 1."""
    _check_simplified(chirp)
    m = np.asarray(m, dtype=np.int64)
    n = chirp.n_points
    a = _affine_shift(path, chirp)
    out = np.ones(m.shape, dtype=np.complex128)
    base = 1.0 / (4 * chirp.c1)
    slope = (m - path.doppler) / (2 * chirp.c1 * n)
    if a < 0:
        hit = m >= n + a
        ph = base - slope
    else:
        hit = m < a
        ph = base + slope
    out[hit] = np.exp(2j * np.pi * ph[hit])
    return out


def build_H_aff(chan, chirp, form="simplified", boundary_phase=True):
    """Affine-domain channel matrix from the closed-form IOR.

    ``form="general"`` works for any c2 (2 c1 N must be an integer);
    ``form="simplified"`` requires 4 c1 c2 N^2 = 1. ``boundary_phase=False``
    forces the D terms to 1.
    """
    n = chirp.n_points
    c1, c2 = chirp.c1, chirp.c2
    m = np.arange(n)
    out = np.zeros((n, n), dtype=np.complex128)
    if form == "simplified":
        _check_simplified(chirp)
    elif form != "general":
        raise ValueError(f"unknown form {form!r}")
    for p in chan.paths:
        a = _affine_shift(p, chirp)
        cols = np.mod(m - a, n)
        h, l, k = p.gain, p.delay, p.doppler
        if form == "general":
            eps = 4 * c1 * c2 * n * n - 1
            ph = (m / n) * (eps * l - 2 * c2 * n * k) + (eps * (c1 * n * l * l - l * k) + c2 * n * k * k) / n
            d = additional_phase_general(p, m, chirp) if boundary_phase else 1.0
        else:
            ph = k * k / (4 * c1 * n * n) - k * m / (2 * c1 * n * n)
            d = additional_phase_simplified(p, m, chirp) if boundary_phase else 1.0
        out[m, cols] += h * np.exp(2j * np.pi * ph) * d
    return EffectiveMatrix("aff", out)


def _affine_rotation(k, m, cfg):
    """exp(-j 2 pi k m / (2 c1 N^2)) with the phase reduced exactly."""
    return np.exp(-2j * np.pi * chirp_fraction(2 * cfg.c2, k * np.asarray(m, dtype=np.int64), cfg.n))


def build_H_aff_zp(chan, cfg):
    """N x N_d banded matrix seen by the zero-padded data symbols."""
    h_hat, l_hat, _ = path_terms(chan, cfg)
    out = np.zeros((cfg.n, cfg.n_d), dtype=np.complex128)
    cols = np.arange(cfg.n_d)
    for g, l, k in zip(h_hat, l_hat, chan.dopplers):
        rows = cols + l
        out[rows, cols] += g * _affine_rotation(k, rows, cfg)
    return EffectiveMatrix("zp", out)


def build_H_aff_recon(chan, cfg):
    """N_d x N_d circulant-like matrix after cyclic superposition.

    A path with effective delay l_hat lands row m on column c = (m - l_hat) mod N_d.
    That entry was folded in from row c + l_hat of the zero-padded matrix, so
    the phase ramp is evaluated there (m + N_d for m < l_hat when l_hat <= N_d).
    """
    h_hat, l_hat, _ = path_terms(chan, cfg)
    out = np.zeros((cfg.n_d, cfg.n_d), dtype=np.complex128)
    m = np.arange(cfg.n_d)
    for g, l, k in zip(h_hat, l_hat, chan.dopplers):
        cols = np.mod(m - l, cfg.n_d)
        out[m, cols] += g * _affine_rotation(k, cols + l, cfg)
    return EffectiveMatrix("recon", out)


def build_H_foa(chan, cfg):
    """FoA-domain matrix H[k, k'] = sum_i h_hat_i e^{-j2pi k' l_i/N_d} kappa(k'-k-shift_i)."""
    h_hat, l_hat, shift = path_terms(chan, cfg)
    return EffectiveMatrix("foa", kernels.foa_matrix(cfg.n_d, h_hat, l_hat, shift))


def build_H_freq(chan, n):
    """Frequency-domain matrix of a plain-CP N-point multicarrier frame.

    Integer Doppler k moves subcarrier p to (p + k) mod N with gain
    h exp(-j 2 pi p l / N).
    """
    out = np.zeros((n, n), dtype=np.complex128)
    p = np.arange(n)
    for path in chan.paths:
        out[np.mod(p + path.doppler, n), p] += path.gain * np.exp(
            -2j * np.pi * np.mod(p * path.delay, n) / n
        )
    return EffectiveMatrix("freq", out)


def build_matrix(kind, chan, cfg):
    """Dispatch on ``kind`` (see module docstring)."""
    if kind == "aff":
        return build_H_aff(chan, cfg.chirp)
    if kind == "zp":
        return build_H_aff_zp(chan, cfg)
    if kind == "recon":
        return build_H_aff_recon(chan, cfg)
    if kind == "foa":
        return build_H_foa(chan, cfg)
    if kind == "freq":
        return build_H_freq(chan, cfg.n)
    if kind == "time":
        return EffectiveMatrix("time", time_channel_matrix(chan, cfg.chirp, cfg.cpp_len))
    raise ValueError(f"unknown matrix kind {kind!r}; expected one of {KINDS}")


# --------------------------------------------------------------------------
#  Structure reports
# --------------------------------------------------------------------------

def band_profile(mat):
    """Mean |entry|^2 along each circular diagonal of a square matrix.

    Entry ``d`` averages ``|M[r, (r + d) mod n]|^2`` over rows; offsets past
    n/2 are the negative diagonals.
    """
    m = np.asarray(mat)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"band_profile needs a square matrix, got {m.shape}")
    r = np.arange(n)
    p = np.abs(m) ** 2
    return np.array([p[r, (r + d) % n].mean() for d in range(n)])


def band_energy_fraction(mat, width=1):
    """Fraction of total energy within circular diagonals -width .. +width."""
    prof = band_profile(mat)
    n = prof.size
    offsets = [d % n for d in range(-width, width + 1)]
    return float(prof[sorted(set(offsets))].sum() / prof.sum())


def diagonal_dominance(mat):
    """Mean over rows of |M[k,k]|^2 / sum_k' |M[k,k']|^2."""
    m = np.asarray(mat)
    p = np.abs(m) ** 2
    row = p.sum(axis=1)
    keep = row > 0
    return float(np.mean(np.diag(p)[keep] / row[keep]))


def offdiag_row_energy(mat):
    """Mean over rows of the energy outside the main diagonal."""
    p = np.abs(np.asarray(mat)) ** 2
    return float((p.sum() - np.trace(p)) / p.shape[0])


# --------------------------------------------------------------------------
#  Brute-force oracles
# --------------------------------------------------------------------------

def cpp_insert_matrix(chirp, cpp_len):
    """(L_c + N) x N map from s[0..N-1] to s_cpp[-L_c..N-1]."""
    n = chirp.n_points
    t = np.zeros((cpp_len + n, n), dtype=np.complex128)
    for row in range(cpp_len + n):
        idx = row - cpp_len
        if idx >= 0:
            t[row, idx] = 1.0
        else:
            t[row, idx + n] = np.exp(-2j * np.pi * chirp.c1 * (n * n + 2 * n * idx))
    return t


def cpp_channel_matrix(chan, n, cpp_len):
    """(L_c + N) square matrix of r_cpp[n] = sum_i h_i s_cpp[n - l_i] e^{j2pi k_i n/N}."""
    size = cpp_len + n
    c = np.zeros((size, size), dtype=np.complex128)
    for row in range(size):
        t = row - cpp_len
        for p in chan.paths:
            col = row - p.delay
            if col >= 0:
                c[row, col] += p.gain * np.exp(2j * np.pi * p.doppler * t / n)
    return c


def time_channel_matrix(chan, chirp, cpp_len):
    """N x N map s -> r including prefix insertion and removal."""
    n = chirp.n_points
    remove = np.zeros((n, cpp_len + n))
    remove[np.arange(n), cpp_len + np.arange(n)] = 1.0
    return remove @ cpp_channel_matrix(chan, n, cpp_len) @ cpp_insert_matrix(chirp, cpp_len)


def zp_matrix(cfg):
    z = np.zeros((cfg.n, cfg.n_d))
    z[cfg.l2 + np.arange(cfg.n_d), np.arange(cfg.n_d)] = 1.0
    return z


def fold_matrix(cfg):
    r = np.zeros((cfg.n_d, cfg.n))
    j = np.arange(cfg.n)
    r[j % cfg.n_d, j] = 1.0
    return r


def brute_H_aff(chan, chirp, cpp_len):
    a = daft_matrix(chirp)
    return a @ time_channel_matrix(chan, chirp, cpp_len) @ a.conj().T


def brute_matrix(kind, chan, cfg):
    """Reference matrix for ``kind`` as a chain of explicit linear maps."""
    if kind == "freq":
        plain = ChirpParams(0.0, 0.0, cfg.n)
        f = dft_matrix(cfg.n)
        return f @ time_channel_matrix(chan, plain, cfg.cpp_len) @ f.conj().T
    if kind == "time":
        return time_channel_matrix(chan, cfg.chirp, cfg.cpp_len)
    h = brute_H_aff(chan, cfg.chirp, cfg.cpp_len)
    if kind == "aff":
        return h
    h = h @ zp_matrix(cfg)
    if kind == "zp":
        return h
    h = fold_matrix(cfg) @ h
    if kind == "recon":
        return h
    if kind == "foa":
        f = dft_matrix(cfg.n_d)
        return f @ h @ f.conj().T
    raise ValueError(f"unknown matrix kind {kind!r}")
