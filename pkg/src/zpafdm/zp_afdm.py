"""ZP-AFDM transceiver with the frequency-of-affine (FoA) one-tap equalizer.

Transmit: bits -> QPSK -> zero pad -> IDAFT -> chirp-periodic prefix.
Receive:  drop prefix -> DAFT -> fold the last L_z symbols onto the first
L_z -> N_d-point DFT -> one-tap MMSE -> IDFT -> hard decisions.
"""

from dataclasses import dataclass

import numpy as np

from .transforms import (
    DimensionError,
    chirp_fraction,
    daft,
    dft,
    idaft,
    idft,
    kappa,
)

_QPSK_SCALE = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class AffineFrame:
    data: np.ndarray
    padded: np.ndarray


@dataclass(frozen=True)
class FoAFrame:
    values: np.ndarray
    flagged: bool = False


# --------------------------------------------------------------------------
#  Constellation
# --------------------------------------------------------------------------

def map_bits(bits, constellation="qpsk"):
    """Gray-mapped unit-energy QPSK: bit pair (b0, b1) -> ((1-2b0) + j(1-2b1))/sqrt(2)."""
    if constellation != "qpsk":
        raise ValueError(f"unsupported constellation {constellation!r}")
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % 2:
        raise ValueError(f"QPSK needs an even number of bits, got {bits.size}")
    b = bits.astype(np.float64)
    return ((1.0 - 2.0 * b[0::2]) + 1j * (1.0 - 2.0 * b[1::2])) * _QPSK_SCALE


def demap(symbols, constellation="qpsk"):
    """Minimum-distance QPSK decisions; points on a boundary resolve to bit 0."""
    if constellation != "qpsk":
        raise ValueError(f"unsupported constellation {constellation!r}")
    symbols = np.asarray(symbols, dtype=np.complex128)
    bits = np.empty(2 * symbols.size, dtype=np.uint8)
    bits[0::2] = symbols.real < 0
    bits[1::2] = symbols.imag < 0
    return bits


# --------------------------------------------------------------------------
#  Transmitter
# --------------------------------------------------------------------------

def zero_pad(x_d, cfg):
    """Place N_d data symbols at affine indices L2 .. N-k_max-1."""
    x_d = np.asarray(x_d, dtype=np.complex128)
    if x_d.shape != (cfg.n_d,):
        raise DimensionError(f"expected {cfg.n_d} data symbols, got {x_d.shape}")
    padded = np.zeros(cfg.n, dtype=np.complex128)
    padded[cfg.l2: cfg.l2 + cfg.n_d] = x_d
    return AffineFrame(data=x_d, padded=padded)


def cpp_phase(cfg):
    """exp(-j 2 pi c1 (N^2 + 2 N n)) for n = -L_c .. -1."""
    n = np.arange(-cfg.cpp_len, 0, dtype=np.int64)
    return np.exp(-2j * np.pi * chirp_fraction(cfg.c1, cfg.n ** 2 + 2 * cfg.n * n, cfg.n))


def modulate(frame, cfg):
    """IDAFT of the padded frame with a chirp-periodic prefix; length L_c + N."""
    s = idaft(frame.padded, cfg.chirp)
    if cfg.cpp_len == 0:
        return s
    prefix = s[cfg.n - cfg.cpp_len:] * cpp_phase(cfg)
    return np.concatenate([prefix, s])


# --------------------------------------------------------------------------
#  Receiver
# --------------------------------------------------------------------------

def demodulate(r_cpp, cfg):
    """Drop the prefix and return the N received affine-domain symbols."""
    r_cpp = np.asarray(r_cpp, dtype=np.complex128)
    if r_cpp.shape != (cfg.cpp_len + cfg.n,):
        raise DimensionError(f"expected {cfg.cpp_len + cfg.n} samples, got {r_cpp.shape}")
    return daft(r_cpp[cfg.cpp_len:], cfg.chirp)


def reconstruct(y, cfg):
    """Cyclic superposition: y_d[m] = sum_j y[m + j N_d].

    With L_z <= N_d this is y[m] + y[m + N_d] for m < L_z and y[m] otherwise;
    a longer tail (small frames, large chi) wraps more than once.
    """
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (cfg.n,):
        raise DimensionError(f"expected {cfg.n} symbols, got {y.shape}")
    y_d = y[: cfg.n_d].copy()
    for start in range(cfg.n_d, cfg.n, cfg.n_d):
        tail = y[start: start + cfg.n_d]
        y_d[: tail.size] += tail
    return y_d


def foa(y_d):
    return FoAFrame(dft(y_d))


def path_terms(chan, cfg):
    """Per-path ``(h_hat, l_hat, shift)`` of the reconstructed affine IOR.

    ``h_hat = h exp(j pi k^2 / (2 c1 N^2))``, ``l_hat = L2 + k - 2 c1 N l``
    and ``shift = k N_d / (2 c1 N^2)`` is the FoA-domain leakage offset.
    """
    k = chan.dopplers
    h_hat = chan.gains * np.exp(2j * np.pi * chirp_fraction(cfg.c2, k * k, cfg.n))
    l_hat = cfg.l2 + k - cfg.delay_shift * chan.delays
    shift = k * cfg.n_d / (cfg.delay_shift * cfg.n)
    return h_hat, l_hat, shift


def foa_diag(chan, cfg):
    """Diagonal of the FoA-domain channel matrix, from perfect CSI."""
    h_hat, l_hat, shift = path_terms(chan, cfg)
    k = np.arange(cfg.n_d)
    out = np.zeros(cfg.n_d, dtype=np.complex128)
    for g, l, b in zip(h_hat, l_hat, shift):
        out += g * kappa(cfg.n_d, l, -b) * np.exp(-2j * np.pi * np.mod(k * l, cfg.n_d) / cfg.n_d)
    return out


def interference_power(chan, cfg):
    """Residual FoA-domain interference power left off the diagonal."""
    _, l_hat, shift = path_terms(chan, cfg)
    leak = np.abs(kappa(cfg.n_d, l_hat, -shift)) ** 2
    return float(np.sum(np.abs(chan.gains) ** 2 * np.clip(1.0 - leak, 0.0, None)))


def one_tap_equalize(y_foa, h_diag, sigma2_total):
    """X_hat[k] = Y[k] conj(H[k]) / (|H[k]|^2 + sigma2_total).

    A tap with zero denominator outputs 0 and flags the frame.
    """
    if sigma2_total < 0:
        raise ValueError(f"sigma2_total must be nonnegative, got {sigma2_total}")
    values = y_foa.values if isinstance(y_foa, FoAFrame) else np.asarray(y_foa)
    h_diag = np.asarray(h_diag, dtype=np.complex128)
    den = np.abs(h_diag) ** 2 + sigma2_total
    bad = den == 0
    e = np.conj(h_diag) / np.where(bad, 1.0, den)
    e[bad] = 0.0
    return FoAFrame(values * e, flagged=bool(bad.any()))


def recover(x_foa):
    """N_d-point IDFT back to equalized affine-domain data symbols."""
    values = x_foa.values if isinstance(x_foa, FoAFrame) else x_foa
    return idft(values)


# --------------------------------------------------------------------------
#  Whole chain
# --------------------------------------------------------------------------

def transmit(bits, cfg):
    frame = zero_pad(map_bits(bits, cfg.constellation), cfg)
    return frame, modulate(frame, cfg)


def equalize(r_cpp, chan, cfg, sigma2, trace=None):
    """Receiver from r_cpp to equalized data symbols.

    ``sigma2`` is the per-sample time-domain noise variance; the folded noise
    seen after reconstruction is ``N / N_d * sigma2``. Returns
    ``(x_hat_d, flagged)``. When ``trace`` is a dict the intermediate vectors
    are stored in it.
    """
    y = demodulate(r_cpp, cfg)
    y_d = reconstruct(y, cfg)
    y_foa = foa(y_d)
    sigma2_total = cfg.n / cfg.n_d * sigma2 + interference_power(chan, cfg)
    x_foa = one_tap_equalize(y_foa, foa_diag(chan, cfg), sigma2_total)
    x_hat = recover(x_foa)
    if trace is not None:
        trace.update(y=y, y_d=y_d, Y_d=y_foa.values, X_hat_d=x_foa.values, x_hat_d=x_hat)
    return x_hat, x_foa.flagged


def frame_energy(cfg):
    """Expected transmitted energy per frame with unit-energy data symbols.

    The IDAFT is unitary so the body carries N_d; each prefix sample repeats a
    body sample of mean energy N_d / N.
    """
    return cfg.n_d * (cfg.n + cfg.cpp_len) / cfg.n
