"""Hot inner loops, each in a numpy flavour and a numba flavour.

The public names at the bottom of the module point at the numba flavour
unless ``ZPAFDM_NO_NUMBA`` is set (see ``_accel``). Both flavours are kept
importable so tests and the benchmark can compare them directly.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

KAPPA_EPS = 1e-12


# --------------------------------------------------------------------------
#  Doubly selective channel: r[n] = sum_i h_i s[n - l_i] exp(j 2 pi k_i n / N)
# --------------------------------------------------------------------------

def _apply_channel_numpy(s_cpp, gains, delays, dopplers, cpp_len, n_points):
    total = s_cpp.shape[0]
    n = np.arange(total) - cpp_len
    out = np.zeros(total, dtype=np.complex128)
    for h, l, k in zip(gains, delays, dopplers):
        # k*n is an integer; reduce mod N before scaling to keep the phase exact
        rot = np.exp(2j * np.pi * np.mod(k * n, n_points) / n_points)
        shifted = np.zeros(total, dtype=np.complex128)
        if l < total:
            shifted[l:] = s_cpp[: total - l]
        out += h * rot * shifted
    return out


def _apply_channel_loop(s_cpp, gains, delays, dopplers, cpp_len, n_points):
    total = s_cpp.shape[0]
    out = np.zeros(total, dtype=np.complex128)
    two_pi = 2.0 * math.pi
    for i in range(gains.shape[0]):
        h = gains[i]
        l = delays[i]
        k = dopplers[i]
        for pos in range(l, total):
            n = pos - cpp_len
            ph = two_pi * ((k * n) % n_points) / n_points
            out[pos] += h * complex(math.cos(ph), math.sin(ph)) * s_cpp[pos - l]
    return out


# --------------------------------------------------------------------------
#  kappa_{N_d, l}(phi) = 1/N_d sum_{m=l}^{N_d+l-1} exp(j 2 pi m phi / N_d)
# --------------------------------------------------------------------------

def _kappa_numpy(n_d, l_hat, phi):
    phi = np.asarray(phi, dtype=np.float64)
    l_hat = np.asarray(l_hat, dtype=np.float64)
    den = np.sin(np.pi * phi / n_d)
    small = np.abs(den) < KAPPA_EPS
    safe = np.where(small, 1.0, den)
    ratio = np.sin(np.pi * phi) / (n_d * safe)
    val = np.exp(1j * np.pi * phi * (2.0 * l_hat + n_d - 1) / n_d) * ratio
    return np.where(small, 1.0 + 0.0j, val)


def _kappa_loop(n_d, l_hat, phi):
    out = np.empty(phi.shape[0], dtype=np.complex128)
    for i in range(phi.shape[0]):
        den = math.sin(math.pi * phi[i] / n_d)
        if abs(den) < KAPPA_EPS:
            out[i] = 1.0
        else:
            ratio = math.sin(math.pi * phi[i]) / (n_d * den)
            ph = math.pi * phi[i] * (2.0 * l_hat[i] + n_d - 1) / n_d
            out[i] = complex(math.cos(ph), math.sin(ph)) * ratio
    return out


# --------------------------------------------------------------------------
#  Dense FoA-domain channel matrix
#  H[k, k'] = sum_i g_i exp(-j 2 pi k' l_i / N_d) kappa_{N_d, l_i}(k' - k - b_i)
# --------------------------------------------------------------------------

def _foa_matrix_numpy(n_d, gains_hat, l_hats, shifts):
    k = np.arange(n_d)
    diff = (k[None, :] - k[:, None]).astype(np.float64)
    out = np.zeros((n_d, n_d), dtype=np.complex128)
    for g, l, b in zip(gains_hat, l_hats, shifts):
        col_phase = np.exp(-2j * np.pi * np.mod(k * l, n_d) / n_d)
        out += g * col_phase[None, :] * _kappa_numpy(n_d, l, diff - b)
    return out


def _foa_matrix_loop(n_d, gains_hat, l_hats, shifts):
    out = np.zeros((n_d, n_d), dtype=np.complex128)
    two_pi = 2.0 * math.pi
    for i in range(gains_hat.shape[0]):
        g = gains_hat[i]
        l = l_hats[i]
        b = shifts[i]
        for kp in range(n_d):
            ph = -two_pi * ((kp * l) % n_d) / n_d
            col = g * complex(math.cos(ph), math.sin(ph))
            for k in range(n_d):
                phi = kp - k - b
                den = math.sin(math.pi * phi / n_d)
                if abs(den) < KAPPA_EPS:
                    out[k, kp] += col
                else:
                    ratio = math.sin(math.pi * phi) / (n_d * den)
                    pk = math.pi * phi * (2.0 * l + n_d - 1) / n_d
                    out[k, kp] += col * complex(math.cos(pk), math.sin(pk)) * ratio
    return out


# --------------------------------------------------------------------------
#  QPSK hard decision + bit error count
# --------------------------------------------------------------------------

def _qpsk_bit_errors_numpy(symbols, bits):
    b0 = (symbols.real < 0).astype(np.uint8)
    b1 = (symbols.imag < 0).astype(np.uint8)
    return int(np.count_nonzero(b0 != bits[0::2]) + np.count_nonzero(b1 != bits[1::2]))


def _qpsk_bit_errors_loop(symbols, bits):
    errors = 0
    for i in range(symbols.shape[0]):
        b0 = 1 if symbols[i].real < 0 else 0
        b1 = 1 if symbols[i].imag < 0 else 0
        if b0 != bits[2 * i]:
            errors += 1
        if b1 != bits[2 * i + 1]:
            errors += 1
    return errors


_apply_channel_numba = njit(_apply_channel_loop)
_kappa_numba = njit(_kappa_loop)
_foa_matrix_numba = njit(_foa_matrix_loop)
_qpsk_bit_errors_numba = njit(_qpsk_bit_errors_loop)

IMPLEMENTATIONS = {
    "apply_channel": (_apply_channel_numpy, _apply_channel_numba),
    "kappa": (_kappa_numpy, _kappa_numba),
    "foa_matrix": (_foa_matrix_numpy, _foa_matrix_numba),
    "qpsk_bit_errors": (_qpsk_bit_errors_numpy, _qpsk_bit_errors_numba),
}


def _pick(name):
    numpy_impl, numba_impl = IMPLEMENTATIONS[name]
    return numba_impl if (USE_NUMBA and numba_impl is not None) else numpy_impl


_apply_channel = _pick("apply_channel")
_kappa = _pick("kappa")
_foa_matrix = _pick("foa_matrix")
_qpsk_bit_errors = _pick("qpsk_bit_errors")


def apply_channel(s_cpp, gains, delays, dopplers, cpp_len, n_points):
    return _apply_channel(
        np.ascontiguousarray(s_cpp, dtype=np.complex128),
        np.ascontiguousarray(gains, dtype=np.complex128),
        np.ascontiguousarray(delays, dtype=np.int64),
        np.ascontiguousarray(dopplers, dtype=np.int64),
        int(cpp_len),
        int(n_points),
    )


def kappa(n_d, l_hat, phi):
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    l_hat = np.broadcast_to(np.asarray(l_hat, dtype=np.float64), phi.shape)
    flat = _kappa(int(n_d), np.ascontiguousarray(l_hat.ravel()), np.ascontiguousarray(phi.ravel()))
    return flat.reshape(phi.shape)


def foa_matrix(n_d, gains_hat, l_hats, shifts):
    return _foa_matrix(
        int(n_d),
        np.ascontiguousarray(gains_hat, dtype=np.complex128),
        np.ascontiguousarray(l_hats, dtype=np.int64),
        np.ascontiguousarray(shifts, dtype=np.float64),
    )


def qpsk_bit_errors(symbols, bits):
    return int(
        _qpsk_bit_errors(
            np.ascontiguousarray(symbols, dtype=np.complex128),
            np.ascontiguousarray(bits, dtype=np.uint8),
        )
    )
