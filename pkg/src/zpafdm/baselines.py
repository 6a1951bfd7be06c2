"""Reference receivers: CP-OFDM and SC-FDE with one-tap MMSE, affine LMMSE.

OFDM and SC-FDE share one block layout: ``n_symbols`` blocks of
``cp_len + n_subcarriers`` samples laid back to back from the start of the
ZP-AFDM frame window (N + L_c samples); leftover samples stay silent.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .analysis import build_H_aff_zp
from .channel import add_awgn
from .params import ConfigError
from .zp_afdm import demap, demodulate, map_bits


@dataclass(frozen=True)
class OfdmConfig:
    n_subcarriers: int
    n_symbols: int
    cp_len: int

    @property
    def block_len(self):
        return self.n_subcarriers + self.cp_len

    @property
    def n_data(self):
        return self.n_subcarriers * self.n_symbols

    def validate(self, cfg):
        if self.n_subcarriers < 1 or self.n_symbols < 1:
            raise ConfigError("OFDM needs at least one subcarrier and one symbol")
        if self.cp_len < cfg.l_max:
            raise ConfigError(f"cp_len {self.cp_len} shorter than l_max={cfg.l_max}")
        if self.n_symbols * self.block_len > cfg.n + cfg.cpp_len:
            raise ConfigError(
                f"{self.n_symbols} x {self.block_len} samples exceed the frame "
                f"budget of {cfg.n + cfg.cpp_len}"
            )
        return self


def matched_block_config(cfg):
    """Block layout with at least the ZP-AFDM overhead L_z / N.

    The prefix keeps the AFDM prefix length; the subcarrier count is the
    largest one whose prefix fraction is not below L_z / N, and as many blocks
    as fit in N + L_c samples are sent.
    """
    cp = cfg.cpp_len
    if cfg.l_z == 0 or cp == 0:
        n_sc = cfg.n
    else:
        n_sc = max(1, int(np.floor(cp * cfg.n / cfg.l_z - cp + 1e-9)))
    n_sym = (cfg.n + cfg.cpp_len) // (n_sc + cp)
    return OfdmConfig(n_sc, n_sym, cp).validate(cfg)


def block_energy(ocfg):
    """Expected transmitted energy of one frame of unit-energy symbols."""
    return float(ocfg.n_symbols * ocfg.block_len)


def _transmit_blocks(blocks, ocfg, cfg):
    """Add CPs and lay blocks (n_symbols x n_subcarriers) into the frame window."""
    tx = np.concatenate([blocks[:, -ocfg.cp_len:], blocks], axis=1) if ocfg.cp_len else blocks
    frame = np.zeros(cfg.n + cfg.cpp_len, dtype=np.complex128)
    frame[: tx.size] = tx.ravel()
    return frame


def _receive_blocks(r, ocfg):
    used = r[: ocfg.n_symbols * ocfg.block_len].reshape(ocfg.n_symbols, ocfg.block_len)
    return used[:, ocfg.cp_len:]


def block_responses(chan, ocfg, cfg):
    """Per-block channel frequency response frozen at the FFT-window centre."""
    start = np.arange(ocfg.n_symbols) * ocfg.block_len + ocfg.cp_len - cfg.cpp_len
    t_mid = start + (ocfg.n_subcarriers - 1) / 2.0
    q = np.arange(ocfg.n_subcarriers)
    resp = np.zeros((ocfg.n_symbols, ocfg.n_subcarriers), dtype=np.complex128)
    for p in chan.paths:
        rot = np.exp(2j * np.pi * p.doppler * t_mid / cfg.n)
        resp += p.gain * rot[:, None] * np.exp(-2j * np.pi * q * p.delay / ocfg.n_subcarriers)[None, :]
    return resp


def _channel(frame, chan, cfg, sigma2, seed):
    r = kernels.apply_channel(frame, chan.gains, chan.delays, chan.dopplers, cfg.cpp_len, cfg.n)
    return add_awgn(r, sigma2, seed)


def _mmse(resp, sigma2):
    return np.conj(resp) / (np.abs(resp) ** 2 + sigma2)


def ofdm_equalize(bits, chan, sigma2, ocfg, cfg, seed):
    """Run one CP-OFDM frame; return the equalized data symbols.

    Intra-block channel variation (ICI) is deliberately left unequalized.
    """
    ocfg.validate(cfg)
    sym = map_bits(bits, cfg.constellation).reshape(ocfg.n_symbols, ocfg.n_subcarriers)
    frame = _transmit_blocks(np.fft.ifft(sym, axis=1, norm="ortho"), ocfg, cfg)
    rx = _receive_blocks(_channel(frame, chan, cfg, sigma2, seed), ocfg)
    z = np.fft.fft(rx, axis=1, norm="ortho")
    return (z * _mmse(block_responses(chan, ocfg, cfg), sigma2)).ravel()


def scfde_equalize(bits, chan, sigma2, ocfg, cfg, seed):
    """Run one CP single-carrier frame with frequency-domain one-tap MMSE."""
    ocfg.validate(cfg)
    sym = map_bits(bits, cfg.constellation).reshape(ocfg.n_symbols, ocfg.n_subcarriers)
    frame = _transmit_blocks(sym, ocfg, cfg)
    rx = _receive_blocks(_channel(frame, chan, cfg, sigma2, seed), ocfg)
    z = np.fft.fft(rx, axis=1, norm="ortho") * _mmse(block_responses(chan, ocfg, cfg), sigma2)
    return np.fft.ifft(z, axis=1, norm="ortho").ravel()


def ofdm_chain(bits, chan, sigma2, ocfg, cfg, seed):
    return demap(ofdm_equalize(bits, chan, sigma2, ocfg, cfg, seed), cfg.constellation)


def scfde_chain(bits, chan, sigma2, ocfg, cfg, seed):
    return demap(scfde_equalize(bits, chan, sigma2, ocfg, cfg, seed), cfg.constellation)


def lmmse_affine(y, H, sigma2):
    """Linear MMSE estimate x = H^H (H H^H + sigma2 I)^-1 y.

    Solved in whichever of the two equivalent forms has the smaller system.
    """
    H = np.asarray(H, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if H.shape[0] != y.shape[0]:
        raise ValueError(f"H has {H.shape[0]} rows but y has {y.shape[0]} entries")
    rows, cols = H.shape
    Hh = H.conj().T
    if rows >= cols:
        return np.linalg.solve(Hh @ H + sigma2 * np.eye(cols), Hh @ y)
    return Hh @ np.linalg.solve(H @ Hh + sigma2 * np.eye(rows), y)


def lmmse_afdm_equalize(r_cpp, chan, cfg, sigma2):
    """Multi-tap benchmark: LMMSE on all N received affine symbols of a ZP frame."""
    return lmmse_affine(demodulate(r_cpp, cfg), build_H_aff_zp(chan, cfg), sigma2)
