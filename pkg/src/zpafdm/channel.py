"""On-grid doubly selective channels and AWGN."""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .params import ConfigError

# Extended Vehicular A (3GPP TS 36.104 Annex B.2)
EVA_DELAYS_NS = (0, 30, 150, 310, 370, 710, 1090, 1730, 2510)
EVA_POWERS_DB = (0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9)

# (delay, doppler) grid of the six-path illustration channel
FIG3_PATHS = ((0, 0), (0, -2), (0, 2), (1, 0), (1, -1), (1, 1))


@dataclass(frozen=True)
class PathSpec:
    gain: complex
    delay: int
    doppler: int


@dataclass(frozen=True)
class ChannelRealization:
    paths: tuple

    def __post_init__(self):
        if len(self.paths) < 1:
            raise ValueError("a channel needs at least one path")
        object.__setattr__(self, "paths", tuple(self.paths))

    @classmethod
    def from_arrays(cls, gains, delays, dopplers):
        return cls(tuple(
            PathSpec(complex(h), int(l), int(k)) for h, l, k in zip(gains, delays, dopplers)
        ))

    @property
    def gains(self):
        return np.array([p.gain for p in self.paths], dtype=np.complex128)

    @property
    def delays(self):
        return np.array([p.delay for p in self.paths], dtype=np.int64)

    @property
    def dopplers(self):
        return np.array([p.doppler for p in self.paths], dtype=np.int64)

    @property
    def power(self):
        return float(np.sum(np.abs(self.gains) ** 2))

    def check(self, cfg):
        """Raise ConfigError if any path leaves the (l_max, k_max) grid."""
        for p in self.paths:
            if not 0 <= p.delay <= cfg.l_max:
                raise ConfigError(f"path delay {p.delay} outside [0, {cfg.l_max}]")
            if abs(p.doppler) > cfg.k_max:
                raise ConfigError(f"path Doppler {p.doppler} outside +-{cfg.k_max}")


def identity_channel():
    return ChannelRealization((PathSpec(1.0 + 0j, 0, 0),))


def fig3_channel(gains=None):
    """The six-path (delay, Doppler) example; unit gains unless given."""
    if gains is None:
        gains = np.ones(len(FIG3_PATHS), dtype=np.complex128)
    if len(gains) != len(FIG3_PATHS):
        raise ValueError(f"fig3 channel takes {len(FIG3_PATHS)} gains, got {len(gains)}")
    return ChannelRealization.from_arrays(gains, *zip(*FIG3_PATHS))


def load_custom_channel(path):
    """Read CSV rows ``delay,doppler,gain_re,gain_im`` (header line optional)."""
    paths = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                l, k, re, im = int(row[0]), int(row[1]), float(row[2]), float(row[3])
            except (ValueError, IndexError):
                if not paths and row[0].strip().lower() == "delay":
                    continue
                raise ConfigError(f"{path}: bad channel row {row!r}")
            paths.append(PathSpec(complex(re, im), l, k))
    if not paths:
        raise ConfigError(f"{path}: no channel paths")
    return ChannelRealization(tuple(paths))


def quantize_profile(delays_ns, powers_db, bandwidth_hz):
    """Round delays to the sample grid, merge taps on the same bin, normalize."""
    bins = np.floor(np.asarray(delays_ns) * 1e-9 * bandwidth_hz + 0.5).astype(int)
    lin = 10.0 ** (np.asarray(powers_db) / 10.0)
    merged = {}
    for b, p in zip(bins, lin):
        merged[int(b)] = merged.get(int(b), 0.0) + p
    total = sum(merged.values())
    return [(d, merged[d] / total) for d in sorted(merged)]


def eva_profile(cfg):
    """EVA power-delay profile on the grid of ``cfg.bandwidth_hz``."""
    prof = quantize_profile(EVA_DELAYS_NS, EVA_POWERS_DB, cfg.bandwidth_hz)
    if prof[-1][0] != cfg.l_max:
        raise ConfigError(
            f"EVA at B={cfg.bandwidth_hz:g} Hz has max delay {prof[-1][0]} bins, "
            f"but l_max={cfg.l_max}"
        )
    return prof


def draw_realization(profile, k_max, rng_seed, subpaths=1):
    """CN(0, power) gains with uniform integer Doppler.

    Each profile entry becomes ``subpaths`` paths on the same delay, splitting
    the tap power equally and drawing their Dopplers independently.
    """
    if subpaths < 1:
        raise ValueError(f"subpaths must be >= 1, got {subpaths}")
    rng = np.random.default_rng(rng_seed)
    delays = np.repeat(np.array([d for d, _ in profile], dtype=np.int64), subpaths)
    powers = np.repeat(np.array([p for _, p in profile]), subpaths) / subpaths
    g = rng.standard_normal(delays.size) + 1j * rng.standard_normal(delays.size)
    gains = g * np.sqrt(powers / 2.0)
    dopplers = rng.integers(-k_max, k_max + 1, size=delays.size)
    return ChannelRealization.from_arrays(gains, delays, dopplers)


def channel_source(profile, cfg):
    """Map a profile name to ``draw(rng) -> ChannelRealization``.

    ``eva`` and ``fig3`` draw fresh gains per call (fig3 keeps its fixed
    delay/Doppler grid, with CN(0, 1/6) gains); ``eva:<m>`` puts m
    Doppler-shifted subpaths on every EVA delay; ``identity`` and
    ``custom:<file>`` are fixed channels. A ChannelRealization passes through
    as a fixed channel.
    """
    if isinstance(profile, ChannelRealization):
        profile.check(cfg)
        return lambda rng: profile
    if isinstance(profile, str) and (profile == "eva" or profile.startswith("eva:")):
        try:
            subpaths = int(profile[4:]) if profile != "eva" else 1
        except ValueError:
            raise ConfigError(f"bad subpath count in profile {profile!r}") from None
        if subpaths < 1:
            raise ConfigError(f"bad subpath count in profile {profile!r}")
        prof = eva_profile(cfg)
        return lambda rng: draw_realization(prof, cfg.k_max, rng, subpaths)
    if profile == "fig3":
        fixed = fig3_channel()
        fixed.check(cfg)
        p = len(FIG3_PATHS)

        def draw(rng):
            g = (rng.standard_normal(p) + 1j * rng.standard_normal(p)) / np.sqrt(2 * p)
            return fig3_channel(g)

        return draw
    if profile == "identity":
        chan = identity_channel()
        return lambda rng: chan
    if isinstance(profile, str) and profile.startswith("custom:"):
        chan = load_custom_channel(Path(profile[len("custom:"):]))
        chan.check(cfg)
        return lambda rng: chan
    raise ConfigError(f"unknown channel profile {profile!r}")


def apply_channel(s_cpp, chan, cfg):
    """Noise-free received samples r_cpp[n], n = -L_c .. N-1 (array offset L_c).

    Samples before the frame start are taken as zero.
    """
    s_cpp = np.asarray(s_cpp, dtype=np.complex128)
    if s_cpp.shape != (cfg.cpp_len + cfg.n,):
        raise ValueError(f"expected {cfg.cpp_len + cfg.n} samples, got {s_cpp.shape}")
    if np.any(chan.delays > cfg.cpp_len) or np.any(chan.delays < 0):
        raise IndexError(f"path delay exceeds prefix length {cfg.cpp_len}")
    return kernels.apply_channel(
        s_cpp, chan.gains, chan.delays, chan.dopplers, cfg.cpp_len, cfg.n
    )


def add_awgn(r, sigma2, rng_seed):
    """Add circularly symmetric complex Gaussian noise of variance ``sigma2``."""
    if sigma2 < 0:
        raise ValueError(f"noise variance must be nonnegative, got {sigma2}")
    r = np.asarray(r, dtype=np.complex128)
    if sigma2 == 0:
        return r.copy()
    rng = np.random.default_rng(rng_seed)
    w = rng.standard_normal(r.shape) + 1j * rng.standard_normal(r.shape)
    return r + np.sqrt(sigma2 / 2.0) * w
