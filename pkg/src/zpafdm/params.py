"""Chirp-rate selection, zero-padding arithmetic and frame configuration."""

from dataclasses import dataclass
from pathlib import Path

from .transforms import ChirpParams

CONSTELLATIONS = ("qpsk",)
BITS_PER_SYMBOL = {"qpsk": 2}


class ConfigError(ValueError):
    """Inconsistent or unusable frame configuration."""


def select_params(chi, k_max, n):
    """Return ``(c1, c2)`` with ``c1 = chi (2 k_max + 1) / (2N)`` and ``4 c1 c2 N^2 = 1``."""
    if n < 2:
        raise ValueError(f"N must be >= 2, got {n}")
    if chi < 1:
        raise ValueError(f"chi must be >= 1, got {chi}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    q = chi * (2 * k_max + 1)
    return q / (2 * n), 1.0 / (2 * q * n)


@dataclass(frozen=True)
class AfdmConfig:
    """One ZP-AFDM frame layout. Build it with :func:`build_config`.

    ``l2`` zeros lead the affine-domain frame, ``k_max`` zeros trail it, and
    the ``n_d = n - l_z`` symbols in between carry data. ``bandwidth_hz`` and
    ``carrier_hz`` are bookkeeping; all processing is on the normalized grid.
    """

    n: int
    chi: int
    k_max: int
    l_max: int
    c1: float
    c2: float
    cpp_len: int
    l2: int
    l_z: int
    n_d: int
    constellation: str = "qpsk"
    bandwidth_hz: float = 2e6
    carrier_hz: float = 2e9

    @property
    def chirp(self):
        return ChirpParams(self.c1, self.c2, self.n)

    @property
    def delay_shift(self):
        """Affine-domain shift produced by one delay bin, ``2 c1 N``."""
        return self.chi * (2 * self.k_max + 1)

    @property
    def bits_per_symbol(self):
        return BITS_PER_SYMBOL[self.constellation]

    @property
    def sample_period(self):
        return 1.0 / self.bandwidth_hz

    @property
    def frame_duration(self):
        return self.n * self.sample_period

    @property
    def overhead(self):
        return self.l_z / self.n


def build_config(
    chi,
    k_max,
    l_max,
    n,
    constellation="qpsk",
    cpp_len=None,
    bandwidth_hz=2e6,
    carrier_hz=2e9,
):
    """Validate the inputs and derive c1, c2, L2, L_z and N_d."""
    if int(chi) != chi or chi < 1:
        raise ConfigError(f"chi must be a positive integer, got {chi!r}")
    if k_max < 0 or l_max < 0:
        raise ConfigError("k_max and l_max must be nonnegative")
    if constellation not in CONSTELLATIONS:
        raise ConfigError(f"unknown constellation {constellation!r}")
    try:
        c1, c2 = select_params(int(chi), k_max, n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    cpp_len = l_max if cpp_len is None else cpp_len
    if cpp_len < l_max:
        raise ConfigError(f"prefix length {cpp_len} shorter than l_max={l_max}")
    shift = int(chi) * (2 * k_max + 1)
    l2 = k_max + shift * l_max
    l_z = l2 + k_max
    n_d = n - l_z
    if n_d < 1:
        raise ConfigError(
            f"frame too short for this (chi, k_max, l_max) = ({chi}, {k_max}, {l_max}): "
            f"N={n} but L_z={l_z}"
        )
    return AfdmConfig(
        n=n,
        chi=int(chi),
        k_max=k_max,
        l_max=l_max,
        c1=c1,
        c2=c2,
        cpp_len=cpp_len,
        l2=l2,
        l_z=l_z,
        n_d=n_d,
        constellation=constellation,
        bandwidth_hz=bandwidth_hz,
        carrier_hz=carrier_hz,
    )


def with_chi(cfg, chi):
    """Same frame with a different chi (prefix length kept)."""
    return build_config(
        chi, cfg.k_max, cfg.l_max, cfg.n, cfg.constellation, cfg.cpp_len,
        cfg.bandwidth_hz, cfg.carrier_hz,
    )


def efficiency(cfg):
    """Fraction of transmitted samples (prefix included) that carry data."""
    return cfg.n_d / (cfg.n + cfg.cpp_len)


# --------------------------------------------------------------------------
#  Flat key = value config files
# --------------------------------------------------------------------------

SCHEMES = ("zp_afdm", "ofdm", "scfde", "lmmse_afdm")

_INT_KEYS = {"n", "chi", "k_max", "l_max", "cpp_len", "seed"}
_FLOAT_KEYS = {"bandwidth_hz", "carrier_hz"}
_STR_KEYS = {"constellation", "profile", "scheme"}
CONFIG_KEYS = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS
_REQUIRED = ("n", "chi", "k_max", "l_max")


@dataclass(frozen=True)
class RunConfig:
    afdm: AfdmConfig
    profile: str = "eva"
    seed: int = 0
    scheme: str = "zp_afdm"


def parse_config(text):
    """Parse ``key = value`` lines. ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    scheme = values.get("scheme", "zp_afdm")
    if scheme not in SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    afdm = build_config(
        values["chi"],
        values["k_max"],
        values["l_max"],
        values["n"],
        constellation=values.get("constellation", "qpsk"),
        cpp_len=values.get("cpp_len"),
        bandwidth_hz=values.get("bandwidth_hz", 2e6),
        carrier_hz=values.get("carrier_hz", 2e9),
    )
    return RunConfig(
        afdm=afdm,
        profile=values.get("profile", "eva"),
        seed=values.get("seed", 0),
        scheme=scheme,
    )


def load_config(path):
    return parse_config(Path(path).read_text())
