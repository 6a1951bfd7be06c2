"""Monte Carlo BER engine, sweeps and CSV output.

Eb/N0 convention: Eb is the expected transmitted frame energy (prefix and
guard included) divided by the information bits of the frame, and the
per-sample complex noise variance is sigma^2 = Eb / (Eb/N0). With unit-energy
symbols a ZP-AFDM frame carries N_d (N + L_c) / N, an OFDM/SC-FDE frame
n_symbols (n_subcarriers + cp_len). This is Eb = (N + L_c) / (N_d log2 M) * Es
with Es the mean transmitted power per sample.
"""

import csv
import logging
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .baselines import (
    block_energy,
    lmmse_afdm_equalize,
    matched_block_config,
    ofdm_equalize,
    scfde_equalize,
)
from .channel import add_awgn, apply_channel, channel_source
from .params import SCHEMES, ConfigError, efficiency, with_chi
from .zp_afdm import equalize, frame_energy, transmit

log = logging.getLogger(__name__)

CSV_COLUMNS = ("scheme", "chi", "ebn0_db", "bits", "errors", "ber", "frames", "wall_seconds", "seed", "flags")
LOW_CONFIDENCE_ERRORS = 10


@dataclass(frozen=True)
class SweepSpec:
    ebn0_db: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    min_bits: int = 10_000
    min_errors: int = 100
    max_frames: int = 10_000
    schemes: tuple = ("zp_afdm",)
    chis: tuple = (9,)
    master_seed: int = 0


@dataclass
class BerRecord:
    scheme: str
    chi: int
    ebn0_db: float
    bits: int
    errors: int
    ber: float
    frames: int
    wall_seconds: float
    seed: int
    flags: list = field(default_factory=list)
    # per-frame error counts, kept only when asked for; not written to CSV
    frame_errors: tuple = field(default=None, repr=False, compare=False)

    @property
    def low_confidence(self):
        return "low_confidence" in self.flags

    def interval(self, z=1.96):
        return ber_interval(self.errors, self.bits, z)

    def frame_interval(self, z=1.96):
        """Normal interval from the spread of per-frame error counts.

        Errors cluster in frames with a bad channel draw, so this is wider than
        the per-bit Wilson interval on fading channels.
        """
        if self.frame_errors is None:
            raise ValueError("record was produced without keep_frames=True")
        return clustered_interval(self.frame_errors, self.bits // self.frames, z)

    def row(self):
        d = asdict(self)
        d.pop("frame_errors")
        d["flags"] = ";".join(self.flags)
        return d


def ber_interval(errors, bits, z=1.96):
    """Wilson score interval for a bit error probability."""
    if bits <= 0:
        return 0.0, 1.0
    p = errors / bits
    den = 1 + z * z / bits
    centre = (p + z * z / (2 * bits)) / den
    half = z * math.sqrt(p * (1 - p) / bits + z * z / (4 * bits * bits)) / den
    return max(0.0, centre - half), min(1.0, centre + half)


def clustered_interval(frame_errors, bits_per_frame, z=1.96):
    """BER interval treating frames, not bits, as the independent samples."""
    e = np.asarray(frame_errors, dtype=np.float64)
    p = e.mean() / bits_per_frame
    if e.size < 2:
        return 0.0, 1.0
    half = z * e.std(ddof=1) / math.sqrt(e.size) / bits_per_frame
    return max(0.0, p - half), min(1.0, p + half)


def noise_variance(ebn0_db, energy, n_bits):
    if math.isinf(ebn0_db) and ebn0_db > 0:
        return 0.0
    return energy / n_bits / 10.0 ** (ebn0_db / 10.0)


def frame_seed(master_seed, scheme, ebn0_index, frame_index):
    """Independent, reproducible stream per (scheme, Eb/N0 point, frame).

    chi is left out on purpose: every chi of a sweep sees the same channels
    and payload draws, which makes the chi comparison paired.
    """
    key = [int(master_seed), zlib.crc32(scheme.encode()), int(ebn0_index), int(frame_index)]
    return np.random.SeedSequence(key)


# --------------------------------------------------------------------------
#  Schemes: (bits, chan, sigma2, rng) -> (equalized symbols, flagged)
# --------------------------------------------------------------------------

class _Scheme:
    def __init__(self, cfg):
        self.cfg = cfg

    n_symbols = 0
    energy = 0.0

    @property
    def n_bits(self):
        return self.n_symbols * self.cfg.bits_per_symbol


class _ZpAfdm(_Scheme):
    def __init__(self, cfg):
        super().__init__(cfg)
        self.n_symbols = cfg.n_d
        self.energy = frame_energy(cfg)

    def run(self, bits, chan, sigma2, rng):
        _, s_cpp = transmit(bits, self.cfg)
        r = add_awgn(apply_channel(s_cpp, chan, self.cfg), sigma2, rng)
        return self.detect(r, chan, sigma2)

    def detect(self, r, chan, sigma2):
        return equalize(r, chan, self.cfg, sigma2)


class _LmmseAfdm(_ZpAfdm):
    def detect(self, r, chan, sigma2):
        return lmmse_afdm_equalize(r, chan, self.cfg, sigma2), False


class _Blocks(_Scheme):
    equalizer = None

    def __init__(self, cfg):
        super().__init__(cfg)
        self.ocfg = matched_block_config(cfg)
        self.n_symbols = self.ocfg.n_data
        self.energy = block_energy(self.ocfg)

    def run(self, bits, chan, sigma2, rng):
        return type(self).equalizer(bits, chan, sigma2, self.ocfg, self.cfg, rng), False


class _Ofdm(_Blocks):
    equalizer = staticmethod(ofdm_equalize)


class _Scfde(_Blocks):
    equalizer = staticmethod(scfde_equalize)


_REGISTRY = {"zp_afdm": _ZpAfdm, "lmmse_afdm": _LmmseAfdm, "ofdm": _Ofdm, "scfde": _Scfde}
assert set(_REGISTRY) == set(SCHEMES)


def make_scheme(name, cfg):
    try:
        return _REGISTRY[name](cfg)
    except KeyError:
        raise ConfigError(f"unknown scheme {name!r}; expected one of {SCHEMES}") from None


# --------------------------------------------------------------------------
#  Points and sweeps
# --------------------------------------------------------------------------

def run_point(scheme, cfg, ebn0_db, spec, seed=None, profile="eva", ebn0_index=0, keep_frames=False):
    """Simulate frames until the stopping rule fires; one BerRecord.

    A fresh channel, payload and noise are drawn per frame from
    :func:`frame_seed`. Stops once errors >= min_errors and bits >= min_bits,
    or after max_frames frames. ``keep_frames`` stores per-frame error counts
    for :meth:`BerRecord.frame_interval`.
    """
    seed = spec.master_seed if seed is None else seed
    sch = make_scheme(scheme, cfg)
    draw = channel_source(profile, cfg)
    sigma2 = noise_variance(ebn0_db, sch.energy, sch.n_bits)
    bits_total = errors = frames = 0
    flagged = False
    per_frame = [] if keep_frames else None
    t0 = time.perf_counter()
    while frames < spec.max_frames:
        rng = np.random.default_rng(frame_seed(seed, scheme, ebn0_index, frames))
        chan = draw(rng)
        bits = rng.integers(0, 2, sch.n_bits, dtype=np.uint8)
        sym, bad = sch.run(bits, chan, sigma2, rng)
        e = kernels.qpsk_bit_errors(sym, bits)
        errors += e
        if keep_frames:
            per_frame.append(e)
        bits_total += sch.n_bits
        flagged |= bad
        frames += 1
        if errors >= spec.min_errors and bits_total >= spec.min_bits:
            break
    wall = time.perf_counter() - t0
    flags = []
    if errors < LOW_CONFIDENCE_ERRORS:
        flags.append("low_confidence")
    if flagged:
        flags.append("equalizer_guard")
    rec = BerRecord(scheme, cfg.chi, float(ebn0_db), bits_total, errors, errors / bits_total,
                    frames, wall, int(seed), flags,
                    tuple(per_frame) if keep_frames else None)
    log.info("%s chi=%d Eb/N0=%.2f dB: BER=%.3e (%d/%d, %d frames, %.1fs)",
             scheme, cfg.chi, ebn0_db, rec.ber, errors, bits_total, frames, wall)
    return rec


def _point_job(args):
    return run_point(*args)


def sweep_points(spec, cfg, profile="eva"):
    """All (scheme, chi, Eb/N0) jobs of a sweep, in output order."""
    jobs = []
    for chi in spec.chis:
        cfg_chi = with_chi(cfg, chi)
        for scheme in spec.schemes:
            make_scheme(scheme, cfg_chi)
            for i, ebn0 in enumerate(spec.ebn0_db):
                jobs.append((scheme, cfg_chi, ebn0, spec, spec.master_seed, profile, i))
    return jobs


def run_sweep(spec, cfg, profile="eva", out=None, workers=1):
    """Run every point of the sweep; optionally write the CSV to ``out``."""
    jobs = sweep_points(spec, cfg, profile)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_point_job, jobs))
    else:
        records = [_point_job(j) for j in jobs]
    if out is not None:
        write_csv(records, out, spec, cfg, profile)
    return records


def csv_header_lines(spec, cfg, profile):
    return [
        "# ZP-AFDM Monte Carlo BER",
        f"# N={cfg.n} k_max={cfg.k_max} l_max={cfg.l_max} cpp_len={cfg.cpp_len} "
        f"constellation={cfg.constellation} profile={profile}",
        "# Eb = expected transmitted frame energy (prefix included) / information bits; "
        "noise variance per sample = Eb / (Eb/N0)",
        f"# stop rule: errors >= {spec.min_errors} and bits >= {spec.min_bits}, "
        f"or frames = {spec.max_frames}; low_confidence when errors < {LOW_CONFIDENCE_ERRORS}",
        "# ofdm/scfde rows use the block layout matched to that row's chi overhead",
    ]


def write_csv(records, path, spec, cfg, profile="eva"):
    with open(path, "w", newline="") as fh:
        for line in csv_header_lines(spec, cfg, profile):
            fh.write(line + "\n")
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow(r.row())


def read_csv(path):
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    out = []
    for row in csv.DictReader(lines):
        out.append(BerRecord(
            scheme=row["scheme"], chi=int(row["chi"]), ebn0_db=float(row["ebn0_db"]),
            bits=int(row["bits"]), errors=int(row["errors"]), ber=float(row["ber"]),
            frames=int(row["frames"]), wall_seconds=float(row["wall_seconds"]),
            seed=int(row["seed"]), flags=[f for f in row["flags"].split(";") if f],
        ))
    return out


def efficiency_report(chis, cfg, out=None):
    """Rows of (chi, L_z, N_d, efficiency) for each chi; optionally as CSV."""
    rows = []
    for chi in chis:
        c = with_chi(cfg, chi)
        rows.append({"chi": chi, "L_z": c.l_z, "N_d": c.n_d, "efficiency": efficiency(c)})
    if out is not None:
        with open(out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=("chi", "L_z", "N_d", "efficiency"))
            w.writeheader()
            w.writerows(rows)
    return rows


def without_timing(records):
    """Records with wall_seconds zeroed, for determinism comparisons."""
    return [replace(r, wall_seconds=0.0) for r in records]
