"""Command line entry point: ``zpafdm {params,ber,matrix,demo,efficiency}``."""

import argparse
import csv
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .channel import add_awgn, apply_channel, channel_source, fig3_channel
from .harness import SweepSpec, efficiency_report, noise_variance, run_sweep
from .params import SCHEMES, ConfigError, build_config, efficiency, load_config, with_chi
from .zp_afdm import demap, equalize, frame_energy, transmit


def parse_ebn0(text):
    """``start:step:stop`` (stop inclusive) or a comma list; ``inf`` allowed."""
    if ":" in text:
        start, step, stop = (float(v) for v in text.split(":"))
        if step <= 0:
            raise ConfigError(f"Eb/N0 step must be positive, got {step}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 10) for i in range(count))
    return tuple(float(v) for v in text.split(","))


def _int_list(text):
    return tuple(int(v) for v in text.split(","))


def _write_vector(path, v):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("index", "re", "im"))
        for i, z in enumerate(np.asarray(v, dtype=np.complex128)):
            w.writerow((i, repr(float(z.real)), repr(float(z.imag))))


def cmd_params(args):
    cfg = build_config(args.chi, args.k_max, args.l_max, args.n, cpp_len=args.cpp_len)
    print(f"c1         = {cfg.c1!r}")
    print(f"c2         = {cfg.c2!r}")
    print(f"L2         = {cfg.l2}")
    print(f"L_z        = {cfg.l_z}")
    print(f"N_d        = {cfg.n_d}")
    print(f"overhead   = {cfg.overhead:.4%}")
    print(f"efficiency = {efficiency(cfg):.6f}")
    return 0


def cmd_efficiency(args):
    cfg = build_config(args.chis[0], args.k_max, args.l_max, args.n, cpp_len=args.cpp_len)
    rows = efficiency_report(args.chis, cfg, out=args.out)
    if args.out is None:
        print("chi,L_z,N_d,efficiency")
        for r in rows:
            print(f"{r['chi']},{r['L_z']},{r['N_d']},{r['efficiency']:.6f}")
    return 0


def cmd_ber(args):
    run = load_config(args.config)
    schemes = tuple(args.schemes.split(",")) if args.schemes else (run.scheme,)
    for s in schemes:
        if s not in SCHEMES:
            raise ConfigError(f"unknown scheme {s!r}; expected one of {SCHEMES}")
    spec = SweepSpec(
        ebn0_db=parse_ebn0(args.ebn0),
        min_bits=args.min_bits,
        min_errors=args.min_errors,
        max_frames=args.max_frames,
        schemes=schemes,
        chis=args.chis or (run.afdm.chi,),
        master_seed=run.seed if args.seed is None else args.seed,
    )
    records = run_sweep(spec, run.afdm, profile=args.profile or run.profile,
                        out=args.out, workers=args.workers)
    if args.out is None:
        for r in records:
            print(f"{r.scheme},{r.chi},{r.ebn0_db},{r.bits},{r.errors},{r.ber:.6e},{r.frames}")
    return 0


def _matrix_config(args):
    if args.config:
        cfg = load_config(args.config).afdm
        return with_chi(cfg, args.chi) if args.chi else cfg
    k_max, l_max = args.k_max, args.l_max
    if args.profile == "fig3":
        k_max = 2 if k_max is None else k_max
        l_max = 1 if l_max is None else l_max
    if k_max is None or l_max is None:
        raise ConfigError("--k-max and --l-max are required for this profile")
    return build_config(args.chi or 2, k_max, l_max, args.n, bandwidth_hz=args.bandwidth)


def cmd_matrix(args):
    cfg = _matrix_config(args)
    if args.profile == "fig3":
        chan = fig3_channel()
        chan.check(cfg)
    else:
        chan = channel_source(args.profile, cfg)(np.random.default_rng(args.seed))
    m = analysis.build_matrix(args.kind, chan, cfg).entries
    rows, cols = np.nonzero(np.abs(m) > 1e-15)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("row", "col", "re", "im"))
        for r, c in zip(rows, cols):
            w.writerow((int(r), int(c), repr(float(m[r, c].real)), repr(float(m[r, c].imag))))
    print(f"wrote {len(rows)} entries of a {m.shape[0]}x{m.shape[1]} {args.kind} matrix to {args.out}")
    return 0


def cmd_demo(args):
    run = load_config(args.config)
    cfg = run.afdm
    rng = np.random.default_rng(run.seed if args.seed is None else args.seed)
    chan = channel_source(args.profile or run.profile, cfg)(rng)
    n_bits = cfg.n_d * cfg.bits_per_symbol
    sigma2 = noise_variance(args.ebn0, frame_energy(cfg), n_bits)
    bits = rng.integers(0, 2, n_bits, dtype=np.uint8)
    frame, s_cpp = transmit(bits, cfg)
    r_cpp = add_awgn(apply_channel(s_cpp, chan, cfg), sigma2, rng)
    trace = {}
    x_hat, _ = equalize(r_cpp, chan, cfg, sigma2, trace=trace)
    vectors = {
        "x_d": frame.data, "x": frame.padded, "s": s_cpp[cfg.cpp_len:], "s_cpp": s_cpp,
        "r_cpp": r_cpp, "y": trace["y"], "y_d": trace["y_d"], "Y_d": trace["Y_d"],
        "X_hat_d": trace["X_hat_d"], "x_hat_d": x_hat,
    }
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, v in vectors.items():
        _write_vector(out / f"{name}.csv", v)
    errors = np.count_nonzero(demap(x_hat, cfg.constellation) != bits)
    print(f"wrote {len(vectors)} vectors to {out}; {len(chan.paths)} paths, "
          f"sigma2={sigma2:.3e}, bit errors={errors}/{n_bits}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="zpafdm", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derived chirp rates and padding lengths")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--l-max", type=int, default=5)
    p.add_argument("--cpp-len", type=int)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("efficiency", help="efficiency vs chi as CSV")
    p.add_argument("--chis", type=_int_list, default=(1, 5, 9, 13, 17, 21))
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--l-max", type=int, default=5)
    p.add_argument("--cpp-len", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("ber", help="Monte Carlo BER sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--ebn0", default="0:5:30", help="start:step:stop or comma list (dB)")
    p.add_argument("--schemes", help=f"comma list from {','.join(SCHEMES)}")
    p.add_argument("--chis", type=_int_list)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--min-bits", type=int, default=10_000)
    p.add_argument("--max-frames", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--profile")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("matrix", help="dump an effective channel matrix as sparse CSV")
    p.add_argument("--kind", choices=analysis.KINDS, required=True)
    p.add_argument("--profile", default="fig3")
    p.add_argument("--chi", type=int)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k-max", type=int)
    p.add_argument("--l-max", type=int)
    p.add_argument("--bandwidth", type=float, default=2e6)
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("demo", help="dump every intermediate vector of one frame")
    p.add_argument("--config", required=True)
    p.add_argument("--ebn0", type=float, default=float("inf"))
    p.add_argument("--seed", type=int)
    p.add_argument("--profile")
    p.add_argument("--outdir", default="demo_out")
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
