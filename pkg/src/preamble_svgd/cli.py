"""Command-line entry point: ``preamble-svgd {run,bench,trace,oracle}``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from .experiment import (ExperimentSpec, make_trial, rows_to_csv, run_experiment,
                         scaling_benchmark, trace_trial, write_plot_script)
from .likelihood import ml_bruteforce


def _spec(args) -> ExperimentSpec:
    spec = ExperimentSpec.load(args.spec) if args.spec else ExperimentSpec()
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    return spec


def cmd_run(args):
    spec = _spec(args)
    out = args.out or spec.out
    rows = run_experiment(spec, threads=args.threads, out=out)
    if out:
        print(f"wrote {len(rows)} rows to {out}")
        if args.plot_script:
            print(f"plot script: {write_plot_script(out, args.plot_script)}")
    else:
        sys.stdout.write(rows_to_csv(rows))


def cmd_bench(args):
    spec = _spec(args)
    if args.iterations is not None:
        spec = replace(spec, svgd=replace(spec.svgd, iterations=args.iterations),
                       nsvgd=replace(spec.nsvgd, iterations=args.iterations))
    M_list = [int(v) for v in args.M.split(",")]
    res = scaling_benchmark(M_list, S=args.S, K=args.K, N=args.N, detector=args.detector,
                            trials=args.trials, seed=spec.seed, spec=spec)
    lines = ["M,median_ms"] + [f"{M},{1e3 * t:.3f}" for M, t in res.rows]
    if res.r2 is not None:
        lines.append(f"# slope_ms_per_preamble={1e3 * res.slope:.4f} r2={res.r2:.4f} "
                     f"ratio_last_first={res.ratio():.3f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_trace(args):
    spec = _spec(args)
    out = args.out or f"trace_{args.detector}.csv"
    est, truth = trace_trial(spec, args.detector, out, trial=args.trial, signal_out=args.signal_out)
    print(f"truth    {truth.tolist()}")
    print(f"estimate {est.x_hat.tolist()}")
    print(f"trace written to {out}")


def cmd_oracle(args):
    spec = _spec(args)
    dims = spec.grid()[0]
    model, truth = make_trial(spec, 0, dims, args.trial, spec.snr_db[0])
    best, scores = ml_bruteforce(model, cap=args.cap, return_scores=True)
    print(f"scenario (M,S,N,K)={dims} snr_db={spec.snr_db[0]}")
    print(f"candidates {scores.size}")
    print(f"truth {truth.tolist()}")
    print(f"ml    {best.tolist()}  loglik {np.max(scores):.6f}")


def build_parser():
    parser = argparse.ArgumentParser(prog="preamble-svgd", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", help="flat key = value config file")
        p.add_argument("--seed", type=int, help="master seed (overrides experiment.seed)")
        p.add_argument("--out", help="output path")
        p.add_argument("--threads", type=int, default=1, help="worker processes")
        return p

    p = common(sub.add_parser("run", help="Monte-Carlo SNR sweep to CSV"))
    p.add_argument("--plot-script", help="also write a matplotlib script for the CSV")
    p.set_defaults(func=cmd_run)

    p = common(sub.add_parser("bench", help="runtime against number of preambles"))
    p.add_argument("--M", default="10,20,40")
    p.add_argument("--S", type=int, default=4)
    p.add_argument("--K", type=int, default=2000)
    p.add_argument("--N", type=int, default=None, help="users (default: equal to M)")
    p.add_argument("--detector", default="nsvgd", choices=["svgd", "nsvgd", "gibbs"])
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--iterations", type=int, default=None)
    p.set_defaults(func=cmd_bench)

    p = common(sub.add_parser("trace", help="per-iteration dump of one trial"))
    p.add_argument("--detector", default="nsvgd", choices=["svgd", "nsvgd", "gibbs"])
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--signal-out", help="also dump the received matrix")
    p.set_defaults(func=cmd_trace)

    p = common(sub.add_parser("oracle", help="exhaustive ML on a tiny instance"))
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
