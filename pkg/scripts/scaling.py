"""Detector runtime against the number of preambles."""
import argparse
from dataclasses import replace

from preamble_svgd.experiment import ExperimentSpec, scaling_benchmark

parser = argparse.ArgumentParser()
parser.add_argument("--M", default="10,20,40,80")
parser.add_argument("--S", type=int, default=4)
parser.add_argument("--K", type=int, default=2000)
parser.add_argument("--iterations", type=int, default=100)
parser.add_argument("--trials", type=int, default=5)
args = parser.parse_args()

spec = ExperimentSpec()
spec = replace(spec, svgd=replace(spec.svgd, iterations=args.iterations),
               nsvgd=replace(spec.nsvgd, iterations=args.iterations))
for det in ("nsvgd", "svgd", "gibbs"):
    res = scaling_benchmark([int(m) for m in args.M.split(",")], S=args.S, K=args.K,
                            detector=det, trials=args.trials, spec=spec)
    cells = "  ".join(f"M={M}:{1e3 * t:7.1f}ms" for M, t in res.rows)
    print(f"{det:<6} {cells}  R^2={res.r2:.4f}  ratio={res.ratio():.2f}")
