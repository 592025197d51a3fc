"""Particle trajectories in the two-preamble toy scenario (M=2, S=2, N=4, K=20, n=50).

Writes the per-iteration trace CSV and, if matplotlib is available, a PNG of
the particle cloud at a few iterations.
"""
import argparse

import numpy as np

from preamble_svgd.experiment import ExperimentSpec, trace_trial
from preamble_svgd.svgd import SvgdConfig

parser = argparse.ArgumentParser()
parser.add_argument("--trial", type=int, default=0)
parser.add_argument("--snr", type=float, default=20.0)
parser.add_argument("--out", default="fig1_trace.csv")
args = parser.parse_args()

spec = ExperimentSpec(M=(2,), S=(2,), N=(4,), K=(20,), snr_db=(args.snr,), detectors=("svgd",),
                      svgd=SvgdConfig(n=50))
est, truth = trace_trial(spec, "svgd", args.out, trial=args.trial)
print("truth", truth.tolist(), "estimate", est.x_hat.tolist(), "mean", np.round(est.x_bar, 3).tolist())

try:
    import matplotlib.pyplot as plt
    import pandas as pd
except ImportError:
    raise SystemExit(0)

df = pd.read_csv(args.out)
df = df[df.particle != "mean"]
snapshots = [0, 10, 50, 200, spec.svgd.iterations]
fig, axes = plt.subplots(1, len(snapshots), figsize=(3 * len(snapshots), 3), sharex=True, sharey=True)
for ax, it in zip(axes, snapshots):
    cur = df[df.iteration == it]
    ax.scatter(cur.x1, cur.x2, s=8)
    ax.scatter([truth[0]], [truth[1]], marker="x", color="red")
    ax.set_title(f"iteration {it}")
    ax.set_xlim(-0.2, 4.2)
    ax.set_ylim(-0.2, 4.2)
fig.tight_layout()
fig.savefig(args.out.replace(".csv", ".png"), dpi=120)
