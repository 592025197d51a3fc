"""P_ADE / MSE against SNR for the dense-user scenario.

    python scripts/snr_sweep.py --trials 500 --out results/dense.csv
"""
import argparse
import logging
from dataclasses import replace
from pathlib import Path

from preamble_svgd.experiment import ExperimentSpec, run_experiment, write_plot_script

parser = argparse.ArgumentParser()
parser.add_argument("--spec", default=str(Path(__file__).parents[1] / "configs" / "dense.cfg"))
parser.add_argument("--trials", type=int)
parser.add_argument("--seed", type=int)
parser.add_argument("--threads", type=int, default=1)
parser.add_argument("--out", default="results/dense.csv")
args = parser.parse_args()
logging.basicConfig(level=logging.INFO)

spec = ExperimentSpec.load(args.spec)
if args.trials:
    spec = replace(spec, trials=args.trials)
if args.seed is not None:
    spec = replace(spec, seed=args.seed)
out = Path(args.out)
out.parent.mkdir(parents=True, exist_ok=True)
spec = replace(spec, record_time=True)

rows = run_experiment(spec, threads=args.threads, out=out)
for r in rows:
    print(f"N={r.N:<3} {r.snr_db:5.1f} dB  {r.detector:<6} P_ADE={r.p_ade:.4f}  MSE={r.mse:.4f}  "
          f"{r.wall_ms:.0f} ms/trial")
print("plot with: python", write_plot_script(out, out.with_suffix(".plot.py")))
