"""Estimated total user count |x_hat|_1 against SNR for plain SVGD and NSVGD.

At low SNR the likelihood gradient is swamped by noise and plain SVGD drifts,
while the NSVGD bias term keeps the particle mass near N.
"""
import argparse

import numpy as np

from preamble_svgd.experiment import ExperimentSpec, simulate

parser = argparse.ArgumentParser()
parser.add_argument("--trials", type=int, default=50)
parser.add_argument("--snr", default="-10,-5,0,5,10,15,20")
args = parser.parse_args()

snrs = tuple(float(v) for v in args.snr.split(","))
spec = ExperimentSpec(M=(20,), S=(10,), N=(20,), K=(30,), snr_db=snrs,
                      detectors=("svgd", "nsvgd"), trials=args.trials)
records = simulate(spec)
print("snr_db  detector  mean|x_hat|_1  true")
for snr in snrs:
    for det in spec.detectors:
        totals = [r.estimate.x_hat.sum() for r in records if r.snr_db == snr and r.detector == det]
        print(f"{snr:6.1f}  {det:<8}  {np.mean(totals):13.2f}  {spec.N[0]}")
