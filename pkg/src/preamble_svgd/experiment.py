"""Monte-Carlo experiment orchestration.

Seeding: every trial owns a ``SeedSequence`` keyed by (master seed, scenario
index, trial index) and every stage (pool, occupancy, signal, each detector)
gets its own child key.  Trials at different SNRs share pool, occupancy,
channel and noise shape (the noise is rescaled), and adding a detector never
changes what the others see.
"""
from __future__ import annotations

import csv
import io
import itertools
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import as_list, load_config
from .gibbs import GibbsConfig, run_gibbs
from .kernels import KernelSpec
from .likelihood import LikelihoodError, LikelihoodModel, ml_bruteforce
from .metrics import Estimate, mse, p_ade, round_estimate
from .nsvgd import NsvgdConfig, run_nsvgd
from .signal import Scenario, draw_occupancy, generate_pool, synthesize
from .svgd import DivergenceError, SvgdConfig, run_svgd

log = logging.getLogger(__name__)

CSV_HEADER = ["detector", "M", "S", "N", "K", "snr_db", "trials", "p_ade", "mse", "wall_ms"]

# Stable stream ids; never renumber.
DETECTOR_IDS = {"svgd": 0, "nsvgd": 1, "gibbs": 2, "ml": 3}
_STAGE_POOL, _STAGE_OCCUPANCY, _STAGE_SIGNAL, _STAGE_DETECTOR = 0, 1, 2, 10


@dataclass(frozen=True)
class ExperimentSpec:
    M: tuple = (20,)
    S: tuple = (10,)
    N: tuple = (20,)
    K: tuple = (30,)
    snr_db: tuple = (0.0, 5.0, 10.0)
    detectors: tuple = ("nsvgd", "svgd", "gibbs")
    trials: int = 100
    seed: int = 0
    out: str | None = None
    delta_sq: float = 1.0
    redraw_pool: bool = True
    record_time: bool = False
    svgd: SvgdConfig = field(default_factory=SvgdConfig)
    nsvgd: NsvgdConfig = field(default_factory=NsvgdConfig)
    kernel: KernelSpec = field(default_factory=KernelSpec)
    gibbs: GibbsConfig = field(default_factory=GibbsConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.detectors) - set(DETECTOR_IDS)
        if unknown:
            raise ValueError(f"unknown detectors {sorted(unknown)}")

    def grid(self):
        """(M, S, N, K) tuples in deterministic order."""
        return list(itertools.product(self.M, self.S, self.N, self.K))

    @classmethod
    def from_config(cls, cfg: dict) -> "ExperimentSpec":
        def pick(prefix, names, cast=None):
            out = {}
            for name, key in names.items():
                full = f"{prefix}.{key}"
                if full in cfg:
                    out[name] = cfg[full] if cast is None else cast(cfg[full])
            return out

        tup = lambda v: tuple(as_list(v))
        kw = pick("scenario", {"M": "M", "S": "S", "N": "N", "K": "K", "snr_db": "snr_db"}, tup)
        kw.update(pick("scenario", {"delta_sq": "delta_sq", "redraw_pool": "redraw_pool"}))
        kw.update(pick("experiment", {"trials": "trials", "seed": "seed", "out": "out",
                                      "record_time": "record_time"}))
        if "detector.list" in cfg:
            kw["detectors"] = tup(cfg["detector.list"])
        shared = pick("detector", {k: k for k in ("n", "step", "iterations", "init_low", "init_high")})
        kw["svgd"] = SvgdConfig(**shared)
        kw["nsvgd"] = NsvgdConfig(**shared, **pick(
            "detector", {k: k for k in ("mu", "alpha", "eps", "gamma", "weight_decay")}))
        kw["kernel"] = KernelSpec(**pick("kernel", {k: k for k in ("kind", "bandwidth_rule", "h", "log_base")}))
        kw["gibbs"] = GibbsConfig(**pick("gibbs", {k: k for k in ("sweeps", "burn_in", "prior")}))
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        return cls.from_config(load_config(path))


@dataclass(frozen=True)
class TrialRecord:
    detector: str
    dims: tuple          # (M, S, N, K)
    snr_db: float
    trial: int
    truth: np.ndarray
    estimate: Estimate | None   # None when the detector aborted
    wall_s: float


@dataclass(frozen=True)
class MetricRow:
    detector: str
    M: int
    S: int
    N: int
    K: int
    snr_db: float
    trials: int
    p_ade: float
    mse: float
    wall_ms: float | None = None
    aborted: int = 0

    def csv_fields(self):
        wall = "" if self.wall_ms is None else f"{self.wall_ms:.3f}"
        return [self.detector, self.M, self.S, self.N, self.K, repr(float(self.snr_db)),
                self.trials, repr(self.p_ade), repr(self.mse), wall]


def _rng(seed, *key) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def make_trial(spec: ExperimentSpec, grid_index: int, dims, trial: int, snr_db: float):
    """Scenario, pool, true occupancy and received signal for one trial."""
    M, S, N, K = dims
    scenario = Scenario.from_snr(M, S, N, K, snr_db, spec.delta_sq)
    pool_key = (grid_index, trial, _STAGE_POOL) if spec.redraw_pool else (grid_index, _STAGE_POOL)
    pool = generate_pool(scenario, _rng(spec.seed, *pool_key))
    truth = draw_occupancy(scenario, _rng(spec.seed, grid_index, trial, _STAGE_OCCUPANCY))
    Y = synthesize(scenario, pool, truth, _rng(spec.seed, grid_index, trial, _STAGE_SIGNAL))
    return LikelihoodModel(scenario, pool, Y), truth


def detector_rng(spec, grid_index, trial, detector):
    return _rng(spec.seed, grid_index, trial, _STAGE_DETECTOR + DETECTOR_IDS[detector])


def run_detector(name: str, spec: ExperimentSpec, model, rng, callback=None) -> Estimate:
    N = model.scenario.N
    if name == "svgd":
        return round_estimate(run_svgd(spec.svgd, model, spec.kernel, rng, callback), N)
    if name == "nsvgd":
        return round_estimate(run_nsvgd(spec.nsvgd, model, spec.kernel, rng, callback), N)
    if name == "gibbs":
        return run_gibbs(spec.gibbs, model, N, rng, callback)
    if name == "ml":
        x = ml_bruteforce(model, N)
        return Estimate(x, x.astype(float))
    raise ValueError(f"unknown detector {name!r}")


def _run_task(args):
    spec, grid_index, dims, snr_db, trial = args
    model, truth = make_trial(spec, grid_index, dims, trial, snr_db)
    records = []
    for det in spec.detectors:
        rng = detector_rng(spec, grid_index, trial, det)
        t0 = time.perf_counter()
        try:
            est = run_detector(det, spec, model, rng)
        except (DivergenceError, LikelihoodError) as exc:
            log.warning("%s aborted on trial %d at %s dB: %s", det, trial, snr_db, exc)
            est = None
        records.append(TrialRecord(det, dims, float(snr_db), trial, truth, est,
                                   time.perf_counter() - t0))
    return records


def simulate(spec: ExperimentSpec, threads: int = 1, progress=None) -> list[TrialRecord]:
    """Per-trial records for every grid point, SNR, trial and detector."""
    tasks = [(spec, gi, dims, snr, t)
             for gi, dims in enumerate(spec.grid())
             for snr in spec.snr_db
             for t in range(spec.trials)]
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            chunks = pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * threads)))
            results = [r for chunk in chunks for r in chunk]
    else:
        results = []
        for i, task in enumerate(tasks):
            results.extend(_run_task(task))
            if progress is not None:
                progress(i + 1, len(tasks))
    return results


def aggregate(records, record_time: bool = False) -> list[MetricRow]:
    groups = {}
    for rec in records:
        groups.setdefault((rec.detector, rec.dims, rec.snr_db), []).append(rec)
    rows = []
    for (det, dims, snr), recs in groups.items():
        ok = [r for r in recs if r.estimate is not None]
        if not ok:
            log.warning("%s: every trial aborted at %s, %s dB", det, dims, snr)
            continue
        truths = [r.truth for r in ok]
        ests = [r.estimate for r in ok]
        wall = 1e3 * statistics.median(r.wall_s for r in ok) if record_time else None
        rows.append(MetricRow(det, *dims, snr, len(ok), p_ade(ests, truths), mse(ests, truths),
                              wall, len(recs) - len(ok)))
    rows.sort(key=lambda r: (r.M, r.S, r.N, r.K, r.snr_db, r.detector))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def read_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run_experiment(spec: ExperimentSpec, threads: int = 1, out=None):
    """Aggregated metric rows; also written as CSV to ``out`` (or ``spec.out``)."""
    rows = aggregate(simulate(spec, threads), spec.record_time)
    out = out or spec.out
    if out:
        Path(out).write_text(rows_to_csv(rows))
    return rows


PLOT_TEMPLATE = '''\
"""Plot P_ADE and MSE against SNR from {csv_name}."""
import sys

import matplotlib.pyplot as plt
import pandas as pd

df = pd.read_csv({csv_path!r})
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for (det, N), grp in df.groupby(["detector", "N"]):
    grp = grp.sort_values("snr_db")
    axes[0].semilogy(grp.snr_db, grp.p_ade, marker="o", label=f"{{det}} N={{N}}")
    axes[1].semilogy(grp.snr_db, grp.mse, marker="o", label=f"{{det}} N={{N}}")
for ax, name in zip(axes, ["P_ADE", "MSE"]):
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel(name)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else {png!r}, dpi=150)
'''


def write_plot_script(csv_path, script_path) -> Path:
    csv_path = Path(csv_path)
    script_path = Path(script_path)
    script_path.write_text(PLOT_TEMPLATE.format(csv_name=csv_path.name, csv_path=str(csv_path),
                                                png=str(csv_path.with_suffix(".png"))))
    return script_path


@dataclass(frozen=True)
class BenchResult:
    rows: list            # (M, median wall seconds)
    slope: float | None
    intercept: float | None
    r2: float | None

    def ratio(self) -> float:
        return self.rows[-1][1] / self.rows[0][1]


def scaling_benchmark(M_list, S=4, K=2000, N=None, detector="nsvgd", trials=5, seed=0,
                      spec: ExperimentSpec | None = None, snr_db=10.0) -> BenchResult:
    """Median per-trial detector runtime against the number of preambles.

    ``N`` defaults to ``M`` at each point (one user per preamble on average).
    """
    M_list = list(M_list)
    if M_list != sorted(M_list):
        raise ValueError("M list must be ascending")
    spec = spec or ExperimentSpec()
    spec = replace(spec, seed=seed, detectors=(detector,))
    rows = []
    for gi, M in enumerate(M_list):
        dims = (M, S, M if N is None else N, K)
        times = []
        for t in range(trials):
            model, _ = make_trial(spec, gi, dims, t, snr_db)
            rng = detector_rng(spec, gi, t, detector)
            t0 = time.perf_counter()
            run_detector(detector, spec, model, rng)
            times.append(time.perf_counter() - t0)
        rows.append((M, statistics.median(times)))
    if len(rows) < 2:
        return BenchResult(rows, None, None, None)
    Ms = np.array([r[0] for r in rows], dtype=float)
    ts = np.array([r[1] for r in rows])
    slope, intercept = np.polyfit(Ms, ts, 1)
    resid = ts - (slope * Ms + intercept)
    ss_tot = float(((ts - ts.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return BenchResult(rows, float(slope), float(intercept), r2)


def trace_trial(spec: ExperimentSpec, detector: str, out, trial: int = 0, signal_out=None):
    """Run one detector on the first grid point / SNR and dump per-iteration state.

    Particle detectors write one row per particle per iteration plus a
    ``mean`` row; Gibbs writes the chain state after every sweep.
    """
    dims = spec.grid()[0]
    snr = spec.snr_db[0]
    model, truth = make_trial(spec, 0, dims, trial, snr)
    if signal_out:
        from .signal import dump_matrix_csv
        dump_matrix_csv(signal_out, model.Y)
    M = dims[0]
    coords = [f"x{m + 1}" for m in range(M)]
    fh = open(out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    if detector == "gibbs":
        writer.writerow(["sweep"] + coords)

        def callback(sweep, x):
            writer.writerow([sweep] + [int(v) for v in x])
    else:
        writer.writerow(["iteration", "particle"] + coords + ["delta", "phi_norm"])

        def callback(particles, info):
            extra = [repr(float(info[k])) if k in info else "" for k in ("delta", "phi_norm")]
            for i, row in enumerate(particles.positions):
                writer.writerow([particles.t, i] + [repr(float(v)) for v in row] + extra)
            writer.writerow([particles.t, "mean"] + [repr(float(v)) for v in particles.mean()] + extra)
    with fh:
        est = run_detector(detector, spec, model, detector_rng(spec, 0, trial, detector), callback)
    return est, truth
