"""Preamble collision detection for grant-based random access with SVGD detectors."""
from .signal import Scenario, draw_occupancy, generate_pool, synthesize
from .likelihood import LikelihoodModel, ml_bruteforce
from .kernels import KernelSpec, bandwidth_median, kernel_and_grad
from .svgd import ParticleSet, SvgdConfig, run_svgd, svgd_direction
from .nsvgd import NsvgdConfig, NsvgdState, bias_correction, nsvgd_step, run_nsvgd
from .gibbs import GibbsConfig, gibbs_conditional, run_gibbs
from .metrics import Estimate, mse, p_ade, round_estimate
from .experiment import ExperimentSpec, MetricRow, run_experiment, scaling_benchmark

__version__ = "0.1.0"
