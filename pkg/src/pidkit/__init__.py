"""pidkit: bivariate partial information decompositions and network edge nomination.

Core layers:

* ``discrete`` / ``pid``: probability containers, elementary information
  measures, and the unsigned/signed bivariate PIDs;
* ``gaussian`` / ``kernels`` / ``montecarlo``: closed forms for the linear
  noise-free Gaussian interaction and Monte Carlo estimators for general
  interaction kernels;
* ``network`` / ``harness``: the Gaussian interaction-network model and
  the batch experiment pipelines;
* ``service`` / ``cli``: HTTP surface (FastAPI) over the library and a
  thin command-line client.
"""

from importlib import metadata

try:
    __version__ = metadata.version("pidkit")
except metadata.PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .discrete import (
    DiscreteDist,
    DiscreteJoint2,
    DiscreteJoint3,
    conditional_entropy,
    conditional_mi,
    entropy,
    interaction_information,
    kl_divergence,
    mutual_information,
    specific_information,
)
from .extreal import ExtReal
from .gaussian import (
    GaussianParams,
    LinearInteraction,
    PmLattice,
    conditional_gaussian,
    f_gamma,
    gauss_linear_transform,
    kl_gaussians,
    linear_imin_pid,
    linear_ipm_pid,
    linear_limits,
    linear_mi,
    linear_specific_info,
)
from .harness import (
    discretize_equal_width,
    empirical_joint3,
    pairwise_pid_scan,
    rank_scores,
    run_experiment_1,
    run_experiment_2,
    run_experiment_3,
)
from .kernels import NfbiKernel, linear_kernel, sigmoidal_kernel, symmetric_sum_kernel
from .montecarlo import (
    McEstimate,
    density_ratio_identity_check,
    infinite_mi_flag,
    limit_sweep,
    mc_min_specific_info,
    mc_min_surprisal,
    mc_umin_x,
    mc_upm_x,
)
from .network import (
    InteractionNetwork,
    SampleBatch,
    build_covariance,
    network_a,
    network_b,
    sample,
    taylor_coefficients,
)
from .pid import (
    BivariatePid,
    PidKind,
    PmSublattices,
    conditional_independence_audit,
    imin_pid,
    imin_redundancy,
    ipm_pid,
    ipm_sublattices,
    pid_conservation_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
