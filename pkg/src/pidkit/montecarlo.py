"""Monte Carlo estimators for unique-information expressions of NFBIs.

All estimators are deterministic in (parameters, n, seed): sampling is
sharded with sub-seeds spawned from the master seed, shards are combined
in fixed order, and every reduction is sequential numpy, so the result is
bit-identical regardless of how shards might be scheduled.

Estimated quantities, for predictors (X, Y) standard normal with
correlation rho and response T = g(X, Y):

* unique information of X under the unsigned PID, via the event
  A = {I_X(T) >= I_Y(T)} estimated by equal-mass quantile bins of T;
* unique information of X under the signed PID, as the Gaussian
  specificity constant (1/pi)sqrt(1-rho^2) minus the ambiguity term
  E[(log |d_y g| / |d_x g|)^+];
* oracle means E[min(I_X(T), I_Y(T))] and E[min(s_X, s_Y)] used to
  validate the closed forms (and to adjudicate the specificity constant).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .extreal import ExtReal
from .gaussian import LinearInteraction, linear_specific_info, pm_specificity_constant
from .kernels import NfbiKernel

SHARD_SIZE = 1 << 18
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Points where a partial derivative vanishes sit on a measure-zero
# boundary; sampled mass there should be essentially nil.
MAX_EXCLUSION_FRACTION = 1e-4


class ExclusionError(RuntimeError):
    """Raised when too many sampled points fall on the excluded boundary set."""


class UnsupportedKernelError(ValueError):
    """Raised when an operation needs a closed form the kernel does not have."""


@dataclass(frozen=True)
class McEstimate:
    """A reproducible Monte Carlo estimate."""

    value: float
    std_error: float
    n_samples: int
    seed: int
    n_excluded: int = 0
    t_bins_used: int | None = None


def _sharded_standard_normal(n: int, seed: int, cols: int) -> np.ndarray:
    """(n, cols) standard normals assembled from fixed-size, sub-seeded shards."""
    if n <= 0:
        raise ValueError(f"sample count must be positive, got {n}")
    ss = np.random.SeedSequence(seed)
    n_shards = (n + SHARD_SIZE - 1) // SHARD_SIZE
    children = ss.spawn(n_shards)
    parts = []
    remaining = n
    for child in children:
        m = min(SHARD_SIZE, remaining)
        parts.append(np.random.default_rng(child).standard_normal((m, cols)))
        remaining -= m
    return np.concatenate(parts, axis=0)


def sample_gauss_pairs(rho: float, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """n draws of standard-normal (X, Y) with correlation rho, via Cholesky."""
    if not abs(rho) < 1:
        raise ValueError(f"requires |rho| < 1, got rho={rho}")
    z = _sharded_standard_normal(n, seed, 2)
    x = z[:, 0]
    y = rho * z[:, 0] + math.sqrt(1.0 - rho**2) * z[:, 1]
    return x, y


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    mean = float(values.mean())
    if n < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / math.sqrt(n))


def mc_min_surprisal(rho: float, n: int, seed: int) -> McEstimate:
    """Oracle for redundant specificity: E[min(s_X, s_Y)] over Gaussian pairs."""
    x, y = sample_gauss_pairs(rho, n, seed)
    values = LOG_SQRT_2PI + 0.5 * np.minimum(x * x, y * y)
    mean, se = _mean_se(values)
    return McEstimate(value=mean, std_error=se, n_samples=n, seed=seed)


def mc_min_specific_info(li: LinearInteraction, n: int, seed: int) -> McEstimate:
    """Oracle for unsigned redundancy: E[min(I_X(T), I_Y(T))] over sampled T."""
    t = li.sigma_t * _sharded_standard_normal(n, seed, 1)[:, 0]
    ix, iy = linear_specific_info(li, t)
    mean, se = _mean_se(np.minimum(ix, iy))
    return McEstimate(value=mean, std_error=se, n_samples=n, seed=seed)


def _log_ratio_retained(
    kernel: NfbiKernel, x: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, np.ndarray, int]:
    """log|d_x/d_y| at the sample, with boundary points excluded and counted."""
    lr = kernel.log_ratio_xy(x, y)
    keep = np.isfinite(lr)
    n_excluded = int(x.size - keep.sum())
    if n_excluded > MAX_EXCLUSION_FRACTION * x.size:
        raise ExclusionError(
            f"{n_excluded} of {x.size} points excluded "
            f"(> {MAX_EXCLUSION_FRACTION:.0e} fraction); kernel boundary is not measure-zero"
        )
    return lr[keep], keep, n_excluded


def mc_upm_ambiguity_x(kernel: NfbiKernel, rho: float, n: int, seed: int) -> McEstimate:
    """Unique ambiguity of X: E[(log |d_y g| / |d_x g|)^+]."""
    x, y = sample_gauss_pairs(rho, n, seed)
    lr, _, n_excluded = _log_ratio_retained(kernel, x, y)
    values = np.maximum(-lr, 0.0)
    mean, se = _mean_se(values)
    return McEstimate(value=mean, std_error=se, n_samples=n, seed=seed, n_excluded=n_excluded)


def mc_upm_x(kernel: NfbiKernel, rho: float, n: int, seed: int) -> McEstimate:
    """Unique information of X under the signed PID.

    The specificity part is the closed-form Gaussian constant; only the
    ambiguity part is sampled, so the standard error is the ambiguity's.
    """
    if n < 1000:
        raise ValueError(f"requires n >= 1e3, got {n}")
    amb = mc_upm_ambiguity_x(kernel, rho, n, seed)
    return McEstimate(
        value=pm_specificity_constant(rho) - amb.value,
        std_error=amb.std_error,
        n_samples=n,
        seed=seed,
        n_excluded=amb.n_excluded,
    )


def mc_umin_x(kernel: NfbiKernel, rho: float, n: int, t_bins: int = 50, seed: int = 0) -> McEstimate:
    """Unique information of X under the unsigned PID.

    Per point h = log(p_Y/p_X) - log(|d_y g|/|d_x g|); the sign of the
    conditional mean E[h | T] decides the event {I_X(T) >= I_Y(T)}, which
    is estimated by equal-mass quantile bins of the response.  The
    estimate is the positive-bin mass-weighted mean of h; its standard
    error aggregates the within-bin standard errors of the positive bins.
    """
    if n < 10_000:
        raise ValueError(f"requires n >= 1e4, got {n}")
    if t_bins < 10:
        raise ValueError(f"requires t_bins >= 10, got {t_bins}")
    x, y = sample_gauss_pairs(rho, n, seed)
    lr, keep, n_excluded = _log_ratio_retained(kernel, x, y)
    x, y = x[keep], y[keep]
    h = 0.5 * (x * x - y * y) + lr
    t = kernel.g(x, y)

    bins = t_bins
    while True:
        edges = np.quantile(t, np.linspace(0.0, 1.0, bins + 1))
        idx = np.searchsorted(edges[1:-1], t, side="right")
        counts = np.bincount(idx, minlength=bins)
        if np.all(counts > 0):
            break
        bins -= 1
        if bins < 2:
            raise ValueError("could not form at least 2 nonempty response bins")
    if bins != t_bins:
        warnings.warn(
            f"reduced response bins from {t_bins} to {bins} to avoid empty bins",
            stacklevel=2,
        )

    sums = np.bincount(idx, weights=h, minlength=bins)
    sumsq = np.bincount(idx, weights=h * h, minlength=bins)
    means = sums / counts
    var = np.zeros(bins)
    multi = counts > 1
    var[multi] = (sumsq[multi] - counts[multi] * means[multi] ** 2) / (counts[multi] - 1)
    se_bins = np.sqrt(np.maximum(var, 0.0) / counts)

    mass = counts / h.size
    positive = means > 0
    value = float(np.sum(means[positive] * mass[positive]))
    std_error = float(np.sqrt(np.sum((mass[positive] * se_bins[positive]) ** 2)))
    return McEstimate(
        value=value,
        std_error=std_error,
        n_samples=n,
        seed=seed,
        n_excluded=n_excluded,
        t_bins_used=bins,
    )


def mc_upm_y(kernel: NfbiKernel, rho: float, n: int, seed: int) -> McEstimate:
    """Unique information of Y under the signed PID (roles exchanged)."""
    return mc_upm_x(kernel.swapped(), rho, n, seed)


def mc_umin_y(kernel: NfbiKernel, rho: float, n: int, t_bins: int = 50, seed: int = 0) -> McEstimate:
    """Unique information of Y under the unsigned PID (roles exchanged).

    Valid because exchangeable predictors make the swapped interaction
    distributionally identical to the original with the roles flipped.
    """
    return mc_umin_x(kernel.swapped(), rho, n, t_bins=t_bins, seed=seed)


@dataclass(frozen=True)
class DensityRatioReport:
    max_abs_error: float
    n_samples: int


def density_ratio_identity_check(
    kernel: NfbiKernel, rho: float, n: int, seed: int
) -> DensityRatioReport:
    """Verify p_{X,T}(x, t) = p_{X,Y}(x, y~) / |d_y g| at sampled points.

    Only the linear kernel admits an independent closed form for p_{X,T}
    (the pushforward through (x, y) -> (x, ax + by) is again Gaussian), so
    other kernels are rejected.
    """
    if kernel.name != "linear":
        raise UnsupportedKernelError(
            f"no independent closed form for p_(X,T) of kernel {kernel.name!r}"
        )
    a, b = kernel.params
    x, y = sample_gauss_pairs(rho, n, seed)
    t = kernel.g(x, y)

    # Closed form: (X, T) is Gaussian with cov [[1, a+rho b], [a+rho b, sigma_T^2]].
    st2 = a * a + b * b + 2 * rho * a * b
    cov_xt = a + rho * b
    det = st2 - cov_xt**2
    quad = (st2 * x * x - 2 * cov_xt * x * t + t * t) / det
    p_xt = np.exp(-0.5 * quad) / (2 * math.pi * math.sqrt(det))

    # Change of variables: y~ = (t - a x) / b and division by |d_y g| = b.
    y_tilde = (t - a * x) / b
    quad_xy = (x * x - 2 * rho * x * y_tilde + y_tilde * y_tilde) / (1 - rho**2)
    p_xy = np.exp(-0.5 * quad_xy) / (2 * math.pi * math.sqrt(1 - rho**2))
    ratio = p_xy / np.abs(kernel.d_y(x, y))

    return DensityRatioReport(
        max_abs_error=float(np.max(np.abs(p_xt - ratio))), n_samples=n
    )


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a limit sweep."""

    param: float
    umin_x: McEstimate
    upm_x: McEstimate
    upm_minus_x: McEstimate
    upm_y_limit: float


def limit_sweep(
    kernel_family,
    rho: float,
    grid,
    n: int,
    seed: int,
    t_bins: int = 50,
) -> list[SweepRow]:
    """Evaluate the MC estimators along a kernel-parameter grid.

    Every grid point reuses the same seed (common random numbers), so
    sample-path monotonicity of the underlying integrands carries over to
    the estimates.  The unique-ambiguity column diverges along a sweep
    toward conditional independence while the unsigned unique information
    shrinks to zero; the signed unique information of the dominant
    predictor is pinned at the specificity constant.
    """
    rows = []
    for param in grid:
        kernel = kernel_family(param)
        rows.append(
            SweepRow(
                param=float(param),
                umin_x=mc_umin_x(kernel, rho, n, t_bins=t_bins, seed=seed),
                upm_x=mc_upm_x(kernel, rho, n, seed),
                upm_minus_x=mc_upm_ambiguity_x(kernel, rho, n, seed),
                upm_y_limit=pm_specificity_constant(rho),
            )
        )
    return rows


def infinite_mi_flag(kernel: NfbiKernel) -> ExtReal:
    """I(T; X, Y) of any noise-free interaction: exactly +inf.

    A deterministic response concentrates the triplet distribution on a
    lower-dimensional set, so the joint predictor-target information has
    no finite value; callers use this to populate synergy atoms.
    """
    return ExtReal.pos_inf()
