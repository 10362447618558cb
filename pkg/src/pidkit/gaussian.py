"""Closed-form PIDs for the noise-free linear Gaussian interaction.

The model is T = aX + bY with 0 < a < b and normalized Gaussian predictors
(unit variance, correlation rho).  Because T is fully determined by the
predictors, the joint information I(T;X,Y) is infinite and both PIDs put
+inf in the synergy atom; every other atom is finite and has an explicit
expression in (a, b, rho).

The signed PID's specificity constant is (1/pi)*sqrt(1-rho^2), obtained
from E|X-Y| E|X+Y| / 4 for correlated standard normals; the Monte Carlo
min-surprisal oracle in ``pidkit.montecarlo`` confirms it empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .extreal import ExtReal, finite
from .pid import BivariatePid, PidKind, PmSublattices

LOG_SQRT_2PI_E = 0.5 * math.log(2.0 * math.pi * math.e)


class ParameterError(ValueError):
    """Raised for parameters outside the admissible range."""


@dataclass(frozen=True)
class LinearInteraction:
    """Parameters of T = aX + bY over normalized Gaussian predictors."""

    a: float
    b: float
    rho: float

    def __post_init__(self) -> None:
        if not (0 < self.a < self.b):
            raise ParameterError(f"requires 0 < a < b, got a={self.a}, b={self.b}")
        if not abs(self.rho) < 1:
            raise ParameterError(f"requires |rho| < 1, got rho={self.rho}")

    @property
    def sigma_t_sq(self) -> float:
        return self.a**2 + self.b**2 + 2.0 * self.rho * self.a * self.b

    @property
    def sigma_t(self) -> float:
        return math.sqrt(self.sigma_t_sq)


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Mean vector and covariance of a Gaussian vector (dimension <= 3)."""

    mean: np.ndarray
    cov: np.ndarray

    def __init__(self, mean, cov) -> None:
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        if mean.ndim != 1 or len(mean) > 3:
            raise ParameterError(f"mean must be a vector of dimension <= 3, got {mean.shape}")
        if cov.shape != (len(mean), len(mean)):
            raise ParameterError(f"cov shape {cov.shape} does not match mean {mean.shape}")
        if not np.allclose(cov, cov.T, atol=1e-10):
            raise ParameterError("covariance must be symmetric")
        if np.linalg.eigvalsh(cov).min() < -1e-10:
            raise ParameterError("covariance must be positive semidefinite")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


@dataclass(frozen=True)
class PmLattice:
    """Signed PID atoms of a continuous interaction plus their sublattices."""

    r: ExtReal
    u_x: ExtReal
    u_y: ExtReal
    s: ExtReal
    sub: PmSublattices


class LinearMi(NamedTuple):
    ixy: float
    itx: float
    ity: float


def gauss_linear_transform(params: GaussianParams, matrix) -> GaussianParams:
    """Push a Gaussian through an invertible linear map: mu' = A mu, Sigma' = A Sigma A^T."""
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    if a.shape[0] != a.shape[1] or a.shape[0] != len(params.mean):
        raise ParameterError(f"transform must be square of dimension {len(params.mean)}")
    if abs(np.linalg.det(a)) <= 1e-12:
        raise ParameterError("transform is singular (|det| <= 1e-12)")
    return GaussianParams(a @ params.mean, a @ params.cov @ a.T)


def conditional_gaussian(
    mu1: float, mu2: float, s1: float, s2: float, rho: float, observed: float
) -> tuple[float, float]:
    """Mean and variance of the first Gaussian given the second equals ``observed``."""
    if s1 <= 0 or s2 <= 0:
        raise ParameterError("standard deviations must be positive")
    if abs(rho) > 1:
        raise ParameterError("requires |rho| <= 1")
    mean = mu1 + rho * (s1 / s2) * (observed - mu2)
    var = s1**2 * (1.0 - rho**2)
    return mean, var


def kl_gaussians(mu1: float, s1: float, mu2: float, s2: float) -> float:
    """KL divergence D(N(mu1, s1^2) || N(mu2, s2^2)) in nats."""
    if s1 <= 0 or s2 <= 0:
        raise ParameterError("standard deviations must be positive")
    return math.log(s2 / s1) + (s1**2 + (mu1 - mu2) ** 2) / (2.0 * s2**2) - 0.5


def linear_mi(li: LinearInteraction) -> LinearMi:
    """The three pairwise mutual informations of the linear interaction."""
    ixy = -math.log(math.sqrt(1.0 - li.rho**2))
    log_sigma = math.log(li.sigma_t)
    return LinearMi(
        ixy=ixy,
        itx=-math.log(li.b) + log_sigma + ixy,
        ity=-math.log(li.a) + log_sigma + ixy,
    )


def linear_specific_info(li: LinearInteraction, t):
    """Specific informations (I_X(t), I_Y(t)) of the linear interaction.

    Accepts a scalar or an array of target outcomes.  The difference
    I_Y - I_X is strictly positive for all t, which is why the unsigned
    redundancy coincides with I(T;X) for this interaction.
    """
    t = np.asarray(t, dtype=float)
    st2 = li.sigma_t_sq
    c = math.log(li.sigma_t) - math.log(math.sqrt(1.0 - li.rho**2)) - 0.5
    common = 1.0 / (2.0 * st2 * st2)
    ix = -math.log(li.b) + common * (li.b**2 * (1 - li.rho**2) * st2 + (li.a + li.rho * li.b) ** 2 * t**2) + c
    iy = -math.log(li.a) + common * (li.a**2 * (1 - li.rho**2) * st2 + (li.b + li.rho * li.a) ** 2 * t**2) + c
    if ix.ndim == 0:
        return float(ix), float(iy)
    return ix, iy


def expected_specific_info_x(li: LinearInteraction, half_width_sigmas: float = 8.0) -> float:
    """E_T[I_X(T)] by adaptive quadrature over t in [-8, 8] sigma_T.

    The integrand grows quadratically while the Gaussian weight decays as
    exp(-t^2/2 sigma^2), so the truncated tail mass is below the 8-sigma
    normal tail (~1e-15) times a polynomial factor; negligible at the 1e-8
    comparison tolerance used by callers.
    """
    st = li.sigma_t
    norm = 1.0 / (st * math.sqrt(2.0 * math.pi))

    def integrand(t: float) -> float:
        ix, _ = linear_specific_info(li, t)
        return norm * math.exp(-0.5 * (t / st) ** 2) * ix

    value, _ = integrate.quad(
        integrand, -half_width_sigmas * st, half_width_sigmas * st, limit=200
    )
    return value


def linear_imin_pid(li: LinearInteraction) -> BivariatePid:
    """Unsigned PID of the linear interaction: (R, 0, log(b/a), +inf)."""
    mi = linear_mi(li)
    return BivariatePid(
        r=finite(mi.itx),
        u_x=finite(0.0),
        u_y=finite(math.log(li.b / li.a)),
        s=ExtReal.pos_inf(),
        mi_x=finite(mi.itx),
        mi_y=finite(mi.ity),
        mi_xy=ExtReal.pos_inf(),
        kind=PidKind.IMIN,
    )


def pm_specificity_constant(rho: float) -> float:
    """The unique-specificity value (1/pi)*sqrt(1-rho^2) for normalized Gaussian predictors."""
    return math.sqrt(1.0 - rho**2) / math.pi


def linear_ipm_pid(li: LinearInteraction) -> PmLattice:
    """Signed PID of the linear interaction with its specificity/ambiguity lattices."""
    mi = linear_mi(li)
    c_rho = pm_specificity_constant(li.rho)
    log_ba = math.log(li.b / li.a)
    log_sqrt_1mr2 = math.log(math.sqrt(1.0 - li.rho**2))

    sub = PmSublattices(
        r_plus=finite(LOG_SQRT_2PI_E - c_rho),
        u_x_plus=finite(c_rho),
        u_y_plus=finite(c_rho),
        s_plus=finite(LOG_SQRT_2PI_E + log_sqrt_1mr2 - c_rho),
        r_minus=finite(LOG_SQRT_2PI_E + log_sqrt_1mr2 + math.log(li.a / li.sigma_t)),
        u_x_minus=finite(log_ba),
        u_y_minus=finite(0.0),
        s_minus=ExtReal.neg_inf(),
    )
    return PmLattice(
        r=finite(mi.ity - c_rho),
        u_x=finite(c_rho - log_ba),
        u_y=finite(c_rho),
        s=ExtReal.pos_inf(),
        sub=sub,
    )


def linear_ipm_as_pid(li: LinearInteraction) -> BivariatePid:
    """The signed PID atoms packaged with the interaction's MI triple."""
    mi = linear_mi(li)
    lattice = linear_ipm_pid(li)
    return BivariatePid(
        r=lattice.r,
        u_x=lattice.u_x,
        u_y=lattice.u_y,
        s=lattice.s,
        mi_x=finite(mi.itx),
        mi_y=finite(mi.ity),
        mi_xy=ExtReal.pos_inf(),
        kind=PidKind.IPM,
    )


@dataclass(frozen=True)
class LimitRow:
    """Both PIDs and the limit ratios at one value of the small coefficient a."""

    a: float
    imin: BivariatePid
    ipm: PmLattice
    ity: float
    uy_min_over_ity: float
    r_min_over_ity: float
    ux_pm_over_ity: float
    r_pm_over_ity: float
    ux_pm_over_uy_min: float


def linear_limits(b: float, rho: float, a_sequence) -> list[LimitRow]:
    """Evaluate both PIDs along a decreasing sequence of a values.

    As a -> 0+ the ratios approach (1, 0, -1, 1, -1): the unsigned PID
    routes the diverging information into U_Y while the signed PID routes
    it into R with a compensating negative U_X.
    """
    a_sequence = [float(a) for a in a_sequence]
    if any(a2 >= a1 for a1, a2 in zip(a_sequence, a_sequence[1:])):
        raise ParameterError("a_sequence must be strictly decreasing")
    if any(not 0 < a < b for a in a_sequence):
        raise ParameterError("a_sequence values must lie in (0, b)")
    rows = []
    for a in a_sequence:
        li = LinearInteraction(a=a, b=b, rho=rho)
        mi = linear_mi(li)
        imin = linear_imin_pid(li)
        ipm = linear_ipm_pid(li)
        rows.append(
            LimitRow(
                a=a,
                imin=imin,
                ipm=ipm,
                ity=mi.ity,
                uy_min_over_ity=imin.u_y.value / mi.ity,
                r_min_over_ity=imin.r.value / mi.ity,
                ux_pm_over_ity=ipm.u_x.value / mi.ity,
                r_pm_over_ity=ipm.r.value / mi.ity,
                ux_pm_over_uy_min=ipm.u_x.value / imin.u_y.value,
            )
        )
    return rows


def f_gamma(gamma: float, rho: float) -> float:
    """Worst-case specific-information gap f(gamma) = log(gamma) - (1-rho^2)(gamma^2-1) / (2(gamma^2+2 rho gamma+1)).

    With gamma = b/a this is I_Y(0) - I_X(0); it vanishes at gamma = 1 and
    is strictly increasing on [1, inf), which makes I_Y > I_X everywhere.
    """
    if gamma < 1:
        raise ParameterError(f"requires gamma >= 1, got {gamma}")
    if not abs(rho) < 1:
        raise ParameterError(f"requires |rho| < 1, got rho={rho}")
    return math.log(gamma) - (1 - rho**2) * (gamma**2 - 1) / (2.0 * (gamma**2 + 2 * rho * gamma + 1))
