"""Noise-free bivariate interaction kernels T = g(X, Y).

A kernel is admissible when both partial derivatives are nonzero on an
open set of full measure; the shipped kernels satisfy this with at most a
measure-zero boundary (y = 0 for the sigmoidal switch).  Derivative
closures are vectorized over numpy arrays, and each kernel carries a
numerically stable ``log |d_x/d_y|`` so tail samples cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import expit, log_expit

Array = np.ndarray
Fn2 = Callable[[Array, Array], Array]


@dataclass(frozen=True)
class NfbiKernel:
    """A bivariate kernel with partial-derivative evaluators."""

    name: str
    params: tuple
    g: Fn2
    d_x: Fn2
    d_y: Fn2
    _log_ratio_xy: Fn2 | None = field(default=None, repr=False)

    def log_ratio_xy(self, x: Array, y: Array) -> Array:
        """log(|d_x g| / |d_y g|), non-finite on the excluded boundary set."""
        if self._log_ratio_xy is not None:
            return self._log_ratio_xy(x, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(np.abs(self.d_x(x, y))) - np.log(np.abs(self.d_y(x, y)))

    def swapped(self) -> "NfbiKernel":
        """The same interaction with the argument roles exchanged."""
        ratio = None
        if self._log_ratio_xy is not None:
            ratio = lambda x, y: -self._log_ratio_xy(y, x)  # noqa: E731
        return NfbiKernel(
            name=f"{self.name}-swapped",
            params=self.params,
            g=lambda x, y: self.g(y, x),
            d_x=lambda x, y: self.d_y(y, x),
            d_y=lambda x, y: self.d_x(y, x),
            _log_ratio_xy=ratio,
        )


def linear_kernel(a: float, b: float) -> NfbiKernel:
    """g(x, y) = a x + b y with constant partials."""
    if a <= 0 or b <= 0:
        raise ValueError(f"linear kernel requires positive coefficients, got a={a}, b={b}")
    log_ratio = float(np.log(a / b))
    return NfbiKernel(
        name="linear",
        params=(a, b),
        g=lambda x, y: a * x + b * y,
        d_x=lambda x, y: np.broadcast_to(np.float64(a), np.broadcast_shapes(x.shape, y.shape)),
        d_y=lambda x, y: np.broadcast_to(np.float64(b), np.broadcast_shapes(x.shape, y.shape)),
        _log_ratio_xy=lambda x, y: np.full(np.broadcast_shapes(x.shape, y.shape), log_ratio),
    )


def sigmoidal_kernel(alpha: float) -> NfbiKernel:
    """Sigmoidal switch g(x, y) = y / (1 + e^(alpha - x)).

    The first argument is the switch: large x turns the interaction on.
    d_y = sigma(x - alpha), d_x = y sigma(x - alpha) sigma(alpha - x), and
    |d_x / d_y| = |y| sigma(alpha - x), which shrinks to zero pointwise as
    alpha -> -inf.
    """
    if not np.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")

    def log_ratio(x: Array, y: Array) -> Array:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(y)) + log_expit(alpha - x)

    return NfbiKernel(
        name="sigmoidal",
        params=(alpha,),
        g=lambda x, y: y * expit(x - alpha),
        d_x=lambda x, y: y * expit(x - alpha) * expit(alpha - x),
        d_y=lambda x, y: expit(x - alpha) * np.ones_like(y),
        _log_ratio_xy=log_ratio,
    )


def symmetric_sum_kernel() -> NfbiKernel:
    """g(x, y) = x + y; the exchange-symmetric limit of the linear family."""
    return NfbiKernel(
        name="symmetric-sum",
        params=(),
        g=lambda x, y: x + y,
        d_x=lambda x, y: np.ones(np.broadcast_shapes(x.shape, y.shape)),
        d_y=lambda x, y: np.ones(np.broadcast_shapes(x.shape, y.shape)),
        _log_ratio_xy=lambda x, y: np.zeros(np.broadcast_shapes(x.shape, y.shape)),
    )


@dataclass(frozen=True)
class DerivativeCheck:
    max_err_x: float
    max_err_y: float
    n_points: int


def finite_difference_check(
    kernel: NfbiKernel, n_points: int = 1000, seed: int = 0, step: float = 1e-5
) -> DerivativeCheck:
    """Compare d_x / d_y against central differences at random Gaussian points."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n_points)
    y = rng.standard_normal(n_points)
    fd_x = (kernel.g(x + step, y) - kernel.g(x - step, y)) / (2 * step)
    fd_y = (kernel.g(x, y + step) - kernel.g(x, y - step)) / (2 * step)
    return DerivativeCheck(
        max_err_x=float(np.max(np.abs(fd_x - kernel.d_x(x, y)))),
        max_err_y=float(np.max(np.abs(fd_y - kernel.d_y(x, y)))),
        n_points=n_points,
    )
