"""Discrete probability containers and elementary information measures.

All information values are in nats.  Cells with zero probability are
skipped everywhere (the 0 * log 0 = 0 convention), so no measure here can
produce a NaN from a valid distribution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .extreal import ExtReal

# Probability tables must sum to 1; inputs off by at most RENORM_TOL are
# renormalized (float accumulation from empirical counts), larger
# deviations are rejected as genuine bugs.
RENORM_TOL = 1e-9
SUM_TOL = 1e-12

Symbol = Hashable


class DistributionError(ValueError):
    """Raised when a probability table violates its invariants."""


class AlphabetError(ValueError):
    """Raised when two distributions do not share the required alphabet."""


def _as_prob_array(values, shape_hint: str) -> np.ndarray:
    table = np.asarray(values, dtype=float)
    if table.size == 0:
        raise DistributionError(f"{shape_hint}: empty probability table")
    if np.any(table < 0):
        raise DistributionError(f"{shape_hint}: negative probability entry")
    total = table.sum()
    if abs(total - 1.0) > RENORM_TOL:
        raise DistributionError(
            f"{shape_hint}: probabilities sum to {total!r}, expected 1 within {RENORM_TOL}"
        )
    if total != 1.0:
        table = table / total
    table.setflags(write=False)
    return table


def _check_unique(symbols: Sequence[Symbol], axis: str) -> tuple:
    symbols = tuple(symbols)
    if len(set(symbols)) != len(symbols):
        raise DistributionError(f"duplicate symbols in alphabet {axis}: {symbols}")
    return symbols


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """A probability distribution over a finite alphabet."""

    support: tuple
    probs: np.ndarray

    def __init__(self, support: Sequence[Symbol], probs) -> None:
        object.__setattr__(self, "support", _check_unique(support, "support"))
        table = _as_prob_array(probs, "DiscreteDist")
        if table.ndim != 1 or len(table) != len(self.support):
            raise DistributionError("support and probs must have the same length")
        object.__setattr__(self, "probs", table)

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True, eq=False)
class DiscreteJoint2:
    """A joint distribution over two finite alphabets, table indexed [x, y]."""

    alphabet_x: tuple
    alphabet_y: tuple
    table: np.ndarray

    def __init__(self, alphabet_x, alphabet_y, table) -> None:
        object.__setattr__(self, "alphabet_x", _check_unique(alphabet_x, "x"))
        object.__setattr__(self, "alphabet_y", _check_unique(alphabet_y, "y"))
        arr = _as_prob_array(table, "DiscreteJoint2")
        if arr.shape != (len(self.alphabet_x), len(self.alphabet_y)):
            raise DistributionError(
                f"table shape {arr.shape} does not match alphabets "
                f"({len(self.alphabet_x)}, {len(self.alphabet_y)})"
            )
        object.__setattr__(self, "table", arr)

    def marginal_x(self) -> DiscreteDist:
        return DiscreteDist(self.alphabet_x, self.table.sum(axis=1))

    def marginal_y(self) -> DiscreteDist:
        return DiscreteDist(self.alphabet_y, self.table.sum(axis=0))

    def swapped(self) -> "DiscreteJoint2":
        return DiscreteJoint2(self.alphabet_y, self.alphabet_x, self.table.T)


@dataclass(frozen=True, eq=False)
class DiscreteJoint3:
    """A trivariate joint over (X, Y, T), table indexed [x, y, t]."""

    alphabet_x: tuple
    alphabet_y: tuple
    alphabet_t: tuple
    table: np.ndarray

    def __init__(self, alphabet_x, alphabet_y, alphabet_t, table) -> None:
        object.__setattr__(self, "alphabet_x", _check_unique(alphabet_x, "x"))
        object.__setattr__(self, "alphabet_y", _check_unique(alphabet_y, "y"))
        object.__setattr__(self, "alphabet_t", _check_unique(alphabet_t, "t"))
        arr = _as_prob_array(table, "DiscreteJoint3")
        shape = (len(self.alphabet_x), len(self.alphabet_y), len(self.alphabet_t))
        if arr.shape != shape:
            raise DistributionError(f"table shape {arr.shape} does not match alphabets {shape}")
        object.__setattr__(self, "table", arr)

    def joint_xy(self) -> DiscreteJoint2:
        return DiscreteJoint2(self.alphabet_x, self.alphabet_y, self.table.sum(axis=2))

    def joint_xt(self) -> DiscreteJoint2:
        return DiscreteJoint2(self.alphabet_x, self.alphabet_t, self.table.sum(axis=1))

    def joint_yt(self) -> DiscreteJoint2:
        return DiscreteJoint2(self.alphabet_y, self.alphabet_t, self.table.sum(axis=0))

    def joint_pair_t(self) -> DiscreteJoint2:
        """The joint of the composite source (X, Y) against T."""
        nx, ny, nt = self.table.shape
        pairs = tuple((x, y) for x in self.alphabet_x for y in self.alphabet_y)
        return DiscreteJoint2(pairs, self.alphabet_t, self.table.reshape(nx * ny, nt))

    def marginal_t(self) -> DiscreteDist:
        return DiscreteDist(self.alphabet_t, self.table.sum(axis=(0, 1)))


def _plogp(p: np.ndarray) -> float:
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask])))


def entropy(dist: DiscreteDist) -> float:
    """Shannon entropy H = -sum p log p, in nats."""
    return -_plogp(dist.probs)


def _entropy_of_table(table: np.ndarray) -> float:
    return -_plogp(table)


def conditional_entropy(joint: DiscreteJoint2) -> float:
    """H(X | Y) = H(X, Y) - H(Y), in nats."""
    return _entropy_of_table(joint.table) - entropy(joint.marginal_y())


def mutual_information(joint: DiscreteJoint2) -> float:
    """I(X; Y) = H(X) - H(X | Y), in nats (clipped at 0 against roundoff)."""
    mi = entropy(joint.marginal_x()) - conditional_entropy(joint)
    return max(mi, 0.0)


def conditional_mi(joint: DiscreteJoint3, given: str = "y") -> float:
    """Conditional MI between the two non-conditioned variables of (X, Y, T).

    ``given="y"`` yields I(T; X | Y), ``given="x"`` yields I(T; Y | X), and
    ``given="t"`` yields I(X; Y | T).
    """
    axes = {"x": 0, "y": 1, "t": 2}
    if given not in axes:
        raise ValueError(f"given must be one of {sorted(axes)}, got {given!r}")
    cond = axes[given]
    table = np.moveaxis(joint.table, cond, 0)  # [z, a, b]
    p_z = table.sum(axis=(1, 2))
    p_az = table.sum(axis=2)
    p_bz = table.sum(axis=1)
    mask = table > 0
    num = table * p_z[:, None, None]
    den = p_az[:, :, None] * p_bz[:, None, :]
    cmi = float(np.sum(table[mask] * np.log(num[mask] / den[mask])))
    return max(cmi, 0.0)


def kl_divergence(p: DiscreteDist, q: DiscreteDist) -> ExtReal:
    """KL divergence D(p || q) in nats; +inf when p is not absolutely continuous w.r.t. q."""
    if p.support != q.support:
        raise AlphabetError(f"alphabets differ: {p.support} vs {q.support}")
    mask = p.probs > 0
    if np.any(q.probs[mask] == 0):
        return ExtReal.pos_inf()
    return ExtReal(float(np.sum(p.probs[mask] * np.log(p.probs[mask] / q.probs[mask]))))


def specific_information(joint: DiscreteJoint2, t: Symbol) -> float:
    """Information the first variable carries about the outcome {second = t}.

    This is D(p(X | t) || p(X)), and it is 0 by convention for outcomes of
    zero probability.  Averaged over t it recovers I(X; T).
    """
    try:
        idx = joint.alphabet_y.index(t)
    except ValueError:
        raise AlphabetError(f"outcome {t!r} not in alphabet {joint.alphabet_y}") from None
    column = joint.table[:, idx]
    p_t = column.sum()
    if p_t == 0:
        return 0.0
    posterior = column / p_t
    prior = joint.table.sum(axis=1)
    mask = posterior > 0
    return float(np.sum(posterior[mask] * np.log(posterior[mask] / prior[mask])))


def specific_information_curve(joint: DiscreteJoint2) -> np.ndarray:
    """specific_information for every outcome of the second variable at once."""
    p_t = joint.table.sum(axis=0)
    prior = joint.table.sum(axis=1)
    out = np.zeros(len(p_t))
    for j, pt in enumerate(p_t):
        if pt == 0:
            continue
        posterior = joint.table[:, j] / pt
        mask = posterior > 0
        out[j] = np.sum(posterior[mask] * np.log(posterior[mask] / prior[mask]))
    return out


def interaction_information(joint: DiscreteJoint3) -> float:
    """Signed interaction information I(T; X; Y) = I(T; X | Y) - I(T; X)."""
    return conditional_mi(joint, given="y") - mutual_information(joint.joint_xt())
