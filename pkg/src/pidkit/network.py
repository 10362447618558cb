"""Gaussian interaction networks: topology -> covariance -> samples -> response.

Node activities are jointly Gaussian with unit variance, +/-rho covariance
on signed edges and zero elsewhere.  The response sums a kernel over a
designated set of directed interaction edges (switch argument first, hub
second) plus optional linear mixed terms.

The two benchmark topologies:

* Network A: five 4-stars among 25 of 50 nodes; the four spoke-hub pairs
  of one star are sigmoidal interactions.
* Network B: two 10-stars (hubs with ten spokes each); k spoke-hub pairs
  on the first hub are interactions and the second hub contributes a
  univariate signal beta * Y2, whose spokes form conditionally
  independent "false" interaction candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .kernels import NfbiKernel, sigmoidal_kernel

# rho is not pinned by the model definition; 0.3 sits below the positive
# definiteness boundaries of both star sizes used here (1/2 for a 4-star,
# 1/sqrt(10) ~ 0.316 for a 10-star).
DEFAULT_RHO = 0.3

N_NODES = 50


class CovarianceError(ValueError):
    """Raised when a topology/rho combination has no valid Gaussian."""


@dataclass(frozen=True)
class InteractionNetwork:
    """A signed graph with Gaussian node activities and a kernel response."""

    n_nodes: int
    edges: tuple  # (i, j, sign) with sign in {+1, -1}
    rho: float
    interactions: tuple  # directed (switch, hub), each an undirected edge
    kernel: NfbiKernel
    mixed_terms: tuple = ()  # (node, beta)

    def __post_init__(self) -> None:
        if not 0 < self.rho < 1:
            raise CovarianceError(f"requires rho in (0, 1), got {self.rho}")
        undirected = {frozenset((i, j)) for i, j, _ in self.edges}
        for i, j in self.interactions:
            if frozenset((i, j)) not in undirected:
                raise ValueError(f"interaction ({i}, {j}) is not an edge of the graph")
        for node, _ in self.mixed_terms:
            if not 0 <= node < self.n_nodes:
                raise ValueError(f"mixed term node {node} out of range")
        build_covariance(self)  # construction fails on a non-PD covariance

    def interaction_pairs(self) -> set[frozenset]:
        return {frozenset(pair) for pair in self.interactions}


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Predictor rows and the response evaluated on them."""

    predictors: np.ndarray  # (n_samples, n_nodes)
    response: np.ndarray  # (n_samples,)
    seed: int


def build_covariance(network: InteractionNetwork) -> np.ndarray:
    """Unit-diagonal covariance with +/-rho on signed edges; must be PD."""
    adjacency = np.zeros((network.n_nodes, network.n_nodes))
    for i, j, sign in network.edges:
        if i == j or not 0 <= i < network.n_nodes or not 0 <= j < network.n_nodes:
            raise ValueError(f"bad edge ({i}, {j})")
        if sign not in (1, -1):
            raise ValueError(f"edge sign must be +/-1, got {sign}")
        adjacency[i, j] = adjacency[j, i] = sign
    sigma = np.eye(network.n_nodes) + network.rho * adjacency
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        lam_min = float(np.linalg.eigvalsh(adjacency).min())
        rho_max = 1.0 / abs(lam_min) if lam_min < 0 else float("inf")
        raise CovarianceError(
            f"covariance not positive definite for rho={network.rho} on this topology "
            f"({len(network.edges)} signed edges); maximal admissible rho is {rho_max:.6g}"
        ) from None
    sigma.setflags(write=False)
    return sigma


def response_of(network: InteractionNetwork, predictors: np.ndarray) -> np.ndarray:
    """Evaluate the network response on predictor rows."""
    out = np.zeros(predictors.shape[0])
    for i, j in network.interactions:
        out += network.kernel.g(predictors[:, i], predictors[:, j])
    for node, beta in network.mixed_terms:
        out += beta * predictors[:, node]
    return out


def sample(network: InteractionNetwork, n: int, seed: int, shard_size: int = 1 << 14) -> SampleBatch:
    """n i.i.d. rows of node activities plus the response, deterministic in seed.

    Rows are generated in fixed-size shards with sub-seeds spawned from the
    master seed and concatenated in shard order, so the batch does not
    depend on how shards might be distributed across workers.
    """
    sigma = build_covariance(network)
    chol = np.linalg.cholesky(sigma)
    ss = np.random.SeedSequence(seed)
    n_shards = (n + shard_size - 1) // shard_size
    parts = []
    remaining = n
    for child in ss.spawn(n_shards):
        m = min(shard_size, remaining)
        z = np.random.default_rng(child).standard_normal((m, network.n_nodes))
        parts.append(z @ chol.T)
        remaining -= m
    predictors = np.concatenate(parts, axis=0)
    predictors.setflags(write=False)
    response = response_of(network, predictors)
    response.setflags(write=False)
    return SampleBatch(predictors=predictors, response=response, seed=seed)


def network_a(alpha: float, rho: float = DEFAULT_RHO) -> InteractionNetwork:
    """Fifty nodes, five 4-stars on the first 25; one star's spokes interact.

    Star s occupies nodes [5s, 5s+4] with hub 5s+4.  The four spoke-hub
    pairs of star 0 are interactions (spoke is the switch, hub the other
    argument); the remaining 25 nodes are isolated null candidates.
    """
    edges = []
    for s in range(5):
        hub = 5 * s + 4
        edges.extend((5 * s + k, hub, 1) for k in range(4))
    interactions = tuple((k, 4) for k in range(4))
    return InteractionNetwork(
        n_nodes=N_NODES,
        edges=tuple(edges),
        rho=rho,
        interactions=interactions,
        kernel=sigmoidal_kernel(alpha),
        mixed_terms=(),
    )


NETWORK_B_HUB_TRUE = 10
NETWORK_B_HUB_SIGNAL = 21
NETWORK_B_SIGNAL_SPOKES = tuple(range(11, 21))


def network_b(alpha: float, beta: float, k: int, rho: float = DEFAULT_RHO) -> InteractionNetwork:
    """Fifty nodes, two 10-stars; k true interactions plus a univariate signal.

    The first hub (node 10, spokes 0..9) carries k spoke-hub interactions;
    the second hub (node 21, spokes 11..20) enters the response only as
    the mixed term beta * activity.  Its ten spoke-hub pairs are the
    conditionally independent false candidates.  Nodes 22..49 are isolated.
    """
    if not 1 <= k <= 10:
        raise ValueError(f"requires 1 <= k <= 10, got {k}")
    edges = [(i, NETWORK_B_HUB_TRUE, 1) for i in range(10)]
    edges += [(i, NETWORK_B_HUB_SIGNAL, 1) for i in NETWORK_B_SIGNAL_SPOKES]
    return InteractionNetwork(
        n_nodes=N_NODES,
        edges=tuple(edges),
        rho=rho,
        interactions=tuple((i, NETWORK_B_HUB_TRUE) for i in range(k)),
        kernel=sigmoidal_kernel(alpha),
        mixed_terms=((NETWORK_B_HUB_SIGNAL, beta),),
    )


@dataclass(frozen=True)
class TaylorCoefficients:
    """Second-order response sensitivities of the 4-star network at the origin."""

    dy_f: float
    dxy_f: float
    dy_normalized: float
    dxy_normalized: float


def taylor_coefficients(alpha: float) -> TaylorCoefficients:
    """Linear and cross sensitivities of the four-interaction response.

    dy_f = 4 / (1 + e^alpha) is the pure hub sensitivity, dxy_f =
    e^alpha / (1 + e^alpha)^2 the per-spoke cross sensitivity; both are
    reported normalized by c(alpha) = |dy_f| + 4 |dxy_f|.  The normalized
    pair moves from (1, 0) at alpha -> -inf to (1/2, 1/8) at alpha -> +inf.
    """
    if not np.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    sig_pos = expit(alpha)
    sig_neg = expit(-alpha)  # 1/(1+e^alpha), kept in sigmoid form against overflow
    dy_f = 4.0 * sig_neg
    dxy_f = sig_pos * sig_neg
    return TaylorCoefficients(
        dy_f=float(dy_f),
        dxy_f=float(dxy_f),
        dy_normalized=float(1.0 / (1.0 + sig_pos)),
        dxy_normalized=float(sig_pos / (4.0 * (1.0 + sig_pos))),
    )
