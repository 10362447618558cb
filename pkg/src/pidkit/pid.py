"""Two bivariate partial information decompositions on discrete joints.

Given a trivariate joint over (X, Y, T), a PID splits the predictor-target
mutual informations into redundancy R, unique informations U_X / U_Y, and
synergy S so that

    I(T;X,Y) = R + U_X + U_Y + S
    I(T;X)   = R + U_X
    I(T;Y)   = R + U_Y

Two redundancy functions are implemented:

* the unsigned minimum-specific-information redundancy (``IMIN``), whose
  atoms are all nonnegative on discrete joints;
* the signed pointwise min-surprisal redundancy (``IPM``), defined as the
  difference of a specificity lattice (built from marginal surprisals) and
  an ambiguity lattice (built from target-conditional surprisals); its
  atoms may be negative.

Only these two ship here; other redundancy functions (convex-program or
common-change-of-surprisal variants) can be plugged into the same scan and
audit machinery through ``register_pid_function``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .discrete import DiscreteJoint3, conditional_mi
from .extreal import ExtReal, finite


class PidKind(str, enum.Enum):
    IMIN = "imin"
    IPM = "ipm"


class PidInputError(ValueError):
    """Raised when two PIDs cannot be compared (different underlying joints)."""


@dataclass(frozen=True)
class BivariatePid:
    """The four atoms of a bivariate PID plus the three mutual informations."""

    r: ExtReal
    u_x: ExtReal
    u_y: ExtReal
    s: ExtReal
    mi_x: ExtReal
    mi_y: ExtReal
    mi_xy: ExtReal
    kind: PidKind

    def atoms(self) -> dict[str, ExtReal]:
        return {"r": self.r, "u_x": self.u_x, "u_y": self.u_y, "s": self.s}


@dataclass(frozen=True)
class PmSublattices:
    """Specificity (+) and ambiguity (-) components of the signed PID atoms."""

    r_plus: ExtReal
    u_x_plus: ExtReal
    u_y_plus: ExtReal
    s_plus: ExtReal
    r_minus: ExtReal
    u_x_minus: ExtReal
    u_y_minus: ExtReal
    s_minus: ExtReal

    def plus(self) -> dict[str, ExtReal]:
        return {
            "r": self.r_plus,
            "u_x": self.u_x_plus,
            "u_y": self.u_y_plus,
            "s": self.s_plus,
        }

    def minus(self) -> dict[str, ExtReal]:
        return {
            "r": self.r_minus,
            "u_x": self.u_x_minus,
            "u_y": self.u_y_minus,
            "s": self.s_minus,
        }


def _specific_info_curves(joint: DiscreteJoint3) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """I_X(t) and I_Y(t) for every t, plus p(t); zero-probability t gives 0."""
    table = joint.table
    p_t = table.sum(axis=(0, 1))
    p_x = table.sum(axis=(1, 2))
    p_y = table.sum(axis=(0, 2))
    p_xt = table.sum(axis=1)
    p_yt = table.sum(axis=0)

    def curve(p_vt: np.ndarray, prior: np.ndarray) -> np.ndarray:
        nz = p_t > 0
        cond = np.zeros_like(p_vt)
        cond[:, nz] = p_vt[:, nz] / p_t[nz]
        # cond > 0 implies the marginal prior > 0, so the substitute 1.0 is inert
        prior_safe = np.broadcast_to(np.where(prior > 0, prior, 1.0)[:, None], cond.shape)
        mask = cond > 0
        terms = np.zeros_like(cond)
        terms[mask] = cond[mask] * np.log(cond[mask] / prior_safe[mask])
        return terms.sum(axis=0)

    return curve(p_xt, p_x), curve(p_yt, p_y), p_t


def _ent(p: np.ndarray) -> float:
    mask = p > 0
    return -float(np.sum(p[mask] * np.log(p[mask])))


def _mi_triple(joint: DiscreteJoint3) -> tuple[float, float, float]:
    """(I(T;X), I(T;Y), I(T;X,Y)) straight from the table (hot path)."""
    table = joint.table
    h_t = _ent(table.sum(axis=(0, 1)))
    mi_x = _ent(table.sum(axis=(1, 2))) + h_t - _ent(table.sum(axis=1))
    mi_y = _ent(table.sum(axis=(0, 2))) + h_t - _ent(table.sum(axis=0))
    mi_xy = _ent(table.sum(axis=2)) + h_t - _ent(table)
    return max(mi_x, 0.0), max(mi_y, 0.0), max(mi_xy, 0.0)


def imin_redundancy(joint: DiscreteJoint3, sources: tuple[str, ...] = ("x", "y")) -> float:
    """Expected minimum over sources of the specific information about T.

    ``sources`` selects which predictors enter the minimum; the degenerate
    single-source call reduces to the source-target mutual information
    (self-redundancy).
    """
    if not sources or any(s not in ("x", "y") for s in sources):
        raise ValueError(f"sources must be a nonempty subset of ('x','y'), got {sources!r}")
    ix, iy, p_t = _specific_info_curves(joint)
    curves = {"x": ix, "y": iy}
    stacked = np.vstack([curves[s] for s in sources])
    return float(np.sum(p_t * stacked.min(axis=0)))


def imin_pid(joint: DiscreteJoint3) -> BivariatePid:
    """The unsigned PID: redundancy is the expected minimum specific information."""
    r = imin_redundancy(joint)
    mi_x, mi_y, mi_xy = _mi_triple(joint)
    return BivariatePid(
        r=finite(r),
        u_x=finite(mi_x - r),
        u_y=finite(mi_y - r),
        s=finite(mi_xy - mi_x - mi_y + r),
        mi_x=finite(mi_x),
        mi_y=finite(mi_y),
        mi_xy=finite(mi_xy),
        kind=PidKind.IMIN,
    )


def ipm_sublattices(joint: DiscreteJoint3) -> PmSublattices:
    """Specificity and ambiguity lattices of the signed PID.

    The specificity lattice uses marginal surprisals min(s_X, s_Y) and the
    entropies H(X), H(Y), H(X,Y); the ambiguity lattice uses conditional
    surprisals min(s_{X|T}, s_{Y|T}) and H(. | T).  Both are computed from
    the same joint table, so the four lattice identities hold to float
    precision by construction.
    """
    table = joint.table
    p_x = table.sum(axis=(1, 2))
    p_y = table.sum(axis=(0, 2))
    p_t = table.sum(axis=(0, 1))
    p_xy = table.sum(axis=2)
    p_xt = table.sum(axis=1)
    p_yt = table.sum(axis=0)

    # Specificity: expectation of min marginal surprisal over p(x, y).
    mask_xy = p_xy > 0
    s_x = np.where(p_x > 0, -np.log(np.where(p_x > 0, p_x, 1.0)), np.inf)
    s_y = np.where(p_y > 0, -np.log(np.where(p_y > 0, p_y, 1.0)), np.inf)
    min_s = np.minimum(s_x[:, None], s_y[None, :])
    r_plus = float(np.sum(p_xy[mask_xy] * min_s[mask_xy]))

    h_x = -float(np.sum(p_x[p_x > 0] * np.log(p_x[p_x > 0])))
    h_y = -float(np.sum(p_y[p_y > 0] * np.log(p_y[p_y > 0])))
    h_xy = -float(np.sum(p_xy[mask_xy] * np.log(p_xy[mask_xy])))

    # Ambiguity: expectation of min conditional surprisal over p(x, y, t).
    nz_t = p_t > 0
    safe_t = np.where(nz_t, p_t, 1.0)
    cond_xt = p_xt / safe_t
    cond_yt = p_yt / safe_t
    s_xt = np.where(cond_xt > 0, -np.log(np.where(cond_xt > 0, cond_xt, 1.0)), np.inf)
    s_yt = np.where(cond_yt > 0, -np.log(np.where(cond_yt > 0, cond_yt, 1.0)), np.inf)
    min_cond = np.minimum(s_xt[:, None, :], s_yt[None, :, :])
    mask_xyt = table > 0
    r_minus = float(np.sum(table[mask_xyt] * min_cond[mask_xyt]))

    h_t = -float(np.sum(p_t[nz_t] * np.log(p_t[nz_t])))
    h_x_t = _cond_entropy_from(p_xt, p_t)
    h_y_t = _cond_entropy_from(p_yt, p_t)
    h_xy_t = -float(np.sum(table[mask_xyt] * np.log(table[mask_xyt]))) - h_t

    return PmSublattices(
        r_plus=finite(r_plus),
        u_x_plus=finite(h_x - r_plus),
        u_y_plus=finite(h_y - r_plus),
        s_plus=finite(h_xy - h_x - h_y + r_plus),
        r_minus=finite(r_minus),
        u_x_minus=finite(h_x_t - r_minus),
        u_y_minus=finite(h_y_t - r_minus),
        s_minus=finite(h_xy_t - h_x_t - h_y_t + r_minus),
    )


def _cond_entropy_from(p_vt: np.ndarray, p_t: np.ndarray) -> float:
    mask = p_vt > 0
    joint_term = -float(np.sum(p_vt[mask] * np.log(p_vt[mask])))
    mask_t = p_t > 0
    return joint_term + float(np.sum(p_t[mask_t] * np.log(p_t[mask_t])))


def ipm_pid(joint: DiscreteJoint3) -> BivariatePid:
    """The signed PID: each atom is specificity minus ambiguity."""
    sub = ipm_sublattices(joint)
    mi_x, mi_y, mi_xy = _mi_triple(joint)
    return BivariatePid(
        r=sub.r_plus - sub.r_minus,
        u_x=sub.u_x_plus - sub.u_x_minus,
        u_y=sub.u_y_plus - sub.u_y_minus,
        s=sub.s_plus - sub.s_minus,
        mi_x=finite(mi_x),
        mi_y=finite(mi_y),
        mi_xy=finite(mi_xy),
        kind=PidKind.IPM,
    )


@dataclass(frozen=True)
class ConservationReport:
    """Cross-PID conservation: dR = dS = -dU_X = -dU_Y for finite atoms."""

    delta: float
    max_deviation: float


def pid_conservation_check(
    p1: BivariatePid, p2: BivariatePid, tol: float = 1e-10
) -> ConservationReport:
    """Check inter-PID conservation and return the common atom shift.

    Both PIDs must come from the same joint; the mutual-information triple
    is used as the fingerprint of that precondition.
    """
    for name in ("mi_x", "mi_y", "mi_xy"):
        a, b = getattr(p1, name), getattr(p2, name)
        if not a.isclose(b, tol):
            raise PidInputError(f"PIDs disagree on {name}: {a} vs {b}")

    deltas = []
    for attr, sign in (("r", 1.0), ("s", 1.0), ("u_x", -1.0), ("u_y", -1.0)):
        a, b = getattr(p1, attr), getattr(p2, attr)
        if a.is_finite and b.is_finite:
            deltas.append(sign * (a.value - b.value))
    if not deltas:
        return ConservationReport(delta=0.0, max_deviation=0.0)
    common = float(np.mean(deltas))
    max_dev = float(max(abs(d - common) for d in deltas))
    if max_dev > tol:
        raise PidInputError(
            f"conservation identity violated: deltas {deltas} spread {max_dev} > {tol}"
        )
    return ConservationReport(delta=common, max_deviation=max_dev)


@dataclass(frozen=True)
class CiAuditReport:
    """Outcome of the conditional-independence audit for one joint and PID kind."""

    kind: PidKind
    cmi_tx_given_y: float
    u_x: ExtReal
    s: ExtReal
    conditionally_independent: bool
    violation: bool


def conditional_independence_audit(
    joint: DiscreteJoint3,
    kind: PidKind,
    ci_tol: float = 1e-10,
    atom_tol: float = 1e-8,
) -> CiAuditReport:
    """Check whether a PID respects X being uninformative about T given Y.

    When I(T;X|Y) vanishes, a fully nonnegative PID must assign zero unique
    information U_X and zero synergy; a signed PID need not.  A violation
    is flagged when the conditional MI is below ``ci_tol`` but |U_X| or |S|
    exceeds ``atom_tol``.
    """
    cmi = conditional_mi(joint, given="y")
    pid = pid_of_kind(joint, kind)
    ci = cmi < ci_tol
    big = any(
        atom.is_finite and abs(atom.value) > atom_tol or not atom.is_finite
        for atom in (pid.u_x, pid.s)
    )
    return CiAuditReport(
        kind=kind,
        cmi_tx_given_y=cmi,
        u_x=pid.u_x,
        s=pid.s,
        conditionally_independent=ci,
        violation=ci and big,
    )


PidFunction = Callable[[DiscreteJoint3], BivariatePid]

_PID_REGISTRY: dict[str, PidFunction] = {
    PidKind.IMIN.value: imin_pid,
    PidKind.IPM.value: ipm_pid,
}


def register_pid_function(name: str, fn: PidFunction) -> None:
    """Plug an additional redundancy function into the dispatch used by
    the scan/audit machinery.  The function must map a trivariate joint to
    a BivariatePid satisfying the three marginal identities."""
    key = name.lower()
    if key in _PID_REGISTRY:
        raise ValueError(f"a PID is already registered under {key!r}")
    _PID_REGISTRY[key] = fn


def pid_of_kind(joint: DiscreteJoint3, kind: "PidKind | str") -> BivariatePid:
    key = kind.value if isinstance(kind, PidKind) else str(kind).lower()
    try:
        compute = _PID_REGISTRY[key]
    except KeyError:
        raise ValueError(
            f"no PID registered under {key!r}; available: {sorted(_PID_REGISTRY)}"
        ) from None
    return compute(joint)
