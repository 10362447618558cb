import math

import numpy as np
import pytest

from pidkit.discrete import DiscreteJoint3
from pidkit.pid import (
    PidInputError,
    PidKind,
    conditional_independence_audit,
    imin_pid,
    imin_redundancy,
    ipm_pid,
    ipm_sublattices,
    pid_conservation_check,
)

LN2 = math.log(2.0)


def joint_from_table(table):
    nx, ny, nt = table.shape
    return DiscreteJoint3(tuple(range(nx)), tuple(range(ny)), tuple(range(nt)), table)


def two_bit_copy():
    table = np.zeros((2, 2, 4))
    for x in (0, 1):
        for y in (0, 1):
            table[x, y, 2 * x + y] = 0.25
    return joint_from_table(table)


def xor_joint():
    table = np.zeros((2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            table[x, y, x ^ y] = 0.25
    return joint_from_table(table)


def triple_copy():
    table = np.zeros((2, 2, 2))
    table[0, 0, 0] = table[1, 1, 1] = 0.5
    return joint_from_table(table)


def random_joint(rng, max_size=4):
    shape = tuple(int(s) for s in rng.integers(2, max_size + 1, size=3))
    table = rng.gamma(0.6, size=shape)
    table /= table.sum()
    return joint_from_table(table)


def noisy_copy_ci_joint(rng):
    """X a noisy copy of Y, T = Y: satisfies X independent of T given Y."""
    ny = int(rng.integers(2, 5))
    nx = int(rng.integers(2, 5))
    p_y = rng.dirichlet(np.ones(ny))
    table = np.zeros((nx, ny, ny))
    for y in range(ny):
        table[:, y, y] = p_y[y] * rng.dirichlet(np.ones(nx))
    return joint_from_table(table)


def assert_atoms(pid, expected, tol=1e-12):
    got = (pid.r.value, pid.u_x.value, pid.u_y.value, pid.s.value)
    assert got == pytest.approx(expected, abs=tol)


class TestIminRedundancy:
    def test_two_bit_copy(self):
        assert imin_redundancy(two_bit_copy()) == pytest.approx(LN2, abs=1e-12)

    def test_xor_is_zero(self):
        assert imin_redundancy(xor_joint()) == pytest.approx(0.0, abs=1e-14)

    def test_triple_copy(self):
        assert imin_redundancy(triple_copy()) == pytest.approx(LN2, abs=1e-12)

    def test_single_source_self_redundancy(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            joint = random_joint(rng)
            pid = imin_pid(joint)
            assert imin_redundancy(joint, sources=("x",)) == pytest.approx(
                pid.mi_x.value, abs=1e-12
            )
            assert imin_redundancy(joint, sources=("y",)) == pytest.approx(
                pid.mi_y.value, abs=1e-12
            )

    def test_monotone_under_more_sources(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            joint = random_joint(rng)
            r_both = imin_redundancy(joint)
            pid = imin_pid(joint)
            assert r_both <= min(pid.mi_x.value, pid.mi_y.value) + 1e-12

    def test_rejects_bad_sources(self):
        with pytest.raises(ValueError):
            imin_redundancy(xor_joint(), sources=())
        with pytest.raises(ValueError):
            imin_redundancy(xor_joint(), sources=("t",))


class TestIminPid:
    def test_two_bit_copy(self):
        assert_atoms(imin_pid(two_bit_copy()), (LN2, 0.0, 0.0, LN2))

    def test_xor(self):
        assert_atoms(imin_pid(xor_joint()), (0.0, 0.0, 0.0, LN2))

    def test_target_copies_x_only(self):
        # T = X, Y independent of (X, T), all uniform binary
        table = np.zeros((2, 2, 2))
        for x in (0, 1):
            for y in (0, 1):
                table[x, y, x] = 0.25
        assert_atoms(imin_pid(joint_from_table(table)), (0.0, LN2, 0.0, 0.0))


class TestIpmSublattices:
    def test_triple_copy(self):
        sub = ipm_sublattices(triple_copy())
        assert sub.r_plus.value == pytest.approx(LN2, abs=1e-12)
        assert sub.r_minus.value == pytest.approx(0.0, abs=1e-14)

    def test_two_bit_copy(self):
        sub = ipm_sublattices(two_bit_copy())
        assert sub.r_plus.value == pytest.approx(LN2, abs=1e-12)
        assert sub.r_minus.value == pytest.approx(0.0, abs=1e-14)
        assert_atoms(ipm_pid(two_bit_copy()), (LN2, 0.0, 0.0, LN2))

    def test_point_mass(self):
        table = np.zeros((2, 2, 2))
        table[1, 0, 1] = 1.0
        sub = ipm_sublattices(joint_from_table(table))
        for value in {**sub.plus(), **sub.minus()}.values():
            assert value.value == pytest.approx(0.0, abs=1e-14)

    def test_lattice_identities_against_entropies(self):
        from pidkit.discrete import conditional_entropy, entropy

        rng = np.random.default_rng(21)
        for _ in range(100):
            joint = random_joint(rng)
            sub = ipm_sublattices(joint)
            h_x = entropy(joint.joint_xy().marginal_x())
            h_y = entropy(joint.joint_xy().marginal_y())
            h_xy = entropy(
                joint.joint_pair_t().marginal_x()
            )
            assert sub.r_plus.value + sub.u_x_plus.value == pytest.approx(h_x, abs=1e-10)
            assert sub.r_plus.value + sub.u_y_plus.value == pytest.approx(h_y, abs=1e-10)
            plus_total = (
                sub.r_plus.value + sub.u_x_plus.value + sub.u_y_plus.value + sub.s_plus.value
            )
            assert plus_total == pytest.approx(h_xy, abs=1e-10)
            h_x_t = conditional_entropy(joint.joint_xt())
            h_y_t = conditional_entropy(joint.joint_yt())
            h_xy_t = conditional_entropy(joint.joint_pair_t())
            assert sub.r_minus.value + sub.u_x_minus.value == pytest.approx(h_x_t, abs=1e-10)
            assert sub.r_minus.value + sub.u_y_minus.value == pytest.approx(h_y_t, abs=1e-10)
            minus_total = (
                sub.r_minus.value + sub.u_x_minus.value + sub.u_y_minus.value + sub.s_minus.value
            )
            assert minus_total == pytest.approx(h_xy_t, abs=1e-10)


class TestIpmPid:
    def test_triple_copy(self):
        assert_atoms(ipm_pid(triple_copy()), (LN2, 0.0, 0.0, 0.0))

    def test_fully_independent(self):
        rng = np.random.default_rng(31)
        px = rng.dirichlet(np.ones(3))
        py = rng.dirichlet(np.ones(2))
        pt = rng.dirichlet(np.ones(4))
        table = np.einsum("i,j,k->ijk", px, py, pt)
        assert_atoms(ipm_pid(joint_from_table(table)), (0.0, 0.0, 0.0, 0.0), tol=1e-10)

    def test_atoms_may_be_negative(self):
        rng = np.random.default_rng(41)
        saw_negative = False
        for _ in range(200):
            pid = ipm_pid(noisy_copy_ci_joint(rng))
            if pid.u_x.value < -1e-8 or pid.s.value < -1e-8:
                saw_negative = True
                break
        assert saw_negative


def test_bulk_random_pid_invariants():
    """E1-E3 at 1e-10, unsigned nonnegativity, sublattice nonnegativity, differences."""
    rng = np.random.default_rng(51)
    for _ in range(1000):
        joint = random_joint(rng)
        for compute in (imin_pid, ipm_pid):
            pid = compute(joint)
            total = pid.r.value + pid.u_x.value + pid.u_y.value + pid.s.value
            assert total == pytest.approx(pid.mi_xy.value, abs=1e-10)
            assert pid.r.value + pid.u_x.value == pytest.approx(pid.mi_x.value, abs=1e-10)
            assert pid.r.value + pid.u_y.value == pytest.approx(pid.mi_y.value, abs=1e-10)
        imin = imin_pid(joint)
        for atom in (imin.r, imin.u_x, imin.u_y, imin.s):
            assert atom.value >= -1e-12
        sub = ipm_sublattices(joint)
        components = {**sub.plus(), **sub.minus()}
        for value in components.values():
            assert value.value >= -1e-12
        ipm = ipm_pid(joint)
        for name in ("r", "u_x", "u_y", "s"):
            assert ipm.atoms()[name].value == pytest.approx(
                sub.plus()[name].value - sub.minus()[name].value, abs=1e-10
            )


class TestConservation:
    def test_identical_pids(self):
        pid = imin_pid(xor_joint())
        assert pid_conservation_check(pid, pid).delta == pytest.approx(0.0, abs=1e-15)

    def test_two_bit_copy_across_kinds(self):
        report = pid_conservation_check(imin_pid(two_bit_copy()), ipm_pid(two_bit_copy()))
        assert report.delta == pytest.approx(0.0, abs=1e-12)

    def test_random_joints_conserve(self):
        rng = np.random.default_rng(61)
        for _ in range(200):
            joint = random_joint(rng, max_size=2)
            report = pid_conservation_check(imin_pid(joint), ipm_pid(joint))
            assert report.max_deviation <= 1e-10

    def test_mi_mismatch_rejected(self):
        rng = np.random.default_rng(71)
        j1, j2 = random_joint(rng), random_joint(rng)
        with pytest.raises(PidInputError):
            pid_conservation_check(imin_pid(j1), imin_pid(j2))


class TestPidRegistry:
    def test_shipped_kinds_dispatch(self):
        from pidkit.pid import pid_of_kind

        joint = xor_joint()
        assert pid_of_kind(joint, PidKind.IMIN).kind == PidKind.IMIN
        assert pid_of_kind(joint, "ipm").kind == PidKind.IPM

    def test_custom_function_can_be_plugged_in(self):
        from pidkit.pid import pid_of_kind, register_pid_function

        calls = []

        def toy(joint):
            calls.append(joint)
            return imin_pid(joint)

        register_pid_function("toy-registry-test", toy)
        pid_of_kind(xor_joint(), "toy-registry-test")
        assert len(calls) == 1
        with pytest.raises(ValueError):
            register_pid_function("imin", toy)

    def test_unknown_kind_rejected(self):
        from pidkit.pid import pid_of_kind

        with pytest.raises(ValueError, match="no PID registered"):
            pid_of_kind(xor_joint(), "nope")


class TestConditionalIndependenceAudit:
    def test_unsigned_pid_is_clean(self):
        rng = np.random.default_rng(81)
        for _ in range(100):
            joint = noisy_copy_ci_joint(rng)
            report = conditional_independence_audit(joint, PidKind.IMIN)
            assert report.conditionally_independent
            assert not report.violation
            assert -1e-12 <= report.u_x.value <= 1e-10
            assert -1e-12 <= report.s.value <= 1e-10

    def test_signed_pid_is_flagged(self):
        rng = np.random.default_rng(91)
        flagged = sum(
            conditional_independence_audit(noisy_copy_ci_joint(rng), PidKind.IPM).violation
            for _ in range(100)
        )
        assert flagged >= 95

    def test_xor_has_no_flag(self):
        report = conditional_independence_audit(xor_joint(), PidKind.IMIN)
        assert not report.conditionally_independent
        assert not report.violation
