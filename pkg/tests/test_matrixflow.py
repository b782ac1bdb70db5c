"""Classical flow, reduction, and the RK4 cross-check."""

import numpy as np
import pytest

from spincm.liealg import SymmetryClass
from spincm.matrixflow import (
    CollisionError,
    FreeState,
    ReducedState,
    charge_norm,
    cross_check,
    free_energy,
    free_evolve,
    hamiltonian,
    integrate_reduced,
    reduce_state,
    reduced_rhs,
    sample_free_state,
    trajectory_rows,
)

ORTH3 = SymmetryClass("orthogonal", 3)
UNI3 = SymmetryClass("unitary", 3)


class TestSampling:
    def test_deterministic_per_seed(self):
        a = sample_free_state(UNI3, 42)
        b = sample_free_state(UNI3, 42)
        assert np.array_equal(a.x_mat, b.x_mat)
        assert np.array_equal(a.y_mat, b.y_mat)

    def test_orthogonal_exactly_real(self):
        s = sample_free_state(ORTH3, 3)
        assert s.x_mat.dtype.kind == "f"
        assert np.array_equal(s.x_mat, s.x_mat.T)
        assert np.array_equal(s.y_mat, s.y_mat.T)

    def test_gap_respected(self):
        s = sample_free_state(UNI3, 7, gap=0.1)
        vals = np.linalg.eigvalsh(s.x_mat)
        assert np.min(np.diff(vals)) >= 0.1

    def test_unreachable_gap_raises(self):
        with pytest.raises(RuntimeError):
            sample_free_state(UNI3, 0, gap=100.0, max_tries=5)


class TestFreeFlow:
    def test_zero_time_identity(self):
        s = sample_free_state(ORTH3, 1)
        s2 = free_evolve(s, 0.0)
        assert np.array_equal(s.x_mat, s2.x_mat)

    def test_energy_constant(self):
        s = sample_free_state(UNI3, 5)
        for t in (0.2, 1.0, 4.0):
            assert free_energy(free_evolve(s, t)) == pytest.approx(free_energy(s), rel=1e-15)

    def test_spectrum_moves_when_noncommuting(self):
        s = sample_free_state(UNI3, 7)
        comm = s.x_mat @ s.y_mat - s.y_mat @ s.x_mat
        assert np.max(np.abs(comm)) > 1e-6
        v0 = np.linalg.eigvalsh(s.x_mat)
        v1 = np.linalg.eigvalsh(free_evolve(s, 1.0).x_mat)
        assert np.max(np.abs(np.sort(v1) - np.sort(v0))) > 1e-3


class TestReduce:
    def test_commuting_diagonal_case(self):
        x = np.diag([0.0, 1.0, 2.5])
        y = np.diag([0.3, -0.2, 0.9])
        red = reduce_state(FreeState(ORTH3, x, y))
        assert np.allclose(red.p, [0.3, -0.2, 0.9], atol=1e-14)
        assert np.max(np.abs(red.l_mat)) < 1e-14

    @pytest.mark.parametrize("kind", ["orthogonal", "unitary"])
    def test_hamiltonian_identity_random(self, kind):
        sym = SymmetryClass(kind, 4)
        for seed in range(100):
            s = sample_free_state(sym, 2000 + seed)
            red = reduce_state(s)
            assert abs(hamiltonian(red) - free_energy(s)) < 1e-10

    def test_unitary_interactions_repulsive(self):
        s = sample_free_state(UNI3, 9)
        red = reduce_state(s)
        prod = -(red.l_mat * red.l_mat.T).real
        off = prod[~np.eye(3, dtype=bool)]
        assert np.all(off >= 0.0)
        assert np.allclose(off, np.abs(red.l_mat[~np.eye(3, dtype=bool)]) ** 2)

    def test_reduced_invariants(self):
        s = sample_free_state(UNI3, 11)
        red = reduce_state(s)
        assert np.all(np.diff(red.x) > 0)
        assert np.max(np.abs(red.l_mat + red.l_mat.conj().T)) < 1e-12
        assert np.max(np.abs(red.l_mat.diagonal())) < 1e-14

    def test_orthogonal_charges_exactly_real(self):
        red = reduce_state(sample_free_state(ORTH3, 13))
        assert red.l_mat.dtype.kind == "f"

    def test_near_degenerate_rejected(self):
        x = np.diag([0.0, 1e-10, 1.0])
        y = np.eye(3)
        with pytest.raises(CollisionError):
            reduce_state(FreeState(ORTH3, x, y))


class TestReducedRHS:
    def test_free_particles_when_charges_vanish(self):
        st = ReducedState(ORTH3, np.array([0.0, 1.0, 2.0]),
                          np.array([0.5, -0.5, 0.1]), np.zeros((3, 3)))
        rhs = reduced_rhs(st)
        assert np.array_equal(rhs.x, st.p)
        assert np.max(np.abs(rhs.p)) == 0.0
        assert np.max(np.abs(rhs.l_mat)) == 0.0

    def test_two_particle_charge_frozen(self):
        sym = SymmetryClass("unitary", 2)
        l = np.array([[0.0, 0.4 + 0.2j], [-0.4 + 0.2j, 0.0]])
        st = ReducedState(sym, np.array([0.0, 1.0]), np.array([0.1, -0.1]), l)
        rhs = reduced_rhs(st)
        assert np.max(np.abs(rhs.l_mat)) == 0.0

    def test_momentum_conservation(self):
        for seed in range(20):
            red = reduce_state(sample_free_state(UNI3, 300 + seed))
            rhs = reduced_rhs(red)
            assert abs(np.sum(rhs.p)) < 1e-12


class TestIntegration:
    def test_free_linear_motion(self):
        st = ReducedState(ORTH3, np.array([0.0, 1.0, 2.0]),
                          np.array([0.5, -0.25, 0.1]), np.zeros((3, 3)))
        rep = integrate_reduced(st, 1.0, 100)
        assert np.allclose(rep.state.x, st.x + st.p, atol=1e-12)

    def test_conservation_drift_seed7(self):
        red = reduce_state(sample_free_state(UNI3, 7))
        rep = integrate_reduced(red, 1.0, 10000)
        assert rep.charge_drift < 1e-9
        assert rep.h_drift < 1e-9
        assert rep.momentum_drift < 1e-12

    def test_collision_abort(self):
        st = ReducedState(ORTH3, np.array([0.0, 1.0, 2.0]),
                          np.array([5.0, 0.0, -5.0]), np.zeros((3, 3)))
        with pytest.raises(CollisionError):
            integrate_reduced(st, 1.0, 200, collision_gap=0.5)

    def test_harmonic_variant_conserves_its_energy(self):
        red = reduce_state(sample_free_state(ORTH3, 21))
        rep = integrate_reduced(red, 1.0, 10000, harmonic=True)
        assert rep.h_drift < 1e-9


class TestCrossCheck:
    def test_commuting_diagonal_start_exact(self):
        x = np.diag([0.0, 1.0, 2.5])
        y = np.diag([0.3, -0.2, 0.9])
        rep = cross_check(FreeState(ORTH3, x, y), 1.0, 100)
        assert rep.max_position_error < 1e-12

    def test_unitary_n3_seed7(self):
        rep = cross_check(sample_free_state(UNI3, 7), 1.0, 10000)
        assert rep.passed
        assert rep.max_position_error < 1e-6
        assert rep.h_drift < 1e-9
        assert rep.charge_drift < 1e-9

    def test_orthogonal_n4_seed11(self):
        sym = SymmetryClass("orthogonal", 4)
        rep = cross_check(sample_free_state(sym, 11), 1.0, 10000)
        assert rep.passed
        assert rep.max_position_error < 1e-6

    def test_orthogonal_charges_stay_real_through_flow(self):
        red = reduce_state(sample_free_state(ORTH3, 5))
        rep = integrate_reduced(red, 0.5, 2000)
        assert rep.state.l_mat.dtype.kind == "f"
        assert np.max(np.abs(rep.state.l_mat + rep.state.l_mat.T)) < 1e-12


class TestTrajectoryRows:
    def test_row_layout_and_conservation(self):
        red = reduce_state(sample_free_state(UNI3, 7))
        rows = trajectory_rows(red, 0.5, 2000, 4)
        assert len(rows) == 5
        assert len(rows[0]) == 1 + 3 + 3 + 2
        h_vals = [row[-2] for row in rows]
        assert max(h_vals) - min(h_vals) < 1e-9
