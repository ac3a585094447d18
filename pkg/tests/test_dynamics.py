import math

import numpy as np
import pytest

from dqdpulse.algebra import mat_exp_skew, phase_aligned_distance
from dqdpulse.device import DEFAULT_DEVICE, DeviceParams, frame_hamiltonian
from dqdpulse.dynamics import (
    COLLAPSE_Q1,
    COLLAPSE_Q2,
    apply_superoperator,
    dephasing_dissipator,
    lindblad_superoperator,
    propagate_lindblad,
    propagate_unitary,
    required_steps,
)
from dqdpulse.pulses import apply_rabi_error, fsim_rectangular
from dqdpulse.trajectories import fsim_matrix

THETA, XI = math.pi / 4, math.pi / 2
T45 = 45e-9

NO_DECOHERENCE = DeviceParams(t2_q1=0.0, t2_q2=0.0)  # kappa = 0 sentinel


def random_hermitian(rng, scale=1.0):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return scale * (a + a.conj().T) / 2.0


def random_density_matrix(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestUnitaryPropagation:
    def test_constant_hamiltonian_matches_exact(self):
        rng = np.random.default_rng(0)
        h = random_hermitian(rng)
        res = propagate_unitary(lambda t: h, 1.7, steps=64)
        np.testing.assert_allclose(res.final, mat_exp_skew(h, 1.7), atol=1e-12)

    def test_second_order_self_convergence(self):
        rng = np.random.default_rng(1)
        h1, h2 = random_hermitian(rng), random_hermitian(rng, 2.0)
        hamiltonian = lambda t: h1 + math.sin(3.0 * t) * h2
        ref = propagate_unitary(hamiltonian, 1.0, steps=8192).final
        errs = [
            np.linalg.norm(propagate_unitary(hamiltonian, 1.0, steps=n).final - ref)
            for n in (64, 128, 256)
        ]
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.25)
        assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.25)

    def test_step_floor_rejection(self):
        schedule = fsim_rectangular(THETA, XI, T45, 3)
        h = frame_hamiltonian(schedule, rwa=False)
        floor = required_steps(h.max_frequency_hz, T45)
        with pytest.raises(ValueError, match=str(floor)):
            propagate_unitary(h, T45, steps=floor // 2)

    def test_unitarity_invariant(self):
        schedule = fsim_rectangular(THETA, XI, T45, 2)
        h = frame_hamiltonian(schedule, rwa=False)
        res = propagate_unitary(h, T45, breakpoints=schedule.breakpoints)
        assert res.unitarity_defect < 1e-9

    def test_sampled_trajectory(self):
        rng = np.random.default_rng(2)
        h = random_hermitian(rng)
        times = np.array([0.0, 0.25, 0.5, 1.0])
        res = propagate_unitary(lambda t: h, 1.0, steps=128, sample_times=times)
        assert res.states.shape == (4, 4, 4)
        np.testing.assert_allclose(res.states[0], np.eye(4), atol=1e-14)
        np.testing.assert_allclose(res.states[3], res.final, atol=1e-14)
        np.testing.assert_allclose(res.states[2], mat_exp_skew(h, 0.5), atol=1e-10)


class TestLindblad:
    def test_closed_system_limit(self):
        # with both rates zero the master equation reduces to the
        # Schroedinger conjugation; the exact gate for this schedule is
        # known in closed form, so RK4 can be checked against it directly
        schedule = fsim_rectangular(THETA, XI, T45, 1)
        h = frame_hamiltonian(schedule, rwa=True)
        rho0 = np.zeros((4, 4), dtype=complex)
        rho0[1, 1] = 1.0
        res_open = propagate_lindblad(
            h, NO_DECOHERENCE, rho0, T45, steps=4000, breakpoints=schedule.breakpoints
        )
        gate = fsim_matrix(THETA, XI)
        expected = gate @ rho0 @ gate.conj().T
        assert np.abs(res_open.final - expected).max() < 1e-9

    def test_projector_dephasing_closed_form(self):
        # H = 0, qubit 1 in a superposition: the printed master equation gives
        # d rho_01 / dt = -kappa_1 rho_01, i.e. coherence decay exp(-t / T2_1)
        params = DEFAULT_DEVICE
        psi = np.kron(np.array([1.0, 1.0]) / math.sqrt(2.0), np.array([1.0, 0.0]))
        rho0 = np.outer(psi, psi)
        t = 30e-6
        res = propagate_lindblad(lambda tt: np.zeros((4, 4)), params, rho0, t, steps=2000)
        expected = 0.5 * math.exp(-t / params.t2_q1)
        assert res.final[0, 2].real == pytest.approx(expected, rel=1e-6)
        # populations untouched by pure dephasing
        np.testing.assert_allclose(np.diag(res.final).real, np.diag(rho0).real, atol=1e-10)

    def test_trace_preserved_for_random_states(self):
        rng = np.random.default_rng(5)
        schedule = fsim_rectangular(THETA, XI, T45, 1)
        h = frame_hamiltonian(schedule, rwa=False)
        res = lindblad_superoperator(h, DEFAULT_DEVICE, T45, breakpoints=schedule.breakpoints)
        for _ in range(10):
            rho_t = apply_superoperator(res.final, random_density_matrix(rng))
            assert abs(np.trace(rho_t) - 1.0) < 1e-8

    def test_positivity_floor(self):
        rng = np.random.default_rng(6)
        schedule = fsim_rectangular(THETA, XI, T45, 2)
        h = frame_hamiltonian(schedule, rwa=False)
        for _ in range(5):
            res = propagate_lindblad(
                h, DEFAULT_DEVICE, random_density_matrix(rng), T45,
                breakpoints=schedule.breakpoints,
            )
            assert res.min_eigenvalue > -1e-9

    def test_printed_and_standard_conventions_agree(self):
        # the printed dissipator layout is algebraically the standard form
        d1 = dephasing_dissipator(DEFAULT_DEVICE, "printed")
        d2 = dephasing_dissipator(DEFAULT_DEVICE, "standard")
        assert np.abs(d1 - d2).max() < 1e-25

    def test_rejects_invalid_initial_state(self):
        with pytest.raises(ValueError, match="density"):
            propagate_lindblad(lambda t: np.zeros((4, 4)), DEFAULT_DEVICE, np.eye(4), 1e-9, steps=16)

    def test_collapse_operators_are_projectors(self):
        for op in (*COLLAPSE_Q1, *COLLAPSE_Q2):
            np.testing.assert_allclose(op @ op, op, atol=0)
            np.testing.assert_allclose(op, op.conj().T, atol=0)


class TestRabiErrorCommutation:
    @pytest.mark.parametrize("delta", [0.02, -0.02, 0.05, -0.05, 0.1, -0.1])
    def test_perturbed_gate_factors(self, delta):
        # the amplitude perturbation commutes with the unperturbed generator,
        # so U = U0 * exp(-i [Delta (Xi/2) I_mid + Delta theta X_mid])
        schedule = fsim_rectangular(THETA, XI, T45, 1)
        h0 = frame_hamiltonian(schedule, rwa=True)
        u0 = propagate_unitary(h0, T45, steps=20000, breakpoints=schedule.breakpoints).final
        perturbed = apply_rabi_error(schedule, delta)
        h = frame_hamiltonian(perturbed, rwa=True)
        u = propagate_unitary(h, T45, steps=20000, breakpoints=schedule.breakpoints).final

        u_tilde = np.eye(4, dtype=complex)
        block = math.cos(delta * THETA) * np.eye(2) - 1j * math.sin(delta * THETA) * np.array(
            [[0.0, 1.0], [1.0, 0.0]]
        )
        u_tilde[1:3, 1:3] = np.exp(-1j * delta * XI / 2.0) * block
        assert phase_aligned_distance(u, u0 @ u_tilde) < 1e-6


class TestStepFloor:
    def test_required_steps_scaling(self):
        assert required_steps(1e8, 1e-7) == 50 * 10
        assert required_steps(0.0, 1.0) == 16
