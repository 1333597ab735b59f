import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tripod_sim import (DecayModel, SingularSystem, StepTooLarge, SystemParams,
                        build_hamiltonian, build_superoperator, master_rhs,
                        max_step, steady_state, steady_state_by_integration,
                        time_evolve)
from tripod_sim.model import null_space_dimension, rhs_matrix

from conftest import broadband_params, narrowline_params, random_physical_params, random_state

_IDX = lambda i, j: 4 * i + j


# ---------------------------------------------------------------------------
# Hamiltonian


def test_hamiltonian_strong_field_example():
    params = broadband_params(delta_c=0, delta_p=0, delta_a=0)
    h = build_hamiltonian(params)
    assert h[0, 3] == h[3, 0] == -5.0
    assert h[1, 3] == h[3, 1] == -0.5
    assert h[2, 3] == h[3, 2] == -5.0
    assert np.all(np.diag(h) == 0)


def test_hamiltonian_zero_params_is_zero():
    decay = DecayModel(gamma_pop=0.0, gamma_opt=0.0)
    params = SystemParams(omega_c=0, omega_p=0, omega_a=0, decay=decay)
    assert np.all(build_hamiltonian(params) == 0)


@given(omega=st.tuples(*[st.floats(0, 50)] * 3),
       delta=st.tuples(*[st.floats(-50, 50)] * 3))
def test_hamiltonian_hermitian_with_decoupled_grounds(omega, delta):
    decay = DecayModel(gamma_pop=1.0, gamma_opt=1.0)
    params = SystemParams(omega_c=omega[0], omega_p=omega[1], omega_a=omega[2],
                          decay=decay, delta_c=delta[0], delta_p=delta[1],
                          delta_a=delta[2])
    h = build_hamiltonian(params)
    assert np.array_equal(h, h.conj().T)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert h[i, j] == 0


def test_hamiltonian_diagonal_sign():
    params = broadband_params(delta_c=2.0, delta_p=-3.0, delta_a=0.5)
    h = build_hamiltonian(params)
    assert np.allclose(np.diag(h), [-2.0, 3.0, -0.5, 0.0])


# ---------------------------------------------------------------------------
# master equation right-hand side


def test_rhs_ground_state_is_stationary_without_fields():
    decay = DecayModel(gamma_pop=6.0, gamma_opt=3.0, gamma_ground=1.0)
    params = SystemParams(omega_c=0, omega_p=0, omega_a=0, decay=decay)
    rho = np.diag([1.0, 0, 0, 0]).astype(complex)
    assert np.abs(master_rhs(params, rho)).max() == 0


def test_rhs_population_decay_bookkeeping():
    decay = DecayModel(gamma_pop=6.0, gamma_opt=3.0)
    params = SystemParams(omega_c=0, omega_p=0, omega_a=0, decay=decay)
    rho = np.diag([0, 0, 0, 1.0]).astype(complex)
    out = master_rhs(params, rho)
    assert np.allclose(np.diag(out), [2.0, 2.0, 2.0, -6.0])
    assert np.abs(out - np.diag(np.diag(out))).max() == 0


def test_probe_coherence_coupling_pattern():
    # coefficients of the rho_24 equation read off the vectorized generator
    params = broadband_params(delta_c=1.3, delta_p=2.7, delta_a=-0.9)
    lmat = build_superoperator(params)
    row = lmat[_IDX(1, 3)]
    omega_c, omega_p, omega_a = params.rabi
    assert row[_IDX(1, 1)] == pytest.approx(-1j * omega_p / 2)
    assert row[_IDX(3, 3)] == pytest.approx(+1j * omega_p / 2)
    assert row[_IDX(1, 2)] == pytest.approx(-1j * omega_a / 2)
    assert row[_IDX(1, 0)] == pytest.approx(-1j * omega_c / 2)
    assert row[_IDX(1, 3)] == pytest.approx(+1j * params.delta_p - 30.0)
    used = {_IDX(1, 1), _IDX(3, 3), _IDX(1, 2), _IDX(1, 0), _IDX(1, 3)}
    untouched = [k for k in range(16) if k not in used]
    assert np.abs(row[untouched]).max() == 0


def test_rhs_trace_and_hermiticity(rng):
    for _ in range(100):
        params = random_physical_params(rng)
        rho = random_state(rng)
        out = master_rhs(params, rho)
        assert abs(out.trace()) < 1e-12
        assert np.abs(out - out.conj().T).max() < 1e-12


def test_ground_mix_preserves_trace(rng):
    params = broadband_params(ground_mix=2.0)
    for _ in range(20):
        out = master_rhs(params, random_state(rng))
        assert abs(out.trace()) < 1e-12


# ---------------------------------------------------------------------------
# superoperator


def test_superoperator_matches_rhs_on_random_states(rng):
    params = broadband_params(delta_c=2.0, delta_a=-2.0, delta_p=0.7)
    lmat = build_superoperator(params)
    for _ in range(100):
        rho = random_state(rng)
        direct = master_rhs(params, rho)
        via_l = (lmat @ rho.reshape(16)).reshape(4, 4)
        assert np.abs(direct - via_l).max() < 1e-12


def test_superoperator_zero_params():
    decay = DecayModel(gamma_pop=0.0, gamma_opt=0.0)
    params = SystemParams(omega_c=0, omega_p=0, omega_a=0, decay=decay)
    assert np.abs(build_superoperator(params)).max() == 0


def test_superoperator_annihilates_trace(rng):
    # the trace functional is a left null vector of the generator
    params = random_physical_params(rng)
    lmat = build_superoperator(params)
    trace_rows = lmat[[_IDX(i, i) for i in range(4)], :].sum(axis=0)
    assert np.abs(trace_rows).max() < 1e-12


# ---------------------------------------------------------------------------
# steady state


def test_steady_state_equal_mix_without_fields():
    decay = DecayModel(gamma_pop=6.0, gamma_opt=3.0, gamma_ground=1.0,
                       ground_mix=0.5)
    params = SystemParams(omega_c=0, omega_p=0, omega_a=0, decay=decay)
    rho = steady_state(params)
    assert np.allclose(rho, np.diag([1 / 3, 1 / 3, 1 / 3, 0]), atol=1e-12)


def test_steady_state_residual_small():
    params = broadband_params(delta_c=2.0, delta_a=-2.0)
    rho = steady_state(params)
    assert np.abs(rhs_matrix(params, rho)).max() < 1e-9
    assert rho.trace() == pytest.approx(1.0, abs=1e-12)


def test_steady_state_matches_integration_limit():
    # fixed point of the dynamics, checked at a horizon long enough for the
    # slowest mode (the weakly driven probe-ground population) to die out
    params = broadband_params(delta_c=2.0, delta_a=-2.0)
    rho_solve = steady_state(params)
    rho_int = steady_state_by_integration(params, t_end=120.0)
    assert np.abs(rho_solve - rho_int).max() < 1e-6


def test_steady_state_decoupled_ground_state_raises():
    # three-level configuration leaves |3> fully conserved in the 4-level solve
    params = narrowline_params(omega_a=0.0, branching=(0.5, 0.5, 0.0))
    with pytest.raises(SingularSystem) as excinfo:
        steady_state(params)
    assert excinfo.value.null_dim > 1
    assert "ground_mix" in str(excinfo.value)


def test_steady_state_drop_reduces_lambda_system():
    params = narrowline_params(omega_a=0.0, branching=(0.5, 0.5, 0.0), delta_c=2.0,
                               delta_p=2.0)
    rho = steady_state(params, drop=(3,))
    assert np.abs(rho[2, :]).max() == 0
    assert np.abs(rho[:, 2]).max() == 0
    # exact two-photon resonance with no ground dephasing: pure dark state
    assert abs(rho[3, 1].imag) < 1e-12
    rho_int = steady_state_by_integration(params.replace(), t_end=400.0)
    assert np.abs(rho - rho_int).max() < 1e-6


def test_steady_state_degenerate_dark_subspace_raises():
    # equal detunings with zero ground dephasing conserve a dark superposition
    params = broadband_params(gamma_ground=0.0, delta_c=0.0, delta_a=0.0)
    with pytest.raises(SingularSystem):
        steady_state(params)
    assert null_space_dimension(build_superoperator(params)) > 1


def test_steady_state_invalid_drop_label():
    with pytest.raises(ValueError, match="ground states"):
        steady_state(broadband_params(), drop=(4,))


# ---------------------------------------------------------------------------
# time evolution


def test_time_evolve_identity_without_generator(rng):
    decay = DecayModel(gamma_pop=0.0, gamma_opt=0.0)
    params = SystemParams(omega_c=0, omega_p=0, omega_a=0, decay=decay)
    rho0 = random_state(rng)
    traj = time_evolve(params, rho0, t_end=5.0, dt=0.5)
    assert np.abs(traj.final - rho0).max() < 1e-14
    assert len(traj) == 11


def test_time_evolve_two_level_rabi_flopping():
    decay = DecayModel(gamma_pop=0.0, gamma_opt=0.0)
    params = SystemParams(omega_c=0, omega_p=1.0, omega_a=0, decay=decay)
    rho0 = np.diag([0, 1.0, 0, 0]).astype(complex)
    traj = time_evolve(params, rho0, t_end=6.0, dt=0.02)
    pop2 = traj.states[:, 1, 1].real
    expected = np.cos(params.omega_p * traj.times / 2) ** 2
    assert np.abs(pop2 - expected).max() < 1e-7


def test_time_evolve_step_bound():
    params = broadband_params()
    assert max_step(params) == pytest.approx(0.1 / 30.0)
    rho0 = np.diag([0, 1.0, 0, 0]).astype(complex)
    with pytest.raises(StepTooLarge):
        time_evolve(params, rho0, t_end=1.0, dt=0.01)


def test_time_evolve_trace_preserved_along_trajectory():
    params = broadband_params(delta_c=2.0, delta_a=-2.0)
    rho0 = np.diag([1 / 3, 1 / 3, 1 / 3, 0]).astype(complex)
    traj = time_evolve(params, rho0, t_end=5.0, dt=max_step(params) / 2)
    traces = np.einsum("nii->n", traj.states)
    assert np.abs(traces - 1.0).max() < 1e-10


def test_time_evolve_strictly_increasing_times_and_stride():
    params = broadband_params()
    rho0 = np.diag([0, 1.0, 0, 0]).astype(complex)
    traj = time_evolve(params, rho0, t_end=1.0, dt=max_step(params) / 2,
                       sample_stride=50)
    assert np.all(np.diff(traj.times) > 0)
    assert traj.times[-1] == pytest.approx(1.0)


def test_lambda_reduction_keeps_third_state_empty():
    params = narrowline_params(omega_a=0.0, branching=(0.5, 0.5, 0.0),
                               delta_c=1.0, delta_p=-2.0, delta_a=0.7)
    rho0 = np.diag([0.4, 0.6, 0, 0]).astype(complex)
    traj = time_evolve(params, rho0, t_end=20.0, dt=max_step(params) / 2,
                       sample_stride=100)
    assert np.abs(traj.states[:, 2, :]).max() == 0
    assert np.abs(traj.states[:, :, 2]).max() == 0


def test_trajectory_positivity(rng):
    for _ in range(5):
        params = random_physical_params(rng)
        rho0 = random_state(rng)
        traj = time_evolve(params, rho0, t_end=2.0 / params.decay.gamma_pop,
                           dt=max_step(params) / 2, sample_stride=20)
        eigs = np.linalg.eigvalsh(traj.states)
        assert eigs.min() > -1e-7


def test_detuning_convention_two_photon_resonance():
    # transparency sits where probe and coupling detunings match
    params = narrowline_params(omega_a=0.0, branching=(0.5, 0.5, 0.0), delta_c=2.0)
    dps = np.linspace(-10, 10, 201)
    values = [steady_state(params.replace(delta_p=dp), drop=(3,))[3, 1].imag
              for dp in dps]
    assert dps[int(np.argmin(values))] == pytest.approx(2.0, abs=0.1 + 1e-9)
