import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tripod_sim import DecayModel, SystemParams, TRIPOD_BRANCHING

settings.register_profile(
    "suite", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


def broadband_params(**overrides):
    """Strong-dephasing tripod configuration (gamma_opt above the Rabi scale)."""
    decay = DecayModel(gamma_pop=6.0, branching=TRIPOD_BRANCHING,
                       gamma_opt=30.0, gamma_ground=1.25)
    base = dict(omega_c=10.0, omega_p=1.0, omega_a=10.0, decay=decay)
    decay_overrides = {k: overrides.pop(k) for k in list(overrides)
                       if k in ("gamma_pop", "branching", "gamma_opt",
                                "gamma_ground", "ground_mix")}
    if decay_overrides:
        import dataclasses
        base["decay"] = dataclasses.replace(decay, **decay_overrides)
    base.update(overrides)
    return SystemParams(**base)


def narrowline_params(**overrides):
    """Weak-dephasing tripod configuration (gamma_opt well below the Rabi scale)."""
    return broadband_params(omega_p=0.5, gamma_pop=5.0, gamma_opt=2.5,
                            gamma_ground=0.0, **overrides)


def random_state(rng) -> np.ndarray:
    """Random Hermitian, trace-one, positive 4x4 density matrix."""
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    return rho / rho.trace()


def random_physical_params(rng) -> SystemParams:
    """Random rates around the broadband regime, kept completely positive."""
    f = np.exp(rng.uniform(np.log(1 / 3), np.log(3), size=6))
    gamma_pop = 6.0 * f[0]
    gamma_ground = 1.25 * f[1]
    gamma_opt = max(30.0 * f[2], gamma_pop / 2 + gamma_ground / 2 + 0.1)
    beta = rng.dirichlet((5.0, 5.0, 5.0))
    decay = DecayModel(gamma_pop=gamma_pop, branching=tuple(beta),
                       gamma_opt=gamma_opt, gamma_ground=gamma_ground)
    return SystemParams(
        omega_c=10.0 * f[3], omega_p=1.0 * f[4], omega_a=10.0 * f[5],
        decay=decay,
        delta_c=rng.uniform(-6, 6), delta_p=rng.uniform(-6, 6),
        delta_a=rng.uniform(-6, 6))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
