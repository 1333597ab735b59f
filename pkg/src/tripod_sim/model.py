"""Hamiltonian, master equation, steady states and time evolution.

The master equation is d(rho)/dt = -i[H, rho] + decay, with H built from
the field parameters (hbar = 1) and the decay terms applied element-wise
per the DecayModel.  Everything here is a pure function of its inputs;
density matrices are plain 4x4 complex numpy arrays in the |1>..|4>
basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem, StepTooLarge
from .params import SystemParams

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
EIGEN_TOL = 1e-9
RESIDUAL_TOL = 1e-9

# ratio of a singular value to the largest one below which the direction
# counts as part of the generator's null space
_NULL_RTOL = 1e-11


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Interaction-picture Hamiltonian in units of hbar*kHz.

    Diagonal carries (-delta_c, -delta_p, -delta_a, 0); each ground state
    couples to |4> with -Omega/2.  Ground-ground entries are exactly zero.
    """
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = -params.delta_c
    h[1, 1] = -params.delta_p
    h[2, 2] = -params.delta_a
    h[0, 3] = h[3, 0] = -params.omega_c / 2
    h[1, 3] = h[3, 1] = -params.omega_p / 2
    h[2, 3] = h[3, 2] = -params.omega_a / 2
    return h


def validate_density_matrix(rho: np.ndarray, *, herm_tol=HERMITICITY_TOL,
                            trace_tol=TRACE_TOL, eig_tol=EIGEN_TOL) -> None:
    """Raise ValueError unless rho is a valid 4x4 state."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got shape {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > herm_tol:
        raise ValueError(f"density matrix not Hermitian: deviation {herm:.3e}")
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr:.12f} != 1")
    eigs = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if eigs.min() < -eig_tol:
        raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3e}")


def _decay_rhs(params: SystemParams, rho: np.ndarray) -> np.ndarray:
    """Element-wise dissipation terms of the master equation."""
    dec = params.decay
    out = np.zeros((4, 4), dtype=complex)
    r44 = rho[3, 3]
    out[3, 3] = -dec.gamma_pop * r44
    g_opt = dec.optical_rates
    ground_sum = rho[0, 0] + rho[1, 1] + rho[2, 2]
    for i in range(3):
        out[i, i] = dec.branching[i] * dec.gamma_pop * r44
        if dec.ground_mix:
            out[i, i] += dec.ground_mix * (ground_sum / 3 - rho[i, i])
        out[i, 3] = -g_opt[i] * rho[i, 3]
        out[3, i] = -g_opt[i] * rho[3, i]
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out[i, j] = -dec.gamma_ground * rho[i, j]
        out[j, i] = -dec.gamma_ground * rho[j, i]
    return out


def master_rhs(params: SystemParams, rho: np.ndarray) -> np.ndarray:
    """Right-hand side d(rho)/dt for a valid state rho."""
    validate_density_matrix(rho)
    return rhs_matrix(params, np.asarray(rho, dtype=complex))


def rhs_matrix(params: SystemParams, mat: np.ndarray) -> np.ndarray:
    """Generator applied to an arbitrary 4x4 matrix (no state validation)."""
    h = build_hamiltonian(params)
    return -1j * (h @ mat - mat @ h) + _decay_rhs(params, mat)


def _vec_index(i: int, j: int, n: int = 4) -> int:
    # row-major vectorization: vec(rho)[n*i + j] = rho[i, j]
    return n * i + j


def build_superoperator(params: SystemParams) -> np.ndarray:
    """16x16 generator L with unvec(L @ vec(rho)) == master_rhs(params, rho).

    Built independently of rhs_matrix: the commutator enters through
    Kronecker products and the decay terms are assembled entry by entry.
    """
    h = build_hamiltonian(params)
    eye = np.eye(4, dtype=complex)
    lmat = -1j * (np.kron(h, eye) - np.kron(eye, h.T))

    dec = params.decay
    g_opt = dec.optical_rates
    idx = _vec_index
    for i in range(3):
        lmat[idx(i, 3), idx(i, 3)] -= g_opt[i]
        lmat[idx(3, i), idx(3, i)] -= g_opt[i]
        lmat[idx(i, i), idx(3, 3)] += dec.branching[i] * dec.gamma_pop
        if dec.ground_mix:
            lmat[idx(i, i), idx(i, i)] -= dec.ground_mix
            for j in range(3):
                lmat[idx(i, i), idx(j, j)] += dec.ground_mix / 3
    for i, j in ((0, 1), (0, 2), (1, 2)):
        lmat[idx(i, j), idx(i, j)] -= dec.gamma_ground
        lmat[idx(j, i), idx(j, i)] -= dec.gamma_ground
    lmat[idx(3, 3), idx(3, 3)] -= dec.gamma_pop
    return lmat


def _keep_indices(drop: tuple[int, ...]) -> list[int]:
    """0-based kept state indices given 1-based labels to drop."""
    bad = [d for d in drop if d not in (1, 2, 3)]
    if bad:
        raise ValueError(f"only ground states 1, 2, 3 can be dropped, got {bad}")
    return [k for k in range(4) if (k + 1) not in drop]


def _restrict(lmat: np.ndarray, kept: list[int]) -> np.ndarray:
    idx = [_vec_index(i, j) for i in kept for j in kept]
    return lmat[np.ix_(idx, idx)]


def null_space_dimension(lmat: np.ndarray) -> int:
    """Number of near-zero singular values of the generator."""
    sv = np.linalg.svd(lmat, compute_uv=False)
    scale = max(sv[0], 1.0)
    return int(np.sum(sv < _NULL_RTOL * scale))


def solve_steady_vec(lmat: np.ndarray, n: int) -> np.ndarray:
    """Solve L x = 0 with the first row replaced by the trace constraint."""
    a = lmat.copy()
    a[0, :] = 0.0
    for k in range(n):
        a[0, n * k + k] = 1.0
    b = np.zeros(n * n, dtype=complex)
    b[0] = 1.0
    return np.linalg.solve(a, b)


def steady_state(params: SystemParams, *, drop: tuple[int, ...] = ()) -> np.ndarray:
    """Unique fixed point of the master equation as a 4x4 density matrix.

    drop removes exactly decoupled ground states (1-based labels) from the
    solve; their rows and columns come back as zeros.  Raises SingularSystem
    when the generator's null space has dimension > 1.
    """
    kept = _keep_indices(drop)
    n = len(kept)
    lmat = _restrict(build_superoperator(params), kept)

    null_dim = null_space_dimension(lmat)
    if null_dim != 1:
        raise SingularSystem(
            f"steady state is not unique (generator null space dimension {null_dim}); "
            "enable decay.ground_mix or gamma_ground, or drop the decoupled state",
            null_dim=null_dim,
        )

    try:
        x = solve_steady_vec(lmat, n)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded by SVD above
        raise SingularSystem(f"steady-state solve failed: {exc}", null_dim=null_dim)

    rho = np.zeros((4, 4), dtype=complex)
    block = x.reshape(n, n)
    for a_, ia in enumerate(kept):
        for b_, ib in enumerate(kept):
            rho[ia, ib] = block[a_, b_]
    rho = (rho + rho.conj().T) / 2

    residual = np.abs(rhs_matrix(params, rho)).max()
    if residual > RESIDUAL_TOL:
        raise SingularSystem(
            f"steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL}",
            null_dim=null_dim,
        )
    validate_density_matrix(rho)
    return rho


@dataclass
class Trajectory:
    """Time-ordered density-matrix samples from a fixed-step integration."""

    times: np.ndarray          # (n,), ms
    states: np.ndarray         # (n, 4, 4) complex

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states length mismatch")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return zip(self.times, self.states)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def max_step(params: SystemParams) -> float:
    """Largest allowed integration step, 0.1 over the fastest scale."""
    scale = params.max_scale
    return np.inf if scale == 0 else 0.1 / scale


def time_evolve(params: SystemParams, rho0: np.ndarray, t_end: float, dt: float,
                *, sample_stride: int = 1) -> Trajectory:
    """Fixed-step classical 4th-order integration of the master equation.

    t_end is rounded to a whole number of steps.  sample_stride thins the
    recorded samples (the integration step itself is always dt).
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    bound = max_step(params)
    if dt > bound * (1 + 1e-12):
        raise StepTooLarge(f"dt = {dt} exceeds stability bound {bound:.6g}")
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")

    validate_density_matrix(rho0)
    n_steps = int(round(t_end / dt)) if t_end > 0 else 0

    lmat = build_superoperator(params)
    # classical RK4 for an autonomous linear system collapses to a fixed
    # one-step propagator polynomial in L*dt
    a = lmat * dt
    a2 = a @ a
    prop = np.eye(16, dtype=complex) + a + a2 / 2 + (a2 @ a) / 6 + (a2 @ a2) / 24

    x = np.asarray(rho0, dtype=complex).reshape(16).copy()
    sampled = [x.copy()]
    times = [0.0]
    for k in range(1, n_steps + 1):
        x = prop @ x
        if k % sample_stride == 0 or k == n_steps:
            sampled.append(x.copy())
            times.append(k * dt)

    states = np.array(sampled).reshape(-1, 4, 4)
    traces = np.einsum("nii->n", states)
    worst = np.abs(traces - 1.0).max()
    if worst > 1e-8:
        raise StepTooLarge(
            f"trace drifted by {worst:.3e} during integration; reduce dt"
        )
    return Trajectory(times=np.array(times), states=states)


def steady_state_by_integration(params: SystemParams, rho0: np.ndarray | None = None,
                                t_end: float | None = None, dt: float | None = None) -> np.ndarray:
    """Long-time limit of the dynamics, used as an independent cross-check.

    Defaults: rho0 is the probe-ground rest state diag(0, 1, 0, 0), the
    step is half the stability bound, and t_end spans 200 excited-state
    lifetimes.
    """
    if rho0 is None:
        rho0 = np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex)
    if dt is None:
        bound = max_step(params)
        dt = 0.05 if not np.isfinite(bound) else bound / 2
    if t_end is None:
        if params.decay.gamma_pop <= 0:
            raise ValueError("t_end required when gamma_pop == 0")
        t_end = 200.0 / params.decay.gamma_pop
    stride = max(1, int(round(t_end / dt)) // 8 or 1)
    return time_evolve(params, rho0, t_end, dt, sample_stride=stride).final
