"""Analytic dressed states and exact eigenanalysis of the Hamiltonian.

At zero detunings the interaction Hamiltonian has two degenerate dark
states (no |4> component, zero eigenvalue) and a pair of bright modes
split by the generalized Rabi frequency Omega = sqrt(Oc^2 + Op^2 + Oa^2).
An asymptotic splitting formula for symmetric detuning is provided as a
standalone evaluator together with a side-by-side comparison against the
exact spectrum; the two are never reconciled because they disagree by
sqrt(2) at zero detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFields
from .model import build_hamiltonian
from .params import SystemParams

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class DressedState:
    """Unit-norm superposition in the |1>..|4> basis."""

    label: str                 # d1 | d2 | b+ | b-
    amplitudes: tuple          # four complex amplitudes
    eigenvalue: float | None = None   # hbar*kHz, for exact eigenvectors

    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)


def generalized_rabi(omega_c: float, omega_p: float, omega_a: float) -> float:
    return math.sqrt(omega_c**2 + omega_p**2 + omega_a**2)


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def dark_states(omega_c: float, omega_p: float, omega_a: float) -> tuple[DressedState, DressedState]:
    """The two zero-detuning dark states (no amplitude on |4>).

    d1 mixes the coupling and control ground states only; d2 carries the
    probe ground state and reduces to the single EIT dark state
    (Op|1> - Oc|2>)/norm when the control field is removed.
    """
    if omega_c == 0 and omega_a == 0:
        raise DegenerateFields("dark states undefined for omega_c = omega_a = 0")
    d1 = _unit(np.array([omega_a, 0.0, -omega_c, 0.0], dtype=complex))
    d2 = _unit(np.array([omega_p * omega_c, -(omega_c**2 + omega_a**2),
                         omega_p * omega_a, 0.0], dtype=complex))
    return (DressedState("d1", tuple(d1), eigenvalue=0.0),
            DressedState("d2", tuple(d2), eigenvalue=0.0))


def bright_states(omega_c: float, omega_p: float, omega_a: float) -> tuple[DressedState, DressedState]:
    """The two bright modes (Oc, Op, Oa, +-Omega)/norm.

    At zero detunings these are exact eigenvectors with eigenvalues
    -+Omega/2 (b+ pairs with -Omega/2).
    """
    omega = generalized_rabi(omega_c, omega_p, omega_a)
    if omega == 0:
        raise DegenerateFields("bright states undefined for zero generalized Rabi frequency")
    plus = _unit(np.array([omega_c, omega_p, omega_a, omega], dtype=complex))
    minus = _unit(np.array([omega_c, omega_p, omega_a, -omega], dtype=complex))
    return (DressedState("b+", tuple(plus), eigenvalue=-omega / 2),
            DressedState("b-", tuple(minus), eigenvalue=+omega / 2))


@dataclass(frozen=True)
class EigenSystem:
    """Exact spectrum of the Hamiltonian, eigenvalues ascending."""

    eigenvalues: tuple[float, float, float, float]
    eigenvectors: np.ndarray   # columns, orthonormal

    @property
    def splitting(self) -> float:
        """Outermost eigenvalue separation."""
        return self.eigenvalues[-1] - self.eigenvalues[0]


def eigensystem(params: SystemParams) -> EigenSystem:
    """Exact eigen-decomposition with a deterministic phase convention."""
    h = build_hamiltonian(params)
    vals, vecs = np.linalg.eigh(h)
    # fix each eigenvector's global phase: largest-magnitude component real positive
    for k in range(4):
        col = vecs[:, k]
        lead = np.argmax(np.abs(col))
        phase = col[lead] / abs(col[lead])
        vecs[:, k] = col / phase
    return EigenSystem(eigenvalues=tuple(float(v) for v in vals), eigenvectors=vecs)


def splitting_asymptote(omega: float, delta: float) -> tuple[float, float]:
    """Asymptotic bright-mode positions for symmetric detuning delta.

    e_pm = +-(Omega/sqrt(2)) * sqrt(1 + 2*(delta/Omega)^2), evaluated
    exactly as written.  Valid asymptotically; at delta = 0 it differs
    from the exact eigenvalues +-Omega/2 by a factor sqrt(2).
    """
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    mag = (omega / math.sqrt(2)) * math.sqrt(1 + 2 * (delta / omega) ** 2)
    return (+mag, -mag)


@dataclass(frozen=True)
class SplittingComparison:
    """Asymptotic formula next to the exact spectrum, both reported as-is."""

    omega: float
    delta: float
    asymptote_plus: float
    asymptote_minus: float
    exact_plus: float
    exact_minus: float

    @property
    def ratio_at_center(self) -> float:
        """asymptote / exact magnitude ratio (sqrt(2) at delta = 0)."""
        return self.asymptote_plus / self.exact_plus


def compare_splitting(params: SystemParams, delta: float | None = None) -> SplittingComparison:
    """Evaluate the asymptote and the exact outer eigenvalues side by side.

    When delta is None it is taken from params (requires the symmetric
    configuration delta_c = -delta_a).  The exact values are the outermost
    eigenvalues of the Hamiltonian at delta_p = 0; neither number is
    adjusted toward the other.
    """
    if delta is None:
        if abs(params.delta_c + params.delta_a) > 1e-12:
            raise ValueError("symmetric detuning requires delta_c = -delta_a")
        delta = params.delta_c
    omega = generalized_rabi(*params.rabi)
    e_plus, e_minus = splitting_asymptote(omega, delta)
    sym = params.replace(delta_c=delta, delta_a=-delta, delta_p=0.0)
    vals = eigensystem(sym).eigenvalues
    return SplittingComparison(
        omega=omega, delta=delta,
        asymptote_plus=e_plus, asymptote_minus=e_minus,
        exact_plus=vals[-1], exact_minus=vals[0],
    )


def characteristic_roots(params: SystemParams) -> np.ndarray:
    """Eigenvalues from the explicit quartic det(H - x I) = 0.

    Independent route used to cross-check eigensystem(): the arrowhead
    determinant is expanded by polynomial arithmetic and handed to a
    generic root finder.
    """
    d = (-params.delta_c, -params.delta_p, -params.delta_a, 0.0)
    halves = tuple(w / 2 for w in params.rabi)
    # det = prod_{i<=4} (d_i - x) - sum_{i<=3} (w_i/2)^2 prod_{j<=3, j != i} (d_j - x)
    poly = np.array([1.0])
    for dk in d:
        poly = np.polymul(poly, np.array([-1.0, dk]))
    for i in range(3):
        term = np.array([halves[i] ** 2])
        for j in range(3):
            if j != i:
                term = np.polymul(term, np.array([-1.0, d[j]]))
        poly = np.polysub(poly, term)
    roots = np.roots(poly)
    return np.sort(roots.real)
