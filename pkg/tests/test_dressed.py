import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tripod_sim import (DegenerateFields, bright_states, build_hamiltonian,
                        characteristic_roots, compare_splitting, dark_states,
                        eigensystem, generalized_rabi, splitting_asymptote)

from conftest import broadband_params


def zero_detuning_params():
    return broadband_params(delta_c=0.0, delta_p=0.0, delta_a=0.0)


# ---------------------------------------------------------------------------
# dark states


def test_dark_state_symmetric_fields():
    d1, _ = dark_states(10.0, 1.0, 10.0)
    assert np.allclose(d1.vector(), [1 / math.sqrt(2), 0, -1 / math.sqrt(2), 0])


def test_dark_state_reduces_to_single_eit_mode():
    _, d2 = dark_states(10.0, 0.5, 0.0)
    expected = np.array([0.5, -10.0, 0.0, 0.0])
    assert np.allclose(d2.vector(), expected / np.linalg.norm(expected))


def test_dark_states_annihilated_at_zero_detuning():
    h = build_hamiltonian(zero_detuning_params())
    d1, d2 = dark_states(10.0, 1.0, 10.0)
    assert np.linalg.norm(h @ d1.vector()) < 1e-12
    assert np.linalg.norm(h @ d2.vector()) < 1e-12


def test_dark_states_unit_norm_and_orthogonal():
    d1, d2 = dark_states(7.0, 2.0, 3.0)
    assert np.linalg.norm(d1.vector()) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(d2.vector()) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.vdot(d1.vector(), d2.vector())) < 1e-12
    assert d1.vector()[3] == 0 and d2.vector()[3] == 0


def test_dark_states_degenerate_fields():
    with pytest.raises(DegenerateFields):
        dark_states(0.0, 1.0, 0.0)


@given(scale=st.floats(0.01, 100.0))
def test_dark_states_scale_invariant(scale):
    base = dark_states(10.0, 1.0, 7.0)
    scaled = dark_states(10.0 * scale, 1.0 * scale, 7.0 * scale)
    for a, b in zip(base, scaled):
        assert np.abs(a.vector() - b.vector()).max() < 1e-12


# ---------------------------------------------------------------------------
# bright states


def test_generalized_rabi_strong_field_value():
    omega = generalized_rabi(10.0, 1.0, 10.0)
    assert omega == pytest.approx(math.sqrt(201), abs=1e-12)
    assert omega == pytest.approx(14.177, abs=1e-3)


def test_bright_states_are_exact_eigenvectors_at_zero_detuning():
    h = build_hamiltonian(zero_detuning_params())
    bp, bm = bright_states(10.0, 1.0, 10.0)
    omega = generalized_rabi(10.0, 1.0, 10.0)
    assert np.abs(h @ bp.vector() - (-omega / 2) * bp.vector()).max() < 1e-12
    assert np.abs(h @ bm.vector() - (+omega / 2) * bm.vector()).max() < 1e-12
    assert bp.eigenvalue == pytest.approx(-omega / 2)
    assert bm.eigenvalue == pytest.approx(+omega / 2)


def test_bright_states_orthonormal():
    bp, bm = bright_states(3.0, 4.0, 12.0)
    assert np.vdot(bp.vector(), bm.vector()) == pytest.approx(0.0, abs=1e-15)
    assert np.linalg.norm(bp.vector()) == pytest.approx(1.0, abs=1e-12)


def test_bright_states_degenerate():
    with pytest.raises(DegenerateFields):
        bright_states(0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# exact eigensystem


def test_eigensystem_zero_detuning_spectrum():
    eig = eigensystem(zero_detuning_params())
    omega = math.sqrt(201)
    assert eig.eigenvalues[0] == pytest.approx(-omega / 2, abs=1e-10)
    assert eig.eigenvalues[3] == pytest.approx(+omega / 2, abs=1e-10)
    assert abs(eig.eigenvalues[1]) < 1e-12
    assert abs(eig.eigenvalues[2]) < 1e-12


def test_eigensystem_orthonormal_and_small_residual():
    params = broadband_params(delta_c=2.0, delta_p=1.0, delta_a=-2.0)
    eig = eigensystem(params)
    h = build_hamiltonian(params)
    vecs = eig.eigenvectors
    assert np.abs(vecs.conj().T @ vecs - np.eye(4)).max() < 1e-10
    for k in range(4):
        residual = h @ vecs[:, k] - eig.eigenvalues[k] * vecs[:, k]
        assert np.linalg.norm(residual) < 1e-10


def test_eigensystem_splitting_ratio_to_three_level_reference():
    # weak probe: tripod splitting exceeds the single-coupling splitting by
    # nearly sqrt(2)
    params = broadband_params(omega_p=0.5, delta_c=0, delta_p=0, delta_a=0)
    tripod = eigensystem(params).splitting
    lam = eigensystem(params.replace(omega_a=0.0)).splitting
    ratio = tripod / lam
    assert abs(ratio / math.sqrt(2) - 1) < 0.02


def test_eigensystem_agrees_with_characteristic_roots():
    params = broadband_params(delta_c=2.0, delta_p=0.0, delta_a=-2.0)
    roots = characteristic_roots(params)
    vals = np.array(eigensystem(params).eigenvalues)
    assert np.abs(roots - vals).max() < 1e-9


def test_eigensystem_continuous_in_detuning():
    params = broadband_params()
    deltas = np.arange(-5.0, 5.0, 0.1)
    prev = None
    for delta in deltas:
        vals = np.array(eigensystem(params.replace(delta_c=delta,
                                                   delta_a=-delta)).eigenvalues)
        if prev is not None:
            assert np.abs(vals - prev).max() < 0.5  # 0.05 * omega_c
        prev = vals


def test_dark_pair_spans_null_space_at_zero_detuning():
    params = zero_detuning_params()
    eig = eigensystem(params)
    null_vecs = eig.eigenvectors[:, [1, 2]]
    d1, d2 = dark_states(*params.rabi)
    analytic = np.column_stack([d1.vector(), d2.vector()])
    p_numeric = null_vecs @ null_vecs.conj().T
    p_analytic = analytic @ analytic.conj().T
    assert np.abs(p_numeric - p_analytic).max() < 1e-10


# ---------------------------------------------------------------------------
# splitting asymptote


def test_asymptote_at_zero_detuning():
    plus, minus = splitting_asymptote(14.0, 0.0)
    assert plus == pytest.approx(14.0 / math.sqrt(2))
    assert minus == -plus


def test_asymptote_printed_value():
    plus, minus = splitting_asymptote(14.177, 2.0)
    assert plus == pytest.approx(10.2217, abs=5e-4)
    assert minus == pytest.approx(-10.2217, abs=5e-4)


def test_asymptote_exact_formula():
    omega, delta = math.sqrt(201), 2.0
    plus, _ = splitting_asymptote(omega, delta)
    assert plus == pytest.approx(math.sqrt((omega**2 / 2) * (1 + 2 * delta**2 / omega**2)),
                                 abs=1e-12)


def test_asymptote_monotone_in_detuning():
    values = [splitting_asymptote(14.0, d)[0] for d in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_asymptote_rejects_nonpositive_omega():
    with pytest.raises(ValueError):
        splitting_asymptote(0.0, 1.0)


def test_splitting_comparison_reports_both_sides():
    params = broadband_params(delta_c=0.0, delta_p=0.0, delta_a=0.0)
    cmp = compare_splitting(params, delta=0.0)
    omega = math.sqrt(201)
    # the asymptote and the exact eigenvalue disagree by sqrt(2) at zero
    # detuning and both are reported untouched
    assert cmp.asymptote_plus == pytest.approx(omega / math.sqrt(2), abs=1e-12)
    assert cmp.exact_plus == pytest.approx(omega / 2, abs=1e-10)
    assert cmp.ratio_at_center == pytest.approx(math.sqrt(2), abs=1e-9)
    standalone = splitting_asymptote(omega, 0.0)
    assert cmp.asymptote_plus == standalone[0]


def test_splitting_comparison_requires_symmetric_detuning():
    params = broadband_params(delta_c=2.0, delta_a=1.0)
    with pytest.raises(ValueError, match="symmetric"):
        compare_splitting(params)
