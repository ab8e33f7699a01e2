"""Masking-condition residuals and verdicts."""

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from qmask.conditions import (
    cross_scalars,
    cross_term_matrix,
    eq4_residuals,
    eq7_eq8_residuals,
    masks_all_superpositions,
    masks_state,
    reduced_pair_residual,
)
from qmask.qlinalg import QubitState, TwoQubitState, basis_ket

ATOL = 1e-12
SQRT_HALF = math.sqrt(0.5)

PSI0 = TwoQubitState.unit([1.0, 0.0, 0.0, 1.0j])   # (|00> + i|11>)/sqrt(2)
PSI1 = TwoQubitState.unit([0.0, 1.0, 1.0, 0.0])    # (|01> + |10>)/sqrt(2)
# a qubit the pair above masks: alpha = (0.2 - 0.2i, -i sqrt(23)/5)
GOOD_B = QubitState(complex(0.2, -0.2), complex(0.0, -math.sqrt(23.0) / 5.0))

angles = st.floats(min_value=0.0, max_value=2.0 * math.pi)
amp = st.complex_numbers(min_magnitude=0.0, max_magnitude=2.0,
                         allow_nan=False, allow_infinity=False)
vec4 = st.tuples(amp, amp, amp, amp).filter(
    lambda v: math.hypot(*[abs(c) for c in v]) > 1e-6)
qubits = st.tuples(amp, amp).filter(
    lambda v: math.hypot(abs(v[0]), abs(v[1])) > 1e-6)


def _unit(v) -> TwoQubitState:
    return TwoQubitState.unit(list(v))


def _qubit(v) -> QubitState:
    return QubitState.normalized(v[0], v[1])


# ---------------------------------------------------------------------------
# marginal-equality lines
# ---------------------------------------------------------------------------

def test_eq4_all_zero_for_bell_pair():
    psi_minus = TwoQubitState.unit([0.0, 1.0, -1.0, 0.0])
    phi_plus = TwoQubitState.unit([1.0, 0.0, 0.0, 1.0])
    assert max(eq4_residuals(phi_plus, psi_minus)) <= ATOL
    assert max(reduced_pair_residual(phi_plus, psi_minus)) <= ATOL


def test_eq4_frozen_values_for_basis_kets():
    np.testing.assert_allclose(
        eq4_residuals(basis_ket("00"), basis_ket("01")),
        (0.0, 1.0, 1.0, 0.0, 0.0, 0.0), atol=ATOL)
    np.testing.assert_allclose(
        reduced_pair_residual(basis_ket("00"), basis_ket("01")),
        (math.sqrt(2.0), 0.0), atol=ATOL)


def test_eq4_frozen_values_for_unbalanced_pair():
    s0 = TwoQubitState.unit([0.8, 0.0, 0.0, 0.6])
    s1 = TwoQubitState.unit([0.0, 0.6, 0.8, 0.0])
    np.testing.assert_allclose(
        eq4_residuals(s0, s1), (0.28, 0.0, 0.0, 0.28, 0.0, 0.0), atol=ATOL)
    np.testing.assert_allclose(
        reduced_pair_residual(s0, s1),
        (0.0, math.sqrt(2.0) * 0.28), atol=ATOL)


def test_eq4_rejects_unnormalized_input():
    loose = TwoQubitState.from_vec([1.0, 1.0, 0.0, 0.0], normalized=False)
    with pytest.raises(ValueError):
        eq4_residuals(loose, basis_ket("00"))


@seed(11)
@settings(max_examples=60, deadline=None)
@given(v=vec4, phase=angles)
def test_eq4_invariant_under_global_phase(v, phase):
    s = _unit(v)
    rotated = _unit(np.exp(1j * phase) * s.vec)
    np.testing.assert_allclose(
        eq4_residuals(s, PSI1), eq4_residuals(rotated, PSI1), atol=1e-10)


@seed(12)
@settings(max_examples=60, deadline=None)
@given(v=vec4, w=vec4)
def test_eq4_lines_bound_the_marginal_distance(v, w):
    # the six lines are entrywise pieces of the two marginal differences,
    # so all-zero lines force zero Frobenius distance and vice versa
    s0, s1 = _unit(v), _unit(w)
    lines = eq4_residuals(s0, s1)
    rA, rB = reduced_pair_residual(s0, s1)
    assert max(lines) <= (rA + rB) + 1e-10
    assert max(rA, rB) <= 2.0 * sum(lines) + 1e-10


# ---------------------------------------------------------------------------
# cross-term scalars and matrices
# ---------------------------------------------------------------------------

def test_cross_scalars_frozen_for_split_support_pair():
    sc = cross_scalars(PSI0, PSI1)
    assert sc.A == pytest.approx(0.0, abs=ATOL)
    assert sc.B == pytest.approx(0.5, abs=ATOL)
    assert sc.C == pytest.approx(0.5j, abs=ATOL)
    assert sc.D == pytest.approx(0.0, abs=ATOL)
    assert (sc.Ap, sc.Bp, sc.Cp, sc.Dp) == (sc.A, sc.B, sc.C, sc.D)


def test_cross_scalars_frozen_for_bell_self_pair():
    phi_plus = TwoQubitState.unit([1.0, 0.0, 0.0, 1.0])
    sc = cross_scalars(phi_plus, phi_plus)
    assert sc.A == pytest.approx(0.5, abs=ATOL)
    assert sc.D == pytest.approx(0.5, abs=ATOL)
    assert sc.B == sc.C == 0.0
    assert sc.Ap == pytest.approx(0.5, abs=ATOL)
    assert sc.Dp == pytest.approx(0.5, abs=ATOL)


def test_cross_matrix_rebuilds_from_scalars():
    # scalar shorthands are the entries of z*Tr_x(|0><1|); D is stored
    # conjugated, so the (1,1) entry uses conj(D)
    b = _qubit((0.8, 0.6j))
    z = b.vec[0] * np.conj(b.vec[1])
    sc = cross_scalars(PSI0, PSI1)
    T_A = np.array([[sc.A, sc.B], [sc.C, np.conj(sc.D)]])
    np.testing.assert_allclose(
        cross_term_matrix(PSI0, PSI1, b, "A"),
        z * T_A + np.conj(z) * T_A.conj().T, atol=ATOL)
    T_B = np.array([[sc.Ap, sc.Bp], [sc.Cp, sc.Dp]])
    np.testing.assert_allclose(
        cross_term_matrix(PSI0, PSI1, b, "B"),
        z * T_B + np.conj(z) * T_B.conj().T, atol=ATOL)


def test_cross_matrix_rejects_unknown_subsystem():
    with pytest.raises(ValueError):
        cross_term_matrix(PSI0, PSI1, GOOD_B, "C")


# ---------------------------------------------------------------------------
# full verdicts
# ---------------------------------------------------------------------------

def test_masks_state_accepts_good_qubit():
    report = masks_state(GOOD_B, PSI0, PSI1)
    assert report.verdict
    assert max(report.residuals()) <= 1e-12
    assert not report.degenerate_superposition


def test_masks_state_rejects_real_second_amplitude():
    # flipping the masked qubit's second amplitude from -i*sqrt(23)/5 to
    # the real value sqrt(23)/5 breaks the cross conditions
    bad = QubitState(complex(0.2, -0.2), math.sqrt(23.0) / 5.0)
    report = masks_state(bad, PSI0, PSI1)
    assert not report.verdict
    assert max(report.residuals()) == pytest.approx(0.38367, abs=1e-4)
    assert max(report.eq4_residuals) <= ATOL  # the pair itself is fine


def test_masks_state_accepts_basis_qubit_on_bell_pair():
    phi_plus = TwoQubitState.unit([1.0, 0.0, 0.0, 1.0])
    psi_plus = TwoQubitState.unit([0.0, 1.0, 1.0, 0.0])
    report = masks_state(QubitState(1.0, 0.0), phi_plus, psi_plus)
    assert report.verdict


def test_masks_state_flags_degenerate_superposition():
    # alpha0|Psi> - alpha1|Psi> with alpha0 = alpha1 cancels; the report
    # must flag it and fail instead of raising
    b = QubitState(SQRT_HALF, -SQRT_HALF)
    report = masks_state(b, PSI0, PSI0)
    assert report.degenerate_superposition
    assert not report.verdict
    assert report.superposition_residuals == (math.inf, math.inf)


def test_masks_state_rejects_bad_tol():
    with pytest.raises(ValueError):
        masks_state(GOOD_B, PSI0, PSI1, tol=0.0)


def test_masks_all_superpositions_false_for_masking_families():
    # both example pairs mask a one-parameter family, not every qubit
    assert not masks_all_superpositions(PSI0, PSI1)
    eq15_psi0 = TwoQubitState.unit([0.5 + 0.5j, 0.0, 0.0, SQRT_HALF])
    eq15_psi1 = TwoQubitState.unit([0.0, 0.5 + 0.5j, SQRT_HALF, 0.0])
    assert not masks_all_superpositions(eq15_psi0, eq15_psi1)
    assert masks_state(_qubit((1.0, 0.37j)), eq15_psi0, eq15_psi1).verdict


# ---------------------------------------------------------------------------
# scalar shorthand vs matrix equivalence
# ---------------------------------------------------------------------------

def test_eq7_eq8_zero_iff_cross_matrices_vanish_frozen():
    res = eq7_eq8_residuals(PSI0, PSI1, GOOD_B)
    assert len(res) == 6
    assert max(res) <= 1e-12
    assert max(
        np.linalg.norm(cross_term_matrix(PSI0, PSI1, GOOD_B, s)) for s in "AB"
    ) <= 1e-12


@seed(13)
@settings(max_examples=150, deadline=None)
@given(v=vec4, w=vec4, q=qubits)
def test_eq7_eq8_verdict_matches_matrix_verdict(v, w, q):
    s0, s1, b = _unit(v), _unit(w), _qubit(q)
    scalar_ok = max(eq7_eq8_residuals(s0, s1, b)) <= ATOL
    matrix_ok = max(
        np.linalg.norm(cross_term_matrix(s0, s1, b, s), "fro") for s in "AB"
    ) <= ATOL
    assert scalar_ok == matrix_ok


@seed(14)
@settings(max_examples=60, deadline=None)
@given(q=qubits, phase=angles)
def test_verdict_invariant_under_qubit_global_phase(q, phase):
    b = _qubit(q)
    rotated = QubitState.normalized(*(np.exp(1j * phase) * b.vec))
    r1 = masks_state(b, PSI0, PSI1)
    r2 = masks_state(rotated, PSI0, PSI1)
    assert r1.verdict == r2.verdict
    np.testing.assert_allclose(r1.residuals(), r2.residuals(), atol=1e-10)
