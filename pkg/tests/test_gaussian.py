"""State constructors, Gaussian gates, homodyne conditioning, and fidelity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import assert_valid_state, finite_floats, random_gaussian_state, squeeze_params
from oracles import schur_condition, wigner_overlap_fidelity

from cvrep import gaussian as g
from cvrep.gaussian import DegenerateMeasurementError

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def test_vacuum_is_centered_with_half_variance():
    state = g.vacuum(3)
    assert state.n_modes == 3
    np.testing.assert_array_equal(state.mean, np.zeros(6))
    np.testing.assert_allclose(state.cov, 0.5 * np.eye(6), atol=0)


def test_coherent_mean_scaling():
    state = g.coherent(1 + 0j)
    np.testing.assert_allclose(state.mean, [SQRT2, 0.0], atol=1e-15)
    np.testing.assert_allclose(state.cov, 0.5 * np.eye(2), atol=0)

    state = g.coherent(2j)
    np.testing.assert_allclose(state.mean, [0.0, 2 * SQRT2], atol=1e-15)


def test_tensor_concatenates_blocks():
    a = g.coherent(1 + 1j)
    b = g.squeeze(g.vacuum(1), 0, 0.3)
    joint = g.tensor(a, b)
    assert joint.n_modes == 2
    # xxpp ordering: means interleave as (x_a, x_b, p_a, p_b)
    np.testing.assert_allclose(joint.mean, [SQRT2, 0.0, SQRT2, 0.0], atol=1e-15)
    assert joint.variance_of(1, "x") == pytest.approx(0.5 * math.exp(0.6))
    assert joint.cov[0, 1] == 0.0


def test_state_validation_rejects_asymmetric_cov():
    bad = 0.5 * np.eye(2)
    bad[0, 1] = 0.3
    with pytest.raises(ValueError):
        g.GaussianState(np.zeros(2), bad)


def test_state_validation_rejects_unphysical_cov():
    with pytest.raises(ValueError):
        g.GaussianState(np.zeros(2), 0.1 * np.eye(2))


# ---------------------------------------------------------------------------
# single- and two-mode gates
# ---------------------------------------------------------------------------


def test_displace_shifts_mean_only():
    state = g.displace(g.vacuum(2), 1, 0.5 - 2j)
    np.testing.assert_allclose(state.mean, [0, 0.5 * SQRT2, 0, -2 * SQRT2], atol=1e-15)
    np.testing.assert_array_equal(state.cov, g.vacuum(2).cov)


def test_squeeze_variances():
    r = 0.4
    state = g.squeeze(g.vacuum(1), 0, r)
    assert state.variance_of(0, "x") == pytest.approx(0.5 * math.exp(2 * r), rel=1e-12)
    assert state.variance_of(0, "p") == pytest.approx(0.5 * math.exp(-2 * r), rel=1e-12)


def test_squeeze_by_factor_matches_exponential_form():
    state_a = g.squeeze_by_factor(g.coherent(1 + 1j), 0, math.exp(0.7))
    state_b = g.squeeze(g.coherent(1 + 1j), 0, 0.7)
    np.testing.assert_allclose(state_a.mean, state_b.mean, atol=1e-12)
    np.testing.assert_allclose(state_a.cov, state_b.cov, atol=1e-12)


def test_squeeze_by_negative_factor_flips_sign():
    state = g.squeeze_by_factor(g.coherent(1 + 0j), 0, -2.0)
    assert state.mean_of(0, "x") == pytest.approx(-2 * SQRT2)
    assert state.mean_of(0, "p") == pytest.approx(0.0)
    assert state.variance_of(0, "x") == pytest.approx(2.0)
    assert state.variance_of(0, "p") == pytest.approx(0.125)


def test_squeeze_by_zero_factor_rejected():
    with pytest.raises(ValueError):
        g.squeeze_by_factor(g.vacuum(1), 0, 0.0)


def test_two_mode_squeeze_correlates_x_and_anticorrelates_p():
    r = 0.6
    state = g.two_mode_squeeze(g.vacuum(2), (0, 1), r)
    ch, sh = 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r)
    np.testing.assert_allclose(state.cov[:2, :2], [[ch, sh], [sh, ch]], atol=1e-12)
    np.testing.assert_allclose(state.cov[2:, 2:], [[ch, -sh], [-sh, ch]], atol=1e-12)
    # the paired quadrature x_a - x_b is squeezed below vacuum
    diff_var = state.cov[0, 0] + state.cov[1, 1] - 2 * state.cov[0, 1]
    assert 0.5 * diff_var == pytest.approx(0.5 * math.exp(-2 * r), rel=1e-12)


@given(re=finite_floats, im=finite_floats)
def test_balanced_splitter_merges_identical_coherent_beams(re, im):
    alpha = complex(re, im)
    state = g.tensor(g.coherent(alpha), g.coherent(alpha))
    out = g.beam_splitter_pm(state, (0, 1))
    expect = g.tensor(g.coherent(SQRT2 * alpha), g.vacuum(1))
    np.testing.assert_allclose(out.mean, expect.mean, atol=1e-12)
    np.testing.assert_allclose(out.cov, expect.cov, atol=1e-12)


def test_balanced_splitter_is_an_involution(rng):
    state = random_gaussian_state(rng, 3)
    twice = g.beam_splitter_pm(g.beam_splitter_pm(state, (0, 2)), (0, 2))
    np.testing.assert_allclose(twice.mean, state.mean, atol=1e-12)
    np.testing.assert_allclose(twice.cov, state.cov, atol=1e-12)


def test_beam_splitter_splits_tmsv_into_two_squeezers():
    # a two-mode squeezed pair is two single-mode squeezed states on the
    # +/- ports of a balanced splitter
    r = 0.5
    state = g.beam_splitter_pm(g.two_mode_squeeze(g.vacuum(2), (0, 1), r), (0, 1))
    squeezed_plus = g.squeeze(g.vacuum(1), 0, r)
    squeezed_minus = g.squeeze(g.vacuum(1), 0, -r)
    np.testing.assert_allclose(state.cov, g.tensor(squeezed_plus, squeezed_minus).cov, atol=1e-12)


def test_quarter_phase_turns_coherent_one_into_coherent_i():
    state = g.phase_shift(g.coherent(1 + 0j), 0, math.pi / 2)
    assert g.fidelity_with_coherent(state, 1j) == pytest.approx(1.0, abs=1e-12)


def test_fourier_is_exactly_the_quarter_turn_matrix():
    state = g.fourier(g.coherent(2 - 1j), 0)
    # x -> -p, p -> x on the mean
    np.testing.assert_array_equal(state.mean, [SQRT2 * 1, SQRT2 * 2])
    undone = g.inverse_fourier(state, 0)
    np.testing.assert_array_equal(undone.mean, g.coherent(2 - 1j).mean)


def test_qnd_mean_map():
    state = g.tensor(g.coherent(1 + 2j), g.coherent(3 - 1j))
    out = g.qnd(state, 0, 1, 1.5)
    assert out.mean_of(1, "x") == pytest.approx((3 + 1.5 * 1) * SQRT2)
    assert out.mean_of(0, "x") == pytest.approx(1 * SQRT2)
    assert out.mean_of(0, "p") == pytest.approx((2 - 1.5 * (-1)) * SQRT2)
    assert out.mean_of(1, "p") == pytest.approx(-1 * SQRT2)


def test_qnd_inverse_gain_undoes(rng):
    state = random_gaussian_state(rng, 2)
    back = g.qnd(g.qnd(state, 0, 1, 0.8), 0, 1, -0.8)
    np.testing.assert_allclose(back.mean, state.mean, atol=1e-12)
    np.testing.assert_allclose(back.cov, state.cov, atol=1e-12)


def test_qnd_block_is_symplectic():
    from cvrep.circuits import Qnd, op_map

    S = op_map(Qnd(1, 2, 1.5), (1, 2)).matrix
    J = g.omega(2)
    np.testing.assert_allclose(S @ J @ S.T, J, atol=1e-12)


@given(r=squeeze_params, phi=st.floats(min_value=0, max_value=2 * math.pi))
@settings(max_examples=60)
def test_gates_preserve_the_uncertainty_bound(r, phi):
    state = g.vacuum(2)
    state = g.squeeze(state, 0, r)
    state = g.phase_shift(state, 0, phi)
    state = g.qnd(state, 0, 1, r)
    state = g.beam_splitter_pm(state, (0, 1))
    assert_valid_state(state)
    assert np.min(g.symplectic_eigenvalues(state.cov)) >= 0.5 - 1e-9


def test_gate_composition_matches_single_symplectic_map(rng):
    from cvrep.circuits import BeamSplitterPM, PhaseShift, Qnd, SqueezeFactor, op_map

    ops = [
        lambda: Qnd(1, 2, float(rng.uniform(-2, 2))),
        lambda: BeamSplitterPM(1, 2),
        lambda: SqueezeFactor(1, float(rng.uniform(0.3, 2.5))),
        lambda: PhaseShift(2, float(rng.uniform(0, 2 * math.pi))),
    ]
    for _ in range(100):
        first = op_map(ops[rng.integers(len(ops))](), (1, 2))
        second = op_map(ops[rng.integers(len(ops))](), (1, 2))
        state = random_gaussian_state(rng, 2)
        stepped = second.apply(first.apply(state))
        fused = second.after(first).apply(state)
        np.testing.assert_allclose(stepped.mean, fused.mean, atol=1e-10)
        np.testing.assert_allclose(stepped.cov, fused.cov, atol=1e-10)


# ---------------------------------------------------------------------------
# homodyne measurement
# ---------------------------------------------------------------------------


def test_homodyne_requires_exactly_one_outcome_policy(rng):
    state = g.vacuum(2)
    with pytest.raises(ValueError):
        g.homodyne(state, 0, "x")
    with pytest.raises(ValueError):
        g.homodyne(state, 0, "x", outcome=1.0, average=True)
    with pytest.raises(ValueError):
        g.homodyne(state, 0, "x", outcome=1.0, rng=rng)


def test_homodyne_on_product_state_leaves_partner_untouched():
    state = g.tensor(g.coherent(1 + 1j), g.squeeze(g.vacuum(1), 0, 0.5))
    record, rest = g.homodyne(state, 1, "p", outcome=4.2)
    assert record.mode == 1 and record.basis == "p" and record.outcome == 4.2
    np.testing.assert_allclose(rest.mean, g.coherent(1 + 1j).mean, atol=1e-14)
    np.testing.assert_allclose(rest.cov, g.coherent(1 + 1j).cov, atol=1e-14)


def test_homodyne_tmsv_conditional_mean_is_tanh_weighted():
    r = 0.8
    state = g.two_mode_squeeze(g.vacuum(2), (0, 1), r)
    for m in (0.0, 1.3, -2.2):
        _, rest = g.homodyne(state, 1, "x", outcome=m)
        assert rest.mean_of(0, "x") == pytest.approx(math.tanh(2 * r) * m, abs=1e-12)
        assert rest.mean_of(0, "p") == 0.0
        # conditional variance drops below vacuum: 1/(2 cosh 2r)
        assert rest.variance_of(0, "x") == pytest.approx(0.5 / math.cosh(2 * r), rel=1e-12)


def test_homodyne_agrees_with_direct_schur_conditioning(rng):
    for _ in range(20):
        state = random_gaussian_state(rng, 3)
        mode = int(rng.integers(3))
        basis = "x" if rng.integers(2) else "p"
        m = float(rng.normal(scale=2))
        want_mean, want_cov = schur_condition(state.mean, state.cov, mode, basis, m)
        _, rest = g.homodyne(state, mode, basis, outcome=m)
        np.testing.assert_allclose(rest.mean, want_mean, atol=1e-10)
        np.testing.assert_allclose(rest.cov, want_cov, atol=1e-10)


def test_homodyne_covariance_ignores_the_outcome(rng):
    state = random_gaussian_state(rng, 3)
    _, rest0 = g.homodyne(state, 1, "x", outcome=0.0)
    _, rest7 = g.homodyne(state, 1, "x", outcome=7.3)
    assert np.max(np.abs(rest0.cov - rest7.cov)) <= 1e-12


def test_homodyne_sampling_is_seeded_and_follows_the_marginal():
    state = g.squeeze(g.vacuum(1), 0, 0.5)
    rng_a = np.random.default_rng(11)
    rng_b = np.random.default_rng(11)
    rec_a, _ = g.homodyne(state, 0, "x", rng=rng_a)
    rec_b, _ = g.homodyne(state, 0, "x", rng=rng_b)
    assert rec_a.outcome == rec_b.outcome

    rng = np.random.default_rng(0)
    samples = [g.homodyne(state, 0, "x", rng=rng)[0].outcome for _ in range(4000)]
    assert np.var(samples) == pytest.approx(state.variance_of(0, "x"), rel=0.1)
    assert np.mean(samples) == pytest.approx(0.0, abs=0.1)


def test_homodyne_average_uses_the_current_mean():
    state = g.displace(g.vacuum(2), 0, 1.5 + 0j)
    record, _ = g.homodyne(state, 0, "x", average=True)
    assert record.outcome == pytest.approx(1.5 * SQRT2)


def test_homodyne_degenerate_quadrature_is_reported():
    state = g.squeeze(g.tensor(g.vacuum(1), g.vacuum(1)), 0, -17.0)
    with pytest.raises(DegenerateMeasurementError):
        g.homodyne(state, 0, "x", outcome=0.0)


def test_homodyne_last_mode_leaves_empty_state():
    record, rest = g.homodyne(g.coherent(1 + 0j), 0, "x", outcome=0.3)
    assert rest.n_modes == 0
    assert record.outcome == 0.3


# ---------------------------------------------------------------------------
# feedforward and discard
# ---------------------------------------------------------------------------


def test_feedforward_zero_gain_is_identity():
    record = g.MeasurementRecord(mode=0, basis="x", outcome=2.5)
    state = g.vacuum(1)
    out = g.feedforward_displace(state, 0, "x", 0.0, record)
    np.testing.assert_array_equal(out.mean, state.mean)
    np.testing.assert_array_equal(out.cov, state.cov)


def test_feedforward_unit_gain_adds_the_outcome():
    record = g.MeasurementRecord(mode=3, basis="x", outcome=-1.25)
    out = g.feedforward_displace(g.vacuum(2), 1, "x", 1.0, record)
    assert out.mean_of(1, "x") == pytest.approx(-1.25)
    assert out.mean_of(1, "p") == 0.0


def test_feedforward_accepts_irrational_gains():
    gain = -5 * SQRT2 / 2
    record = g.MeasurementRecord(mode=0, basis="p", outcome=2.0)
    out = g.feedforward_displace(g.vacuum(1), 0, "p", gain, record)
    assert out.mean_of(0, "p") == pytest.approx(2.0 * gain)
    np.testing.assert_array_equal(out.cov, g.vacuum(1).cov)


def test_discard_nothing_is_identity(rng):
    state = random_gaussian_state(rng, 2)
    out = g.discard(state, [])
    np.testing.assert_array_equal(out.mean, state.mean)
    np.testing.assert_array_equal(out.cov, state.cov)


def test_discard_product_factor_is_exact():
    keep = g.coherent(0.5 - 0.5j)
    state = g.tensor(g.squeeze(g.vacuum(1), 0, 1.0), keep)
    out = g.discard(state, [0])
    np.testing.assert_array_equal(out.mean, keep.mean)
    np.testing.assert_array_equal(out.cov, keep.cov)


def test_discard_tmsv_arm_leaves_thermal_state():
    r = 0.9
    state = g.two_mode_squeeze(g.vacuum(2), (0, 1), r)
    out = g.discard(state, [1])
    want = 0.5 * math.cosh(2 * r)
    assert out.variance_of(0, "x") == pytest.approx(want, rel=1e-12)
    assert out.variance_of(0, "p") == pytest.approx(want, rel=1e-12)
    assert out.cov[0, 1] == pytest.approx(0.0, abs=1e-14)


def test_discard_all_modes_rejected():
    with pytest.raises(ValueError):
        g.discard(g.vacuum(2), [0, 1])


# ---------------------------------------------------------------------------
# fidelity against a coherent target
# ---------------------------------------------------------------------------


def test_fidelity_of_coherent_with_itself_is_one():
    assert g.fidelity_with_coherent(g.coherent(1.2 - 0.3j), 1.2 - 0.3j) == pytest.approx(1.0)
    assert g.fidelity_with_coherent(g.vacuum(1), 0j) == pytest.approx(1.0)


@given(re=finite_floats, im=finite_floats)
@settings(max_examples=40)
def test_fidelity_between_coherent_states_is_the_overlap(re, im):
    alpha = complex(re, im)
    got = g.fidelity_with_coherent(g.coherent(alpha), 0j)
    assert got == pytest.approx(math.exp(-abs(alpha) ** 2), rel=1e-10, abs=1e-300)


def test_fidelity_squeezed_vacuum_against_vacuum():
    r = 0.5
    state = g.squeeze(g.vacuum(1), 0, r)
    assert g.fidelity_with_coherent(state, 0j) == pytest.approx(1 / math.cosh(r), rel=1e-12)


def test_fidelity_thermal_state_matches_wigner_integration():
    # frozen from the grid-integration oracle (diff < 1e-13 at 1201 points)
    r = 0.7
    cov = 0.5 * math.cosh(2 * r) * np.eye(2)
    state = g.GaussianState(np.zeros(2), cov)
    closed = g.fidelity_with_coherent(state, 0j)
    assert closed == pytest.approx(1 / math.cosh(r) ** 2, rel=1e-12)
    assert closed == pytest.approx(0.6347395899824586, rel=1e-12)
    grid = wigner_overlap_fidelity(state.mean, state.cov, 0j)
    assert abs(grid - closed) < 1e-9


def test_fidelity_of_displaced_thermal_matches_wigner_integration(rng):
    state = g.discard(g.two_mode_squeeze(g.vacuum(2), (0, 1), 0.6), [1])
    state = g.displace(state, 0, 0.4 + 0.9j)
    for alpha in (0j, 1 + 0j, 0.4 + 0.9j, -1j):
        closed = g.fidelity_with_coherent(state, alpha)
        grid = wigner_overlap_fidelity(state.mean, state.cov, alpha)
        assert abs(grid - closed) < 1e-9


@given(re=finite_floats, im=finite_floats)
@settings(max_examples=30)
def test_fidelity_is_displacement_covariant(re, im):
    shift = complex(re, im)
    state = g.squeeze(g.vacuum(1), 0, 0.4)
    base = g.fidelity_with_coherent(state, 0.2 + 0.1j)
    moved = g.fidelity_with_coherent(g.displace(state, 0, shift), 0.2 + 0.1j + shift)
    assert moved == pytest.approx(base, rel=1e-9)


def test_fidelity_requires_single_mode():
    with pytest.raises(ValueError):
        g.fidelity_with_coherent(g.vacuum(2), 0j)
