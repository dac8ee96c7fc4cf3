import numpy as np
import pytest

from e3atlas import analysis, invariants, qstate


def one_epr_state():
    a = np.zeros(8, dtype=complex)
    a[4 + 1] = 1.0
    a[4 + 2] = -1.0
    return qstate.make_state3(a)


# ---------------------------------------------------------------------------
# orbit dimension by tangent rank
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("state,expected", [
    (qstate.basis_state3("000"), 6),
    (qstate.ghz_state(), 7),
    (qstate.w_state(), 8),
    (qstate.haar_random_state3(8), 9),
])
def test_orbit_dimension3_reference_states(state, expected):
    result = analysis.orbit_dimension3(state)
    assert result.dimension == expected
    assert result.gap >= 1e3
    assert not result.indeterminate
    svs = np.array(result.singular_values)
    assert len(svs) == 9
    assert np.all(np.diff(svs) <= 1e-15)


@pytest.mark.parametrize("state,expected", [
    (qstate.basis_state2("00"), 4),
    (qstate.epr_state(), 3),
    (qstate.make_state2([np.sqrt(3) / 2, 0, 0, 0.5]), 5),
])
def test_orbit_dimension2_reference_states(state, expected):
    result = analysis.orbit_dimension2(state)
    assert result.dimension == expected
    assert result.gap >= 1e3
    assert len(result.singular_values) == 6


def test_generic_states_have_full_orbit_dimension():
    dims = [analysis.orbit_dimension3(qstate.haar_random_state3(qstate.child_seed(21, m))).dimension
            for m in range(200)]
    assert dims.count(9) == 200


# ---------------------------------------------------------------------------
# LU invariance fuzz
# ---------------------------------------------------------------------------


def test_check_lu_invariance_clean_run():
    report = analysis.check_lu_invariance(100, seed=5)
    assert report.samples == 100
    assert not report.failures
    assert max(report.worst.values()) < 1e-10
    assert set(report.worst) == set(analysis.J_NAMES)


def test_check_lu_invariance_rejects_zero_trials():
    with pytest.raises(ValueError):
        analysis.check_lu_invariance(0)


def test_check_lu_invariance_deterministic():
    a = analysis.check_lu_invariance(25, seed=9)
    b = analysis.check_lu_invariance(25, seed=9)
    assert a == b


def test_report_failures_iff_worst_beyond_tolerance():
    tight = analysis.check_lu_invariance(10, seed=1, tol=1e-30)
    assert tight.failures
    assert max(tight.worst.values()) > tight.tol
    loose = analysis.check_lu_invariance(10, seed=1, tol=1e-6)
    assert not loose.failures
    assert max(loose.worst.values()) <= loose.tol


# ---------------------------------------------------------------------------
# Monte Carlo membership
# ---------------------------------------------------------------------------


def test_monte_carlo_membership_clean_run():
    report = analysis.monte_carlo_membership(100, seed=2)
    assert report.samples == 100
    assert not report.failures
    assert max(report.worst.values()) <= 1e-9
    assert set(report.worst) == set(analysis.ALL_CONDITIONS)


def test_monte_carlo_membership_deterministic_and_worker_independent():
    a = analysis.monte_carlo_membership(64, seed=3)
    b = analysis.monte_carlo_membership(64, seed=3)
    c = analysis.monte_carlo_membership(64, seed=3, workers=3)
    assert a == b == c


def test_monte_carlo_membership_rejects_zero_samples():
    with pytest.raises(ValueError):
        analysis.monte_carlo_membership(0)


def test_monte_carlo_membership_json_shape():
    doc = analysis.monte_carlo_membership(5, seed=4).to_json_dict()
    assert set(doc) == {"samples", "worst", "failures", "tol"}
    assert doc["samples"] == 5
    assert doc["failures"] == []


# ---------------------------------------------------------------------------
# permutation symmetry
# ---------------------------------------------------------------------------


def test_permutation_symmetry_on_ghz():
    report = analysis.permutation_symmetry_check(qstate.ghz_state())
    assert report.samples == 6
    assert not report.failures
    assert max(report.worst.values()) < 1e-12


def test_permutation_symmetry_on_biseparable_state():
    psi = one_epr_state()
    report = analysis.permutation_symmetry_check(psi)
    assert not report.failures
    # the swap (12) moves the pairwise entanglement from J1 to J2
    swapped = qstate.apply_qubit_permutation(qstate.Permutation.from_cycles("(12)", 3), psi)
    got = invariants.invariants_J(swapped)
    assert abs(got.b1) < 1e-12 and abs(got.b2 - 0.25) < 1e-12


def test_permutation_symmetry_keeps_b6_of_real_states_zero():
    rng = np.random.default_rng(12)
    psi = qstate.make_state3(rng.standard_normal(8).astype(complex))
    for text in ("e", "(12)", "(13)", "(23)", "(123)", "(132)"):
        p = qstate.Permutation.from_cycles(text, 3)
        b = invariants.invariants_J(qstate.apply_qubit_permutation(p, psi))
        assert abs(b.b6) < 1e-14
    assert not analysis.permutation_symmetry_check(psi).failures


def test_monte_carlo_permutation_clean_run():
    report = analysis.monte_carlo_permutation(50, seed=6)
    assert report.samples == 50
    assert not report.failures
    assert max(report.worst.values()) < 1e-10
    with pytest.raises(ValueError):
        analysis.monte_carlo_permutation(0)
