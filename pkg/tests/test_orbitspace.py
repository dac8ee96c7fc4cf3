import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from e3atlas import invariants as inv
from e3atlas import orbitspace as osp
from e3atlas import qstate
from e3atlas.errors import (
    NegativeProductError,
    NotInOrbitSpaceError,
    OutOfRangeError,
)

seeds = st.integers(min_value=0, max_value=2**63 - 1)

GHZ_BETA = inv.Beta(0, 0, 0, 0.25, 0, 0)
W_BETA = inv.Beta(1 / 9, 1 / 9, 1 / 9, 0, 2 / 27, 0)
F_REFERENCE = 0.006871152422706632  # F at b1=b2=b3=0.03, b4=1/8


def zero_tangle_standard_state(seed) -> inv.StandardState:
    """Random standard-form state with lam4 = 0, so the tangle vanishes."""
    rng = np.random.default_rng(seed)
    v = np.abs(rng.standard_normal(4))
    v /= np.linalg.norm(v)
    phi = rng.uniform(0, 2 * np.pi)
    return inv.StandardState(v[0], v[1] * np.exp(1j * phi), v[2], v[3], 0.0)


# ---------------------------------------------------------------------------
# delta_beta and F
# ---------------------------------------------------------------------------


def test_delta_beta_examples():
    assert osp.delta_beta(inv.Beta(0, 0, 0, 0, 0, 0)) == 0
    assert abs(osp.delta_beta(GHZ_BETA)) < 1e-16
    assert osp.delta_beta(inv.Beta(0, 0, 0, 0, 1, 0)) == 1


def test_f_value_examples():
    f = osp.f_value(inv.Beta(0.03, 0.03, 0.03, 0.125, 0, 0))
    assert f > 0
    assert abs(f - F_REFERENCE) < 1e-15
    assert abs(osp.f_value(inv.Beta(0, 0, 0, 0.125, 0, 0)) - 1 / 64) < 1e-16
    assert abs(osp.f_value(inv.Beta(0, 0, 0, 0.25, 0, 0))) < 1e-16


def test_f_value_rejects_negative_product():
    with pytest.raises(NegativeProductError):
        osp.f_value(inv.Beta(-1e-3, 1e-3, 1e-3, 0.1, 0, 0))
    # tiny negative radicand is clamped, not fatal
    assert np.isfinite(osp.f_value(inv.Beta(-1e-14, 1e-3, 1e-3, 0.1, 0, 0)))


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def test_membership_examples():
    assert osp.membership(GHZ_BETA, 1e-9).in_x
    bad = osp.membership(inv.Beta(0, 0, 0, 0, 1, 0), 1e-9)
    assert not bad.in_x
    assert "b5_sq_bound" in bad.violated()
    w = osp.membership(W_BETA, 1e-9)
    assert w.in_x
    assert w.residuals["b6_circle"] < 1e-15


def test_membership_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        osp.membership(GHZ_BETA, 0.0)


def test_membership_flags_inflated_b5():
    beta = inv.invariants_J(qstate.haar_random_state3(99))
    perturbed = inv.Beta(beta.b1, beta.b2, beta.b3, beta.b4, beta.b5 + 0.1, beta.b6)
    report = osp.membership(perturbed, 1e-9)
    assert not report.in_x
    assert "b5_sq_bound" in report.violated()


@given(seeds)
@settings(max_examples=25)
def test_membership_soundness_on_haar_states(seed):
    beta = inv.invariants_J(qstate.haar_random_state3(seed))
    assert osp.membership(beta, 1e-9).in_x


def test_two_nonzero_components_at_zero_tangle_is_infeasible():
    # with b4 = 0, exactly two of b1, b2, b3 positive contradicts the system
    report = osp.membership(inv.Beta(0.1, 0.1, 0, 0, 0, 0), 1e-9)
    assert not report.in_x


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def test_classify_named_examples():
    cell = osp.classify(GHZ_BETA, 1e-9)
    assert (cell.name, cell.acin_type, cell.slocc_class, cell.orbit_dimension) == \
        ("e0_GHZ", "2b", "GHZ", 7)
    cell = osp.classify(W_BETA, 1e-9)
    assert (cell.name, cell.acin_type, cell.slocc_class, cell.orbit_dimension) == \
        ("e2_W", "3a", "W", 8)
    cell = osp.classify(inv.Beta(0.25, 0, 0, 0, 0, 0), 1e-9)
    assert (cell.name, cell.acin_type, cell.orbit_dimension) == ("e0_A-BC", "2a", 5)


def test_classify_requires_membership():
    with pytest.raises(NotInOrbitSpaceError) as err:
        osp.classify(inv.Beta(0, 0, 0, 0, 1, 0), 1e-9)
    assert "b5_sq_bound" in err.value.violated


def test_classify_boundary_ties_go_to_the_boundary_cell():
    assert osp.classify(inv.Beta(0, 0, 0, 0.25 - 1e-12, 0, 0)).name == "e0_GHZ"
    near_w = inv.Beta(1 / 9 + 1e-13, 1 / 9, 1 / 9, 0, 2 / 27, 0)
    assert osp.classify(near_w).name == "e2_W"


def test_every_cell_sample_classifies_to_its_own_cell():
    for cell in osp.THREE_QUBIT_CELLS:
        beta = osp.cell_sample(cell.name)
        assert osp.membership(beta, 1e-9).in_x, cell.name
        assert osp.classify(beta, 1e-9) == cell


def test_cell_sample_unknown_name():
    with pytest.raises(KeyError):
        osp.cell_sample("e9_nope")


def test_cell_table_metadata():
    expected = [
        ("e0_A-B-C", "1", "A-B-C", 6),
        ("e1_A-BC", "2a", "A-BC", 7),
        ("e0_A-BC", "2a", "A-BC", 5),
        ("e1_B-AC", "2a", "B-AC", 7),
        ("e0_B-AC", "2a", "B-AC", 5),
        ("e1_C-AB", "2a", "C-AB", 7),
        ("e0_C-AB", "2a", "C-AB", 5),
        ("e3_W", "4a", "W", 9),
        ("e2_W", "3a", "W", 8),
        ("e1_GHZ", "2b", "GHZ", 7),
        ("e1_A_GHZ", "3b", "GHZ", 8),
        ("e1_B_GHZ", "3b", "GHZ", 8),
        ("e1_C_GHZ", "3b", "GHZ", 8),
        ("e2_A_GHZ", "3b", "GHZ", 8),
        ("e2_B_GHZ", "3b", "GHZ", 8),
        ("e2_C_GHZ", "3b", "GHZ", 8),
        ("e2_BC", "5", "GHZ", 9),
        ("e2_AC", "4b", "GHZ", 9),
        ("e2_AB", "4b", "GHZ", 9),
        ("e3_BC", "5", "GHZ", 9),
        ("e3_AC", "4b", "GHZ", 9),
        ("e3_AB", "4b", "GHZ", 9),
        ("e3_ABC", "5", "GHZ", 9),
        ("e4", "5", "GHZ", 9),
        ("e5", "5", "GHZ", 9),
        ("e0_GHZ", "2b", "GHZ", 7),
    ]
    assert len(osp.THREE_QUBIT_CELLS) == 26
    got = [(c.name, c.acin_type, c.slocc_class, c.orbit_dimension)
           for c in osp.THREE_QUBIT_CELLS]
    assert got == expected
    two = [(c.name, c.slocc_class, c.orbit_dimension) for c in osp.TWO_QUBIT_CELLS]
    assert two == [("e0_SEP", "unentangled", 4), ("e1", "entangled", 5),
                   ("e0_EPR", "entangled", 3)]


def test_classify_two_qubit():
    assert osp.classify_two_qubit(0.0).name == "e0_SEP"
    assert osp.classify_two_qubit(0.0).orbit_dimension == 4
    assert osp.classify_two_qubit(1.0).name == "e0_EPR"
    assert osp.classify_two_qubit(1.0).orbit_dimension == 3
    assert osp.classify_two_qubit(0.5).name == "e1"
    assert osp.classify_two_qubit(0.5).orbit_dimension == 5
    with pytest.raises(OutOfRangeError):
        osp.classify_two_qubit(-0.1)
    with pytest.raises(OutOfRangeError):
        osp.classify_two_qubit(1.1)


@given(seeds)
@settings(max_examples=25)
def test_classification_total_on_haar_states(seed):
    beta = inv.invariants_J(qstate.haar_random_state3(seed))
    cell = osp.classify(beta, 1e-9)
    assert cell.name in osp.CELL_BY_NAME


def test_exclusion_law_on_zero_tangle_samples():
    # at zero tangle, the number of nonzero components among b1..b3 is 0, 1, or 3
    for cell in osp.THREE_QUBIT_CELLS:
        beta = osp.cell_sample(cell.name)
        if beta.b4 <= 1e-12:
            n_big = sum(v > 1e-9 for v in (beta.b1, beta.b2, beta.b3))
            assert n_big in (0, 1, 3), cell.name


# ---------------------------------------------------------------------------
# synthesis
# ---------------------------------------------------------------------------


def test_synthesize_named_examples():
    r = 1 / np.sqrt(2)
    res = osp.synthesize(GHZ_BETA)
    assert res.case_label == "2b2"
    assert np.allclose(res.state.amplitudes()[[0, 7]], [r, r], atol=1e-12)
    res = osp.synthesize(inv.Beta(0.25, 0, 0, 0, 0, 0))
    assert res.case_label == "2a"
    assert np.allclose(res.state.amplitudes()[[4, 7]], [r, r], atol=1e-12)
    res = osp.synthesize(inv.Beta(0, 0, 0, 0, 0, 0))
    assert res.case_label == "1a"
    assert abs(res.state.lam0 - 1) < 1e-12


def test_synthesize_rejects_nonmembers():
    with pytest.raises(NotInOrbitSpaceError):
        osp.synthesize(inv.Beta(0, 0, 0, 0, 1, 0))


def test_synthesize_case_labels_for_cell_samples():
    # every proof branch is exercised by some cell sample
    labels = {osp.synthesize(osp.cell_sample(c.name)).case_label
              for c in osp.THREE_QUBIT_CELLS}
    assert {"1a", "1b", "2a", "2b1", "2b2", "2b3", "2b4", "2b5"} <= labels


def test_synthesize_round_trip_on_cell_samples():
    for cell in osp.THREE_QUBIT_CELLS:
        beta = osp.cell_sample(cell.name)
        res = osp.synthesize(beta)
        assert abs(res.state.norm() - 1) < 1e-10
        achieved = inv.j_of_standard(res.state).to_array()
        assert np.max(np.abs(achieved - beta.to_array())) < 1e-8, cell.name


@given(seeds)
@settings(max_examples=40)
def test_synthesize_round_trip_on_haar_states(seed):
    beta = inv.invariants_J(qstate.haar_random_state3(seed))
    res = osp.synthesize(beta)
    achieved = inv.j_of_standard(res.state).to_array()
    assert np.max(np.abs(achieved - beta.to_array())) < 1e-8


def test_canonical_representative_of_rotated_ghz():
    psi = qstate.apply_local_unitary(qstate.random_local_unitary(17), qstate.ghz_state())
    res = osp.canonical_representative(psi)
    r = 1 / np.sqrt(2)
    amp = res.state.amplitudes()
    assert np.allclose(amp, [r, 0, 0, 0, 0, 0, 0, r], atol=1e-6)


def test_canonical_representative_of_product_state():
    res = osp.canonical_representative(qstate.basis_state3("010"))
    assert res.case_label == "1a"
    assert np.allclose(res.state.amplitudes(), [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-7)


@given(seeds)
@settings(max_examples=20)
def test_canonical_representative_preserves_invariants(seed):
    psi = qstate.haar_random_state3(seed)
    beta = inv.invariants_J(psi)
    res = osp.canonical_representative(psi)
    again = inv.invariants_J(res.state.embed()).to_array()
    assert np.max(np.abs(again - beta.to_array())) < 1e-8


def test_zero_tangle_slice_law():
    # when b4 = 0: b5 = 2 sqrt(b1 b2 b3) and b6 = 0
    for k in range(50):
        chi = zero_tangle_standard_state(k)
        b = inv.invariants_J(chi.embed())
        assert b.b4 < 1e-12
        assert abs(b.b5 - 2 * np.sqrt(max(b.b1 * b.b2 * b.b3, 0))) < 1e-9
        assert abs(b.b6) < 1e-9
