import numpy as np
import pytest

from qdesigns.linalg import partial_trace
from qdesigns.projective import (
    WeightedStateSet,
    isocoherence_cost,
    isocoherent_mub,
    is_projective_design,
    merge_states,
    mub_family,
    mub_prep_unitaries,
    octahedron_states,
    phase_canonical_state,
    sic_fiducial_d2,
    sic_fiducial_d3,
    state_reconstruct,
    states_of_bases,
    welch_bound,
    welch_sum,
    wh_orbit,
)
from qdesigns.random_channels import haar_unitary, make_rng


def random_density(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def test_phase_canonical_state():
    v = np.array([0.0, 1j, 1.0]) / np.sqrt(2.0)
    c = phase_canonical_state(v)
    assert c[1].imag == pytest.approx(0.0)
    assert c[1].real > 0
    assert np.allclose(phase_canonical_state(c), c)
    with pytest.raises(ValueError):
        phase_canonical_state(np.zeros(3))


def test_merge_states_sums_weights():
    s = 1.0 / np.sqrt(2.0)
    states = np.array([
        [1, 0],
        [1j, 0],      # same ray as the first
        [s, s],
        [-s, -s],     # same ray as the third
        [s, -s],
    ], dtype=complex)
    merged, weights = merge_states(states, np.array([1.0, 2.0, 1.0, 1.0, 5.0]))
    assert merged.shape[0] == 3
    assert sorted(weights.tolist()) == [2.0, 3.0, 5.0]


def test_state_set_validation():
    with pytest.raises(ValueError):
        WeightedStateSet(3, np.eye(2, dtype=complex))
    with pytest.raises(ValueError):
        WeightedStateSet(2, np.eye(2, dtype=complex), np.array([1.0]))
    bad = WeightedStateSet(2, np.array([[2.0, 0.0]], dtype=complex))
    with pytest.raises(ValueError):
        bad.validate()
    bad_w = WeightedStateSet(2, np.eye(2, dtype=complex), np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        bad_w.validate()


def test_welch_sum_never_below_bound():
    rng = make_rng(11)
    for d in [2, 3, 5]:
        g = rng.standard_normal((7, d)) + 1j * rng.standard_normal((7, d))
        states = g / np.linalg.norm(g, axis=1, keepdims=True)
        sset = WeightedStateSet(d, states)
        for t in [1, 2, 3]:
            assert welch_sum(sset, t) >= welch_bound(d, sset.total_weight, t) - 1e-12


def test_tetrahedron_is_qubit_sic():
    tet = wh_orbit(sic_fiducial_d2())
    tet.validate()
    assert len(tet) == 4
    g2 = np.abs(tet.states.conj() @ tet.states.T) ** 2
    off = g2[~np.eye(4, dtype=bool)]
    assert np.max(np.abs(off - 1.0 / 3.0)) <= 1e-12
    assert welch_sum(tet, 2) == pytest.approx(16.0 / 3.0, abs=1e-12)
    assert is_projective_design(tet, 2)


@pytest.mark.parametrize("theta", np.linspace(0.0, 2.0 * np.pi, 32, endpoint=False))
def test_qutrit_sic_family(theta):
    orbit = wh_orbit(sic_fiducial_d3(theta))
    orbit.validate()
    assert len(orbit) == 9
    g2 = np.abs(orbit.states.conj() @ orbit.states.T) ** 2
    off = g2[~np.eye(9, dtype=bool)]
    assert np.max(np.abs(off - 0.25)) <= 1e-10
    bound = welch_bound(3, orbit.total_weight, 2)
    assert welch_sum(orbit, 2) - bound <= 1e-10 * bound


def test_wh_orbit_rejects_unnormalized():
    with pytest.raises(ValueError):
        wh_orbit(np.array([1.0, 1.0], dtype=complex))


def test_octahedron_three_design_not_four():
    oc = octahedron_states()
    assert len(oc) == 6
    assert welch_sum(oc, 3) == pytest.approx(welch_bound(2, 6.0, 3), rel=1e-12)
    assert is_projective_design(oc, 3)
    # t=4 misses: sum is 7.5 against a bound of 7.2
    assert welch_sum(oc, 4) == pytest.approx(7.5, rel=1e-12)
    assert welch_bound(2, 6.0, 4) == pytest.approx(7.2, rel=1e-15)
    assert not is_projective_design(oc, 4, tol=1e-3)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_mub_families_unbiased_and_two_designs(d):
    bases = mub_family(d)
    assert len(bases) == d + 1
    for i, a in enumerate(bases):
        assert np.allclose(a.conj().T @ a, np.eye(d), atol=1e-12)
        for b in bases[i + 1:]:
            overlap = np.abs(a.conj().T @ b) ** 2
            assert np.max(np.abs(overlap - 1.0 / d)) <= 1e-10
    sset = states_of_bases(bases)
    sset.validate()
    assert len(sset) == d * (d + 1)
    bound = welch_bound(d, sset.total_weight, 2)
    assert welch_sum(sset, 2) - bound <= 1e-10 * bound


def test_mub_family_unsupported_dimension():
    with pytest.raises(ValueError):
        mub_family(5)


def test_mub_prep_unitaries_structure():
    us = mub_prep_unitaries()
    assert len(us) == 5
    assert np.array_equal(us[0], np.eye(4))
    assert np.allclose(us[1][:, 0], np.full(4, 0.5))
    for u in us:
        assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


def test_isocoherent_family_is_mub():
    bases = isocoherent_mub()
    assert len(bases) == 5
    for i, a in enumerate(bases):
        assert np.allclose(a.conj().T @ a, np.eye(4), atol=1e-10)
        for b in bases[i + 1:]:
            overlap = np.abs(a.conj().T @ b) ** 2
            assert np.max(np.abs(overlap - 0.25)) <= 1e-10


def test_isocoherent_shared_amplitude_profile():
    bases = isocoherent_mub()
    sset = states_of_bases(bases)
    probs = np.abs(sset.states) ** 2
    profile = -np.sort(-probs, axis=1)
    # every state realizes the same sorted probability vector
    assert np.max(np.abs(profile - profile[0])) <= 1e-10
    assert np.abs(np.sum(profile[0]) - 1.0) <= 1e-12
    assert np.abs(np.sum(profile[0] ** 2) - 0.4) <= 1e-10


def test_isocoherent_reduced_purities():
    # two-qubit reading: each state reduces to a single-qubit marginal of
    # purity 4/5 +- 1/(5 sqrt 5), ten states on each value
    s5 = np.sqrt(5.0)
    lo, hi = 0.8 - 1.0 / (5.0 * s5), 0.8 + 1.0 / (5.0 * s5)
    purities = []
    for b in isocoherent_mub():
        for col in b.T:
            rho = np.outer(col, col.conj())
            red = partial_trace(rho, [2, 2], [0])
            purities.append(float(np.trace(red @ red).real))
    purities = np.sort(purities)
    assert np.max(np.abs(purities[:10] - lo)) <= 1e-10
    assert np.max(np.abs(purities[10:] - hi)) <= 1e-10


def test_isocoherence_cost_values():
    # the standard d=4 MUB family is not isocoherent; cost 6 at the identity
    assert isocoherence_cost(np.eye(4)) == pytest.approx(6.0, rel=1e-10)
    # a family that is already isocoherent scores zero without rotation
    assert isocoherence_cost(np.eye(4), bases=isocoherent_mub()) <= 1e-8


def test_isocoherence_cost_input_checks():
    with pytest.raises(ValueError):
        isocoherence_cost(np.eye(3))
    with pytest.raises(ValueError):
        isocoherence_cost(2.0 * np.eye(4))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_reconstruction_from_mub_probabilities(d):
    rng = make_rng(21 + d)
    sset = states_of_bases(mub_family(d))
    for _ in range(5):
        rho = random_density(d, rng)
        probs = np.einsum("id,de,ie->i", sset.states.conj(), rho, sset.states).real
        est = state_reconstruct(sset, probs)
        assert np.max(np.abs(est - rho)) <= 1e-12


def test_reconstruction_from_sic_probabilities():
    rng = make_rng(31)
    sset = wh_orbit(sic_fiducial_d2())
    rho = random_density(2, rng)
    probs = np.einsum("id,de,ie->i", sset.states.conj(), rho, sset.states).real
    est = state_reconstruct(sset, probs)
    assert np.max(np.abs(est - rho)) <= 1e-12


def test_reconstruction_rejects_length_mismatch():
    sset = octahedron_states()
    with pytest.raises(ValueError):
        state_reconstruct(sset, np.ones(5))


def test_haar_states_approach_design_average():
    # sanity: many Haar states nearly saturate the t=1 bound
    rng = make_rng(41)
    d = 3
    cols = np.stack([haar_unitary(d, rng)[:, 0] for _ in range(600)])
    sset = WeightedStateSet(d, cols)
    bound = welch_bound(d, sset.total_weight, 1)
    assert welch_sum(sset, 1) - bound <= 0.05 * bound
