import numpy as np
import pytest

from src import core, liouville, wires
from src.exceptions import DimensionError, InconsistentModelError, StepSizeError
from src.models.majorana import CovarianceMatrix, DampingPair
from src.models.wire import WireSpec


def _ideal_pair(n_sites, kappa=1.0):
    return core.build_damping_matrices(wires.ideal_wire(n_sites, kappa), kappa, n_sites)


def test_ideal_spectrum_is_flat_with_two_zero_modes():
    pair = _ideal_pair(50)
    spectrum = liouville.damping_spectrum(pair)
    eigenvalues = spectrum.eigenvalues
    assert np.sum(eigenvalues < 1e-10) == 2
    assert np.allclose(eigenvalues[2:], 0.5, atol=1e-10)
    assert spectrum.zero_indices == (0, 1)
    assert np.allclose(spectrum.reconstruct(), pair.x)


def test_ideal_zero_modes_are_edge_majoranas():
    basis = liouville.zero_modes(_ideal_pair(6))
    projector = basis @ basis.T
    expected = np.zeros((12, 12))
    expected[0, 0] = expected[-1, -1] = 1.0
    assert np.allclose(projector, expected, atol=1e-12)


def test_canonical_gap_closes_at_half_angle():
    gaps = []
    for n_sites in (10, 20, 40):
        pair = wires.wire_damping(WireSpec(n_sites, "canonical", theta=np.pi / 2))
        spectrum = liouville.damping_spectrum(pair, zero_threshold=1e-10)
        gaps.append(spectrum.eigenvalues[len(spectrum.zero_indices)])
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_zero_modes_reject_y_leak():
    x = np.diag([0.0, 1.0])
    y = np.array([[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(InconsistentModelError):
        liouville.zero_modes(DampingPair(x, y, 1.0))


def test_steady_state_solves_lyapunov_on_bulk():
    pair = wires.wire_damping(WireSpec(8, "canonical", theta=3 * np.pi / 8))
    steady = liouville.steady_state(pair)
    residual = pair.x @ steady.gamma + steady.gamma @ pair.x + pair.y
    assert np.max(np.abs(residual)) < 1e-10


def test_steady_state_keeps_zero_mode_block():
    pair = _ideal_pair(5)
    seed = np.zeros((10, 10))
    seed[0, -1], seed[-1, 0] = 0.6, -0.6
    steady = liouville.steady_state(pair, seed)
    assert steady.gamma[0, -1] == pytest.approx(0.6)
    assert np.allclose(liouville.edge_block(pair, steady), liouville.edge_block(pair, seed))


@pytest.mark.parametrize("kind, theta", [("ideal", np.pi / 4), ("canonical", np.pi / 8), ("canonical", 3 * np.pi / 8)])
def test_canonical_bulk_is_pure(kind, theta):
    pair = wires.wire_damping(WireSpec(10, kind, theta=theta))
    steady = liouville.steady_state(pair)
    assert np.allclose(liouville.bulk_purity_spectrum(pair, steady), -1.0, atol=1e-8)


def test_noncanonical_bulk_is_mixed():
    pair = wires.wire_damping(WireSpec(10, "noncanonical", theta=3 * np.pi / 8))
    spectrum = liouville.bulk_purity_spectrum(pair, liouville.steady_state(pair))
    assert max(spectrum) > -0.99


def test_disordered_canonical_bulk_is_mixed():
    pair = wires.wire_damping(WireSpec(10, "canonical", theta=3 * np.pi / 8, disorder=0.05, seed=3))
    spectrum = liouville.bulk_purity_spectrum(pair, liouville.steady_state(pair))
    assert max(spectrum) > -1.0 + 1e-4


def test_evolution_relaxes_to_steady_state(rng):
    pair = _ideal_pair(4)
    start = core.random_covariance(4, rng)
    report = liouville.evolve(start, pair, total_time=60.0, dt=0.05)
    target = liouville.steady_state(pair, start)
    assert report.times[-1] == pytest.approx(60.0)
    assert np.max(np.abs(report.final.gamma - target.gamma)) < 1e-8


def test_evolution_records_requested_steps():
    pair = _ideal_pair(3)
    report = liouville.evolve(core.vacuum_covariance(3), pair, total_time=1.0, dt=0.1, record_every=5)
    assert report.steps == 10
    assert report.times == pytest.approx([0.0, 0.5, 1.0])
    assert len(report.states) == 3


def test_step_size_guard():
    pair = _ideal_pair(3)
    with pytest.raises(StepSizeError):
        liouville.evolve(core.vacuum_covariance(3), pair, total_time=1.0, dt=0.5)
    with pytest.raises(StepSizeError):
        liouville.evolve(core.vacuum_covariance(3), pair, total_time=1.0, dt=-0.01)


def test_evolve_rejects_mismatched_sizes():
    with pytest.raises(DimensionError):
        liouville.evolve(core.vacuum_covariance(2), _ideal_pair(3), total_time=1.0, dt=0.01)


def test_hamiltonian_conserves_pure_states(rng):
    empty = core.build_damping_matrices([], kappa=1.0, n_sites=3)
    hamiltonian = core.hopping_hamiltonian(3, hopping=0.5, chemical_potential=0.2)
    start = core.random_covariance(3, rng, pure=True)
    report = liouville.evolve(start, empty, hamiltonian, total_time=2.0, dt=0.01)
    assert core.is_pure(report.final)
    total = sum(core.occupation(report.final, site) for site in (1, 2, 3))
    assert total == pytest.approx(sum(core.occupation(start, site) for site in (1, 2, 3)), abs=1e-9)


def test_edge_bulk_correlations_decay_exponentially(rng):
    pair = wires.wire_damping(WireSpec(5, "canonical", theta=np.pi / 3))
    start = core.random_covariance(5, rng)
    deviation = liouville.edge_bulk_decay_check(pair, start, times=[0.5, 1.0, 2.0], dt=0.01)
    assert deviation < 1e-8


def test_sample_times_are_evenly_spaced():
    assert liouville.sample_times(2.0, 4) == pytest.approx([0.5, 1.0, 1.5, 2.0])


def test_evolution_composes(rng):
    pair = wires.wire_damping(WireSpec(4, "canonical", theta=np.pi / 3))
    start = core.random_covariance(4, rng)
    first = liouville.evolve(start, pair, total_time=1.3, dt=0.01).final
    composed = liouville.evolve(first, pair, total_time=1.7, dt=0.01).final
    direct = liouville.evolve(start, pair, total_time=3.0, dt=0.01).final
    assert np.allclose(composed.gamma, direct.gamma, atol=1e-8)


def test_no_dissipation_leaves_state_unchanged(rng):
    empty = core.build_damping_matrices([], kappa=1.0, n_sites=3)
    start = core.random_covariance(3, rng)
    report = liouville.evolve(start, empty, total_time=5.0, dt=0.05)
    assert np.allclose(report.final.gamma, start.gamma, atol=1e-14)


def test_edge_block_is_constant(rng):
    pair = wires.wire_damping(WireSpec(5, "noncanonical", theta=3 * np.pi / 8))
    start = core.random_covariance(5, rng)
    report = liouville.evolve(start, pair, total_time=4.0, dt=0.01, record_every=50)
    initial = liouville.edge_block(pair, start)
    for state in report.states:
        assert np.allclose(liouville.edge_block(pair, state), initial, atol=1e-10)


def test_distance_to_steady_state_is_monotone(rng):
    pair = wires.wire_damping(WireSpec(6, "canonical", theta=np.pi / 8))
    start = core.random_covariance(6, rng)
    target = liouville.steady_state(pair, start).gamma
    report = liouville.evolve(start, pair, total_time=40.0, dt=0.05, record_every=40)
    distances = [np.linalg.norm(state.gamma - target) for state in report.states]
    assert all(later <= earlier + 1e-12 for earlier, later in zip(distances, distances[1:]))
    assert distances[-1] < 1e-3 * distances[0]


def test_two_site_bulk_element_relaxes():
    # at θ = π/2 the damped pair is (c_3, c_4): ∂_tΓ_34 = -Γ_34 - 1
    pair = core.build_damping_matrices([wires.two_site_ramp_vector(np.pi / 2)], kappa=1.0, n_sites=2)
    start = CovarianceMatrix(2, np.zeros((4, 4)))
    for t in (0.5, 2.0, 8.0):
        final = liouville.evolve(start, pair, total_time=t, dt=0.01).final
        assert final.element(3, 4) == pytest.approx(np.exp(-t) - 1.0, abs=1e-10)
        assert final.element(1, 2) == pytest.approx(0.0, abs=1e-14)


def test_ideal_wire_cools_infinite_temperature_state():
    pair = _ideal_pair(10)
    start = CovarianceMatrix(10, np.zeros((20, 20)))
    final = liouville.evolve(start, pair, total_time=20.0, dt=0.05).final
    target = liouville.steady_state(pair)
    assert np.max(np.abs(final.gamma - target.gamma)) < 1e-6
    assert final.element(1, 20) == pytest.approx(0.0, abs=1e-12)
