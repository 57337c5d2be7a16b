import math

import numpy as np
import pytest

from src import core, liouville, oracle, wires
from src.exceptions import ConfigError, DimensionError, StepSizeError
from src.models.fock import DensityMatrix
from src.models.wire import WireSpec


def _compare_trajectories(spec, hamiltonian, start, total_time=2.0, dt=0.01, samples=10):
    pair = wires.wire_damping(spec)
    times = liouville.sample_times(total_time, samples)
    jumps = [oracle.jump_from_vector(vector) for vector in wires.wire_operators(spec)]
    fock_h = oracle.hamiltonian_from_quadratic(hamiltonian) if hamiltonian is not None else None
    fock_times, fock_states = oracle.fock_lindblad_trajectory(
        jumps, fock_h, oracle.gaussian_density_matrix(start), total_time, dt, kappa=spec.kappa, sample_times=times
    )
    assert len(fock_times) == samples + 1

    worst = 0.0
    current, elapsed = start, 0.0
    for t, rho in zip(fock_times[1:], fock_states[1:]):
        current = liouville.evolve(current, pair, hamiltonian, total_time=t - elapsed, dt=dt).final
        elapsed = t
        worst = max(worst, float(np.max(np.abs(current.gamma - oracle.covariance_from_rho(rho).gamma))))
    return worst


def test_gaussian_and_fock_agree_with_hopping(rng):
    spec = WireSpec(3, "canonical", theta=math.pi / 3)
    hamiltonian = core.hopping_hamiltonian(3, hopping=0.5)
    assert _compare_trajectories(spec, hamiltonian, core.random_covariance(3, rng)) < 1e-7


def test_gaussian_and_fock_agree_on_ideal_wire(rng):
    spec = WireSpec(4)
    assert _compare_trajectories(spec, None, core.random_covariance(4, rng, pure=True)) < 1e-7


def test_noncanonical_wire_agrees_from_vacuum():
    spec = WireSpec(3, "noncanonical", theta=3 * math.pi / 8, phi=0.4)
    assert _compare_trajectories(spec, None, core.vacuum_covariance(3)) < 1e-7


def test_gaussian_density_round_trip(rng):
    gamma = core.random_covariance(3, rng)
    rho = oracle.gaussian_density_matrix(gamma)
    assert np.allclose(oracle.covariance_from_rho(rho).gamma, gamma.gamma, atol=1e-10)


def test_vacuum_density_matrix():
    rho = oracle.gaussian_density_matrix(core.vacuum_covariance(2))
    assert oracle.fidelity(rho, oracle.vacuum_state(2)) == pytest.approx(1.0)


def test_majoranas_anticommute():
    cs = oracle.majoranas(2)
    for a, first in enumerate(cs):
        for b, second in enumerate(cs):
            anti = first.matrix @ second.matrix + second.matrix @ first.matrix
            assert np.allclose(anti, 2.0 * np.eye(4) if a == b else 0.0)


def test_chemical_potential_maps_to_number_operator():
    mu = 0.7
    fock = oracle.hamiltonian_from_quadratic(core.hopping_hamiltonian(1, hopping=0.0, chemical_potential=mu))
    expected = 0.5 * mu * np.eye(2) - mu * oracle.number_operator(1, 1).matrix
    assert np.allclose(fock.matrix, expected)


def test_fock_step_size_guard():
    jumps = [oracle.jump_from_vector(vector) for vector in wires.ideal_wire(2)]
    with pytest.raises(StepSizeError):
        oracle.fock_lindblad_evolve(jumps, None, DensityMatrix.maximally_mixed(2), 1.0, 0.5)


def test_site_limit():
    with pytest.raises(DimensionError):
        oracle.annihilators(oracle.MAX_SITES + 1)


def test_quartic_wire_relaxes_to_fixed_number_bcs(rng):
    n_sites = 4
    target = oracle.bcs_fixed_number_state(oracle.ring_xi("canonical", math.pi / 4, 0.0, n_sites), n_sites, 1)
    assert target.n_particles == 3
    start = DensityMatrix.from_state(oracle.random_sector_state(n_sites, 3, rng), n_sites)
    final = oracle.fock_lindblad_evolve(oracle.quartic_wire_ops(n_sites, periodic=True), None, start, 200.0, 0.05)
    assert oracle.fidelity(final, target.state) > 1.0 - 1e-6
    assert final.expectation(oracle.particle_number(n_sites)).real == pytest.approx(3.0)


def test_fixed_number_state_is_dark_for_quartic_ring():
    n_sites = 4
    target = oracle.bcs_fixed_number_state(oracle.ring_xi("canonical", math.pi / 4, 0.0, n_sites), n_sites, 1)
    assert oracle.dark_residual(oracle.quartic_wire_ops(n_sites, periodic=True), target.state) < 1e-10


@pytest.mark.parametrize("n_sites", [4, 6])
@pytest.mark.parametrize("theta", [math.pi / 4, math.pi / 3])
def test_fixed_phase_state_is_dark(n_sites, theta):
    xi = oracle.ring_xi("canonical", theta, 0.0, n_sites)
    assert oracle.fixed_phase_dark_check(xi, n_sites) < 1e-10


def test_fixed_phase_state_is_dark_for_ideal_ring():
    n_sites = 4
    state = oracle.bcs_fixed_phase_state(oracle.ring_xi("canonical", math.pi / 4, 0.0, n_sites), n_sites)
    assert oracle.dark_residual(oracle.ring_ideal_ops(n_sites), state) < 1e-10


def test_self_paired_occupations():
    occupations = oracle.self_paired_occupations(oracle.ring_xi("canonical", math.pi / 4, 0.0, 4), 4)
    assert occupations == {0.0: 1, math.pi: 0}


def test_fixed_number_state_rejects_too_many_pairs():
    with pytest.raises(ConfigError):
        oracle.bcs_fixed_number_state(oracle.ring_xi("canonical", math.pi / 4, 0.0, 4), 4, 2)


def test_random_sector_state_needs_a_sector(rng):
    with pytest.raises(ConfigError):
        oracle.random_sector_state(2, 3, rng)
    state = oracle.random_sector_state(3, 2, rng)
    number = oracle.particle_number(3).matrix
    assert np.allclose(number @ state, 2.0 * state)


def test_ring_needs_three_sites():
    with pytest.raises(DimensionError):
        oracle.quartic_wire_ops(2, periodic=True)
    assert len(oracle.quartic_wire_ops(4)) == 3


def test_quartic_operators_conserve_particle_number():
    number = oracle.particle_number(4).matrix
    for op in oracle.quartic_wire_ops(4, periodic=True):
        assert np.allclose(op.matrix @ number - number @ op.matrix, 0.0)


@pytest.mark.parametrize("kappa", [0.5, 1.0])
def test_single_site_decay(kappa):
    jump = oracle.jump_from_vector(core.complex_to_majorana(1, [(1, 1.0, 0.0)]))
    filled = oracle.annihilators(1)[0].dagger.matrix @ oracle.vacuum_state(1)
    start = DensityMatrix.from_state(filled, 1)
    final = oracle.fock_lindblad_evolve([jump], None, start, 2.0, 0.01, kappa=kappa)
    occupation = final.expectation(oracle.number_operator(1, 1)).real
    assert occupation == pytest.approx(math.exp(-2.0 * kappa), abs=1e-8)


def test_maximally_mixed_state_has_zero_covariance():
    gamma = oracle.covariance_from_rho(DensityMatrix.maximally_mixed(3)).gamma
    assert np.allclose(gamma, 0.0, atol=1e-12)


def test_fock_relaxation_matches_gaussian_steady_state():
    pair = core.build_damping_matrices(wires.ideal_wire(3), kappa=1.0, n_sites=3)
    jumps = [oracle.jump_from_vector(vector) for vector in wires.ideal_wire(3)]
    final = oracle.fock_lindblad_evolve(jumps, None, DensityMatrix.maximally_mixed(3), 20.0, 0.02)
    gamma = oracle.covariance_from_rho(final).gamma
    assert np.max(np.abs(gamma - liouville.steady_state(pair).gamma)) < 1e-8


def test_empty_pairing_keeps_only_self_paired_mode():
    n_sites = 4
    state = oracle.bcs_fixed_number_state(oracle.ring_xi("canonical", math.pi / 4, 0.0, n_sites), n_sites, 0)
    # k = 0 is filled, k = π stays empty
    assert state.n_particles == 1
    zero_mode = oracle.momentum_annihilator(n_sites, 0.0).dagger.matrix @ oracle.vacuum_state(n_sites)
    assert abs(np.vdot(zero_mode, state.state)) == pytest.approx(1.0)
    ops = oracle.quartic_wire_ops(n_sites, periodic=True)
    assert oracle.dark_residual(ops, state.state) < 1e-12
    assert oracle.dark_residual(ops, oracle.vacuum_state(n_sites)) < 1e-12


def test_non_dark_states_have_large_residual():
    n_sites = 4
    ops = oracle.quartic_wire_ops(n_sites, periodic=True)
    single = oracle.annihilators(n_sites)[0].dagger.matrix @ oracle.vacuum_state(n_sites)
    assert oracle.dark_residual(ops, single) > 0.1
    xi = oracle.ring_xi("canonical", math.pi / 4, 0.0, n_sites)
    bare_pair = oracle.pair_creation_operator(xi, n_sites).matrix @ oracle.vacuum_state(n_sites)
    assert oracle.dark_residual(ops, bare_pair / np.linalg.norm(bare_pair)) > 0.1


def test_quartic_ring_two_particle_sector_stays_mixed(rng):
    # without the filled k = 0 mode the two-particle sector holds no pure dark state
    n_sites = 4
    start = DensityMatrix.from_state(oracle.random_sector_state(n_sites, 2, rng), n_sites)
    final = oracle.fock_lindblad_evolve(oracle.quartic_wire_ops(n_sites, periodic=True), None, start, 50.0, 0.05)
    assert final.expectation(oracle.particle_number(n_sites)).real == pytest.approx(2.0)
    assert np.trace(final.matrix @ final.matrix).real < 0.9
