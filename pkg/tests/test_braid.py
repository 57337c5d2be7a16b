import math

import numpy as np
import pytest

from src import braid, core, oracle
from src.exceptions import DimensionError
from src.models.wire import RampSchedule


@pytest.mark.parametrize(
    "braided, occupation, variance",
    [(False, 0.5, 0.25), (True, 1.0, 0.0)],
)
def test_interferometry_outcomes(braided, occupation, variance):
    report = braid.interferometry_demo(braided)
    assert report.source == "covariance"
    assert report.n1 == pytest.approx(occupation, abs=1e-12)
    assert report.n2 == pytest.approx(occupation, abs=1e-12)
    assert report.var1 == pytest.approx(variance, abs=1e-12)
    assert report.var2 == pytest.approx(variance, abs=1e-12)


@pytest.mark.parametrize("braided", [False, True])
def test_interferometry_oracle_agrees(braided):
    gaussian = braid.interferometry_demo(braided)
    fock = braid.interferometry_demo(braided, use_oracle=True)
    assert fock.source == "oracle"
    for name in ("n1", "n2", "var1", "var2"):
        assert getattr(fock, name) == pytest.approx(getattr(gaussian, name), abs=1e-10)


def test_interferometry_covariance_matches_fock_state():
    gamma = oracle.covariance_from_rho(oracle.interferometry_state()).gamma
    assert np.allclose(gamma, braid.INTERFEROMETRY_COVARIANCE, atol=1e-12)


def test_rotation_matrix_is_orthogonal():
    rotation = braid.rotation_matrix(4, 1, 3)
    assert np.allclose(rotation @ rotation.T, np.eye(4))
    assert rotation[0, 2] == 1.0
    assert rotation[2, 0] == -1.0


@pytest.mark.parametrize("i, j", [(1, 1), (0, 2), (1, 5)])
def test_rotation_matrix_rejects_bad_indices(i, j):
    with pytest.raises(DimensionError):
        braid.rotation_matrix(4, i, j)


@pytest.mark.parametrize("i, j", [(1, 2), (2, 3), (1, 4), (3, 2)])
def test_braid_rotation_matches_fock_conjugation(rng, i, j):
    gamma = core.random_covariance(2, rng)
    rho = oracle.gaussian_density_matrix(gamma)
    braided = oracle.conjugate(rho, oracle.braid_unitary(2, i, j))
    expected = oracle.covariance_from_rho(braided).gamma
    assert np.allclose(braid.braid_rotation(gamma, i, j).gamma, expected, atol=1e-10)


def test_braid_rotation_twice_is_parity_flip(rng):
    gamma = core.random_covariance(3, rng)
    twice = braid.braid_rotation(braid.braid_rotation(gamma, 2, 5), 2, 5).gamma
    flip = np.eye(6)
    flip[1, 1] = flip[4, 4] = -1.0
    assert np.allclose(twice, flip @ gamma.gamma @ flip)


def test_prepare_move_state_has_edge_correlation():
    start = braid.prepare_move_state(4)
    assert start.gamma[0, 7] == pytest.approx(1.0)
    assert core.is_pure(start)


def test_slow_move_follows_dephasing_law():
    report = braid.adiabatic_move(n_sites=4, schedule=RampSchedule(100.0))
    assert not report.too_fast
    assert report.predicted_attenuation == pytest.approx(math.exp(-2.0 * (math.pi / 2) ** 2 / 100.0))
    assert report.relative_error < 0.01
    assert report.steps == 2000


def test_move_error_shrinks_with_duration():
    errors = [braid.adiabatic_move(n_sites=3, schedule=RampSchedule(duration)).relative_error for duration in (50.0, 100.0, 200.0)]
    assert errors[0] > errors[1] > errors[2]


def test_fast_move_is_flagged():
    report = braid.adiabatic_move(n_sites=4, schedule=RampSchedule(5.0))
    assert report.too_fast
    assert report.max_rate == pytest.approx(math.pi / 10)


def test_move_checks_initial_size():
    with pytest.raises(DimensionError):
        braid.adiabatic_move(core.vacuum_covariance(3), n_sites=4, schedule=RampSchedule(10.0))


def test_disjoint_braids_commute(rng):
    gamma = core.random_covariance(2, rng)
    first = braid.braid_rotation(braid.braid_rotation(gamma, 1, 2), 3, 4).gamma
    second = braid.braid_rotation(braid.braid_rotation(gamma, 3, 4), 1, 2).gamma
    assert np.allclose(first, second, atol=1e-14)


def test_overlapping_braids_do_not_commute():
    vacuum = core.vacuum_covariance(2)
    first = braid.braid_rotation(braid.braid_rotation(vacuum, 1, 2), 2, 3).gamma
    second = braid.braid_rotation(braid.braid_rotation(vacuum, 2, 3), 1, 2).gamma
    assert np.max(np.abs(first - second)) > 0.1
    assert first[0, 2] == pytest.approx(-1.0)
    assert second[0, 3] == pytest.approx(1.0)


@pytest.mark.parametrize("i, j", [(1, 4), (2, 5), (6, 3)])
def test_braid_preserves_purity_spectrum(rng, i, j):
    gamma = core.random_covariance(3, rng)
    rotated = braid.braid_rotation(gamma, i, j)
    assert np.allclose(core.purity_spectrum(rotated), core.purity_spectrum(gamma), atol=1e-12)


def test_interferometry_state_correlators():
    rho = oracle.interferometry_state()
    cs = [c.matrix for c in oracle.majoranas(2)]
    # ordering (γ_L1, γ_R1, γ_L2, γ_R2)
    assert rho.expectation(cs[1] @ cs[2]) == pytest.approx(1j)
    assert rho.expectation(cs[3] @ cs[0]) == pytest.approx(-1j)
    # even parity: Pf(Γ) = Γ_12Γ_34 - Γ_13Γ_24 + Γ_14Γ_23 = +1
    parity = (np.eye(4) - 2.0 * oracle.number_operator(2, 1).matrix) @ (np.eye(4) - 2.0 * oracle.number_operator(2, 2).matrix)
    assert rho.expectation(parity).real == pytest.approx(1.0)
    gamma = braid.INTERFEROMETRY_COVARIANCE
    pfaffian = gamma[0, 1] * gamma[2, 3] - gamma[0, 2] * gamma[1, 3] + gamma[0, 3] * gamma[1, 2]
    assert pfaffian == pytest.approx(1.0)
