import math

import numpy as np
import pytest

from src import momentum
from src.exceptions import (
    ConfigError,
    DimensionError,
    InconsistentModelError,
    InvariantUndefinedError,
    NotChiralError,
    StepSizeError,
)
from src.models.bloch import BlochField, BogoliubovFunction, ChiralAxis, brillouin_grid, partner_indices


def _winding(kind, theta, size=1024, epsilon=0.0):
    field = momentum.steady_bloch(momentum.xi_deformed(kind, theta, 0.0, size, epsilon))
    return momentum.winding_number(field, momentum.chiral_axis(field))


def test_brillouin_grid_layout():
    grid = brillouin_grid(8)
    assert grid[0] == pytest.approx(-math.pi)
    assert grid[4] == pytest.approx(0.0)
    assert np.allclose(grid[partner_indices(8)], np.where(np.isclose(grid, -math.pi), grid, -grid))
    for size in (6, 9):
        with pytest.raises(DimensionError):
            brillouin_grid(size)


def test_canonical_mode_rates():
    theta = 0.3
    xi = momentum.xi_deformed("canonical", theta, 0.0, 64)
    assert np.allclose(momentum.mode_rates(xi), 1.0 + math.cos(2 * theta) * np.cos(xi.grid))
    assert np.allclose(momentum.momentum_damping(xi), momentum.mode_rates(xi)[:, None])


def test_canonical_bloch_vectors_are_unit():
    theta = 3 * math.pi / 8
    xi = momentum.xi_deformed("canonical", theta, 0.0, 128)
    field = momentum.steady_bloch(xi)
    kappa = 1.0 + math.cos(2 * theta) * np.cos(xi.grid)
    assert np.allclose(field.purity, 1.0)
    assert np.allclose(field.n[:, 0], 0.0)
    assert np.allclose(field.n[:, 1], math.sin(2 * theta) * np.sin(xi.grid) / kappa)


def test_noncanonical_eom_eigenvalues():
    theta = 3 * math.pi / 8
    xi = momentum.xi_deformed("noncanonical", theta, 0.0, 256)
    coupling = np.abs(math.cos(2 * theta) * np.cos(xi.grid))
    expected = np.stack([1.0 - coupling, np.ones_like(coupling), np.ones_like(coupling), 1.0 + coupling], axis=1)
    eigenvalues = np.linalg.eigvalsh(momentum.momentum_eom_matrix(xi))
    assert np.allclose(eigenvalues, expected, atol=1e-12)
    assert np.allclose(np.sort(momentum.momentum_damping(xi), axis=1), expected, atol=1e-12)


@pytest.mark.parametrize("kind", ["canonical", "noncanonical"])
@pytest.mark.parametrize("theta", [math.pi / 8, math.pi / 4, 3 * math.pi / 8])
def test_deformed_wires_wind_once(kind, theta):
    result = _winding(kind, theta)
    assert abs(result.nu) == 1
    assert set(result.methods) == {"angle", "line_integral", "q_trace"}
    for value in result.methods.values():
        assert value == pytest.approx(result.raw, abs=1e-6)
    assert result.min_purity > 0.5


def test_constant_field_has_zero_winding():
    field = BlochField.from_vectors(np.tile([0.0, 0.0, -1.0], (64, 1)))
    with pytest.raises(NotChiralError):
        momentum.chiral_axis(field)
    result = momentum.winding_number(field, ChiralAxis([1.0, 0.0, 0.0]))
    assert result.nu == 0
    assert result.raw == pytest.approx(0.0, abs=1e-12)


def test_vanishing_bloch_vector_makes_winding_undefined():
    vectors = np.tile([0.0, 1.0, 0.0], (16, 1))
    vectors[3] = 0.0
    with pytest.raises(InvariantUndefinedError):
        momentum.winding_number(BlochField.from_vectors(vectors), ChiralAxis([1.0, 0.0, 0.0]))


def test_zero_field_has_no_chiral_axis():
    with pytest.raises(NotChiralError) as excinfo:
        momentum.chiral_axis(BlochField.from_vectors(np.zeros((16, 3))))
    assert excinfo.value.reason == "zero field"


def test_noncanonical_half_angle_is_not_chiral():
    field = momentum.steady_bloch(momentum.xi_deformed("noncanonical", math.pi / 2, 0.0, 256))
    with pytest.raises(NotChiralError) as excinfo:
        momentum.chiral_axis(field)
    assert excinfo.value.reason == "axis not unique"


def test_canonical_filling_near_vacuum():
    theta = 0.01
    field = momentum.steady_bloch(momentum.xi_deformed("canonical", theta, 0.0, 4096))
    value, per_k = momentum.filling(field)
    expected = math.cos(theta) / (math.cos(theta) + math.sin(theta))
    assert value == pytest.approx(expected, abs=1e-3)
    assert per_k.shape == (4096,)


@pytest.mark.parametrize("step", range(1, 8))
def test_noncanonical_filling_is_half(step):
    field = momentum.steady_bloch(momentum.xi_deformed("noncanonical", step * math.pi / 8, 0.0, 256))
    value, _per_k = momentum.filling(field)
    assert value == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("delta", [math.pi / 64, math.pi / 8, math.pi / 4])
def test_noncanonical_reflection_about_half_angle(delta):
    below = momentum.steady_bloch(momentum.xi_deformed("noncanonical", math.pi / 2 - delta, 0.0, 128))
    above = momentum.steady_bloch(momentum.xi_deformed("noncanonical", math.pi / 2 + delta, 0.0, 128))
    assert np.allclose(below.n, above.n * np.array([1.0, 1.0, -1.0]), atol=1e-9)


def test_imperfect_pairing_stays_chiral():
    xi = momentum.xi_deformed("imperfect", 0.0, 0.0, 1024, epsilon=0.1)
    field = momentum.steady_bloch(xi)
    axis = momentum.chiral_axis(field)
    assert axis.max_violation < 1e-9
    assert np.allclose(axis.a, [1.0, 0.0, 0.0])
    assert abs(momentum.winding_number(field, axis).nu) == 1


def test_quasi_canonical_condition():
    assert momentum.is_quasi_canonical(momentum.xi_deformed("canonical", 0.7, 0.4, 64))
    assert momentum.is_quasi_canonical(momentum.xi_deformed("noncanonical", math.pi / 4, 0.0, 64))
    assert not momentum.is_quasi_canonical(momentum.xi_deformed("noncanonical", 3 * math.pi / 8, 0.0, 64))


@pytest.mark.parametrize("kind", ["canonical", "noncanonical"])
def test_steady_states_are_current_free(kind):
    xi = momentum.xi_deformed(kind, 3 * math.pi / 8, 0.0, 64)
    assert momentum.current_free(xi)
    steady = momentum.steady_momentum_state(xi)
    assert steady.redundancy_residual() < 1e-12
    assert np.allclose(momentum.bloch_field_from_state(xi, steady).n, momentum.steady_bloch(xi).n)


def test_noncanonical_model_vectors():
    theta = 3 * math.pi / 8
    model = momentum.momentum_model(momentum.xi_deformed("noncanonical", theta, 0.0, 64))
    assert np.allclose(model.kappa, 1.0)
    assert np.allclose(model.m_anti[:, 1], math.cos(2 * theta) * np.cos(model.grid))
    assert np.allclose(model.m_anti[:, 2:], 0.0)


def test_rk4_matches_closed_form():
    xi = momentum.xi_deformed("noncanonical", 3 * math.pi / 8, 0.0, 64)
    start = momentum.momentum_model(xi)
    evolved = momentum.momentum_evolve(xi, start, total_time=3.0, dt=0.02)
    exact = momentum.momentum_closed_form(start, 3.0)
    assert np.allclose(evolved.state, exact.state, atol=1e-8)


def test_closed_form_relaxes_to_steady_state():
    xi = momentum.xi_deformed("canonical", 0.4, 0.0, 32)
    late = momentum.momentum_closed_form(momentum.momentum_model(xi), 200.0)
    assert np.allclose(late.state, momentum.steady_momentum_state(xi).state, atol=1e-10)


def test_momentum_step_size_guard():
    xi = momentum.xi_deformed("canonical", 0.4, 0.0, 32)
    with pytest.raises(StepSizeError):
        momentum.momentum_evolve(xi, None, total_time=1.0, dt=0.1)


def test_xi_rejects_unknown_kind_and_grid():
    with pytest.raises(ConfigError):
        momentum.xi_deformed("bogus", 0.3, 0.0, 64)
    with pytest.raises(DimensionError):
        momentum.xi_deformed("canonical", 0.3, 0.0, 6)


def test_undamped_mode_is_inconsistent():
    grid = brillouin_grid(16)
    xi = BogoliubovFunction(grid, np.zeros(16), np.zeros(16))
    with pytest.raises(InconsistentModelError):
        momentum.steady_bloch(xi)


@pytest.mark.parametrize("kind", ["canonical", "noncanonical"])
def test_winding_is_stable_under_grid_refinement(kind):
    coarse = _winding(kind, 3 * math.pi / 8, size=256)
    fine = _winding(kind, 3 * math.pi / 8, size=512)
    assert coarse.nu == fine.nu
    assert abs(fine.nu) == 1


@pytest.mark.parametrize("theta", [math.pi / 8, 0.3, 3 * math.pi / 8])
def test_canonical_eom_eigenvalues(theta):
    xi = momentum.xi_deformed("canonical", theta, 0.0, 128)
    expected = 1.0 + math.cos(2 * theta) * np.cos(xi.grid)
    eigenvalues = np.linalg.eigvalsh(momentum.momentum_eom_matrix(xi))
    assert np.allclose(eigenvalues, np.repeat(expected[:, None], 4, axis=1), atol=1e-12)


@pytest.mark.parametrize("kind", ["canonical", "noncanonical"])
def test_steady_momentum_state_is_stationary(kind):
    xi = momentum.xi_deformed(kind, 3 * math.pi / 8, 0.0, 64)
    steady = momentum.steady_momentum_state(xi)
    evolved = momentum.momentum_evolve(xi, steady, total_time=5.0, dt=0.02)
    assert np.allclose(evolved.state, steady.state, atol=1e-12)


@pytest.mark.parametrize("total_time", [0.5, 1.0, 2.0])
def test_quarter_angle_relaxes_at_unit_rate(total_time):
    xi = momentum.xi_deformed("canonical", math.pi / 4, 0.0, 64)
    steady = momentum.steady_momentum_state(xi)
    evolved = momentum.momentum_evolve(xi, None, total_time=total_time, dt=0.01)
    assert np.allclose(evolved.state, (1.0 - math.exp(-total_time)) * steady.state, atol=1e-9)


@pytest.mark.parametrize("kind, epsilon", [("canonical", 0.0), ("imperfect", 0.1)])
@pytest.mark.parametrize("phi", [0.3, 0.7, 1.2])
def test_chiral_axis_follows_gauge_phase(kind, epsilon, phi):
    xi = momentum.xi_deformed(kind, 3 * math.pi / 8, phi, 512, epsilon=epsilon)
    field = momentum.steady_bloch(xi)
    axis = momentum.chiral_axis(field)
    assert np.allclose(axis.a, [math.cos(phi), -math.sin(phi), 0.0], atol=1e-9)
    assert abs(momentum.winding_number(field, axis).nu) == 1
