"""
Tests for the dense-matrix oracle and its agreement with the structured integrator.
"""
import sys
import math
from pathlib import Path
import numpy as np
import pytest

# Add the parent directory to sys.path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import ScenarioConfig
from scripts import build_model, init_state, integrate, norm, state_to_vector, state_from_vector
from oracle import dense_hamiltonian, propagate_dense, energy, oracle_model, oracle_check
from utils import OracleError


@pytest.fixture(scope="module")
def model():
    return oracle_model(4, 3)


@pytest.fixture(scope="module")
def hamiltonian(model):
    return dense_hamiltonian(model)


@pytest.fixture(scope="module")
def report():
    return oracle_check(4, 3, t=10.0, dt=0.001)


def test_smallest_instance():
    model = build_model(ScenarioConfig(n_k=1, n_w=1))
    matrix = dense_hamiltonian(model).matrix
    assert matrix.shape == (3, 3)
    assert np.allclose(np.diag(matrix).real, [1.0, 1.0, 1.0])
    assert matrix[0, 1] == pytest.approx(math.sqrt(0.02 * 2.0 / (2 * math.pi)))
    # eta_k at the line centre, with the factor 10 and the detector spacing 2
    assert matrix[1, 2] == pytest.approx(math.sqrt(10.0 * 0.2 / (2 * math.pi) * 2.0))
    assert matrix[0, 2] == 0.0


def test_hamiltonian_is_hermitian(hamiltonian):
    matrix = hamiltonian.matrix
    assert np.max(np.abs(matrix - matrix.conj().T)) < 1e-14
    values, _ = hamiltonian.eigensystem
    assert np.isrealobj(values)


def test_dense_matches_structured_rhs(report):
    assert report.rhs_relative_error < 1e-12
    assert report.hermiticity_error < 1e-14


def test_propagate_identity_and_round_trip(model, hamiltonian):
    state0 = init_state(model)
    same = propagate_dense(model, 0.0, state0, hamiltonian)
    assert np.max(np.abs(state_to_vector(same) - state_to_vector(state0))) < 1e-12

    forward = propagate_dense(model, 10.0, state0, hamiltonian)
    back = propagate_dense(model, -10.0, forward, hamiltonian)
    assert np.max(np.abs(state_to_vector(back) - state_to_vector(state0))) < 1e-12
    assert back.t == pytest.approx(0.0)


def test_propagate_preserves_norm(model, hamiltonian):
    t_rec = 2 * math.pi / max(model.photon_grid.spacing, model.omega_grid.spacing)
    state = propagate_dense(model, 10 * t_rec, init_state(model), hamiltonian)
    assert abs(norm(state) - 1.0) < 1e-12


def test_propagate_composes(model, hamiltonian):
    rng = np.random.default_rng(11)
    psi = rng.normal(size=model.dimension) + 1j * rng.normal(size=model.dimension)
    state0 = state_from_vector(psi / np.linalg.norm(psi), model)
    two_steps = propagate_dense(model, 4.0, propagate_dense(model, 3.0, state0, hamiltonian), hamiltonian)
    one_step = propagate_dense(model, 7.0, state0, hamiltonian)
    assert np.max(np.abs(state_to_vector(two_steps) - state_to_vector(one_step))) < 1e-11


def test_integrator_matches_oracle(report):
    assert report.max_deviation < 1e-8
    assert report.passed
    assert report.identity_deviation < 1e-12
    assert report.round_trip_deviation < 1e-12
    assert report.dense_norm_deviation < 1e-12
    assert report.to_dict()["passed"] is True


def test_energy_is_conserved(model, hamiltonian):
    trajectory = integrate(model, 20.0, 0.005, sample_stride=400)
    energies = [energy(state, hamiltonian) for state in trajectory.states]
    assert energies[0] == pytest.approx(model.atom_frequency)
    assert np.ptp(energies) < 1e-8 * abs(energies[0])


def test_oracle_refuses_large_models():
    model = build_model(ScenarioConfig(n_k=100, n_w=100))
    with pytest.raises(OracleError):
        dense_hamiltonian(model)
