import dataclasses
import time
from dataclasses import dataclass
from typing import Any, Dict
import numpy as np
from utils import logger
from config import ScenarioConfig
from scripts import SystemModel, build_model, init_state, integrate, rhs, state_from_vector, state_to_vector
from .dense import dense_hamiltonian, propagate_dense, energy

# Structured and dense propagation must agree to this after the comparison run
ORACLE_AGREEMENT = 1e-8


@dataclass(frozen=True)
class OracleReport:
    n_k: int
    n_w: int
    t: float
    dt: float
    max_deviation: float
    identity_deviation: float
    round_trip_deviation: float
    hermiticity_error: float
    rhs_relative_error: float
    dense_norm_deviation: float
    energy_drift: float
    elapsed: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < ORACLE_AGREEMENT

    def to_dict(self) -> Dict[str, Any]:
        report = dataclasses.asdict(self)
        report["passed"] = self.passed
        return report


def oracle_model(n_k: int, n_w: int) -> SystemModel:
    """
    Small instance exercising every coupling: Gaussian kernel, displaced atom, strong detector.

    Grids span [0, 2] so the default response bandwidth still covers several modes.
    """
    config = ScenarioConfig(
        name=model_name(n_k, n_w),
        n_k=n_k,
        n_w=n_w,
        gamma_free=0.05,
        eta_peak=0.5,
        kernel_kind="gaussian",
        kernel_amplitude=0.5,
        kernel_width=0.6,
        x_d=1.5,
    )
    return build_model(config)


def oracle_check(n_k: int = 4, n_w: int = 3, t: float = 10.0, dt: float = 0.001,
                 n_random: int = 100, seed: int = 7) -> OracleReport:
    """
    Compare the structured right-hand side and RK4 integration with the dense propagator.

    Args:
        n_k: Photon modes of the test instance
        n_w: Detector frequency modes of the test instance
        t: Comparison time
        dt: Integrator step
        n_random: Random states used for the right-hand-side comparison
        seed: Random generator seed

    Returns:
        OracleReport; passed when the amplitude deviation at t is below 1e-8

    Raises:
        OracleError: if the instance is too large for the dense oracle
    """
    started = time.perf_counter()
    model = oracle_model(n_k, n_w)
    hamiltonian = dense_hamiltonian(model)
    matrix = hamiltonian.matrix
    rng = np.random.default_rng(seed)

    worst_rhs = 0.0
    for _ in range(n_random):
        psi = rng.normal(size=model.dimension) + 1j * rng.normal(size=model.dimension)
        structured = state_to_vector(rhs(state_from_vector(psi, model), model))
        dense = -1j * (matrix @ psi)
        worst_rhs = max(worst_rhs, float(np.linalg.norm(structured - dense) / np.linalg.norm(dense)))

    state0 = init_state(model)
    psi0 = state_to_vector(state0)
    at_zero = propagate_dense(model, 0.0, state0, hamiltonian)
    forward = propagate_dense(model, t, state0, hamiltonian)
    back = propagate_dense(model, -t, forward, hamiltonian)
    psi_t = state_to_vector(forward)

    trajectory = integrate(model, t, dt, sample_stride=max(1, int(round(0.1 * t / dt))),
                           scenario=model_name(n_k, n_w))
    structured_t = state_to_vector(trajectory.final_state)
    energies = [energy(state, hamiltonian) for state in trajectory.states]

    report = OracleReport(
        n_k=n_k,
        n_w=n_w,
        t=float(t),
        dt=float(dt),
        max_deviation=float(np.max(np.abs(structured_t - psi_t))),
        identity_deviation=float(np.max(np.abs(state_to_vector(at_zero) - psi0))),
        round_trip_deviation=float(np.max(np.abs(state_to_vector(back) - psi0))),
        hermiticity_error=float(np.max(np.abs(matrix - matrix.conj().T))),
        rhs_relative_error=worst_rhs,
        dense_norm_deviation=float(abs(np.vdot(psi_t, psi_t).real - 1.0)),
        energy_drift=float(np.ptp(energies)),
        elapsed=time.perf_counter() - started,
    )
    level = logger.info if report.passed else logger.error
    level(f"Oracle check {n_k}x{n_w} at t = {t:g}: max amplitude deviation {report.max_deviation:.3e} "
          f"({'pass' if report.passed else 'FAIL'})")
    return report


def model_name(n_k: int, n_w: int) -> str:
    return f"oracle-{n_k}x{n_w}"
