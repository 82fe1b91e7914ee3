"""
Dense-matrix reference for small models.

The Hamiltonian is materialized in the state-vector basis used by the
integrator (atom, photon modes, detector quanta k-major) and propagated
exactly through its eigendecomposition.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple
import numpy as np
import scipy.linalg as la
from utils import logger, OracleError
from constants import ORACLE_MAX_DIMENSION
from scripts import SystemModel, SystemState, state_to_vector, state_from_vector


@dataclass(frozen=True)
class DenseHamiltonian:
    matrix: np.ndarray = field(repr=False, compare=False)
    n_k: int
    n_w: int

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigensystem(self) -> Tuple[np.ndarray, np.ndarray]:
        """Real eigenvalues and unitary eigenvector matrix."""
        try:
            values, vectors = la.eigh(self.matrix)
        except (la.LinAlgError, ValueError) as e:
            raise OracleError(f"Eigendecomposition of the {self.dimension}-dimensional Hamiltonian failed: {e}") from e
        return values, vectors


def dense_hamiltonian(model: SystemModel) -> DenseHamiltonian:
    """
    Materialize H so that i dpsi/dt = H psi reproduces the structured equations of motion.

    Args:
        model: Model with 1 + n_k + n_k*n_w <= 5000

    Returns:
        DenseHamiltonian, Hermitian to rounding

    Raises:
        OracleError: if the model is too large for a dense matrix
    """
    dimension = model.dimension
    if dimension > ORACLE_MAX_DIMENSION:
        raise OracleError(
            f"Model dimension {dimension} exceeds the dense oracle limit {ORACLE_MAX_DIMENSION}"
        )
    n_k, n_w = model.shape
    photon = slice(1, 1 + n_k)

    matrix = np.diag(model.diagonal.astype(complex))
    matrix[0, photon] = np.conj(model.coupling.xi)
    matrix[photon, 0] = model.coupling.xi

    # b_k couples to every c_{k', omega} with M(k, k')
    detector_block = np.repeat(model.detector_coupling, n_w, axis=1)
    matrix[photon, 1 + n_k:] = detector_block
    matrix[1 + n_k:, photon] = detector_block.T

    matrix = 0.5 * (matrix + matrix.conj().T)
    logger.debug(f"Dense Hamiltonian of dimension {dimension}")
    return DenseHamiltonian(matrix=matrix, n_k=n_k, n_w=n_w)


def propagate_dense(model: SystemModel, t: float, state0: SystemState,
                    hamiltonian: Optional[DenseHamiltonian] = None) -> SystemState:
    """
    Exact propagation psi(t0 + t) = V exp(-i E t) V^dagger psi(t0).

    Args:
        model: Model the state belongs to
        t: Propagation time (may be negative)
        state0: Starting state
        hamiltonian: Reuse a prebuilt dense Hamiltonian of model

    Returns:
        The propagated state, stamped with time state0.t + t

    Raises:
        OracleError: on an oversized model or a failed eigendecomposition
    """
    hamiltonian = dense_hamiltonian(model) if hamiltonian is None else hamiltonian
    values, vectors = hamiltonian.eigensystem
    coefficients = vectors.conj().T @ state_to_vector(state0).astype(complex)
    psi = vectors @ (np.exp(-1j * values * t) * coefficients)
    return state_from_vector(psi, model, state0.t + t)


def energy(state: SystemState, hamiltonian: DenseHamiltonian) -> float:
    """Expectation value <psi|H|psi>."""
    psi = state_to_vector(state).astype(complex)
    return float(np.vdot(psi, hamiltonian.matrix @ psi).real)
