from .dense import DenseHamiltonian, dense_hamiltonian, propagate_dense, energy
from .check import OracleReport, oracle_model, oracle_check
