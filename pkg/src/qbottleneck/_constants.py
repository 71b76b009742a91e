"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-9
    reconstruction: float = 1e-10
    unitary: float = 1e-9
    trace: float = 1e-9
    norm: float = 1e-9
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    pauli_prune: float = 1e-14
    entropy_eig_floor: float = 1e-12
    psd_floor: float = -1e-10
    routing_leak: float = 1e-8
    phase: float = 1e-8
    correlation_slack: float = 1e-9
    witness: float = 1e-9
    sie_step: float = 1e-5
    sie_slack: float = 1e-4
    max_dense_qubits: int = 12
    max_trotter_qubits: int = 10


TOL = Tolerances()
