"""daqc: compiler and noisy simulator for digital-analog quantum computing.

Synthesises target spin-Hamiltonian evolutions and standard algorithms
(QFT, QPE, HHL, QAOA) into schedules of analog entangling blocks interleaved
with single-qubit rotations, simulates them under realistic noise, and
compares digital, stepwise, and banged digital-analog execution.
"""

__version__ = "0.1.0"

from .core import (
    PauliString,
    PauliHamiltonian,
    QuantumState,
    pauli_matrix,
    propagator,
    fidelity,
    frobenius_norm,
    spectral_norm,
    commutator_i,
)

__all__ = [
    "__version__",
    "PauliString",
    "PauliHamiltonian",
    "QuantumState",
    "pauli_matrix",
    "propagator",
    "fidelity",
    "frobenius_norm",
    "spectral_norm",
    "commutator_i",
]
