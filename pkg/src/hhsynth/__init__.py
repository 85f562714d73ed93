"""Quantum circuit synthesis from unitary matrices via Householder reflections."""

from .circuit import Gate, GateCounts, GateKind, QuantumCircuit, export_qasm, gate_counts, inverse, parse_qasm, to_qasm
from .errors import (
    NotUnitaryError,
    NumericalError,
    PreconditionError,
    ShapeError,
    SizeError,
    StructureError,
    VerificationError,
)
from .linalg import frobenius_distance, haar_random_unitary, is_unitary
from .pipeline import SynthesisOptions, SynthesisReport, predicted_gate_counts, synthesize_unitary
from .qr import FlopCounter, factorize_blocked, factorize_generic_qr, factorize_unblocked
from .simulator import circuit_to_matrix, verify_synthesis

__version__ = "0.1.0"

__all__ = [
    "FlopCounter",
    "Gate",
    "GateCounts",
    "GateKind",
    "NotUnitaryError",
    "NumericalError",
    "PreconditionError",
    "QuantumCircuit",
    "ShapeError",
    "SizeError",
    "StructureError",
    "SynthesisOptions",
    "SynthesisReport",
    "VerificationError",
    "circuit_to_matrix",
    "export_qasm",
    "factorize_blocked",
    "factorize_generic_qr",
    "factorize_unblocked",
    "frobenius_distance",
    "gate_counts",
    "haar_random_unitary",
    "inverse",
    "is_unitary",
    "predicted_gate_counts",
    "parse_qasm",
    "synthesize_unitary",
    "to_qasm",
    "verify_synthesis",
]
