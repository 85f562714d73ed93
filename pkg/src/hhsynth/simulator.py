"""Statevector simulation used as the correctness oracle.

Gates are applied in place to a (2^n, B) block of B state vectors, walking
amplitude pairs by stride; no Kronecker products are formed.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .circuit import GateKind, QuantumCircuit
from .errors import ShapeError, SizeError
from .linalg import frobenius_distance, num_qubits

MAX_MATRIX_QUBITS = 10

_RX, _RY, _RZ, _PHASE, _X, _CNOT = (int(k) for k in GateKind)


@numba.njit(cache=True, nogil=True)
def _run(state, kinds, targets, controls, angles, n):
    dim, batch = state.shape
    half = dim // 2
    for g in range(kinds.shape[0]):
        k = kinds[g]
        shift = n - 1 - targets[g]
        stride = 1 << shift
        low = stride - 1
        a = angles[g]
        if k == _CNOT:
            cmask = 1 << (n - 1 - controls[g])
            for p in range(half):
                i = ((p >> shift) << (shift + 1)) | (p & low)
                if i & cmask:
                    j = i | stride
                    for b in range(batch):
                        t = state[i, b]
                        state[i, b] = state[j, b]
                        state[j, b] = t
            continue
        if k == _RZ or k == _PHASE:
            if k == _RZ:
                d0 = complex(math.cos(a / 2), -math.sin(a / 2))
                d1 = complex(math.cos(a / 2), math.sin(a / 2))
            else:
                d0 = 1.0 + 0.0j
                d1 = complex(math.cos(a), math.sin(a))
            for p in range(half):
                i = ((p >> shift) << (shift + 1)) | (p & low)
                j = i | stride
                for b in range(batch):
                    state[i, b] *= d0
                    state[j, b] *= d1
            continue
        if k == _X:
            m00 = 0.0j
            m01 = 1.0 + 0.0j
            m10 = 1.0 + 0.0j
            m11 = 0.0j
        elif k == _RX:
            c = math.cos(a / 2)
            s = math.sin(a / 2)
            m00 = complex(c, 0.0)
            m01 = complex(0.0, -s)
            m10 = complex(0.0, -s)
            m11 = complex(c, 0.0)
        else:
            c = math.cos(a / 2)
            s = math.sin(a / 2)
            m00 = complex(c, 0.0)
            m01 = complex(-s, 0.0)
            m10 = complex(s, 0.0)
            m11 = complex(c, 0.0)
        for p in range(half):
            i = ((p >> shift) << (shift + 1)) | (p & low)
            j = i | stride
            for b in range(batch):
                x0 = state[i, b]
                x1 = state[j, b]
                state[i, b] = m00 * x0 + m01 * x1
                state[j, b] = m10 * x0 + m11 * x1


def run_circuit(c, states):
    """Apply ``c`` (global phase included) to the columns of ``states`` in place.

    ``states`` must be a C-contiguous complex128 array of shape (2^n,) or
    (2^n, B).
    """
    if states.dtype != np.complex128 or not states.flags.c_contiguous:
        raise TypeError("states must be a C-contiguous complex128 array")
    block = states.reshape(states.shape[0], -1)
    if block.shape[0] != 2**c.n_qubits:
        raise ShapeError(f"state dimension {block.shape[0]} does not match {c.n_qubits} qubits")
    kinds, targets, controls, angles = c.arrays
    _run(block, kinds, targets, controls, angles, c.n_qubits)
    if c.global_phase:
        block *= complex(math.cos(c.global_phase), math.sin(c.global_phase))
    return states


def apply_gate(state, gate, n_qubits=None):
    """Return a new state vector with ``gate`` applied."""
    state = np.array(state, dtype=np.complex128)
    n = num_qubits(len(state)) if n_qubits is None else n_qubits
    return run_circuit(QuantumCircuit(n, [gate]), state)


def apply_circuit(c, state):
    return run_circuit(c, np.array(state, dtype=np.complex128))


def circuit_to_matrix(c, max_qubits=MAX_MATRIX_QUBITS):
    """Dense unitary of ``c``: column j is the circuit applied to basis state j."""
    if c.n_qubits > max_qubits:
        raise SizeError(f"{c.n_qubits} qubits exceeds the simulation guard of {max_qubits}")
    m = np.eye(2**c.n_qubits, dtype=np.complex128)
    return run_circuit(c, m)


def verify_synthesis(u, c, tol, max_qubits=MAX_MATRIX_QUBITS):
    """(ok, residual) with residual the Frobenius distance between ``c`` and ``u``."""
    u = np.asarray(u)
    if u.shape != (2**c.n_qubits,) * 2:
        raise ShapeError(f"matrix shape {u.shape} does not match a {c.n_qubits}-qubit circuit")
    residual = frobenius_distance(circuit_to_matrix(c, max_qubits), u)
    return residual <= tol, residual
