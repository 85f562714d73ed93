"""Independent reference implementations used by the tests.

Everything here is deliberately naive: dense Kronecker products, explicit
loops over basis states and explicit reflector matrices.  None of it shares
code with the package beyond the data containers.
"""

import functools

import numpy as np

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

KIND_NAMES = {0: "RX", 1: "RY", 2: "RZ", 3: "PHASE", 4: "X", 5: "CNOT"}


def kron(*ms):
    return functools.reduce(np.kron, ms)


def rot(pauli, angle):
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * pauli


def one_qubit(kind, angle):
    name = KIND_NAMES[int(kind)]
    if name == "RX":
        return rot(PX, angle)
    if name == "RY":
        return rot(PY, angle)
    if name == "RZ":
        return rot(PZ, angle)
    if name == "PHASE":
        return np.diag([1, np.exp(1j * angle)])
    if name == "X":
        return PX
    raise ValueError(name)


def on_qubit(g, q, n):
    return kron(np.eye(2**q), g, np.eye(2 ** (n - q - 1)))


def cnot_full(control, target, n):
    p0 = np.diag([1, 0]).astype(complex)
    p1 = np.diag([0, 1]).astype(complex)
    a = [I2] * n
    b = [I2] * n
    a[control] = p0
    b[control] = p1
    b[target] = PX
    return kron(*a) + kron(*b)


def gate_full(g, n):
    if KIND_NAMES[int(g.kind)] == "CNOT":
        return cnot_full(g.control, g.target, n)
    return on_qubit(one_qubit(g.kind, g.angle), g.target, n)


def dense_circuit_matrix(c):
    m = np.eye(2**c.n_qubits, dtype=complex)
    for g in c:
        m = gate_full(g, c.n_qubits) @ m
    return np.exp(1j * c.global_phase) * m


def multiplexor_matrix(axis, target, controls, angles, n):
    """Block operator: R(angles[s]) on target when the controls read s (controls[0] = MSB)."""
    pauli = {"Y": PY, "Z": PZ}[axis]
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        s = 0
        for q in controls:
            s = 2 * s + bits[q]
        r = rot(pauli, angles[s])
        t = bits[target]
        for out in (0, 1):
            row = col ^ ((t ^ out) << (n - 1 - target))
            m[row, col] += r[out, t]
    return m


def sequential_householder(a):
    """Dense reflector-by-reflector QR of a unitary matrix.

    Returns (vectors, taus, r_rows, r_diag): vectors[k] is the full-length
    u_k with u_k[k] = 1, r_rows[k] is row k of the partially reduced matrix
    just before H_k is applied, r_diag the final diagonal of R.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    vectors, taus, rows = [], [], []
    for k in range(n - 1):
        b = a[k:, k]
        theta = np.angle(b[0]) if b[0] != 0 else 0.0
        u = b.copy()
        u[0] += np.exp(1j * theta) * np.linalg.norm(b)
        u /= u[0]
        tau = 2 / np.vdot(u, u).real
        full = np.zeros(n, dtype=complex)
        full[k:] = u
        rows.append(a[k].copy())
        h = np.eye(n) - tau * np.outer(full, full.conj())
        a = h @ a
        vectors.append(full)
        taus.append(tau)
    return vectors, np.array(taus), rows, np.diagonal(a).copy(), a


def basis(n, index):
    v = np.zeros(2**n, dtype=complex)
    v[index] = 1
    return v
