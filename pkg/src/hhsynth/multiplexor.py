"""Rotation multiplexors, diagonal operators and state preparation.

A rotation multiplexor with controls (c_0, ..., c_{k-1}) applies R(angles[s])
to its target when the controls hold the bitstring s, with c_0 as the most
significant bit of s.  It is lowered to 2^k rotations interleaved with 2^k
CNOTs whose controls follow the reflected Gray code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .circuit import KIND_DTYPE, QUBIT_DTYPE, GateKind, QuantumCircuit
from .errors import PreconditionError, ShapeError, StructureError

_AXES = {"Y": GateKind.RY, "Z": GateKind.RZ}


def _log2_exact(m):
    if m < 1 or m & (m - 1):
        raise ShapeError(f"length {m} is not a power of two")
    return m.bit_length() - 1


@dataclass
class RotationMultiplexor:
    axis: str
    target: int
    controls: tuple
    angles: np.ndarray

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValueError(f"axis must be 'Y' or 'Z', got {self.axis!r}")
        self.controls = tuple(int(q) for q in self.controls)
        self.angles = np.asarray(self.angles, dtype=np.float64)
        if self.angles.shape != (2 ** len(self.controls),):
            raise ShapeError(f"{len(self.controls)} controls need {2 ** len(self.controls)} angles")
        if self.target in self.controls or len(set(self.controls)) != len(self.controls):
            raise ValueError("target and controls must be distinct qubits")


@dataclass
class DiagonalPhases:
    phases: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        self.phases = np.asarray(self.phases, dtype=np.float64)
        if self.phases.ndim != 1:
            raise ShapeError("phases must be a vector")
        self.n_qubits = _log2_exact(len(self.phases))


def gray_code(j):
    return j ^ (j >> 1)


def walsh_hadamard(x):
    """Unnormalized Walsh-Hadamard transform: y[a] = sum_s (-1)^popcount(a & s) x[s]."""
    y = np.array(x, dtype=np.float64)
    m = len(y)
    _log2_exact(m)
    h = 1
    while h < m:
        v = y.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = a - v[:, 1, :]
        h *= 2
    return y


def multiplexor_angles_to_circuit_angles(angles):
    """Rotation angles for the Gray-code cascade realizing a multiplexor.

    The cascade applies angle t[j] at step j with the target's rotation sign
    flipped by every control bit set in gray(j), so
    angles[s] = sum_j (-1)^popcount(s & gray(j)) t[j]; this inverts that map.
    """
    angles = np.asarray(angles, dtype=np.float64)
    m = len(angles)
    _log2_exact(m)
    g = gray_code(np.arange(m))
    return walsh_hadamard(angles)[g] / m


def circuit_angles_to_multiplexor_angles(circuit_angles):
    t = np.asarray(circuit_angles, dtype=np.float64)
    m = len(t)
    _log2_exact(m)
    y = np.empty(m)
    y[gray_code(np.arange(m))] = t
    return walsh_hadamard(y)


def _cnot_controls(controls):
    """Control qubit of each CNOT in the Gray-code cascade."""
    k = len(controls)
    m = 2**k
    j = np.arange(1, m + 1)
    # bit flipped between gray(j-1) and gray(j) is the lowest set bit of j;
    # the wrap-around step flips the top bit.
    low = (j & -j)
    pos = np.log2(low).astype(np.int64)
    pos[-1] = k - 1
    return np.asarray(controls, dtype=np.int64)[k - 1 - pos]


def decompose_rotation_multiplexor(m, n_qubits=None):
    """Lower ``m`` to exactly 2^c rotations and 2^c CNOTs (one rotation if c = 0)."""
    if n_qubits is None:
        n_qubits = max((m.target,) + m.controls) + 1
    kind = _AXES[m.axis]
    t = multiplexor_angles_to_circuit_angles(m.angles)
    c = len(m.controls)
    if c == 0:
        return QuantumCircuit.from_arrays(n_qubits, [kind], [m.target], [-1], t)
    size = 2 * len(t)
    kinds = np.empty(size, KIND_DTYPE)
    kinds[0::2] = kind
    kinds[1::2] = GateKind.CNOT
    controls = np.full(size, -1, QUBIT_DTYPE)
    controls[1::2] = _cnot_controls(m.controls)
    angles = np.zeros(size)
    angles[0::2] = t
    return QuantumCircuit.from_arrays(n_qubits, kinds, np.full(size, m.target, QUBIT_DTYPE),
                                      controls, angles)


def synthesize_diagonal(d, qubits=None, n_qubits=None, prune=0.0):
    """Circuit equal to diag(e^{i phases}) on ``qubits``, global phase included.

    Each level peels the last qubit with an RZ multiplexor whose angles are
    the phase differences of sibling pairs; their mean is passed up.  A
    multiplexor whose angles all satisfy |a| <= ``prune`` is dropped, so with
    the default only exact identities vanish.
    """
    if not isinstance(d, DiagonalPhases):
        d = DiagonalPhases(d)
    k = d.n_qubits
    qubits = list(range(k)) if qubits is None else [int(q) for q in qubits]
    if len(qubits) != k:
        raise ShapeError(f"{k}-qubit diagonal given {len(qubits)} qubits")
    if n_qubits is None:
        n_qubits = max(qubits) + 1 if qubits else 1
    phases = d.phases
    parts = []
    for level in range(k):
        pairs = phases.reshape(-1, 2)
        diff = pairs[:, 1] - pairs[:, 0]
        phases = 0.5 * (pairs[:, 0] + pairs[:, 1])
        if np.max(np.abs(diff)) > prune:
            j = k - 1 - level
            mux = RotationMultiplexor("Z", qubits[j], qubits[:j], diff)
            parts.append(decompose_rotation_multiplexor(mux, n_qubits))
    # the widest multiplexor is applied first; they all commute anyway
    return QuantumCircuit.concat(n_qubits, parts[::-1], global_phase=float(phases[0]) if k else 0.0)


def _check_unit(norm, what):
    if abs(norm - 1.0) > 1e-10:
        raise PreconditionError(f"{what} must have unit norm, got {norm!r}")


def prepare_real_state(amplitudes, qubits=None, n_qubits=None, prune=0.0):
    """RY cascade mapping |0...0> to the nonnegative unit vector ``amplitudes``.

    Qubit j of the cascade gets a multiplexor with j controls whose angle
    for prefix s splits the weight of s between its two children.
    """
    a = np.asarray(amplitudes, dtype=np.float64)
    k = _log2_exact(len(a))
    if np.any(a < 0):
        raise PreconditionError("amplitudes must be nonnegative")
    _check_unit(float(np.linalg.norm(a)), "amplitude vector")
    qubits = list(range(k)) if qubits is None else [int(q) for q in qubits]
    if len(qubits) != k:
        raise ShapeError(f"{k}-qubit state given {len(qubits)} qubits")
    if n_qubits is None:
        n_qubits = max(qubits) + 1 if qubits else 1
    parts = []
    for j in range(k):
        halves = np.linalg.norm(a.reshape(2**j, 2, -1), axis=2)
        angles = 2.0 * np.arctan2(halves[:, 1], halves[:, 0])
        if np.max(np.abs(angles)) > prune:
            mux = RotationMultiplexor("Y", qubits[j], qubits[:j], angles)
            parts.append(decompose_rotation_multiplexor(mux, n_qubits))
    return QuantumCircuit.concat(n_qubits, parts)


def _args(v):
    """Phase of each entry, with arg(0) taken as 0."""
    ph = np.angle(v)
    ph[v == 0] = 0.0
    return ph


def prepare_state(v, qubits=None, n_qubits=None, prune=0.0):
    """Split the preparation of ``v`` into a real RY cascade and a phase diagonal.

    Returns ``(y, d)``: running ``y`` then ``diag(e^{i d.phases})`` maps
    |0...0> to ``v``.
    """
    v = np.asarray(v, dtype=np.complex128)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise PreconditionError("cannot prepare the zero vector")
    _check_unit(norm, "state")
    mag = np.abs(v)
    y = prepare_real_state(mag / np.linalg.norm(mag), qubits, n_qubits, prune)
    return y, DiagonalPhases(_args(v))


class Preparation(NamedTuple):
    x_qubits: list
    y: QuantumCircuit
    d: DiagonalPhases


def active_qubits(dim, first_nonzero):
    """Smallest m >= 1 with 2^m >= dim - first_nonzero."""
    return max(1, (dim - first_nonzero - 1).bit_length())


def padded_prepare(u, n_active=None, zero_tol=1e-12):
    """Prepare a vector whose support lies in its last 2^m entries.

    X gates on qubits 0..n-m-1 select the block, and the preparation of the
    trailing 2^m entries runs on the last m qubits.  ``n_active`` fixes m;
    by default it is the smallest width covering every entry above 1e-14.
    Returns ``Preparation(x_qubits, y, d)`` with ``d`` acting on the last m
    qubits.
    """
    u = np.asarray(u, dtype=np.complex128)
    dim = len(u)
    n = _log2_exact(dim)
    if n < 1:
        raise ShapeError("need at least one qubit")
    if n_active is None:
        nz = np.flatnonzero(np.abs(u) > 1e-14)
        if len(nz) == 0:
            raise PreconditionError("cannot prepare the zero vector")
        n_active = active_qubits(dim, int(nz[0]))
    m = int(n_active)
    if not 1 <= m <= n:
        raise ValueError(f"active width {m} out of range for {n} qubits")
    head = u[: dim - 2**m]
    if head.size and np.max(np.abs(head)) > zero_tol:
        raise StructureError(f"entries before the last {2**m} are not zero")
    y, d = prepare_state(u[dim - 2**m:], qubits=range(n - m, n), n_qubits=n)
    return Preparation(list(range(n - m)), y, d)


def x_layer(qubits, n_qubits):
    qubits = np.asarray(list(qubits), dtype=QUBIT_DTYPE)
    return QuantumCircuit.from_arrays(n_qubits, np.full(len(qubits), GateKind.X, KIND_DTYPE),
                                      qubits, np.full(len(qubits), -1, QUBIT_DTYPE),
                                      np.zeros(len(qubits)))

