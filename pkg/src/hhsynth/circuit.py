"""Quantum circuit representation: gates, global phase, counts, QASM.

Gates are stored column-wise in numpy arrays (kind, target, control,
angle) because synthesized circuits reach tens of millions of gates.
Iterating over a circuit yields :class:`Gate` tuples.

Conventions: R_G(a) = cos(a/2) I - i sin(a/2) G, PHASE(a) = diag(1, e^{ia}),
qubit 0 is the most significant bit of a basis-state index, and the first
gate in the list is applied first.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import NamedTuple

import numpy as np

from .errors import NotUnitaryError


class GateKind(IntEnum):
    RX = 0
    RY = 1
    RZ = 2
    PHASE = 3
    X = 4
    CNOT = 5


ROTATION_KINDS = (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PHASE)

KIND_DTYPE = np.int8
QUBIT_DTYPE = np.int16


class Gate(NamedTuple):
    kind: GateKind
    target: int
    control: int = -1  # CNOT only
    angle: float = 0.0

    @classmethod
    def rx(cls, target, angle):
        return cls(GateKind.RX, target, -1, float(angle))

    @classmethod
    def ry(cls, target, angle):
        return cls(GateKind.RY, target, -1, float(angle))

    @classmethod
    def rz(cls, target, angle):
        return cls(GateKind.RZ, target, -1, float(angle))

    @classmethod
    def phase(cls, target, angle):
        return cls(GateKind.PHASE, target, -1, float(angle))

    @classmethod
    def x(cls, target):
        return cls(GateKind.X, target)

    @classmethod
    def cnot(cls, control, target):
        if control == target:
            raise ValueError("CNOT control and target must differ")
        return cls(GateKind.CNOT, target, control)

    def adjoint(self):
        if self.kind in ROTATION_KINDS:
            return self._replace(angle=-self.angle)
        return self


@dataclass
class GateCounts:
    cnot: int = 0
    rotation: int = 0
    x: int = 0

    @property
    def total(self):
        return self.cnot + self.rotation + self.x

    def as_dict(self):
        return {"cnot": self.cnot, "rotation": self.rotation, "x": self.x, "total": self.total}


def _empty_arrays():
    return (np.empty(0, KIND_DTYPE), np.empty(0, QUBIT_DTYPE),
            np.empty(0, QUBIT_DTYPE), np.empty(0, np.float64))


class QuantumCircuit:
    """Ordered gate list on ``n_qubits`` qubits with an explicit global phase.

    The circuit denotes ``e^{i global_phase} * G_m ... G_2 G_1`` where G_1 is
    the first gate appended.
    """

    def __init__(self, n_qubits, gates=(), global_phase=0.0):
        if n_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        self.n_qubits = int(n_qubits)
        self.global_phase = float(global_phase)
        self._chunks = []
        self._pending = []
        self._cache = None
        for g in gates:
            self.append(g)

    @classmethod
    def from_arrays(cls, n_qubits, kinds, targets, controls, angles, global_phase=0.0):
        c = cls(n_qubits, global_phase=global_phase)
        c._add_chunk(np.asarray(kinds, KIND_DTYPE), np.asarray(targets, QUBIT_DTYPE),
                     np.asarray(controls, QUBIT_DTYPE), np.asarray(angles, np.float64))
        return c

    @classmethod
    def concat(cls, n_qubits, circuits, global_phase=0.0):
        """One circuit running ``circuits`` in order; global phases add up."""
        out = cls(n_qubits, global_phase=global_phase)
        for c in circuits:
            out.extend(c)
        out._consolidate()
        return out

    # -- construction --------------------------------------------------------

    def _check(self, kinds, targets, controls):
        n = self.n_qubits
        if len(targets) and (targets.min() < 0 or targets.max() >= n):
            raise ValueError(f"target qubit out of range for {n} qubits")
        is_cx = kinds == GateKind.CNOT
        if np.any(is_cx):
            c = controls[is_cx]
            if c.min() < 0 or c.max() >= n:
                raise ValueError(f"control qubit out of range for {n} qubits")
            if np.any(c == targets[is_cx]):
                raise ValueError("CNOT control and target must differ")

    def _add_chunk(self, kinds, targets, controls, angles):
        if not (len(kinds) == len(targets) == len(controls) == len(angles)):
            raise ValueError("gate arrays must have equal length")
        self._check(kinds, targets, controls)
        if len(kinds):
            self._flush()
            self._chunks.append((kinds, targets, controls, angles))
            self._cache = None

    def append(self, gate):
        g = Gate(GateKind(gate.kind), int(gate.target), int(gate.control), float(gate.angle))
        if not 0 <= g.target < self.n_qubits:
            raise ValueError(f"target {g.target} out of range for {self.n_qubits} qubits")
        if g.kind == GateKind.CNOT:
            if not 0 <= g.control < self.n_qubits or g.control == g.target:
                raise ValueError(f"bad CNOT control {g.control}")
        self._pending.append(g)
        self._cache = None
        return self

    def extend(self, other):
        """Append every gate of ``other`` and add its global phase."""
        if isinstance(other, QuantumCircuit):
            if other.n_qubits > self.n_qubits:
                raise ValueError("cannot extend with a wider circuit")
            if len(other):
                self._flush()
                self._chunks.append(other.arrays)
                self._cache = None
            self.global_phase += other.global_phase
        else:
            for g in other:
                self.append(g)
        return self

    def _flush(self):
        if self._pending:
            p = self._pending
            self._pending = []
            self._chunks.append((np.array([g.kind for g in p], KIND_DTYPE),
                                 np.array([g.target for g in p], QUBIT_DTYPE),
                                 np.array([g.control for g in p], QUBIT_DTYPE),
                                 np.array([g.angle for g in p], np.float64)))

    def _consolidate(self):
        self._flush()
        if len(self._chunks) > 1:
            self._chunks = [tuple(np.concatenate(cols) for cols in zip(*self._chunks))]

    # -- access --------------------------------------------------------------

    @property
    def arrays(self):
        """(kinds, targets, controls, angles) as contiguous arrays."""
        if self._cache is None:
            self._consolidate()
            self._cache = self._chunks[0] if self._chunks else _empty_arrays()
        return self._cache

    def __len__(self):
        return sum(len(ch[0]) for ch in self._chunks) + len(self._pending)

    def __iter__(self):
        kinds, targets, controls, angles = self.arrays
        for k, t, c, a in zip(kinds.tolist(), targets.tolist(), controls.tolist(), angles.tolist()):
            yield Gate(GateKind(k), t, c, a)

    def __getitem__(self, i):
        kinds, targets, controls, angles = self.arrays
        return Gate(GateKind(int(kinds[i])), int(targets[i]), int(controls[i]), float(angles[i]))

    @property
    def gates(self):
        return list(self)

    def copy(self):
        return QuantumCircuit.from_arrays(self.n_qubits, *(a.copy() for a in self.arrays),
                                          global_phase=self.global_phase)

    def __repr__(self):
        return f"QuantumCircuit(n_qubits={self.n_qubits}, gates={len(self)}, global_phase={self.global_phase!r})"


def gate_counts(c):
    kinds = c.arrays[0]
    tally = np.bincount(kinds, minlength=len(GateKind))
    return GateCounts(cnot=int(tally[GateKind.CNOT]),
                      rotation=int(sum(tally[k] for k in ROTATION_KINDS)),
                      x=int(tally[GateKind.X]))


def inverse(c):
    """Adjoint circuit: reversed gate order, rotation angles and global phase negated."""
    kinds, targets, controls, angles = c.arrays
    return QuantumCircuit.from_arrays(c.n_qubits, kinds[::-1].copy(), targets[::-1].copy(),
                                      controls[::-1].copy(), -angles[::-1],
                                      global_phase=-c.global_phase)


def cancel_adjacent_x(c):
    """Remove pairs of X gates that are neighbours on their qubit's own timeline.

    Two X gates on qubit q cancel when no other gate acting on q (as target
    or control) sits between them; gates on other qubits do not matter.
    """
    kinds, targets, controls, angles = c.arrays
    keep = np.ones(len(kinds), dtype=bool)
    is_x = kinds == GateKind.X
    if not is_x.any():
        return c.copy()
    is_cx = kinds == GateKind.CNOT
    for q in np.unique(targets[is_x]):
        idx = np.flatnonzero((targets == q) | (is_cx & (controls == q)))
        xs = is_x[idx]
        # runs of consecutive X gates on this wire
        edges = np.diff(np.concatenate(([0], xs.astype(np.int8), [0])))
        starts = np.flatnonzero(edges == 1)
        stops = np.flatnonzero(edges == -1)
        for s, e in zip(starts, stops):
            paired = (e - s) // 2 * 2
            keep[idx[s:s + paired]] = False
    return QuantumCircuit.from_arrays(c.n_qubits, kinds[keep], targets[keep], controls[keep],
                                      angles[keep], global_phase=c.global_phase)


# -- one-qubit XZX decomposition ---------------------------------------------


def rx_matrix(a):
    return np.array([[math.cos(a / 2), -1j * math.sin(a / 2)],
                     [-1j * math.sin(a / 2), math.cos(a / 2)]])


def ry_matrix(a):
    return np.array([[math.cos(a / 2), -math.sin(a / 2)],
                     [math.sin(a / 2), math.cos(a / 2)]], dtype=np.complex128)


def rz_matrix(a):
    return np.diag([cmath.exp(-0.5j * a), cmath.exp(0.5j * a)])


def _wrap(a):
    """Map an angle into (-2pi, 2pi]; R_G has period 4pi so this is exact."""
    a = math.fmod(a, 4 * math.pi)
    if a > 2 * math.pi:
        a -= 4 * math.pi
    elif a <= -2 * math.pi:
        a += 4 * math.pi
    return a


def one_qubit_xzx(u, tol=1e-10):
    """Angles with ``u = e^{i phase} RX(alpha) RZ(beta) RX(gamma)``.

    Returns ``(alpha, beta, gamma, phase)``.  Works through the ZYZ form of
    H u H, using H RX(a) H = RZ(a) and RX(b) = RZ(-pi/2) RY(b) RZ(pi/2).
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > tol:
        raise NotUnitaryError("one_qubit_xzx needs a 2x2 unitary")
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    v = h @ u @ h
    phase = cmath.phase(np.linalg.det(v)) / 2
    w = v * cmath.exp(-1j * phase)  # in SU(2)
    beta = 2 * math.atan2(abs(w[1, 0]), abs(w[0, 0]))
    s = 2 * cmath.phase(w[1, 1]) if abs(w[1, 1]) > 1e-15 else 0.0   # a + c
    d = 2 * cmath.phase(w[1, 0]) if abs(w[1, 0]) > 1e-15 else 0.0   # a - c
    a, c = (s + d) / 2, (s - d) / 2
    alpha, gamma = a + math.pi / 2, c - math.pi / 2
    rec = rx_matrix(alpha) @ rz_matrix(beta) @ rx_matrix(gamma)
    if np.max(np.abs(cmath.exp(1j * phase) * rec - u)) > 1e-9:
        phase += math.pi
    if abs(beta) < 1e-15:
        # pure X rotation: fold everything into alpha
        alpha, beta, gamma = alpha + gamma, 0.0, 0.0
        if abs(alpha) < 1e-15:
            alpha = 0.0
    alpha, beta, gamma = _wrap(alpha), _wrap(beta), _wrap(gamma)
    phase = math.remainder(phase, 2 * math.pi)
    return alpha, beta, gamma, phase


# -- OpenQASM 2.0 ----------------------------------------------------------

_QASM_NAMES = {GateKind.RX: "rx", GateKind.RY: "ry", GateKind.RZ: "rz", GateKind.PHASE: "u1"}


def export_qasm(c, out):
    """Write ``c`` as OpenQASM 2.0 to the text stream ``out``.

    ``rz`` is meant as R_Z exactly; the global phase goes into a
    ``// global_phase:`` comment so that the matrix can be rebuilt.
    """
    out.write("OPENQASM 2.0;\n")
    out.write('include "qelib1.inc";\n')
    out.write(f"// global_phase: {c.global_phase!r}\n")
    out.write(f"qreg q[{c.n_qubits}];\n")
    for g in c:
        if g.kind == GateKind.CNOT:
            out.write(f"cx q[{g.control}],q[{g.target}];\n")
        elif g.kind == GateKind.X:
            out.write(f"x q[{g.target}];\n")
        else:
            out.write(f"{_QASM_NAMES[g.kind]}({g.angle!r}) q[{g.target}];\n")


def to_qasm(c):
    import io

    buf = io.StringIO()
    export_qasm(c, buf)
    return buf.getvalue()


_GATE_RE = re.compile(r"^(rx|ry|rz|u1|x|cx)\s*(?:\(([^)]*)\))?\s+(.+);$")
_QUBIT_RE = re.compile(r"^\s*q\[(\d+)\]\s*$")
_KINDS = {"rx": GateKind.RX, "ry": GateKind.RY, "rz": GateKind.RZ, "u1": GateKind.PHASE}


def parse_qasm(text):
    """Read back the OpenQASM subset written by :func:`export_qasm`.

    Raises ValueError on anything outside that subset.
    """
    n_qubits = None
    global_phase = 0.0
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("//"):
            m = re.match(r"//\s*global_phase:\s*(\S+)", line)
            if m:
                global_phase = float(m.group(1))
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
        if m:
            if n_qubits is not None:
                raise ValueError(f"line {lineno}: only one register is supported")
            n_qubits = int(m.group(1))
            continue
        m = _GATE_RE.match(line)
        if not m or n_qubits is None:
            raise ValueError(f"line {lineno}: unsupported statement {line!r}")
        name, param, args = m.groups()
        qubits = []
        for arg in args.split(","):
            qm = _QUBIT_RE.match(arg)
            if not qm:
                raise ValueError(f"line {lineno}: bad operand {arg!r}")
            qubits.append(int(qm.group(1)))
        if name == "cx":
            if len(qubits) != 2:
                raise ValueError(f"line {lineno}: cx takes two qubits")
            gates.append(Gate.cnot(qubits[0], qubits[1]))
        elif name == "x":
            gates.append(Gate.x(qubits[0]))
        else:
            if param is None or len(qubits) != 1:
                raise ValueError(f"line {lineno}: {name} takes one angle and one qubit")
            gates.append(Gate(_KINDS[name], qubits[0], -1, float(param)))
    if n_qubits is None:
        raise ValueError("no qreg declaration")
    return QuantumCircuit(n_qubits, gates, global_phase=global_phase)
