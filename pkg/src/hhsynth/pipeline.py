"""Unitary-to-circuit synthesis through the Householder factorization.

A unitary U factorizes as U = H_0 H_1 ... H_{N-2} D with Householder
reflectors H_k = I - 2 u_k u_k^H and a diagonal D of phases.  Each
reflector is written as H_k = P_k D_G P_k^H, where P_k prepares u_k from
|0...0> and D_G = diag(-1, 1, ..., 1).  Since u_k has k leading zeros, P_k
acts on the last m_k = ceil(log2(N - k)) qubits behind a layer of X gates
on the others.

Applied order of the emitted circuit:

    D, then for k = N-2 down to 0:  X_k  D_k^H  Y_k^H  D_G  Y_k  D_k  X_k

where P_k = X_k D_k Y_k.  With merging on, each D_k is fused with the
D_{k-1}^H of the next block (and D with the first block's D^H) into one
diagonal; the X pass then removes X pairs that meet on a wire.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .circuit import GateCounts, QuantumCircuit, cancel_adjacent_x, gate_counts, inverse
from .errors import SizeError, VerificationError
from .linalg import as_matrix, num_qubits
from .multiplexor import (
    DiagonalPhases,
    Preparation,
    active_qubits,
    padded_prepare,
    synthesize_diagonal,
    x_layer,
)
from .qr import DEFAULT_BLOCK_SIZE, DEFAULT_CROSSOVER, FlopCounter, factorize_blocked
from .simulator import verify_synthesis

MAX_SYNTH_QUBITS = 14
MAX_VERIFY_QUBITS = 7


@dataclass
class SynthesisOptions:
    block_size: int = DEFAULT_BLOCK_SIZE
    crossover: int = DEFAULT_CROSSOVER
    merge_diagonals: bool = True
    cancel_x_layers: bool = True
    verify: bool = False
    # None means 1e-10 * 2^n
    tolerance: float | None = None
    force_verify: bool = False

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        if self.crossover < self.block_size:
            # a crossover below the panel width never triggers the blocked path
            self.crossover = self.block_size

    def tolerance_for(self, n_qubits):
        return self.tolerance if self.tolerance is not None else 1e-10 * 2**n_qubits


@dataclass
class SynthesisReport:
    n_qubits: int
    gate_counts: GateCounts
    predicted_counts: GateCounts
    factorization_flops: FlopCounter
    wall_times: dict = field(default_factory=dict)
    residual: float | None = None

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "counts": self.gate_counts.as_dict(),
            "predicted": self.predicted_counts.as_dict(),
            "flops": self.factorization_flops.as_dict(),
            "times_ms": {k: self.wall_times.get(k) for k in ("factorize", "synthesize", "verify")},
            "residual": self.residual,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


@dataclass
class ReflectorBlock:
    column: int  # k: the vector has k leading zeros
    vector: np.ndarray
    n_active: int
    prep: Preparation


def predicted_gate_counts(n):
    """Leading-order counts 2 * 4^n CNOTs and rotations (asymptotic only)."""
    if n < 1:
        raise ValueError("n must be positive")
    return GateCounts(cnot=2 * 4**n, rotation=2 * 4**n, x=0)


@lru_cache(maxsize=32)
def synthesize_grover_diagonal(n):
    """diag(-1, 1, ..., 1) on n qubits through the generic diagonal path."""
    if n < 1:
        raise ValueError("n must be positive")
    phases = np.zeros(2**n)
    phases[0] = np.pi
    return synthesize_diagonal(DiagonalPhases(phases))


def reflector_blocks(f, n):
    """One block per Householder reflector, in column order k = 0..N-2."""
    dim = f.dim
    blocks = []
    for k in range(dim - 1):
        u = f.unit_vector(k)
        m = active_qubits(dim, k)
        blocks.append(ReflectorBlock(k, u, m, padded_prepare(u, n_active=m)))
    return blocks


def _diag(phases, n):
    """Diagonal fragment on the last log2(len(phases)) of n qubits."""
    d = DiagonalPhases(phases)
    return synthesize_diagonal(d, qubits=range(n - d.n_qubits, n), n_qubits=n)


def _widen(phases, width):
    """Phases of a diagonal on the last m qubits, seen as one on the last ``width``."""
    return np.tile(phases, 2**width // len(phases))


def unmerged_fragments(blocks, r_phases, n):
    """Block layout with every preparation diagonal synthesized on its own."""
    dg = synthesize_grover_diagonal(n)
    frags = [_diag(r_phases, n)]
    for b in reversed(blocks):
        x = x_layer(b.prep.x_qubits, n)
        frags += [x, _diag(-b.prep.d.phases, n), inverse(b.prep.y), dg,
                  b.prep.y, _diag(b.prep.d.phases, n), x]
    return frags


def merge_adjacent_diagonals(blocks, r_phases, n):
    """Block layout with each D_k fused into the next block's D^H.

    ``blocks`` are in column order; the circuit applies them last column
    first.  The R diagonal ``r_phases`` is fused with the first applied
    block's D^H.  When the fused diagonal is wider than the block it opens
    (only the first block), it must precede that block's X layer.
    """
    dg = synthesize_grover_diagonal(n)
    frags = []
    pending, pending_m = np.asarray(r_phases, dtype=np.float64), n
    x_prev = None
    for b in reversed(blocks):
        m = b.n_active
        x = x_layer(b.prep.x_qubits, n)
        w = max(pending_m, m)
        fused = _widen(pending, w) - _widen(b.prep.d.phases, w)
        if x_prev is not None:
            frags.append(x_prev)
        if w > m:
            frags += [_diag(fused, n), x]
        else:
            frags += [x, _diag(fused, n)]
        frags += [inverse(b.prep.y), dg, b.prep.y]
        pending, pending_m, x_prev = b.prep.d.phases, m, x
    frags.append(_diag(pending, n))
    if x_prev is not None:
        frags.append(x_prev)
    return frags


def cancel_x_layers(fragments, n):
    """Concatenate ``fragments`` and drop X pairs that meet on their wire."""
    return [cancel_adjacent_x(QuantumCircuit.concat(n, fragments))]


def synthesize_unitary(u, opts=None):
    """Circuit realizing ``u`` exactly (global phase included) and a report.

    Raises NotUnitaryError for non-unitary input, SizeError outside
    1..14 qubits (or when verification is asked above the simulation cap
    without ``force_verify``), and VerificationError when the verified
    residual exceeds the tolerance; the exception then carries ``report``
    and ``circuit`` attributes.
    """
    opts = opts or SynthesisOptions()
    u = as_matrix(u)
    n = num_qubits(u.shape[0])
    if n > MAX_SYNTH_QUBITS:
        raise SizeError(f"synthesis supports at most {MAX_SYNTH_QUBITS} qubits, got {n}")
    if opts.verify and n > MAX_VERIFY_QUBITS and not opts.force_verify:
        raise SizeError(f"verification is capped at {MAX_VERIFY_QUBITS} qubits; use force_verify")

    times = {}
    flops = FlopCounter()
    t0 = time.perf_counter()
    f = factorize_blocked(u, opts.block_size, opts.crossover, flops)
    times["factorize"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    blocks = reflector_blocks(f, n)
    if opts.merge_diagonals:
        frags = merge_adjacent_diagonals(blocks, f.phases, n)
    else:
        frags = unmerged_fragments(blocks, f.phases, n)
    if opts.cancel_x_layers:
        frags = cancel_x_layers(frags, n)
    circuit = QuantumCircuit.concat(n, frags)
    times["synthesize"] = (time.perf_counter() - t0) * 1e3

    report = SynthesisReport(n, gate_counts(circuit), predicted_gate_counts(n), flops, times)
    if opts.verify:
        tol = opts.tolerance_for(n)
        t0 = time.perf_counter()
        ok, residual = verify_synthesis(u, circuit, tol, max_qubits=max(n, MAX_VERIFY_QUBITS))
        times["verify"] = (time.perf_counter() - t0) * 1e3
        report.residual = residual
        if not ok:
            err = VerificationError(residual, tol)
            err.report, err.circuit = report, circuit
            raise err
    return circuit, report
