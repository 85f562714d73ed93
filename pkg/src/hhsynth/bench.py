"""Benchmark harness: factorization timings, flop counts and synthesis gate counts."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

from threadpoolctl import threadpool_limits

from .errors import SizeError
from .linalg import haar_random_unitary
from .pipeline import SynthesisOptions, synthesize_unitary
from .qr import FlopCounter, factorize_blocked, factorize_generic_qr

MODES = ("modified-qr", "generic-qr", "full-synth")
CSV_COLUMNS = ("mode", "n", "seed", "time_ms", "flops_mul", "flops_add", "cnot", "rotation", "x")

# Largest sizes each mode is allowed to run; beyond these the run takes
# more than a few minutes or the circuit no longer fits comfortably in RAM.
MAX_QUBITS = {"modified-qr": 14, "generic-qr": 12, "full-synth": 12}


@dataclass
class BenchRecord:
    mode: str
    n_qubits: int
    seed: int
    wall_time_ms: float
    flops: FlopCounter
    gate_counts: object = None  # GateCounts for full-synth

    def row(self):
        g = self.gate_counts
        return {
            "mode": self.mode,
            "n": self.n_qubits,
            "seed": self.seed,
            "time_ms": f"{self.wall_time_ms:.3f}",
            "flops_mul": self.flops.complex_mul,
            "flops_add": self.flops.complex_add,
            "cnot": "" if g is None else g.cnot,
            "rotation": "" if g is None else g.rotation,
            "x": "" if g is None else g.x,
        }


def run_one(mode, n, seed, opts=None):
    """Time one run on a fresh Haar matrix; matrix generation is not timed."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if not 1 <= n <= MAX_QUBITS[mode]:
        raise SizeError(f"{mode} supports 1..{MAX_QUBITS[mode]} qubits, got {n}")
    u = haar_random_unitary(n, seed)
    flops = FlopCounter()
    counts = None
    if mode == "modified-qr":
        opts = opts or SynthesisOptions()
        t0 = time.perf_counter()
        factorize_blocked(u, opts.block_size, opts.crossover, flops, overwrite=True)
        elapsed = time.perf_counter() - t0
    elif mode == "generic-qr":
        t0 = time.perf_counter()
        factorize_generic_qr(u, flops)
        elapsed = time.perf_counter() - t0
    else:
        t0 = time.perf_counter()
        _, report = synthesize_unitary(u, opts)
        elapsed = time.perf_counter() - t0
        flops = report.factorization_flops
        counts = report.gate_counts
    return BenchRecord(mode, n, seed, elapsed * 1e3, flops, counts)


def run_bench(qubits, modes, seeds, threads=1, opts=None, on_record=None):
    """Run every (mode, n, seed) combination; BLAS is limited to ``threads``."""
    records = []
    with threadpool_limits(limits=threads):
        for mode in modes:
            for n in qubits:
                for seed in seeds:
                    rec = run_one(mode, n, seed, opts)
                    records.append(rec)
                    if on_record is not None:
                        on_record(rec)
    return records


def write_csv(records, fh, header=True):
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    if header:
        w.writeheader()
    for r in records:
        w.writerow(r.row())
