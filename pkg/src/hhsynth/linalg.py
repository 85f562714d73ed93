"""Dense complex matrix helpers, Haar sampling and the matrix text format.

A "complex matrix" throughout the package is a square ``complex128`` numpy
array.  Factorization routines work on Fortran-ordered copies so that a
column of the matrix is contiguous in memory.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .errors import ShapeError, SizeError

MAX_HAAR_QUBITS = 15
# Haar sampling holds roughly three N x N complex arrays at once.
DEFAULT_MEMORY_BUDGET = 4 * 2**30


def as_matrix(a, *, copy=False, order="F"):
    """Validate ``a`` as a finite square complex matrix and return it as complex128."""
    m = np.array(a, dtype=np.complex128, order=order, copy=copy or None)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def num_qubits(dim):
    """Return n such that ``dim == 2**n``; raise ShapeError otherwise."""
    if dim < 2 or dim & (dim - 1):
        raise ShapeError(f"dimension {dim} is not a power of two >= 2")
    return dim.bit_length() - 1


def unitarity_defect(m):
    """max |M^H M - I| entrywise."""
    m = np.asarray(m)
    g = m.conj().T @ m
    g[np.diag_indices_from(g)] -= 1.0
    return float(np.max(np.abs(g))) if g.size else 0.0


def is_unitary(m, tol=1e-12):
    """True iff ``m`` is square and ``max|M^H M - I| <= tol``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return unitarity_defect(m) <= tol


def probe_unitary(m, tol=1e-10, n_probes=2, rng=0):
    """Cheap O(N^2) unitarity screen.

    Checks every column norm and, for a few random probe vectors x, that
    ``M^H (M x) = x``.  A non-unitary matrix passes only with probability
    zero, which makes this suitable as a guard in front of O(N^3) work.
    """
    m = np.asarray(m)
    if np.max(np.abs(np.linalg.norm(m, axis=0) - 1.0)) > tol:
        return False
    gen = np.random.default_rng(rng)
    n = m.shape[0]
    for _ in range(n_probes):
        x = gen.standard_normal(n) + 1j * gen.standard_normal(n)
        x /= np.linalg.norm(x)
        if np.linalg.norm(m.conj().T @ (m @ x) - x) > tol * max(1.0, np.sqrt(n)):
            return False
    return True


def frobenius_distance(a, b):
    """Frobenius norm of ``a - b``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def _generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def haar_random_unitary(n_qubits, rng=None, memory_budget=DEFAULT_MEMORY_BUDGET):
    """Sample a 2^n x 2^n unitary from the Haar measure.

    A complex Ginibre matrix is QR-factorized and each column of Q is
    multiplied by the phase of the matching diagonal entry of R, which
    removes the phase ambiguity of the factorization.

    Args:
        n_qubits: number of qubits, 1 <= n_qubits <= 15.
        rng: a ``numpy.random.Generator`` or anything accepted by
            ``numpy.random.default_rng`` (e.g. an integer seed).  Equal seeds
            give bit-identical matrices.
        memory_budget: bytes allowed for the working arrays.
    """
    if not 1 <= n_qubits <= MAX_HAAR_QUBITS:
        raise SizeError(f"n_qubits must be in [1, {MAX_HAAR_QUBITS}], got {n_qubits}")
    dim = 2**n_qubits
    if 3 * 16 * dim * dim > memory_budget:
        raise SizeError(f"{n_qubits} qubits exceeds the memory budget of {memory_budget} bytes")
    gen = _generator(rng)
    z = (gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q *= (d / np.abs(d))[np.newaxis, :]
    return np.asfortranarray(q)


def ginibre_matrix(dim, rng=None):
    """Standard complex Gaussian matrix (not unitary)."""
    gen = _generator(rng)
    return (gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))) / np.sqrt(2.0)


# -- text format -----------------------------------------------------------
#
# line 1: dim; then dim lines of dim "re,im" pairs (row-major lines).


def format_matrix(m):
    m = as_matrix(m)
    buf = io.StringIO()
    buf.write(f"{m.shape[0]}\n")
    for row in m:
        buf.write(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
        buf.write("\n")
    return buf.getvalue()


def write_matrix(m, path):
    text = format_matrix(m)
    with open(path, "w") as fh:
        fh.write(text)


def parse_matrix(text):
    """Parse the matrix text format; raise ValueError on malformed input."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        dim = int(lines[0])
    except ValueError:
        raise ValueError(f"bad dimension line: {lines[0]!r}") from None
    if dim < 1 or len(lines) != dim + 1:
        raise ValueError(f"expected {dim} rows, found {len(lines) - 1}")
    m = np.empty((dim, dim), dtype=np.complex128, order="F")
    for i, line in enumerate(lines[1:]):
        fields = line.split()
        if len(fields) != dim:
            raise ValueError(f"row {i}: expected {dim} entries, found {len(fields)}")
        for j, field in enumerate(fields):
            re, sep, im = field.partition(",")
            if not sep:
                raise ValueError(f"row {i}, col {j}: entry {field!r} is not 're,im'")
            m[i, j] = complex(float(re), float(im))
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def read_matrix(path):
    with open(os.fspath(path)) as fh:
        return parse_matrix(fh.read())
