"""Householder QR specialised to unitary matrices, plus a generic baseline.

For a unitary A the triangular factor of A = QR is diagonal with
unit-modulus entries, and each Householder step only needs the leading
entry b1 of the current column: with theta = arg(b1) the reflector is

    H = I - tau * v v^H,   v = (1, b[1:] / (b1 + e^{i theta})),   tau = 1 + |b1|

and H b = -e^{i theta} e1.  Orthonormality of the rows and columns of the
trailing block means its first row and column never need an explicit
update, and the rest of the block receives the rank-one update
``B[1:, 1:] -= v[1:] * r[1:]`` where r is the block's first row.

Packed layout (column-major, N x N):

* strictly lower triangle of column k: v_k[k+1:]  (v_k[k] = 1 implicit)
* strictly upper triangle of row k:    r_k[k+1:], the trailing block's first
  row at step k (the quantity the blocked updates consume)
* diagonal: R_kk = -e^{i theta_k}, and R_{N-1,N-1} for the last entry

with sidecar arrays ``taus`` (length N-1) and ``phases`` (length N,
R_kk = e^{i phases[k]}).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg.blas import ztrmm

from .errors import NotUnitaryError, NumericalError, PreconditionError
from .linalg import as_matrix, probe_unitary, unitarity_defect

DEFAULT_BLOCK_SIZE = 32
DEFAULT_CROSSOVER = 128


@dataclass
class FlopCounter:
    """Complex multiplications and additions performed by a factorization.

    A division counts as a multiplication; a subtraction as an addition.
    """

    complex_mul: int = 0
    complex_add: int = 0

    def add(self, mul, add):
        self.complex_mul += int(mul)
        self.complex_add += int(add)

    @property
    def total(self):
        return self.complex_mul + self.complex_add

    def as_dict(self):
        return {"mul": self.complex_mul, "add": self.complex_add}


@dataclass
class UnitaryFactorization:
    packed: np.ndarray
    taus: np.ndarray
    phases: np.ndarray

    @property
    def dim(self):
        return self.packed.shape[0]

    def householder_vector(self, k):
        """Full-length v_k with v_k[:k] = 0 and v_k[k] = 1."""
        v = np.zeros(self.dim, dtype=np.complex128)
        v[k] = 1.0
        v[k + 1 :] = self.packed[k + 1 :, k]
        return v

    def unit_vector(self, k):
        """v_k / ||v_k||, so that H_k = I - 2 w w^H."""
        v = self.householder_vector(k)
        return v / np.linalg.norm(v)

    def reflector(self, k):
        v = self.householder_vector(k)
        return np.eye(self.dim) - self.taus[k] * np.outer(v, v.conj())

    def r_diagonal(self):
        return np.exp(1j * self.phases)


@dataclass
class PanelTriangles:
    t1: np.ndarray  # upper triangular, applied on the right of the column block
    t2: np.ndarray  # unit lower triangular, applied on the left of the row block


@dataclass
class GenericQR:
    """Result of the textbook Householder QR (LAPACK xGEQR2 conventions)."""

    packed: np.ndarray
    taus: np.ndarray
    counter: FlopCounter = field(default_factory=FlopCounter)

    def r(self):
        return np.triu(self.packed)

    def q(self):
        n = self.packed.shape[0]
        q = np.eye(n, dtype=np.complex128)
        for k in range(n - 2, -1, -1):
            v = np.concatenate(([1.0], self.packed[k + 1 :, k]))
            q[k:, k:] -= self.taus[k] * np.outer(v, v.conj() @ q[k:, k:])
        return q


def _sub_outer(dst, x, y):
    """dst -= outer(x, y), with the temporary laid out like the F-ordered dst."""
    np.subtract(dst, np.multiply.outer(y, x).T, out=dst)


def _sub_product(dst, left, right):
    """dst -= left @ right, with the temporary laid out like the F-ordered dst."""
    np.subtract(dst, (right.T @ left.T).T, out=dst)


def _reflector_params(b1):
    """Return (theta, tau, unit phase e^{i theta}, normalisation b1 + e^{i theta})."""
    mod = abs(b1)
    if mod == 0.0:
        # arg(0) := 0
        return 0.0, 1.0, 1.0 + 0.0j, 1.0 + 0.0j
    phase = b1 / mod
    return float(np.angle(b1)), 1.0 + mod, phase, b1 + phase


def reflector_from_column(b, counter=None, tol=1e-10):
    """Householder vector for a unit-norm column.

    Returns ``(u, tau, theta)`` with u[0] = 1 and tau = 1 + |b[0]| such that
    ``(I - tau u u^H) b = -e^{i theta} e1``.
    """
    b = np.asarray(b, dtype=np.complex128)
    if abs(np.linalg.norm(b) - 1.0) > tol:
        raise NumericalError(f"column norm {np.linalg.norm(b):.15g} is not 1 within {tol}")
    theta, tau, _, nfac = _reflector_params(b[0])
    u = np.empty_like(b)
    u[0] = 1.0
    u[1:] = b[1:] * (1.0 / nfac)
    if counter is not None:
        counter.add(len(b), 1)
    return u, tau, theta


def _store_reflector(a, i, taus, phases, counter):
    theta, tau, phase, nfac = _reflector_params(a[i, i])
    a[i + 1 :, i] *= 1.0 / nfac
    a[i, i] = -phase
    taus[i] = tau
    phases[i] = theta + np.pi
    if counter is not None:
        counter.add(a.shape[0] - i, 1)


def _unqr2(a, taus, phases, counter, n_reflectors):
    """Left-looking kernel on a square view, in place.

    At step i only row i and column i are brought up to date, from the
    already-computed vectors (lower part) and rows (upper part).  Produces
    ``n_reflectors`` reflectors; if that is one less than the order the
    last diagonal entry is the final R entry.
    """
    n = a.shape[0]
    for i in range(n):
        if i:
            a[i:, i] -= a[i:, :i] @ a[:i, i]
            a[i, i + 1 :] -= a[i, :i] @ a[:i, i + 1 :]
            if counter is not None:
                cnt = (2 * (n - i) - 1) * i
                counter.add(cnt, cnt)
        if i < n_reflectors:
            _store_reflector(a, i, taus, phases, counter)
        else:
            phases[i] = float(np.angle(a[i, i]))


def _unqr2_rank1(a, taus, phases, counter, debug=False):
    """Right-looking kernel: full rank-one trailing update after every step."""
    n = a.shape[0]
    for i in range(n - 1):
        _store_reflector(a, i, taus, phases, counter)
        _sub_outer(a[i + 1 :, i + 1 :], a[i + 1 :, i], a[i, i + 1 :])
        if counter is not None:
            counter.add((n - i - 1) ** 2, (n - i - 1) ** 2)
        if debug:
            _check_trailing(a[i + 1 :, i + 1 :], n)
    phases[n - 1] = float(np.angle(a[n - 1, n - 1]))


def _check_trailing(block, n):
    if block.size and unitarity_defect(block) > 1e-10 * n:
        raise NumericalError("trailing block lost unitarity")


def _prepare(a, overwrite, check, tol):
    if overwrite:
        if not (isinstance(a, np.ndarray) and a.dtype == np.complex128 and a.flags.f_contiguous):
            raise ValueError("overwrite=True needs a Fortran-ordered complex128 array")
        a = as_matrix(a)
    else:
        a = as_matrix(a, copy=True)
    if check and not probe_unitary(a, tol):
        raise NotUnitaryError("input matrix is not unitary")
    return a


def factorize_unblocked(a, counter=None, *, method="left", overwrite=False, check=True,
                        tol=1e-10, debug=False):
    """Unblocked factorization of a unitary matrix.

    ``method="left"`` updates one row and one column per step from the
    stored vectors (the default, and the kernel the blocked code uses);
    ``method="rank1"`` applies the rank-one trailing update at every step.
    """
    a = _prepare(a, overwrite, check, tol)
    n = a.shape[0]
    taus = np.empty(n - 1)
    phases = np.empty(n)
    if method == "left":
        _unqr2(a, taus, phases, counter, n - 1)
    elif method == "rank1":
        _unqr2_rank1(a, taus, phases, counter, debug=debug)
    else:
        raise ValueError(f"unknown method {method!r}")
    return UnitaryFactorization(a, taus, phases)


def compute_panel_triangles(panel, taus, counter=None):
    """Triangular factors that finish a factorized nb x nb panel.

    With C the block below the panel and B the block to its right (both as
    they were before the panel was factorized), ``C @ t1`` gives the
    Householder vector entries below the panel and ``t2 @ B`` gives the
    stored rows to the right of it.

    Every diagonal entry of t1, the 1 x 1 base case included, is
    1/(e^{i theta_k} tau_k): the column update divides by that normalization
    rather than using a unit base.  t2 is unit lower triangular.
    """
    nb = panel.shape[0]
    # normalisation factor e^{i theta_k} tau_k; the diagonal holds -e^{i theta_k}
    norms = -np.diagonal(panel) * np.asarray(taus[:nb])
    t1 = np.zeros((nb, nb), dtype=np.complex128, order="F")
    t2 = np.eye(nb, dtype=np.complex128, order="F")
    t1[0, 0] = 1.0 / norms[0]
    for j in range(1, nb):
        t1[:j, j] = -(t1[:j, :j] @ panel[:j, j]) / norms[j]
        t1[j, j] = 1.0 / norms[j]
        t2[j, :j] = -(panel[j, :j] @ t2[:j, :j])
    if counter is not None:
        tri = sum(j * (j + 1) // 2 for j in range(1, nb))
        counter.add(2 * tri + 2 * nb, 2 * tri)
    return PanelTriangles(t1, t2)


def factorize_blocked(a, nb=DEFAULT_BLOCK_SIZE, nx=DEFAULT_CROSSOVER, counter=None, *,
                      overwrite=False, check=True, tol=1e-10, debug=False):
    """Blocked factorization of a unitary matrix.

    Panels of ``nb`` columns are factorized with the unblocked kernel on the
    nb x nb diagonal block only; the off-panel blocks are then finished with
    two triangular multiplies and the trailing matrix with one matrix
    product.  Once the trailing order drops to ``nx`` or below the unblocked
    kernel finishes the job, so ``nb >= N`` is exactly the unblocked code.
    """
    if nb < 1 or nx < nb:
        raise PreconditionError(f"need 1 <= nb <= nx, got nb={nb}, nx={nx}")
    a = _prepare(a, overwrite, check, tol)
    n = a.shape[0]
    taus = np.empty(n - 1)
    phases = np.empty(n)
    i = 0
    if nb < n and nx < n:
        while i < n - nx:
            ib = min(n - i, nb)
            j = i + ib
            panel = a[i:j, i:j]
            _unqr2(panel, taus[i:j], phases[i:j], counter, ib)
            tri = compute_panel_triangles(panel, taus[i:j], counter)
            m = n - j
            a[j:, i:j] = ztrmm(1.0, tri.t1, a[j:, i:j], side=1, lower=0)
            a[i:j, j:] = ztrmm(1.0, tri.t2, a[i:j, j:], side=0, lower=1, diag=1)
            _sub_product(a[j:, j:], a[j:, i:j], a[i:j, j:])
            if counter is not None:
                counter.add(2 * m * ib * (ib + 1) // 2, 2 * m * ib * (ib - 1) // 2)
                counter.add(m * m * ib, m * m * ib)
            if debug:
                _check_trailing(a[j:, j:], n)
            i = j
    _unqr2(a[i:, i:], taus[i:], phases[i:], counter, n - i - 1)
    return UnitaryFactorization(a, taus, phases)


def reconstruct_unitary(f):
    """H_1 H_2 ... H_{N-1} diag(e^{i phases}); O(N^3) test oracle."""
    n = f.dim
    m = np.diag(f.r_diagonal()).astype(np.complex128)
    for k in range(n - 2, -1, -1):
        v = np.concatenate(([1.0], f.packed[k + 1 :, k]))
        m[k:, :] -= f.taus[k] * np.outer(v, v.conj() @ m[k:, :])
    return m


def factorize_generic_qr(a, counter=None):
    """Textbook Householder QR of any square complex matrix.

    Each step forms w = B^H v (matrix-vector product) and applies the
    rank-one update B -= tau v w^H to the trailing columns, which costs
    about (4/3) N^3 complex flops in total.
    """
    a = as_matrix(a, copy=True)
    n = a.shape[0]
    taus = np.zeros(n - 1)
    counter = counter if counter is not None else FlopCounter()
    for k in range(n - 1):
        m, c = n - k, n - k - 1
        b1 = a[k, k]
        nrm = float(np.linalg.norm(a[k:, k]))
        counter.add(m, m - 1)
        if nrm == 0.0:
            continue
        mod = abs(b1)
        phase = b1 / mod if mod else 1.0 + 0.0j
        u1 = b1 + phase * nrm
        tau = (nrm + mod) / nrm
        v = a[k + 1 :, k] * (1.0 / u1)
        w = a[k, k + 1 :] + v.conj() @ a[k + 1 :, k + 1 :]
        tw = tau * w
        a[k, k + 1 :] -= tw
        _sub_outer(a[k + 1 :, k + 1 :], v, tw)
        a[k + 1 :, k] = v
        a[k, k] = -phase * nrm
        taus[k] = tau
        counter.add((m - 1) + 2 * (m - 1) * c + c, 2 * (m - 1) * c + c)
    return GenericQR(a, taus, counter)
