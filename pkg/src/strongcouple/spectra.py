"""Dense Hermitian spectral tools for small matrices.

Everything in this module targets operators of dimension 8 or below, the
sizes that occur for one or two qubits. At these sizes a cyclic Jacobi
iteration is simple, dependency free, deterministic, and accurate to near
machine precision, so it is used as the only eigensolver. Operators are
validated at construction so that downstream code can assume Hermiticity,
unit trace, and positive semidefiniteness without re-checking.

Composite indices follow the convention that the first tensor factor is
the slow index: for a two-qubit operator the basis ordering is
``|0,0>, |0,1>, |1,0>, |1,1>``, matching ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10

_JACOBI_TOL = 1e-14
_MAX_SWEEPS = 100


class HermitianOperator:
    """Square complex matrix checked and symmetrized at construction.

    The input must already be Hermitian to within ``HERMITICITY_TOL`` in
    max-norm; the stored matrix is the exact average ``(M + M^+)/2`` so
    later algebra never sees a residual anti-Hermitian part.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise InputError("matrix has non-finite entries")
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > HERMITICITY_TOL:
            raise InputError(
                f"matrix is not Hermitian, max |M - M^+| = {dev:.3e} "
                f"exceeds {HERMITICITY_TOL:.0e}")
        self._matrix = (m + m.conj().T) / 2
        self._matrix.setflags(write=False)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        arr = np.asarray(self._matrix, dtype=dtype)
        return arr.copy() if copy else arr

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class DensityOperator(HermitianOperator):
    """Hermitian operator with unit trace and nonnegative spectrum.

    Trace must equal one to within ``TRACE_TOL`` and every eigenvalue must
    sit above ``PSD_FLOOR``; both limits leave room for accumulated
    round-off without admitting genuinely unphysical states.
    """

    __slots__ = ()

    def __init__(self, matrix):
        super().__init__(matrix)
        tr = self._matrix.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise InputError(f"trace {tr.real:.15g} differs from 1 by more than {TRACE_TOL:.0e}")
        low = _min_eigenvalue(self._matrix)
        if low < PSD_FLOOR:
            raise InputError(f"matrix has eigenvalue {low:.3e} below {PSD_FLOOR:.0e}")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with matching orthonormal eigenvector columns.

    ``eigenvalues[k]`` belongs to column ``eigenvectors[:, k]``. Fresh
    decompositions from :func:`eig_hermitian` are in ascending eigenvalue
    order; trajectory tracking may permute that order to keep branches
    continuous in time.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _offdiag_norm(m) -> float:
    off = m - np.diag(np.diag(m))
    return float(np.linalg.norm(off))


def _jacobi(matrix):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Each rotation absorbs the phase of the pivot entry and then applies
    the classical symmetric rotation, which zeroes the pivot exactly.
    Returns eigenvalues ascending and eigenvector columns to match, with
    ties left in the order the sweeps produced (stable sort).
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    sweeps = 0
    while _offdiag_norm(a) > _JACOBI_TOL * scale:
        if sweeps >= _MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi did not converge in {_MAX_SWEEPS} sweeps, "
                f"off-diagonal norm {_offdiag_norm(a):.3e}")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[q, q] = c
                g[p, q] = s * phase
                g[q, p] = -s * np.conj(phase)
                a = g.conj().T @ a @ g
                v = v @ g
        sweeps += 1
    lam = np.diag(a).real.copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    # deterministic gauge: make the largest component of each column real positive
    for k in range(n):
        j = int(np.argmax(np.abs(v[:, k])))
        piv = v[j, k]
        if abs(piv) > 0:
            v[:, k] = v[:, k] * (np.conj(piv) / abs(piv))
    return lam, v


def _min_eigenvalue(matrix) -> float:
    m = np.asarray(matrix)
    if m.shape[0] == 2:
        # closed form, cheaper than a full sweep for the common 2x2 case
        half = (m[0, 0].real + m[1, 1].real) / 2
        delta = (m[0, 0].real - m[1, 1].real) / 2
        return half - float(np.hypot(delta, abs(m[0, 1])))
    lam, _ = _jacobi(m)
    return float(lam[0])


def _as_matrix(operator) -> np.ndarray:
    if isinstance(operator, HermitianOperator):
        return operator.matrix
    return np.asarray(operator, dtype=complex)


def eig_hermitian(operator) -> SpectralDecomposition:
    """Diagonalize a Hermitian operator.

    Parameters
    ----------
    operator : HermitianOperator or array_like
        Raw arrays are validated through :class:`HermitianOperator` first,
        so non-Hermitian input is rejected rather than silently projected.

    Returns
    -------
    SpectralDecomposition
        Ascending eigenvalues and orthonormal eigenvector columns.
    """
    if not isinstance(operator, HermitianOperator):
        operator = HermitianOperator(operator)
    lam, v = _jacobi(operator.matrix)
    return SpectralDecomposition(eigenvalues=lam, eigenvectors=v)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def _bipartite_dims(matrix, dims):
    n = matrix.shape[0]
    if dims is None:
        root = int(round(np.sqrt(n)))
        if root * root != n:
            raise InputError(f"cannot infer factor dimensions of a {n}x{n} matrix, pass dims")
        dims = (root, root)
    da, db = dims
    if da * db != n:
        raise InputError(f"dims {dims} incompatible with matrix dimension {n}")
    return da, db


def partial_trace(rho, keep: int, dims=None) -> DensityOperator:
    """Trace out one tensor factor of a bipartite density operator.

    Parameters
    ----------
    rho : DensityOperator or array_like
        State on the composite space.
    keep : int
        0 keeps the first factor, 1 keeps the second.
    dims : tuple of int, optional
        Factor dimensions; square dimensions are inferred when omitted.
    """
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    if keep not in (0, 1):
        raise InputError(f"keep must be 0 or 1, got {keep!r}")
    da, db = _bipartite_dims(rho.matrix, dims)
    r = rho.matrix.reshape(da, db, da, db)
    reduced = np.einsum("ikjk->ij", r) if keep == 0 else np.einsum("kikj->ij", r)
    return DensityOperator(reduced)


def partial_transpose(rho, subsystem: int = 0, dims=None) -> HermitianOperator:
    """Transpose one tensor factor of a bipartite operator.

    The result is Hermitian but in general not positive, which is exactly
    what entanglement witnesses exploit. Applying the same transpose twice
    returns the original operator.
    """
    if not isinstance(rho, HermitianOperator):
        rho = HermitianOperator(rho)
    if subsystem not in (0, 1):
        raise InputError(f"subsystem must be 0 or 1, got {subsystem!r}")
    da, db = _bipartite_dims(rho.matrix, dims)
    r = rho.matrix.reshape(da, db, da, db)
    r = r.transpose(2, 1, 0, 3) if subsystem == 0 else r.transpose(0, 3, 2, 1)
    return HermitianOperator(r.reshape(da * db, da * db))


def trace_norm(operator) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    if not isinstance(operator, HermitianOperator):
        operator = HermitianOperator(operator)
    lam, _ = _jacobi(operator.matrix)
    return float(np.sum(np.abs(lam)))
