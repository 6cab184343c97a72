"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The module
provides a cyclic Jacobi eigensolver for Hermitian matrices, a PSD square
root built on it, and a blocked LU factorization with partial pivoting for
solves and determinants.  Nothing here calls LAPACK eigen/LU routines; the
only BLAS use is the matrix product in the LU trailing update.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.linalg import LinAlgError

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
PSD_CLAMP = 1e-8
SINGULAR_PIVOT = 1e-13


class ConvergenceError(LinAlgError):
    """Raised when the Jacobi iteration hits its sweep cap."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


def as_matrix(A):
    """Return ``A`` as a finite 2-D complex128 array."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def multiply(A, B):
    """Matrix product with an explicit dimension check."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B


def transpose(A):
    return as_matrix(A).T.copy()


def conjugate(A):
    return as_matrix(A).conj()


def adjoint(A):
    return as_matrix(A).conj().T.copy()


def max_norm(A):
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


# --------------------------------------------------------------------------
# Hermitian eigensolver
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenpairs of a Hermitian matrix.

    ``values`` are real and sorted in descending order; column ``i`` of
    ``vectors`` is the unit eigenvector for ``values[i]``.
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self):
        V = self.vectors
        return (V * self.values) @ V.conj().T


@lru_cache(maxsize=64)
def _round_robin(n):
    # Tournament schedule: every round is a set of disjoint (p, q) pairs and
    # the n - 1 rounds (n even) cover every pair exactly once.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(H):
    off = H.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def hermitian_eigensystem(H, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each sweep visits all index pairs in round-robin order.  Pairs in one
    round are disjoint, so their rotations commute and are applied together
    as vectorized row/column updates.

    Parameters
    ----------
    H : array_like, shape (n, n)
        Hermitian input.  Deviations from Hermiticity above
        ``1e-10 * max(1, max|H|)`` are rejected.
    tol : float
        Iteration stops once the off-diagonal Frobenius norm falls below
        ``tol * ||H||_F``.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    HermitianEigen
        Values in descending order with matching orthonormal eigenvectors.
    """
    H = as_matrix(H)
    n, m = H.shape
    if n != m:
        raise ValueError(f"matrix must be square, got {H.shape}")
    scale = max(1.0, max_norm(H))
    if max_norm(H - H.conj().T) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    H = 0.5 * (H + H.conj().T)
    V = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(H))
    threshold = tol * fro
    rounds = _round_robin(n) if n > 1 else ()

    sweeps = 0
    off = _off_norm(H)
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(relative off-diagonal norm {off / fro:.3e})",
                off / fro,
            )
        for p, q in rounds:
            w = H[p, q]
            r = np.abs(w)
            active = r > 0.0
            if not active.any():
                continue
            p, q, w, r = p[active], q[active], w[active], r[active]
            phase = w / r
            tau = (H[q, q].real - H[p, p].real) / (2.0 * r)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on each (p, q) plane
            Hp = H[:, p]
            Hq = H[:, q] * phase.conj()
            H[:, p] = c * Hp - s * Hq
            H[:, q] = s * Hp + c * Hq
            Hp = H[p, :]
            Hq = H[q, :] * phase[:, None]
            H[p, :] = c[:, None] * Hp - s[:, None] * Hq
            H[q, :] = s[:, None] * Hp + c[:, None] * Hq
            H[p, q] = 0.0
            H[q, p] = 0.0
            Vp = V[:, p]
            Vq = V[:, q] * phase.conj()
            V[:, p] = c * Vp - s * Vq
            V[:, q] = s * Vp + c * Vq
        sweeps += 1
        off = _off_norm(H)

    values = np.diag(H).real.copy()
    order = np.argsort(-values, kind="stable")
    return HermitianEigen(values=values[order], vectors=V[:, order], sweeps=sweeps)


def eigvalsh_desc(H):
    """Eigenvalues of a Hermitian matrix, descending."""
    return hermitian_eigensystem(H).values


def rank_floor(values):
    """Numerical-rank threshold ``n * eps * max|lambda|`` for a spectrum."""
    values = np.asarray(values)
    if values.size == 0:
        return 0.0
    return values.size * np.finfo(float).eps * float(np.max(np.abs(values)))


def psd_sqrt(H, drop_noise=False):
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues down to ``-1e-8 * max(1, max|H|)`` are treated as roundoff and
    clamped to zero; anything more negative raises ``ValueError``.  With
    ``drop_noise=True`` eigenvalues below :func:`rank_floor` are zeroed too,
    so roundoff in the null space does not turn into ``sqrt(eps)`` noise.
    """
    eig = hermitian_eigensystem(H)
    scale = max(1.0, max_norm(H))
    if eig.values.size and eig.values[-1] < -PSD_CLAMP * scale:
        raise ValueError(
            f"matrix is not positive semidefinite (min eigenvalue {eig.values[-1]:.3e})"
        )
    values = np.clip(eig.values, 0.0, None)
    if drop_noise:
        values[values <= rank_floor(eig.values)] = 0.0
    roots = np.sqrt(values)
    V = eig.vectors
    S = (V * roots) @ V.conj().T
    return 0.5 * (S + S.conj().T)


# --------------------------------------------------------------------------
# LU with partial pivoting
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LUFactors:
    """Packed ``PA = LU`` factors; ``perm[i]`` is the source row of row ``i``."""

    lu: np.ndarray
    perm: np.ndarray
    swaps: int
    scale: float

    def min_pivot(self):
        return float(np.min(np.abs(np.diag(self.lu)))) if self.lu.size else 0.0


def lu_factor(A, block=64):
    """Blocked right-looking LU factorization with partial pivoting.

    Zero pivot columns are skipped rather than raising, so singular inputs
    still factor (their determinant comes out as zero).
    """
    A = as_matrix(A)
    n, m = A.shape
    if n != m:
        raise ValueError(f"matrix must be square, got {A.shape}")
    LU = A.copy()
    perm = np.arange(n)
    swaps = 0
    scale = max_norm(A)

    for j0 in range(0, n, block):
        j1 = min(j0 + block, n)
        for i in range(j0, j1):
            piv = i + int(np.argmax(np.abs(LU[i:, i])))
            if piv != i:
                LU[[i, piv], :] = LU[[piv, i], :]
                perm[[i, piv]] = perm[[piv, i]]
                swaps += 1
            pivot = LU[i, i]
            if pivot == 0:
                continue
            LU[i + 1:, i] /= pivot
            if i + 1 < j1:
                LU[i + 1:, i + 1:j1] -= np.outer(LU[i + 1:, i], LU[i, i + 1:j1])
        if j1 < n:
            # U12 = L11^{-1} A12, L11 unit lower triangular
            for i in range(j0 + 1, j1):
                LU[i, j1:] -= LU[i, j0:i] @ LU[j0:i, j1:]
            LU[j1:, j1:] -= LU[j1:, j0:j1] @ LU[j0:j1, j1:]

    return LUFactors(lu=LU, perm=perm, swaps=swaps, scale=scale)


def lu_solve(A, y, factors=None):
    """Solve ``A x = y`` by Gaussian elimination with partial pivoting.

    Raises
    ------
    numpy.linalg.LinAlgError
        If a pivot falls below ``1e-13 * max|A|``.
    """
    if factors is None:
        factors = lu_factor(A)
    LU = factors.lu
    n = LU.shape[0]
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (n,):
        raise ValueError(f"right-hand side has shape {y.shape}, expected ({n},)")
    if n == 0:
        return y.copy()
    if factors.min_pivot() <= SINGULAR_PIVOT * factors.scale:
        raise LinAlgError("singular matrix")

    x = y[factors.perm].copy()
    for i in range(1, n):
        x[i] -= LU[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - LU[i, i + 1:] @ x[i + 1:]) / LU[i, i]
    return x


def lu_determinant(A):
    """Determinant as the signed product of LU pivots."""
    f = lu_factor(A)
    det = complex(np.prod(np.diag(f.lu)))
    return -det if f.swaps % 2 else det


# --------------------------------------------------------------------------
# JSON interchange
# --------------------------------------------------------------------------


def matrix_to_dict(A):
    """Row-major ``{"rows", "cols", "data": [[re, im], ...]}`` encoding."""
    A = as_matrix(A)
    flat = A.reshape(-1)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(obj):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if rows <= 0 or cols <= 0:
        raise ValueError("rows and cols must be positive")
    if len(data) != rows * cols:
        raise ValueError(f"data has {len(data)} entries, expected {rows * cols}")
    flat = np.array([complex(float(re), float(im)) for re, im in data], dtype=np.complex128)
    return as_matrix(flat.reshape(rows, cols))


def dumps_matrix(A, **kwargs):
    # json uses repr() for floats: shortest string that round-trips exactly
    return json.dumps(matrix_to_dict(A), **kwargs)


def loads_matrix(text):
    return matrix_from_dict(json.loads(text))
