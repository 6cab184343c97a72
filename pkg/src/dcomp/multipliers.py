"""Signed-permutation multipliers J and I.

``J`` matrices drive the block recursion of the J-family of d-computable
matrices; ``I`` matrices play the same role for the second family.  Both
are stored densely (complex, entries in {-1, 0, 1}) and also as a
permutation plus signs, which is what the fast solver applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_LEVEL = 12

RECURSIVE = "recursive"
EXPLICIT_J4 = "explicit-j4"
J_VARIANTS = (RECURSIVE, EXPLICIT_J4)

J2 = np.array([[0, 1], [-1, 0]], dtype=np.complex128)
J4_EXPLICIT = np.array(
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128
)

# block sign pattern of the 8-block I case, row by row along the anti-diagonal
_I8_SIGNS = (1, -1, -1, 1, -1, 1, 1, -1)


def lemma_sign(m):
    """(-1)^(m(m+1)/2): the square/transpose sign of a size-2^m multiplier."""
    return -1 if (m * (m + 1) // 2) % 2 else 1


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A signed permutation matrix of size ``2**m``.

    ``perm`` and ``signs`` encode the action ``(M v)[i] = signs[i] * v[perm[i]]``.
    """

    kind: str
    m: int
    matrix: np.ndarray = field(repr=False)
    perm: np.ndarray = field(init=False, repr=False, compare=False)
    signs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("J", "I"):
            raise ValueError(f"unknown multiplier kind {self.kind!r}")
        M = np.asarray(self.matrix, dtype=np.complex128)
        size = 2**self.m
        if M.shape != (size, size):
            raise ValueError(f"level {self.m} needs shape {(size, size)}, got {M.shape}")
        nz = M != 0
        if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
            raise ValueError("multiplier must have exactly one nonzero per row and column")
        if not np.all(np.isin(M[nz], (1, -1))):
            raise ValueError("multiplier entries must be -1, 0 or +1")
        M = M.copy()
        M.flags.writeable = False
        perm = np.argmax(nz, axis=1)
        signs = M[np.arange(size), perm].real.copy()
        perm.flags.writeable = False
        signs.flags.writeable = False
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @property
    def size(self):
        return 2**self.m

    def apply(self, v):
        """``M @ v`` in O(N)."""
        return self.signs * np.asarray(v)[self.perm]

    def apply_t(self, v):
        """``M.T @ v`` in O(N)."""
        out = np.empty_like(np.asarray(v, dtype=np.complex128))
        out[self.perm] = self.signs * np.asarray(v)
        return out


def _check_level(m, lo):
    if not isinstance(m, (int, np.integer)) or not lo <= m <= MAX_LEVEL:
        raise ValueError(f"level must be an integer in [{lo}, {MAX_LEVEL}], got {m!r}")


def _antiblock(blocks):
    """Place ``blocks[i]`` on block row i, block column n-1-i."""
    n = len(blocks)
    s = blocks[0].shape[0]
    out = np.zeros((n * s, n * s), dtype=np.complex128)
    for i, B in enumerate(blocks):
        j = n - 1 - i
        out[i * s:(i + 1) * s, j * s:(j + 1) * s] = B
    return out


@lru_cache(maxsize=None)
def _j_matrix(m, variant):
    if m == 1:
        return J2
    if m == 2 and variant == EXPLICIT_J4:
        return J4_EXPLICIT
    prev = _j_matrix(m - 1, variant)
    # building size 2^(k+1) from 2^k, k = m - 1
    return _antiblock([prev, lemma_sign(m) * prev.T])


def build_J(m, variant=RECURSIVE):
    """Multiplier ``J_{2^m}``.

    ``variant="recursive"`` runs the block recursion
    ``J_{2^{k+1}} = [[0, J], [s J^t, 0]]``, ``s = (-1)^((k+1)(k+2)/2)``, all the
    way down from ``J_2``.  ``variant="explicit-j4"`` starts the same recursion
    from the hand-written ``J_4`` instead; the two differ already at ``m=2``
    in the signs of the middle anti-diagonal entries.
    """
    _check_level(m, 1)
    if variant not in J_VARIANTS:
        raise ValueError(f"unknown J variant {variant!r}")
    return Multiplier("J", m, _j_matrix(m, variant))


def build_J4_explicit():
    return Multiplier("J", 2, J4_EXPLICIT)


@lru_cache(maxsize=None)
def _i_matrix(m):
    if m == 2:
        return J4_EXPLICIT
    k = m - 1
    case = (k + 2) % 4
    if case == 0:
        prev = _i_matrix(m - 1)
        return _antiblock([prev, -prev])
    if case == 1:
        prev = _i_matrix(m - 1)
        return _antiblock([prev, prev])
    if case == 2:
        if m - 2 < 2:
            raise ValueError(f"I_{2**m} needs I_{2**(m - 2)}, which is undefined")
        sub = _i_matrix(m - 2)
        return _antiblock([sub, -sub, sub, -sub])
    if m - 3 < 2:
        raise ValueError(f"I_{2**m} needs I_{2**(m - 3)}, which is undefined")
    sub = _i_matrix(m - 3)
    return _antiblock([s * sub for s in _I8_SIGNS])


def build_I(m):
    """Multiplier ``I_{2^m}`` of the second family, ``m >= 2``.

    ``I_4`` is the explicit ``J_4``.  Larger sizes follow one of four block
    layouts chosen by ``(k + 2) mod 4`` where the result has size ``2^(k+1)``.
    """
    _check_level(m, 2)
    return Multiplier("I", m, _i_matrix(m))


@dataclass(frozen=True)
class MultiplierReport:
    """Max-norm residuals of the multiplier identities.

    ``sigma`` is the sign in ``M M = sigma Id`` and ``M^t = sigma M``.  For
    J it is fixed by the level; for I (no stated rule) the better fitting
    sign is reported.
    """

    kind: str
    m: int
    sigma: int
    orthogonal: float
    orthogonal_t: float
    square: float
    transpose: float

    @property
    def max_residual(self):
        return max(self.orthogonal, self.orthogonal_t, self.square, self.transpose)

    @property
    def passed(self):
        return self.max_residual == 0.0


def _residuals(M, sigma):
    Id = np.eye(M.shape[0])
    return (
        float(np.max(np.abs(M.T @ M - Id))),
        float(np.max(np.abs(M @ M.T - Id))),
        float(np.max(np.abs(M @ M - sigma * Id))),
        float(np.max(np.abs(M.T - sigma * M))),
    )


def check_multiplier_identities(M):
    """Evaluate ``M^t M = M M^t = Id``, ``M M = sigma Id`` and ``M^t = sigma M``."""
    A = np.asarray(M.matrix)
    if M.kind == "J":
        sigma = lemma_sign(M.m)
        res = _residuals(A, sigma)
    else:
        candidates = {s: _residuals(A, s) for s in (1, -1)}
        sigma = min(candidates, key=lambda s: max(candidates[s]))
        res = candidates[sigma]
    return MultiplierReport(M.kind, M.m, sigma, *res)
