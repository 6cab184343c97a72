"""Generalized concurrence and entanglement of formation.

For a normalized family state the reduced density matrix has two
eigenvalues ``lambda_1 >= lambda_2``, each ``n = 2^k``-fold.  The
generalized concurrence is ``d = 2n sqrt(lambda_1 lambda_2) = 2^(k+1) |[A]|``.
It equals ``|<psi| p psi*>|`` for a symmetric sign matrix ``p``, and the
entanglement of formation is a monotone function of it.  For mixed states
whose decompositions stay inside a family,
``d(rho) = max(0, Omega_1 - sum_{i>=2} Omega_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import HERMITIAN_TOL, eigvalsh_desc, max_norm, psd_sqrt, rank_floor
from .multipliers import EXPLICIT_J4
from .states import (
    PureState,
    StateParams,
    bracket_norm,
    build_matrix,
    normalize,
    partial_trace_rho1,
    vectorize,
)

P_SELFCHECK_DRAWS = 20
P_SELFCHECK_TOL = 1e-10
P_SELFCHECK_SEED = 20240601
MAX_P_LEVEL = 5
MAX_MIXED_LEVEL = 2
ENTROPY_CUTOFF = 1e-14


# --------------------------------------------------------------------------
# p matrices
# --------------------------------------------------------------------------


def _antidiagonal(signs):
    Q = signs.size
    P = np.zeros((Q, Q), dtype=np.complex128)
    P[np.arange(Q), Q - 1 - np.arange(Q)] = signs
    return P


def row_formula_signs(k):
    """Anti-diagonal signs from the closed row rule.

    The ``-1`` rows (1-based) are ``2^(k+1)-1, 2^(k+1), 2^(k+2)-1, 2^(k+2)``
    shifted by ``s (2^(k+2) - 2)`` for ``s = 0 .. 2^k - 1``.  The rule
    reproduces the concurrence only for ``k <= 2``.
    """
    Q = 4 ** (k + 1)
    signs = np.ones(Q)
    step = 2 ** (k + 2) - 2
    for s in range(2**k):
        for row in (2 ** (k + 1) - 1, 2 ** (k + 1), 2 ** (k + 2) - 1, 2 ** (k + 2)):
            signs[row + s * step - 1] = -1.0
    return signs


def _parameter_layout(k, family, j_variant):
    """Which parameter (and with which sign) sits at every amplitude."""
    n_params = 3 + 2 * k
    N = 2 ** (k + 1)
    tag = np.full(N * N, -1)
    sign = np.zeros(N * N)
    for i in range(n_params):
        vals = np.zeros(n_params)
        vals[i] = 1.0
        ladder = tuple((vals[3 + 2 * j], vals[4 + 2 * j]) for j in range(k))
        p = StateParams(vals[0], vals[1], vals[2], ladder, family, j_variant)
        A = build_matrix(p).real.reshape(-1)
        hit = A != 0
        if np.any(tag[hit] >= 0):
            raise ValueError("parameters overlap in the coefficient matrix")
        tag[hit] = i
        sign[hit] = A[hit]
    return tag, sign


def _bracket_coefficients(k, family, j_variant):
    """Coefficients of the monomials ``x_u x_v`` in ``[A]``."""
    n_params = 3 + 2 * k

    def bracket(vals):
        ladder = tuple((vals[3 + 2 * j], vals[4 + 2 * j]) for j in range(k))
        p = StateParams(vals[0], vals[1], vals[2], ladder, family, j_variant)
        return bracket_norm(p).bracket.real

    unit = np.eye(n_params)
    single = [bracket(unit[i]) for i in range(n_params)]
    coef = np.diag(single)
    for u in range(n_params):
        for v in range(u + 1, n_params):
            coef[u, v] = coef[v, u] = bracket(unit[u] + unit[v]) - single[u] - single[v]
    return coef


def derived_signs(k, family="J", j_variant=EXPLICIT_J4):
    """Anti-diagonal signs obtained by matching amplitude pairs to ``[A]``.

    ``psi^T p psi = sum_I sigma_I psi_I psi_{Q+1-I}``.  Every nonzero pair
    product is a monomial of ``[A]`` occurring at exactly ``2^(k+1)``
    positions, so choosing ``sigma_I`` to match the monomial's sign gives
    ``psi^T p psi = +-2^(k+1) [A]``.  The overall sign is fixed so that the
    ``a d`` term enters positively.
    """
    tag, sign = _parameter_layout(k, family, j_variant)
    coef = _bracket_coefficients(k, family, j_variant)
    orient = 1.0 if coef[0, 2] >= 0 else -1.0
    Q = tag.size
    signs = np.ones(Q)
    for I in range(Q):
        u, v = tag[I], tag[Q - 1 - I]
        if u < 0 or v < 0:
            continue
        c = coef[u, v]
        if c == 0:
            raise ValueError(f"amplitude pair at row {I + 1} is not a bracket monomial")
        signs[I] = orient * np.sign(c) * sign[I] * sign[Q - 1 - I]
    return signs


def _selfcheck(signs, k, family, j_variant):
    rng = np.random.default_rng([P_SELFCHECK_SEED, k])
    worst = 0.0
    for _ in range(P_SELFCHECK_DRAWS):
        p = normalize(StateParams.random(k, rng, family, j_variant))
        psi = build_matrix(p).reshape(-1)
        lhs = abs(np.sum(signs * psi * psi[::-1]))
        rhs = 2 ** (k + 1) * abs(bracket_norm(p).bracket)
        worst = max(worst, abs(lhs - rhs))
    return worst


@lru_cache(maxsize=None)
def p_signs(k, family="J", j_variant=EXPLICIT_J4, rule="derived"):
    """Verified anti-diagonal sign vector of ``p`` (see :func:`build_p`)."""
    if not 1 <= k <= MAX_P_LEVEL:
        raise ValueError(f"k must be in [1, {MAX_P_LEVEL}], got {k}")
    if rule == "derived":
        signs = derived_signs(k, family, j_variant)
    elif rule == "row-formula":
        signs = row_formula_signs(k)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    worst = _selfcheck(signs, k, family, j_variant)
    if worst > P_SELFCHECK_TOL:
        raise ValueError(
            f"p-matrix self-verification failed for k={k} ({rule}): "
            f"| |<psi|p psi*>| - 2^(k+1)|[A]| | = {worst:.3e}"
        )
    signs.flags.writeable = False
    return signs


def build_p(k, family="J", j_variant=EXPLICIT_J4, rule="derived"):
    """The ``4^(k+1)``-square symmetric anti-diagonal sign matrix ``p``.

    The result satisfies ``|<psi|p psi*>| = 2^(k+1) |[A]|`` for every state of
    the given family; this is checked on 20 random normalized draws and a
    ``ValueError`` is raised on mismatch.

    Parameters
    ----------
    k : int
        Level, ``1 <= k <= 5``.
    family, j_variant : str
        The family whose states ``p`` must serve.
    rule : {"derived", "row-formula"}
        ``"derived"`` matches signs to the bracket monomials and works for
        every level; ``"row-formula"`` uses the closed row rule, which only
        passes the check for ``k <= 2``.
    """
    return _antidiagonal(np.array(p_signs(k, family, j_variant, rule)))


def minus_one_rows(P):
    """1-based rows whose anti-diagonal entry is ``-1``."""
    Q = P.shape[0]
    anti = P[np.arange(Q), Q - 1 - np.arange(Q)].real
    return [int(i) + 1 for i in np.flatnonzero(anti < 0)]


# nonzero entries of the 16x16 p for the legacy 4x4 family, 1-based
_LEGACY_ENTRIES = {
    (1, 16): 1, (2, 15): 1, (3, 14): -1, (4, 10): 1, (5, 12): 1, (6, 11): 1,
    (7, 13): 1, (10, 4): 1, (11, 6): 1, (12, 5): 1, (13, 7): 1, (14, 3): -1,
    (15, 2): 1, (16, 1): 1,
}


def build_p_legacy16(literal=False):
    """The 16x16 ``p`` for the legacy family of :func:`legacy_matrix`.

    With ``literal=True`` the two middle entries are placed on the diagonal
    at (8, 8) and (9, 9), as they are usually printed.  That version pairs
    ``d_1`` and ``a_1`` with themselves and does not reproduce the
    concurrence.  The default puts them at (8, 9) and (9, 8).
    """
    P = np.zeros((16, 16), dtype=np.complex128)
    for (i, j), v in _LEGACY_ENTRIES.items():
        P[i - 1, j - 1] = v
    if literal:
        P[7, 7] = P[8, 8] = -1
    else:
        P[7, 8] = P[8, 7] = -1
    return P


# --------------------------------------------------------------------------
# pure states
# --------------------------------------------------------------------------


def concurrence_pure(p):
    """``2^(k+1) |[A]|``; lies in [0, 1] when ``p`` is normalized."""
    return float(2 ** (p.k + 1) * abs(bracket_norm(p).bracket))


def concurrence_pform(s, p):
    """``|<psi| p psi*>|`` for a state and a sign matrix of matching size."""
    psi = s.amplitudes if isinstance(s, PureState) else np.asarray(s, dtype=np.complex128)
    P = np.asarray(p)
    if P.shape != (psi.size, psi.size):
        raise ValueError(f"p has shape {P.shape}, state has {psi.size} amplitudes")
    return float(abs(np.vdot(psi, P @ psi.conj())))


def _entropy_terms(values):
    v = np.asarray(values, dtype=float)
    v = v[v > ENTROPY_CUTOFF]
    return float(-np.sum(v * np.log2(v)))


def eof_from_concurrence(d, n):
    """Entanglement of formation of a state with two ``n``-fold eigenvalues.

    ``E = n h(x) + n h(1/n - x)`` with ``h(t) = -t log2 t`` and
    ``x = (1/n + sqrt(1 - d^2) / n) / 2``.
    """
    if n < 1:
        raise ValueError("degeneracy must be >= 1")
    if d < 0 or d > 1 + 1e-12:
        raise ValueError(f"concurrence {d} outside [0, 1]")
    d = min(float(d), 1.0)
    x = 0.5 * (1.0 + np.sqrt(1.0 - d * d)) / n
    y = max(1.0 / n - x, 0.0)
    return n * _entropy_terms([x, y])


def eof_spectral(s):
    """Von Neumann entropy (bits) of the reduced state ``A A^dag``."""
    return _entropy_terms(eigvalsh_desc(partial_trace_rho1(s)))


@dataclass(frozen=True)
class SpectralSummary:
    """Two-eigenvalue description of a normalized family state."""

    n: int
    lambda1: float
    lambda2: float
    D: float
    d: float
    E: float


def spectral_summary(p):
    """Summarize ``normalize(p)`` from the spectrum of its reduced state."""
    q = normalize(p)
    ev = np.clip(eigvalsh_desc(partial_trace_rho1(vectorize(build_matrix(q)))), 0.0, None)
    n = q.N // 2
    lam1, lam2 = float(np.mean(ev[:n])), float(np.mean(ev[n:]))
    E = n * _entropy_terms([lam1, lam2])
    return SpectralSummary(
        n=n,
        lambda1=lam1,
        lambda2=lam2,
        D=(lam1 * lam2) ** n,
        d=2 * n * np.sqrt(lam1 * lam2),
        E=E,
    )


# --------------------------------------------------------------------------
# mixed states
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Ensemble:
    """Probabilities and pure states of a decomposition ``sum p_i |psi_i><psi_i|``."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        if not members:
            raise ValueError("ensemble is empty")
        if any(w < 0 for w, _ in members):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(w for w, _ in members) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")
        dims = {s.amplitudes.size for _, s in members}
        if len(dims) != 1:
            raise ValueError("ensemble members have different dimensions")
        object.__setattr__(self, "members", members)

    @property
    def dim(self):
        return self.members[0][1].amplitudes.size


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    k: int

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=np.complex128)
        Q = 4 ** (self.k + 1)
        if rho.shape != (Q, Q):
            raise ValueError(f"level {self.k} needs a {Q}x{Q} density matrix")
        if max_norm(rho - rho.conj().T) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > HERMITIAN_TOL:
            raise ValueError("density matrix trace is not 1")
        object.__setattr__(self, "matrix", rho)


def assemble_density(e):
    """``rho = sum_i p_i |psi_i><psi_i|``."""
    N = int(round(np.sqrt(e.dim)))
    k = int(round(np.log2(N))) - 1
    if 2 ** (k + 1) != N:
        raise ValueError(f"state dimension {e.dim} is not 4^(k+1)")
    psis = np.array([s.amplitudes for _, s in e.members])
    weights = np.array([w for w, _ in e.members])
    rho = (psis.T * weights) @ psis.conj()
    return DensityMatrix(0.5 * (rho + rho.conj().T), k)


@dataclass(frozen=True)
class MixedConcurrenceResult:
    omegas: np.ndarray
    d: float
    E: float


def mixed_concurrence(rho, p, route="hermitian", allow_large=False):
    """Concurrence and EoF of a mixed state from the ``Omega`` spectrum.

    ``Omega_i`` are the square roots of the eigenvalues of
    ``M = sqrt(rho) p rho* p sqrt(rho)``, which is similar to ``rho p rho* p``.
    ``route="hermitian"`` takes the eigenvalues of ``sqrt(M)``;
    ``route="direct"`` square-roots the eigenvalues of ``M``.  Both routes
    zero eigenvalues below the numerical-rank floor before taking roots.
    """
    if rho.k > MAX_MIXED_LEVEL and not allow_large:
        raise ValueError(f"mixed-state routines are limited to k <= {MAX_MIXED_LEVEL}")
    R = rho.matrix
    P = np.asarray(p, dtype=np.complex128)
    if P.shape != R.shape:
        raise ValueError(f"p has shape {P.shape}, rho has {R.shape}")
    S = psd_sqrt(R, drop_noise=True)
    M = S @ P @ R.conj() @ P @ S
    M = 0.5 * (M + M.conj().T)
    if route == "hermitian":
        omegas = eigvalsh_desc(psd_sqrt(M, drop_noise=True))
    elif route == "direct":
        mu = eigvalsh_desc(M)
        mu[mu <= rank_floor(mu)] = 0.0
        omegas = np.sqrt(mu)
    else:
        raise ValueError(f"unknown route {route!r}")
    omegas = np.clip(omegas, 0.0, None)
    d = max(0.0, float(omegas[0] - np.sum(omegas[1:])))
    E = eof_from_concurrence(min(d, 1.0), 2**rho.k)
    return MixedConcurrenceResult(omegas=omegas, d=d, E=E)


def convexity_gap(e, p, route="hermitian"):
    """``d(rho) - sum_i p_i d(psi_i)``; positive values violate the bound."""
    rho = assemble_density(e)
    mixed = mixed_concurrence(rho, p, route).d
    average = sum(w * concurrence_pform(s, p) for w, s in e.members)
    return mixed - average


# --------------------------------------------------------------------------
# legacy 4x4 family
# --------------------------------------------------------------------------


def legacy_matrix(b, a1, b1, c1, d1, e):
    """Coefficient matrix of the legacy 4x4 family."""
    return np.array(
        [
            [0, b, a1, b1],
            [-b, 0, c1, d1],
            [a1, c1, 0, -e],
            [b1, d1, e, 0],
        ],
        dtype=np.complex128,
    )


def normalize_legacy(b, a1, b1, c1, d1, e):
    """Scale the six parameters so the legacy matrix has unit Frobenius norm."""
    f = float(np.sum(np.abs(legacy_matrix(b, a1, b1, c1, d1, e)) ** 2))
    if f == 0.0:
        raise ValueError("cannot normalize: all parameters are zero")
    t = 1.0 / np.sqrt(f)
    return tuple(complex(z) * t for z in (b, a1, b1, c1, d1, e))


def concurrence_legacy(b, a1, b1, c1, d1, e):
    """``4 |b_1 c_1 - a_1 d_1 + b e|`` for normalized legacy parameters."""
    return float(4 * abs(b1 * c1 - a1 * d1 + b * e))
