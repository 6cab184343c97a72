"""Structured linear solves with J-family matrices.

Because ``(AJ)^t (JA) = [A] Id``, the inverse of ``A`` is
``J^t A^t J / [A]``.  Applying ``J`` is a signed permutation, so a solve costs
one dense mat-vec, against ``O(N^3)`` for Gaussian elimination.  With
``B = b J`` (``b`` defaults to the top ladder entry ``b_k``):

====  =====================  ================================
form  system                 solution
====  =====================  ================================
A     ``A x = y``            ``J^t A^t J y / [A]``
BA    ``B A x = y``          ``J^t A^t y / (b [A])``
At    ``A^t x = y``          ``J^t A J y / [A]``
AtBt  ``A^t B^t x = y``      ``A J y / (b [A])``
====  =====================  ================================
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import lu_factor, lu_solve
from .multipliers import EXPLICIT_J4
from .states import StateParams, bracket_norm, build_matrix, family_multiplier

SINGULAR_BRACKET = 1e-12
ZERO_B = 1e-12
BENCH_MIN_BRACKET = 1e-3
MAX_BENCH_LEVEL = 11


class SolveForm(str, Enum):
    A = "A"
    BA = "BA"
    At = "At"
    AtBt = "AtBt"


@dataclass(frozen=True)
class StructuredSystem:
    """A prebuilt matrix with its bracket and top-level multiplier."""

    A: np.ndarray
    bracket: complex
    J: object
    b: complex

    @classmethod
    def from_params(cls, p, b=None):
        if p.family != "J":
            raise ValueError("structured solves need the J family")
        if p.j_variant != EXPLICIT_J4:
            raise ValueError(
                f"J variant {p.j_variant!r} does not satisfy (AJ)^t(JA) = [A] Id"
            )
        bn = bracket_norm(p)
        if abs(bn.bracket) <= SINGULAR_BRACKET * max(bn.norm_sq, np.finfo(float).tiny):
            raise ValueError("singular bracket")
        b = p.ladder[-1][0] if b is None else complex(b)
        return cls(A=build_matrix(p), bracket=bn.bracket, J=family_multiplier(p), b=b)

    def matrix(self, form):
        """The dense system matrix named by ``form``."""
        form = SolveForm(form)
        B = self.b * np.asarray(self.J.matrix)
        return {
            SolveForm.A: self.A,
            SolveForm.BA: B @ self.A,
            SolveForm.At: self.A.T,
            SolveForm.AtBt: self.A.T @ B.T,
        }[form]

    def solve(self, y, form=SolveForm.A):
        form = SolveForm(form)
        y = np.asarray(y, dtype=np.complex128)
        if y.shape != (self.A.shape[0],):
            raise ValueError(f"y has shape {y.shape}, expected ({self.A.shape[0]},)")
        if form in (SolveForm.BA, SolveForm.AtBt) and abs(self.b) <= ZERO_B:
            raise ValueError("zero b_k")
        J, A, br = self.J, self.A, self.bracket
        if form is SolveForm.A:
            return J.apply_t(A.T @ J.apply(y)) / br
        if form is SolveForm.BA:
            return J.apply_t(A.T @ y) / (self.b * br)
        if form is SolveForm.At:
            return J.apply_t(A @ J.apply(y)) / br
        return A @ J.apply(y) / (self.b * br)


def structured_solve(p, y, form=SolveForm.A, b=None):
    """Solve the system named by ``form`` for a J-family matrix.

    Raises ``ValueError("singular bracket")`` when ``|[A]| <= 1e-12 ||A||`` and
    ``ValueError("zero b_k")`` for the B forms when ``|b| <= 1e-12``.
    """
    return StructuredSystem.from_params(p, b).solve(y, form)


@dataclass(frozen=True)
class BenchRecord:
    N: int
    structured_seconds: float
    lu_seconds: float
    residual_structured: float
    residual_lu: float


def _relres(A, x, y):
    return float(np.linalg.norm(A @ x - y) / np.linalg.norm(y))


def bench_draw(k, seed):
    """Seeded well-conditioned draw (``|[A]| >= 1e-3``) and right-hand side."""
    rng = np.random.default_rng([seed, k])
    while True:
        p = StateParams.random(k, rng)
        if abs(bracket_norm(p).bracket) >= BENCH_MIN_BRACKET:
            break
    y = rng.standard_normal(2 ** (k + 1)) + 1j * rng.standard_normal(2 ** (k + 1))
    return p, y


def bench_solve(k_list, reps, seed, clock=time.perf_counter):
    """Median wall times of the structured solve and of LU on one draw per k.

    Only the solve is timed for the structured path (the matrix is built
    once); the LU timing covers factorization plus substitution.
    """
    records = []
    for k in k_list:
        if not 1 <= k <= MAX_BENCH_LEVEL:
            raise ValueError(f"bench levels must be in [1, {MAX_BENCH_LEVEL}], got {k}")
        p, y = bench_draw(k, seed)
        system = StructuredSystem.from_params(p)
        A = system.A
        t_struct, t_lu = [], []
        for _ in range(reps):
            t0 = clock()
            xs = system.solve(y)
            t_struct.append(clock() - t0)
            t0 = clock()
            xl = lu_solve(A, y, lu_factor(A))
            t_lu.append(clock() - t0)
        records.append(
            BenchRecord(
                N=A.shape[0],
                structured_seconds=statistics.median(t_struct),
                lu_seconds=statistics.median(t_lu),
                residual_structured=_relres(A, xs, y),
                residual_lu=_relres(A, xl, y),
            )
        )
    return records


CSV_HEADER = ("N", "structured_s", "lu_s", "res_structured", "res_lu")


def write_bench_csv(records, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(
            [r.N, repr(r.structured_seconds), repr(r.lu_seconds),
             repr(r.residual_structured), repr(r.residual_lu)]
        )


def fit_exponent(sizes, seconds):
    """Least-squares slope of ``log t`` against ``log N``."""
    return float(np.polyfit(np.log(sizes), np.log(seconds), 1)[0])
