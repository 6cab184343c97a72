"""Build a J-family matrix and look at the spectrum of A A^dag.

Run with ``python3 demos/01_two_eigenvalues.py``.
"""

import numpy as np

from dcomp.identities import format_table, quadratic_roots, summarize, verify_family_suite
from dcomp.linalg import eigvalsh_desc
from dcomp.multipliers import EXPLICIT_J4, RECURSIVE
from dcomp.states import StateParams, bracket_norm, build_matrix

rng = np.random.default_rng(7)
p = StateParams.random(3, rng)
A = build_matrix(p)
print(f"k = {p.k}: A is {A.shape[0]}x{A.shape[1]}")

bn = bracket_norm(p)
print(f"[A]  = {bn.bracket:.6f}")
print(f"||A|| = {bn.norm_sq:.6f}")

# A A^dag should have only two eigenvalues, each 2^k-fold
ev = eigvalsh_desc(A @ A.conj().T)
print("eigenvalues of A A^dag:")
print(np.round(ev, 10))
print("roots of l^2 - ||A|| l + |[A]|^2:", np.round(quadratic_roots(bn), 10))

# The same ladder with the purely recursive J multipliers loses the
# two-eigenvalue structure as soon as k >= 2.
A_rec = build_matrix(p, j_variant=RECURSIVE)
print("\nrecursive multipliers, eigenvalues of A A^dag:")
print(np.round(eigvalsh_desc(A_rec @ A_rec.conj().T), 6))

print("\nidentity suite, k = 1, 2, 10 draws per cell:")
rows = summarize(verify_family_suite(2, 10, seed=1, families=("J",), j_variants=(RECURSIVE, EXPLICIT_J4)))
print(format_table(rows))
