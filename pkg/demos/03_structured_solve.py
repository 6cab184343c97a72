"""Solve A x = y with multipliers instead of elimination.

Run with ``python3 demos/03_structured_solve.py``.
"""

import numpy as np

from dcomp.linalg import lu_solve
from dcomp.solver import SolveForm, StructuredSystem, bench_solve, fit_exponent
from dcomp.states import StateParams

rng = np.random.default_rng(11)
p = StateParams.random(5, rng)
system = StructuredSystem.from_params(p)
y = rng.standard_normal(p.N) + 1j * rng.standard_normal(p.N)

for form in SolveForm:
    x = system.solve(y, form)
    r = np.linalg.norm(system.matrix(form) @ x - y) / np.linalg.norm(y)
    print(f"form {form.value:<4} relative residual {r:.2e}")

x = system.solve(y)
x_lu = lu_solve(system.A, y)
print(f"difference from LU: {np.linalg.norm(x - x_lu) / np.linalg.norm(x_lu):.2e}")

print("\n   N   structured [s]      LU [s]")
records = bench_solve([6, 7, 8, 9], reps=3, seed=7)
for rec in records:
    print(f"{rec.N:>5} {rec.structured_seconds:>15.2e} {rec.lu_seconds:>11.2e}")
sizes = [r.N for r in records]
print(f"fitted exponents: structured {fit_exponent(sizes, [r.structured_seconds for r in records]):.2f}, "
      f"LU {fit_exponent(sizes, [r.lu_seconds for r in records]):.2f}")
