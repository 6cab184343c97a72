"""Three routes to the concurrence of a family state, then a mixture.

Run with ``python3 demos/02_concurrence.py``.
"""

import numpy as np

from dcomp.entanglement import (
    Ensemble,
    assemble_density,
    build_p,
    concurrence_pform,
    concurrence_pure,
    eof_from_concurrence,
    eof_spectral,
    mixed_concurrence,
    spectral_summary,
)
from dcomp.states import StateParams, normalize, state_from_params

rng = np.random.default_rng(3)
k = 2
p = normalize(StateParams.random(k, rng))
psi = state_from_params(p)
P = build_p(k)

print(f"k = {k}, state of dimension {psi.amplitudes.size}")
print(f"bracket route      d = {concurrence_pure(p):.12f}")
print(f"sign-matrix route  d = {concurrence_pform(psi, P):.12f}")
s = spectral_summary(p)
print(f"spectral route     d = {s.d:.12f}  (lambda1 = {s.lambda1:.6f}, lambda2 = {s.lambda2:.6f})")

d = concurrence_pure(p)
print(f"\nEoF from d        = {eof_from_concurrence(d, 2**k):.12f} bits")
print(f"EoF from spectrum = {eof_spectral(psi):.12f} bits")

# A mixture of three family states.  For a rank-1 mixture the Omega formula
# returns the pure value; mixing lowers it.
rho1 = assemble_density(Ensemble(((1.0, psi),)))
print(f"\nrank-1 density matrix: d = {mixed_concurrence(rho1, P).d:.12f}")

others = [state_from_params(StateParams.random(k, rng)) for _ in range(2)]
ens = Ensemble(((0.5, psi), (0.3, others[0]), (0.2, others[1])))
res = mixed_concurrence(assemble_density(ens), P)
avg = sum(w * concurrence_pform(m, P) for w, m in ens.members)
print(f"three-member mixture: d = {res.d:.6f}, E = {res.E:.6f} bits")
print(f"average member concurrence = {avg:.6f}")
print("largest Omegas:", np.round(res.omegas[:4], 6))
