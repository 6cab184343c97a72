"""d-computable coefficient matrices and the pure states they define.

A state is described by a parameter ladder ``(a, c, d, (b_1, c_1), ...,
(b_k, c_k))``.  The base block is ``A_2 = [[a, -c], [c, d]]`` and each ladder
pair grows the matrix from size ``2^i`` to ``2^(i+1)``:

* J-family: ``[[b_i J, A], [s_i A^t, c_i J^t]]`` with ``s_i = (-1)^(i(i+1)/2)``
* I-family: identical first step, then ``[[b_i I, A], [-A^t, c_i I]]``

For these matrices ``A A^dag`` has the two eigenvalues
``(norm +- sqrt(norm^2 - 4 |bracket|^2)) / 2``, each ``2^k``-fold, where
``bracket`` and ``norm`` are the quadratic forms returned by
:func:`bracket_norm`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .multipliers import EXPLICIT_J4, J_VARIANTS, MAX_LEVEL, build_I, build_J, lemma_sign

FAMILIES = ("J", "I")
NORM_TOL = 1e-10


def _as_complex(z):
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError("parameters must be finite")
    return z


@dataclass(frozen=True)
class StateParams:
    """Parameters of one matrix ``A_{2^(k+1)}``; ``k = len(ladder)``.

    ``j_variant`` selects the J multipliers used by the J-family (see
    :func:`dcomp.multipliers.build_J`).  It is ignored by the I-family.
    """

    a: complex
    c: complex
    d: complex
    ladder: tuple
    family: str = "J"
    j_variant: str = EXPLICIT_J4

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be 'J' or 'I', got {self.family!r}")
        if self.j_variant not in J_VARIANTS:
            raise ValueError(f"unknown J variant {self.j_variant!r}")
        ladder = tuple((_as_complex(b), _as_complex(c)) for b, c in self.ladder)
        if not ladder:
            raise ValueError("ladder must contain at least one (b, c) pair")
        if len(ladder) + 1 > MAX_LEVEL:
            raise ValueError(f"ladder length {len(ladder)} exceeds the multiplier range")
        object.__setattr__(self, "a", _as_complex(self.a))
        object.__setattr__(self, "c", _as_complex(self.c))
        object.__setattr__(self, "d", _as_complex(self.d))
        object.__setattr__(self, "ladder", ladder)

    @property
    def k(self):
        return len(self.ladder)

    @property
    def N(self):
        return 2 ** (self.k + 1)

    def scaled(self, t):
        """All parameters multiplied by the scalar ``t``."""
        return replace(
            self,
            a=self.a * t,
            c=self.c * t,
            d=self.d * t,
            ladder=tuple((b * t, c * t) for b, c in self.ladder),
        )

    def truncated(self, k):
        """The parameters of the nested sub-block ``A_{2^(k+1)}``."""
        if not 1 <= k <= self.k:
            raise ValueError(f"cannot truncate level {self.k} to {k}")
        return replace(self, ladder=self.ladder[:k])

    @classmethod
    def random(cls, k, rng, family="J", j_variant=EXPLICIT_J4):
        """Draw every real and imaginary part uniformly from [-1, 1]."""
        z = rng.uniform(-1.0, 1.0, size=(3 + 2 * k, 2))
        vals = z[:, 0] + 1j * z[:, 1]
        ladder = tuple((vals[3 + 2 * i], vals[4 + 2 * i]) for i in range(k))
        return cls(vals[0], vals[1], vals[2], ladder, family, j_variant)

    def to_dict(self):
        pair = lambda z: [z.real, z.imag]  # noqa: E731
        return {
            "family": self.family,
            "a": pair(self.a),
            "c": pair(self.c),
            "d": pair(self.d),
            "ladder": [[pair(b), pair(c)] for b, c in self.ladder],
            "j_variant": self.j_variant,
        }

    @classmethod
    def from_dict(cls, obj):
        def z(v):
            if isinstance(v, (list, tuple)):
                if len(v) != 2:
                    raise ValueError(f"complex values are [re, im] pairs, got {v!r}")
                return complex(float(v[0]), float(v[1]))
            return complex(float(v))

        return cls(
            a=z(obj["a"]),
            c=z(obj["c"]),
            d=z(obj["d"]),
            ladder=tuple((z(b), z(c)) for b, c in obj["ladder"]),
            family=obj.get("family", "J"),
            j_variant=obj.get("j_variant", EXPLICIT_J4),
        )

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class BracketNorm:
    """The quadratic forms ``[A]`` (complex) and ``||A||`` (real, >= 0).

    ``||A||`` is the sum of the two distinct eigenvalues of ``A A^dag``, so
    ``trace(A A^dag) = 2^k ||A||``.
    """

    bracket: complex
    norm_sq: float


def family_multiplier(p, m=None, j_variant=None):
    """The multiplier of size ``2^m`` matching ``p``'s family (default: size N)."""
    m = p.k + 1 if m is None else m
    if p.family == "I" and m >= 2:
        return build_I(m)
    return build_J(m, j_variant or p.j_variant)


def build_matrix(p, j_variant=None):
    """Assemble ``A_{2^(k+1)}`` from its parameter ladder."""
    variant = j_variant or p.j_variant
    A = np.array([[p.a, -p.c], [p.c, p.d]], dtype=np.complex128)
    for i, (b, c) in enumerate(p.ladder, start=1):
        if p.family == "J" or i == 1:
            J = build_J(i, variant).matrix
            A = np.block([[b * J, A], [lemma_sign(i) * A.T, c * J.T]])
        else:
            M = build_I(i).matrix
            A = np.block([[b * M, A], [-A.T, c * M]])
    return A


def bracket_norm(p):
    """``[A]`` and ``||A||`` from the parameters alone.

    J-family: start from ``[A_4] = b_1 c_1 + a d + c^2`` and apply
    ``[A_{2^(i+1)}] = (-1)^(i(i+1)/2) b_i c_i - [A_{2^i}]`` for ``i >= 2``.
    I-family: ``b_1 c_1 + a d + c^2 - sum_{i>=2} b_i c_i``.
    Both: ``||A|| = |a|^2 + 2|c|^2 + |d|^2 + sum_i (|b_i|^2 + |c_i|^2)``.
    """
    b1, c1 = p.ladder[0]
    bracket = b1 * c1 + p.a * p.d + p.c * p.c
    norm = abs(p.a) ** 2 + 2 * abs(p.c) ** 2 + abs(p.d) ** 2 + abs(b1) ** 2 + abs(c1) ** 2
    for i, (b, c) in enumerate(p.ladder[1:], start=2):
        if p.family == "J":
            bracket = lemma_sign(i) * b * c - bracket
        else:
            bracket = bracket - b * c
        norm += abs(b) ** 2 + abs(c) ** 2
    return BracketNorm(complex(bracket), float(norm))


def frobenius_sq(p):
    """``trace(A A^dag)`` without building ``A``."""
    return 2**p.k * bracket_norm(p).norm_sq


def normalize(p):
    """Rescale all parameters by ``t > 0`` so that ``trace(A A^dag) = 1``."""
    f = frobenius_sq(p)
    if f == 0.0:
        raise ValueError("cannot normalize: all parameters are zero")
    return p.scaled(1.0 / np.sqrt(f))


@dataclass(frozen=True)
class PureState:
    """Row-major amplitudes of ``sum_ij A_ij e_i (x) e_j``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = int(round(np.sqrt(psi.size)))
        if n * n != psi.size or n == 0:
            raise ValueError(f"{psi.size} amplitudes is not a square dimension")
        if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
            raise ValueError("state is not normalized")
        psi.flags.writeable = False
        object.__setattr__(self, "amplitudes", psi)

    @property
    def N(self):
        return int(round(np.sqrt(self.amplitudes.size)))

    def matrix(self):
        return self.amplitudes.reshape(self.N, self.N)


def vectorize(A):
    """Flatten a unit-Frobenius-norm matrix into a :class:`PureState`."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("coefficient matrix must be square")
    tr = float(np.sum(np.abs(A) ** 2))
    if abs(tr - 1.0) > NORM_TOL:
        raise ValueError(f"trace(A A^dag) = {tr:.6g}, expected 1")
    return PureState(A.reshape(-1))


def state_from_params(p):
    """Normalize ``p`` and return its pure state."""
    return vectorize(build_matrix(normalize(p)))


def partial_trace_rho1(s):
    """Reduced density matrix of the first party, ``A A^dag``."""
    A = s.matrix()
    return A @ A.conj().T
