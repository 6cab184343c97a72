import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.linalg import LinAlgError

from dcomp.linalg import (
    ConvergenceError,
    dumps_matrix,
    eigvalsh_desc,
    hermitian_eigensystem,
    loads_matrix,
    lu_determinant,
    lu_factor,
    lu_solve,
    matrix_from_dict,
    multiply,
    psd_sqrt,
)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return X + X.conj().T


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 24), seed=st.integers(0, 2**32 - 1))
def test_jacobi_matches_numpy(n, seed):
    H = random_hermitian(n, seed)
    eig = hermitian_eigensystem(H)
    expected = np.sort(np.linalg.eigvalsh(H))[::-1]
    assert np.allclose(eig.values, expected, atol=1e-10 * max(1, np.abs(expected).max()))
    V = eig.vectors
    assert np.allclose(V.conj().T @ V, np.eye(n), atol=1e-12)
    assert np.allclose(eig.reconstruct(), H, atol=1e-10 * np.abs(H).max())


def test_jacobi_degenerate_spectrum():
    rng = np.random.default_rng(3)
    Q, _ = np.linalg.qr(rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32)))
    values = np.repeat([3.0, 1e-3], 16)
    H = (Q * values) @ Q.conj().T
    assert np.allclose(eigvalsh_desc(H), values, atol=1e-12)


def test_jacobi_diagonal_input_needs_no_sweeps():
    eig = hermitian_eigensystem(np.diag([1.0, 5.0, -2.0]))
    assert eig.sweeps == 0
    assert list(eig.values) == [5.0, 1.0, -2.0]


def test_jacobi_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        hermitian_eigensystem([[1, 2], [0, 1]])


def test_jacobi_sweep_cap():
    with pytest.raises(ConvergenceError) as info:
        hermitian_eigensystem(random_hermitian(6, 1), max_sweeps=0)
    assert info.value.residual > 0


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((10, 6)) + 1j * rng.standard_normal((10, 6))
    H = X @ X.conj().T  # rank 6
    S = psd_sqrt(H)
    assert np.allclose(S, S.conj().T)
    assert np.allclose(S @ S, H, atol=1e-10)
    assert np.all(np.linalg.eigvalsh(S) > -1e-10)


def test_psd_sqrt_clamps_roundoff_but_rejects_indefinite():
    S = psd_sqrt(np.diag([4.0, -1e-12]))
    assert np.allclose(S, np.diag([2.0, 0.0]))
    with pytest.raises(ValueError, match="positive semidefinite"):
        psd_sqrt(np.diag([1.0, -1e-3]))


def test_psd_sqrt_drop_noise():
    H = np.diag([1.0, 1e-18, 0.0])
    assert psd_sqrt(H)[1, 1] == pytest.approx(1e-9)
    assert psd_sqrt(H, drop_noise=True)[1, 1] == 0.0


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 150), seed=st.integers(0, 2**32 - 1))
def test_lu_solve_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = lu_solve(A, y)
    assert np.allclose(x, np.linalg.solve(A, y), rtol=1e-8, atol=1e-10)


def test_lu_factor_reconstructs_pa():
    rng = np.random.default_rng(8)
    A = rng.standard_normal((70, 70)) + 0j
    f = lu_factor(A, block=16)
    L = np.tril(f.lu, -1) + np.eye(70)
    U = np.triu(f.lu)
    assert np.allclose(L @ U, A[f.perm])


def test_lu_determinant_matches_numpy():
    rng = np.random.default_rng(9)
    for n in (1, 2, 5, 33):
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        assert np.isclose(lu_determinant(A), np.linalg.det(A), rtol=1e-10)
    P = np.eye(3)[[1, 0, 2]]
    assert lu_determinant(P) == pytest.approx(-1.0)


def test_lu_singular():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(LinAlgError, match="singular"):
        lu_solve(A, [1.0, 1.0])
    assert lu_determinant(A) == 0
    assert lu_determinant(np.zeros((3, 3))) == 0


def test_lu_solve_shape_check():
    with pytest.raises(ValueError):
        lu_solve(np.eye(3), np.ones(4))


def test_multiply_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        multiply(np.eye(2), np.eye(3))
    assert np.allclose(multiply(np.eye(2), [[1, 2], [3, 4]]), [[1, 2], [3, 4]])


finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(st.tuples(finite, finite), min_size=6, max_size=6))
def test_json_round_trip_is_bit_exact(entries):
    A = np.array([complex(re, im) for re, im in entries]).reshape(2, 3)
    B = loads_matrix(dumps_matrix(A))
    assert B.shape == (2, 3)
    assert A.tobytes() == B.tobytes()


def test_json_rejects_bad_shape():
    with pytest.raises(ValueError):
        matrix_from_dict({"rows": 2, "cols": 2, "data": [[1, 0]] * 3})
