import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dbz.linalg import jacobi_eigenvalues


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_matches_eigvalsh(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    got = jacobi_eigenvalues(a)
    ref = np.linalg.eigvalsh(a)
    assert np.allclose(got, ref, rtol=0, atol=1e-12 * np.abs(ref).max())


def test_trace_and_determinant_preserved():
    a = random_hermitian(np.random.default_rng(7), 6)
    lam = jacobi_eigenvalues(a)
    assert lam.sum() == pytest.approx(np.trace(a).real, abs=1e-12)
    assert np.prod(lam) == pytest.approx(np.linalg.det(a).real, rel=1e-10)


def test_sign_of_small_negative_eigenvalue():
    # a rank-one PSD matrix perturbed by a tiny negative direction
    v = np.array([1.0, 1j, -0.5])
    a = np.outer(v, v.conj()) - 1e-9 * np.eye(3)
    lam = jacobi_eigenvalues(a)
    assert lam[0] == pytest.approx(-1e-9, rel=1e-5)


def test_diagonal_and_trivial_inputs():
    assert list(jacobi_eigenvalues(np.diag([3.0, -1.0, 2.0]))) == [-1.0, 2.0, 3.0]
    assert jacobi_eigenvalues(np.zeros((2, 2))).tolist() == [0.0, 0.0]
    assert jacobi_eigenvalues(np.zeros((0, 0))).size == 0
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.zeros((2, 3)))
