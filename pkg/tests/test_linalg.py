import numpy as np
import pytest
from hypothesis import given, strategies as st

from wishart_appt import linalg


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return linalg.hermitize(a)


def test_eigenvalues_examples():
    assert np.allclose(linalg.hermitian_eigenvalues(np.eye(3)), [1, 1, 1])
    assert np.allclose(linalg.hermitian_eigenvalues(np.diag([2.0, -1.0])), [2, -1])
    assert np.allclose(
        linalg.hermitian_eigenvalues([[0.0, -1.0], [-1.0, 0.0]]), [1, -1]
    )


def test_eigenvalues_sorted_non_increasing():
    values = linalg.hermitian_eigenvalues(random_hermitian(30, 0))
    assert np.all(np.diff(values) <= 0)


def test_operator_norm_examples():
    assert linalg.operator_norm(np.eye(4)) == 1.0
    assert linalg.operator_norm([[0, -1], [-1, 0]]) == pytest.approx(1.0)
    assert linalg.operator_norm(np.diag([3.0, -5.0])) == 5.0


def test_max_abs_entry():
    assert linalg.max_abs_entry(np.zeros((3, 3))) == 0.0
    assert linalg.max_abs_entry([[2.0, -3.0], [-3.0, 1.0]]) == 3.0
    assert linalg.max_abs_entry(np.array([[1 + 2j, 0], [0, 0]])) == pytest.approx(
        np.sqrt(5)
    )


def test_is_psd_examples():
    assert linalg.is_psd(np.eye(2))
    assert not linalg.is_psd([[0.0, -1.0], [-1.0, 0.0]])
    assert linalg.is_psd(np.diag([0.0, 0.0]))


def test_is_psd_monotone_in_tol():
    a = np.diag([1.0, -1e-6])
    assert not linalg.is_psd(a, tol=1e-8)
    assert linalg.is_psd(a, tol=1e-5)
    with pytest.raises(ValueError):
        linalg.is_psd(a, tol=-1.0)


def test_hermitize_symmetrizes_and_validates():
    a = np.array([[1.0, 2.0 + 1e-15], [2.0, 1.0]])
    h = linalg.hermitize(a)
    assert np.array_equal(h, h.conj().T)
    with pytest.raises(ValueError):
        linalg.hermitize(np.ones((2, 3)))
    with pytest.raises(ValueError):
        linalg.hermitize(np.array([[np.inf, 0], [0, 1.0]]))


@pytest.mark.parametrize("seed", range(5))
def test_trace_matches_eigenvalue_sum(seed):
    n = 20 + 36 * seed  # up to n = 164
    a = random_hermitian(n, seed)
    values = linalg.hermitian_eigenvalues(a)
    trace = float(np.trace(a).real)
    assert abs(values.sum() - trace) <= 1e-9 * max(1.0, abs(trace))


@pytest.mark.parametrize("seed", range(4))
def test_block_diagonal_merges_spectra(seed):
    rng = np.random.default_rng(100 + seed)
    n1, n2 = int(rng.integers(2, 12)), int(rng.integers(2, 12))
    a, b = random_hermitian(n1, seed * 2), random_hermitian(n2, seed * 2 + 1)
    block = np.zeros((n1 + n2, n1 + n2), dtype=complex)
    block[:n1, :n1] = a
    block[n1:, n1:] = b
    merged = np.sort(
        np.concatenate(
            [linalg.hermitian_eigenvalues(a), linalg.hermitian_eigenvalues(b)]
        )
    )[::-1]
    assert np.allclose(linalg.hermitian_eigenvalues(block), merged, atol=1e-10)


@given(st.integers(0, 10**6))
def test_operator_norm_entry_bound(seed):
    a = random_hermitian(int(np.random.default_rng(seed).integers(1, 15)), seed)
    n = a.shape[0]
    assert linalg.operator_norm(a) <= n * linalg.max_abs_entry(a) + 1e-12
