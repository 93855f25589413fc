import math

import numpy as np
import pytest

from wishart_appt import asymptotics, linalg, moments, sampling
from wishart_appt.sampling import DensityMatrix, RngStream


def bell_state():
    rho = np.zeros((4, 4))
    rho[np.ix_([0, 3], [0, 3])] = 0.5
    return rho


def test_rng_stream_reproducible_and_distinct():
    a = sampling.sample_ginibre(5, 7, RngStream(123, 4))
    b = sampling.sample_ginibre(5, 7, RngStream(123, 4))
    c = sampling.sample_ginibre(5, 7, RngStream(123, 5))
    d = sampling.sample_ginibre(5, 7, RngStream(124, 4))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    assert RngStream(123).substream(9) == RngStream(123, 9)


def test_ginibre_moments():
    g = sampling.sample_ginibre(64, 64, RngStream(7))
    assert abs(np.mean(np.abs(g) ** 2) - 1.0) < 0.05
    assert abs(np.mean(g)) < 0.05
    assert g.shape == (64, 64)


def test_wishart_trace_statistics():
    d, s, trials = 16, 64, 200
    traces = []
    traces2 = []
    for t in range(trials):
        w = sampling.sample_wishart(d, s, RngStream(11, t))
        traces.append(np.trace(w).real)
        traces2.append(np.trace(w @ w).real)
    assert abs(np.mean(traces) - d * s) / (d * s) < 0.03
    expected2 = moments.raw_wishart_moment(2, d, s)
    assert abs(np.mean(traces2) - expected2) / expected2 < 0.05


@pytest.mark.parametrize("d,s", [(3, 2), (5, 5), (4, 9)])
def test_wishart_always_psd(d, s):
    for t in range(5):
        w = sampling.sample_wishart(d, s, RngStream(3, t))
        assert linalg.is_psd(w)
        assert np.array_equal(w, w.conj().T)


def test_centered_of_the_mean_is_zero():
    d, s = 6, 11
    z = sampling.centered_normalized(s * np.eye(d), d, s)
    assert np.allclose(z, 0.0)


def test_centered_second_moment():
    d, s, trials = 64, 256, 200
    vals = []
    for t in range(trials):
        w = sampling.sample_wishart(d, s, RngStream(21, t))
        z = sampling.centered_normalized(w, d, s)
        vals.append(np.mean(linalg.hermitian_eigenvalues(z) ** 2))
    assert abs(np.mean(vals) - 1.0) < 0.05


def test_centered_extremal_smoke():
    # single large trial; the asymptotic edges are +/- 2
    w = sampling.sample_wishart(300, 30000, RngStream(5, 0))
    z = sampling.centered_normalized(w, 300, 30000)
    eigs = linalg.hermitian_eigenvalues(z)
    assert 1.8 <= eigs[0] <= 2.2
    assert -2.2 <= eigs[-1] <= -1.8


def test_induced_state_basics():
    rho = sampling.sample_induced_state(2, 3, 7, RngStream(1, 0))
    assert rho.dims == (2, 3)
    assert abs(np.trace(rho.matrix).real - 1.0) < 1e-14
    assert linalg.is_psd(rho.matrix)


def test_induced_state_s1_is_pure():
    rho = sampling.sample_induced_state(2, 2, 1, RngStream(2, 0))
    eigs = rho.spectrum()
    assert eigs[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(eigs[1:]) < 1e-12)


def test_induced_matches_partial_trace_construction():
    # same distribution via W/tr W and via partial trace of a uniform pure
    # state; compare mean and second moment of tr(rho^2) within 3 SE
    d1 = d2 = 2
    d, s, trials = d1 * d2, 6, 600
    purity_a = []
    purity_b = []
    for t in range(trials):
        rho_a = sampling.sample_induced_state(d1, d2, s, RngStream(31, t))
        purity_a.append(np.trace(rho_a.matrix @ rho_a.matrix).real)
        psi = sampling.uniform_pure_state(d * s, RngStream(32, t))
        rho_b = sampling.partial_trace(np.outer(psi, psi.conj()), d, s)
        purity_b.append(np.trace(rho_b @ rho_b).real)
    for xs, ys in [(purity_a, purity_b), (np.square(purity_a), np.square(purity_b))]:
        xs, ys = np.asarray(xs), np.asarray(ys)
        se = math.hypot(xs.std(ddof=1) / math.sqrt(len(xs)), ys.std(ddof=1) / math.sqrt(len(ys)))
        assert abs(xs.mean() - ys.mean()) <= 3 * se


def test_partial_trace_examples():
    e1f1 = np.zeros(6)
    e1f1[0] = 1.0
    rho = np.outer(e1f1, e1f1)
    reduced = sampling.partial_trace(rho, 2, 3)
    assert np.allclose(reduced, np.diag([1.0, 0.0]))

    assert np.allclose(sampling.partial_trace(bell_state(), 2, 2), np.eye(2) / 2)

    rng = np.random.default_rng(0)
    a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    rho = linalg.hermitize(a @ a.conj().T)
    rho /= np.trace(rho).real
    assert np.trace(sampling.partial_trace(rho, 3, 4)).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sampling.partial_trace(rho, 3, 5)


def test_partial_transpose_examples():
    pt = sampling.partial_transpose(bell_state(), (2, 2))
    eigs = linalg.hermitian_eigenvalues(pt)
    assert eigs[-1] == pytest.approx(-0.5, abs=1e-12)
    assert np.trace(pt).real == pytest.approx(1.0)

    # product state: spectrum unchanged, T2(rho1 x rho2) = rho1 x rho2^T
    rng = np.random.default_rng(5)
    r1 = linalg.hermitize(np.diag([0.7, 0.3]) + 0j)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    r2 = linalg.hermitize(a @ a.conj().T)
    r2 /= np.trace(r2).real
    prod = np.kron(r1, r2)
    pt = sampling.partial_transpose(prod, (2, 3))
    assert np.allclose(pt, np.kron(r1, r2.T))
    assert np.allclose(
        linalg.hermitian_eigenvalues(pt), linalg.hermitian_eigenvalues(prod)
    )


def test_partial_transpose_involution():
    rng_ids = range(30)
    for t in rng_ids:
        rho = sampling.sample_induced_state(2, 3, 8, RngStream(41, t))
        double = sampling.partial_transpose(
            sampling.partial_transpose(rho), (2, 3)
        )
        assert np.max(np.abs(double - rho.matrix)) < 1e-13


def test_partial_transpose_requires_shape():
    rho = DensityMatrix(np.eye(4) / 4)
    with pytest.raises(ValueError):
        sampling.partial_transpose(rho)
    with pytest.raises(ValueError):
        sampling.partial_transpose(np.eye(4) / 4)


def test_is_ppt_examples():
    assert sampling.is_ppt(np.eye(6) / 6, (2, 3))
    assert not sampling.is_ppt(bell_state(), (2, 2))
    rho = sampling.sample_induced_state(2, 2, 1, RngStream(8, 0))  # pure, entangled a.s.
    assert not sampling.is_ppt(rho)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4))  # trace 4
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(6) / 6, dims=(2, 2))
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4, dims=(1, 4))


def test_log_density():
    mixed4 = DensityMatrix(np.eye(4) / 4, dims=(2, 2))
    assert sampling.induced_log_density_unnormalized(mixed4, 4) == 0.0
    assert sampling.induced_log_density_unnormalized(mixed4, 8) == pytest.approx(
        4 * math.log(1 / 256)
    )
    # drop one eigenvalue toward zero (renormalized): density decreases for s > d
    skew = DensityMatrix(np.diag([0.3375, 0.2375, 0.2375, 0.1875]), dims=(2, 2))
    more_skew = DensityMatrix(np.diag([0.4, 0.3, 0.25, 0.05]), dims=(2, 2))
    assert sampling.induced_log_density_unnormalized(
        more_skew, 8
    ) < sampling.induced_log_density_unnormalized(skew, 8)
    singular = DensityMatrix(np.diag([0.5, 0.5, 0.0, 0.0]), dims=(2, 2))
    assert sampling.induced_log_density_unnormalized(singular, 8) == -math.inf
    with pytest.raises(ValueError):
        sampling.induced_log_density_unnormalized(mixed4, 3)


def test_wishart_spectrum_matches_marchenko_pastur():
    # eigenvalues of W/d follow the ratio-c law at s = c d; KS distance < 0.05
    d, s = 400, 1600
    w = sampling.sample_wishart(d, s, RngStream(2024, 0))
    x = np.sort(linalg.hermitian_eigenvalues(w)) / d
    cdf = np.array([asymptotics.mp_cdf(v, 4.0) for v in x])
    i = np.arange(1, d + 1)
    ks = max(np.max(np.abs(i / d - cdf)), np.max(np.abs((i - 1) / d - cdf)))
    assert ks < 0.05


@pytest.mark.parametrize("c", [8, 20])
def test_wishart_extreme_eigenvalues_match_mp_edges(c):
    d = 2 * 150
    w = sampling.sample_wishart(d, c * d, RngStream(9, c))
    eigs = linalg.hermitian_eigenvalues(w) / d
    a, b = asymptotics.mp_edges(float(c))
    assert abs(eigs[-1] - a) / a < 0.05
    assert abs(eigs[0] - b) / b < 0.05


def test_ginibre_rejects_bad_dims():
    with pytest.raises(ValueError):
        sampling.sample_ginibre(0, 3, RngStream(0))
    with pytest.raises(ValueError):
        sampling.sample_induced_state(1, 4, 2, RngStream(0))
    with pytest.raises(ValueError):
        sampling.centered_normalized(np.eye(3), 4, 2)
