import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wishart_appt import asymptotics as asy
from oracle_helpers import riemann_semicircle_tail

# frozen before the build from a 4e6-interval midpoint Riemann sum + bisection
QUANTILE_HALF_TAIL = 0.807945507


def test_semicircle_density_values():
    assert asy.semicircle_density(0.0) == pytest.approx(1 / math.pi, rel=1e-14)
    assert asy.semicircle_density(2.0) == 0.0
    assert asy.semicircle_density(-2.0) == 0.0
    assert asy.semicircle_density(3.0) == 0.0
    arr = asy.semicircle_density(np.array([-3.0, 0.0, 1.0]))
    assert arr.shape == (3,) and arr[0] == 0.0


def test_semicircle_normalization():
    assert asy.semicircle_mass(-2.0, 2.0) == pytest.approx(1.0, abs=1e-10)


def test_tail_mass_closed_vs_quadrature():
    for c in (-1.5, 0.0, 0.3, 1.2, 1.9):
        assert asy.semicircle_mass(c, 2.0) == pytest.approx(
            asy.semicircle_tail_mass(c), abs=1e-11
        )


def test_quantile_edges():
    assert abs(asy.semicircle_quantile_c(1.0)) <= 1e-12
    assert asy.semicircle_quantile_c(1e-6) > 1.99
    with pytest.raises(ValueError):
        asy.semicircle_quantile_c(0.0)
    with pytest.raises(ValueError):
        asy.semicircle_quantile_c(1.5)


def test_quantile_against_riemann_oracle():
    assert asy.semicircle_quantile_c(0.5) == pytest.approx(QUANTILE_HALF_TAIL, abs=1e-6)
    # and the defining equation holds against an independent Riemann sum
    q = asy.semicircle_quantile_c(0.5)
    assert riemann_semicircle_tail(q) == pytest.approx(0.25, abs=1e-7)


def test_quantile_strictly_decreasing():
    taus = np.linspace(0.01, 1.0, 25)
    values = [asy.semicircle_quantile_c(t) for t in taus]
    assert all(a > b for a, b in zip(values, values[1:]))


@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_xw_integral_closed_vs_quadrature(a, b):
    lo, hi = min(a, b), max(a, b)
    quad = asy.adaptive_simpson(
        lambda t: (4.0 / math.pi) * math.sin(t) * math.cos(t) ** 2,
        math.asin(lo / 2.0),
        math.asin(hi / 2.0),
    )
    closed = asy.xw_tail_integral_closed(lo) - asy.xw_tail_integral_closed(hi)
    assert quad == pytest.approx(closed, abs=1e-10)


def test_c_tau_values():
    assert asy.c_tau(1.0) == pytest.approx(16.0 / (9.0 * math.pi**2), abs=1e-9)
    assert abs(asy.c_tau(1e-4) - 1.0) < 1e-2
    # the map is strictly DECREASING from C_0+ = 1 to C_1 = 16/(9 pi^2);
    # the endpoint values force this direction
    assert asy.c_tau(0.25) > asy.c_tau(0.5) > asy.c_tau(1.0)
    with pytest.raises(ValueError):
        asy.c_tau(0.0)


def test_mp_density_support_and_atom():
    assert asy.mp_support(1.0) == (0.0, 4.0)
    assert asy.mp_atom_mass(1.0) == 0.0
    assert asy.mp_atom_mass(0.5) == 0.5
    assert asy.mp_atom_mass(4.0) == 0.0
    assert asy.mp_density(-0.5, 1.0) == 0.0
    assert asy.mp_density(5.0, 1.0) == 0.0
    assert asy.mp_density(1.0, 4.0) == 0.0  # below the c=4 lower edge... at it
    assert asy.mp_density(5.0, 4.0) > 0.0


@pytest.mark.parametrize("c", [0.5, 1.0, 4.0])
def test_mp_total_mass(c):
    top = asy.mp_support(c)[1]
    assert asy.mp_cdf(top, c) == pytest.approx(1.0, abs=1e-8)
    assert asy.mp_cdf(top + 5.0, c) == pytest.approx(1.0, abs=1e-8)
    assert asy.mp_cdf(-1.0, c) == 0.0


def test_mp_cdf_monotone():
    xs = np.linspace(0.0, 9.5, 40)
    for c in (0.5, 1.0, 4.0):
        vals = [asy.mp_cdf(x, c) for x in xs]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_mp_edges():
    assert asy.mp_edges(1.0) == (0.0, 4.0)
    assert asy.mp_edges(4.0) == (1.0, 9.0)
    assert asy.mp_edges(0.25) == (0.0, 2.25)


def test_threshold_p_fixed():
    assert asy.threshold_p_fixed(2) == pytest.approx(7 + 4 * math.sqrt(3), rel=1e-15)
    assert asy.threshold_p_fixed(3) == pytest.approx((3 + math.sqrt(8)) ** 2, rel=1e-15)
    assert asy.threshold_p_fixed(50) / (4 * 50**2) == pytest.approx(1.0, abs=0.02)
    with pytest.raises(ValueError):
        asy.threshold_p_fixed(1)


def test_lambda_c_limit_matrix():
    lm = asy.lambda_c_limit_matrix(4.0, 2)
    assert lm.eig_aligned == pytest.approx(-6.0)
    assert lm.eig_perp == pytest.approx(10.0)
    assert np.allclose(np.linalg.eigvalsh(lm.matrix), [-6.0, 10.0])

    # at the exact threshold the aligned eigenvalue vanishes
    c_star = asy.threshold_p_fixed(2)
    assert abs(asy.lambda_c_limit_matrix(c_star, 2).eig_aligned) < 1e-9

    # c <= 1 is never PSD: a = 0, b > 1
    lm = asy.lambda_c_limit_matrix(0.8, 3)
    assert lm.eig_aligned < 0


@pytest.mark.parametrize("p", range(2, 7))
def test_lambda_c_psd_boundary_matches_threshold(p):
    lo, hi = 1.0, 16.0 * p * p
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if asy.lambda_c_limit_matrix(mid, p).eig_aligned >= 0:
            hi = mid
        else:
            lo = mid
    assert 0.5 * (lo + hi) == pytest.approx(asy.threshold_p_fixed(p), abs=1e-9)


def test_threshold_scale_s0():
    scale = asy.threshold_scale_s0(2, 2)
    assert scale.s0 == 16.0
    assert scale.upper_constant == 4.0
    assert asy.threshold_scale_s0(3, 27).s0 == 729.0
    # p^2 << d regime: both constants near 4
    wide = asy.threshold_scale_s0(2, 5000)
    assert abs(wide.lower_constant - 4.0) < 0.2
    assert asy.threshold_scale_s0(2, 2).lower_constant < wide.lower_constant
