"""Limiting spectral laws and the threshold constants built from them.

Semicircle density w(x) = sqrt(4 - x^2) / (2 pi) on [-2, 2]; Marchenko-Pastur
density sqrt(4c - (x - 1 - c)^2) / (2 pi x) on [(sqrt(c)-1)^2, (sqrt(c)+1)^2]
with an atom of mass max(1 - c, 0) at zero. Quadrature is adaptive Simpson
after the substitution x = 2 sin(theta) (resp. x = 1 + c + 2 sqrt(c)
sin(theta)), which removes the square-root edge singularities; exact
antiderivatives are kept alongside as cross-checks.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

QUAD_TOL = 1e-12
BISECTION_TOL = 1e-13


class LimitMatrix(NamedTuple):
    matrix: np.ndarray
    eig_aligned: float   # along the all-ones direction, multiplicity 1
    eig_perp: float      # multiplicity d1 - 1


class ThresholdScale(NamedTuple):
    s0: float               # p^2 * d with p = min(d1, d2), d = d1 * d2
    lower_constant: float   # 4 * C_tau at tau = p^2 / d
    upper_constant: float   # 4


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = QUAD_TOL, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def rec(x0, x1, f0, f05, f1, approx, eps, depth):
        xm = 0.5 * (x0 + x1)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x1)
        fl, fr = f(xl), f(xr)
        left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + f05)
        right = (x1 - xm) / 6.0 * (f05 + 4.0 * fr + f1)
        delta = left + right - approx
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return rec(x0, xm, f0, fl, f05, left, eps / 2.0, depth - 1) + rec(
            xm, x1, f05, fr, f1, right, eps / 2.0, depth - 1
        )

    return rec(a, b, fa, fm, fb, whole, tol, max_depth)


# -- semicircle law ---------------------------------------------------------


def semicircle_density(x):
    """w(x) = sqrt(4 - x^2) / (2 pi) on [-2, 2], zero outside."""
    x = np.asarray(x, dtype=float)
    inside = np.clip(4.0 - x * x, 0.0, None)
    out = np.sqrt(inside) / (2.0 * math.pi)
    return out if out.ndim else float(out)


def semicircle_mass(a: float, b: float, tol: float = QUAD_TOL) -> float:
    """Integral of w over [a, b] by quadrature on theta = arcsin(x/2)."""
    ta = math.asin(min(max(a / 2.0, -1.0), 1.0))
    tb = math.asin(min(max(b / 2.0, -1.0), 1.0))
    return adaptive_simpson(lambda t: (2.0 / math.pi) * math.cos(t) ** 2, ta, tb, tol)


def semicircle_tail_mass(c: float) -> float:
    """Closed-form integral of w over [c, 2]."""
    if c <= -2.0:
        return 1.0
    if c >= 2.0:
        return 0.0
    return 0.5 - c * math.sqrt(4.0 - c * c) / (4.0 * math.pi) - math.asin(c / 2.0) / math.pi


def semicircle_quantile_c(tau: float) -> float:
    """The c in [0, 2] with semicircle tail mass tau/2, by bisection.

    Strictly decreasing in tau; tau = 1 gives 0, tau -> 0 gives 2.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    target = tau / 2.0
    lo, hi = 0.0, 2.0
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if semicircle_tail_mass(mid) >= target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def xw_tail_integral(c: float, tol: float = QUAD_TOL) -> float:
    """Integral of x w(x) over [c, 2] by quadrature (x = 2 sin theta)."""
    ta = math.asin(min(max(c / 2.0, -1.0), 1.0))
    return adaptive_simpson(
        lambda t: (4.0 / math.pi) * math.sin(t) * math.cos(t) ** 2, ta, math.pi / 2.0, tol
    )


def xw_tail_integral_closed(c: float) -> float:
    """Same integral in closed form: the antiderivative of x w(x) is
    -(4 - x^2)^(3/2) / (6 pi)."""
    c = min(max(c, -2.0), 2.0)
    return (4.0 - c * c) ** 1.5 / (6.0 * math.pi)


def c_tau(tau: float) -> float:
    """Threshold constant (integral of x w over [quantile, 2] divided by tau)^2.

    Increasing in tau, with limit 1 at 0+ and 16/(9 pi^2) at 1.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    q = semicircle_quantile_c(tau)
    return (xw_tail_integral(q) / tau) ** 2


# -- Marchenko-Pastur law ---------------------------------------------------


def mp_support(c: float) -> tuple[float, float]:
    """Support of the continuous part: [(sqrt(c)-1)^2, (sqrt(c)+1)^2]."""
    if c <= 0:
        raise ValueError("c must be > 0")
    r = math.sqrt(c)
    return ((r - 1.0) ** 2, (r + 1.0) ** 2)


def mp_density(x, c: float):
    """Continuous part of the Marchenko-Pastur density; see mp_atom_mass."""
    lo, hi = mp_support(c)
    x = np.asarray(x, dtype=float)
    inside = np.clip(4.0 * c - (x - 1.0 - c) ** 2, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            (x >= lo) & (x <= hi) & (x > 0.0),
            np.sqrt(inside) / (2.0 * math.pi * np.where(x > 0.0, x, 1.0)),
            0.0,
        )
    return out if out.ndim else float(out)


def mp_atom_mass(c: float) -> float:
    """Mass of the atom at zero: max(1 - c, 0)."""
    if c <= 0:
        raise ValueError("c must be > 0")
    return max(1.0 - c, 0.0)


def mp_edges(c: float) -> tuple[float, float]:
    """Limits (a_c, b_c) of the extreme eigenvalues of W/s when s/d -> c:
    a_c = (sqrt(c)-1)^2 for c > 1 and 0 otherwise, b_c = (sqrt(c)+1)^2."""
    lo, hi = mp_support(c)
    return (lo if c > 1.0 else 0.0, hi)


def mp_cdf(x: float, c: float, tol: float = QUAD_TOL) -> float:
    """Distribution function of the Marchenko-Pastur law, atom included."""
    lo, hi = mp_support(c)
    atom = mp_atom_mass(c)
    if x < 0.0:
        return 0.0
    if x <= lo:
        return atom
    x = min(x, hi)
    r = math.sqrt(c)
    t_hi = math.asin(min(max((x - 1.0 - c) / (2.0 * r), -1.0), 1.0))
    if abs(c - 1.0) < 1e-12:
        # denominator 2 + 2 sin(theta) cancels: integrand is (1 - sin t) / pi
        f = lambda t: (1.0 - math.sin(t)) / math.pi
    else:
        f = lambda t: (2.0 * c / math.pi) * math.cos(t) ** 2 / (1.0 + c + 2.0 * r * math.sin(t))
    return atom + adaptive_simpson(f, -math.pi / 2.0, t_hi, tol)


# -- thresholds -------------------------------------------------------------


def threshold_p_fixed(p: int) -> float:
    """Critical ratio s/d for fixed smaller factor p: (p + sqrt(p^2 - 1))^2."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return float((p + math.sqrt(p * p - 1.0)) ** 2)


def lambda_c_limit_matrix(c: float, d1: int) -> LimitMatrix:
    """The common d1 x d1 limit of every Theta along s/d -> c:
    (a+b) Id + (a-b) * (all-ones). PSD exactly when c >= threshold_p_fixed(d1)."""
    if d1 < 2:
        raise ValueError("d1 must be >= 2")
    a, b = mp_edges(c)
    matrix = (a + b) * np.eye(d1) + (a - b) * np.ones((d1, d1))
    return LimitMatrix(
        matrix=matrix,
        eig_aligned=float((a + b) + d1 * (a - b)),
        eig_perp=float(a + b),
    )


def threshold_scale_s0(d1: int, d2: int) -> ThresholdScale:
    """Environment scale p^2 d = min(d1,d2)^3 max(d1,d2), with the bracketing
    constants: not-APPT below 4*C_tau * p^2 d, APPT above 4 * p^2 d; the two
    meet at 4 when p^2 << d."""
    if d1 < 2 or d2 < 2:
        raise ValueError("bipartite factors must both be >= 2")
    p = min(d1, d2)
    d = d1 * d2
    tau = min(1.0, p * p / d)  # p^2 <= d always holds for bipartite factors
    return ThresholdScale(
        s0=float(p * p * d),
        lower_constant=4.0 * c_tau(tau),
        upper_constant=4.0,
    )
