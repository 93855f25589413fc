"""Exact moment formulas for raw and centered-renormalized Wishart matrices.

With W = GG* a d x s complex Wishart matrix and Z = sqrt(ds)(W/(ds) - Id/d)
its centered, renormalized version, the normalized moments E (1/d) tr Z^p are
a finite sum over fixed-point-free permutations,

    m_p = sum over fixed-point-free alpha in S_p of
          d^(-2 genus(alpha)) * (d/s)^(length(alpha) - p/2),

so every moment is a polynomial in 1/d^2 and sqrt(d/s) with non-negative
integer coefficients. This module evaluates that sum exactly, keeps the
integer coefficient table, and evaluates the three limiting regimes
(d fixed with s -> infinity, s/d -> c, and 1 << d << s).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import perms
from .perms import P_MAX_DEFAULT


@dataclass(frozen=True)
class MomentValue:
    """A centered Wishart moment: float value plus exact coefficient table.

    ``terms`` holds triples (genus, doubled_exponent, count): the moment is
    sum of count * d^(-2*genus) * (d/s)^(doubled_exponent / 2). Exponents are
    doubled so odd-p half-integer powers stay integer-keyed.
    """

    p: int
    d: float
    s: float
    terms: tuple[tuple[int, int, int], ...]
    value: float

    def coefficient_table(self) -> dict[tuple[int, int], int]:
        return {(g, e2): n for g, e2, n in self.terms}

    def evaluate(self, d: float, s: float) -> float:
        return evaluate_terms(self.terms, d, s)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "terms": [
                {"genus": g, "half_exponent": e2, "count": n} for g, e2, n in self.terms
            ],
        }


def evaluate_terms(terms, d: float, s: float) -> float:
    return float(
        sum(n * d ** (-2 * g) * (d / s) ** (e2 / 2.0) for g, e2, n in terms)
    )


@lru_cache(maxsize=None)
def _moment_terms(p: int, p_max: int) -> tuple[tuple[int, int, int], ...]:
    table: dict[tuple[int, int], int] = {}
    for alpha in perms.enumerate_fixed_point_free(p, p_max):
        key = (perms.genus(alpha), 2 * perms.length(alpha) - p)
        table[key] = table.get(key, 0) + 1
    return tuple(sorted((g, e2, n) for (g, e2), n in table.items()))


def centered_wishart_moment(
    p: int, d: float, s: float, p_max: int = P_MAX_DEFAULT
) -> MomentValue:
    """E (1/d) tr Z^p as an exact sum over the fixed-point-free permutations.

    d and s may be any positive reals; the formula is a polynomial identity
    in the two scale variables. Rejects p > p_max (the enumeration has
    derangement-number many terms).
    """
    if p < 1:
        raise ValueError("moment order p must be >= 1")
    if d <= 0 or s <= 0:
        raise ValueError("d and s must be positive")
    perms._check_size(p, p_max, "centered_wishart_moment")
    terms = _moment_terms(p, p_max)
    return MomentValue(p=p, d=d, s=s, terms=terms, value=evaluate_terms(terms, d, s))


def raw_wishart_moment(p: int, d: float, s: float, p_max: int = P_MAX_DEFAULT) -> float:
    """E tr W^p = sum over alpha in S_p of d^(#cycles of alpha^-1 gamma) s^(#cycles of alpha)."""
    if p < 1:
        raise ValueError("moment order p must be >= 1")
    perms._check_size(p, p_max, "raw_wishart_moment")
    gamma = perms.full_cycle(p)
    total = 0.0
    for alpha in itertools.permutations(range(1, p + 1)):
        c_rel = perms.cycle_count(perms.compose(perms.inverse(alpha), gamma))
        total += d ** c_rel * s ** perms.cycle_count(alpha)
    return float(total)


def limit_moment(
    p: int,
    regime: str,
    *,
    d: float | None = None,
    c: float | None = None,
    p_max: int = P_MAX_DEFAULT,
) -> float:
    """Limiting p-th moment of Z in one of three regimes.

    - ``"d_fixed"`` (s -> infinity, d fixed): sum over g of
      epsilon(p/2, g) d^(-2g) for even p, 0 for odd p. Requires ``d``.
    - ``"ratio"`` (s/d -> c): sum over non-crossing partitions of [p] without
      singletons of c^(#blocks - p/2). Requires ``c > 0``.
    - ``"semicircle"`` (1 << d << s): Catalan(p/2) for even p, 0 for odd p.
    """
    if p < 1:
        raise ValueError("moment order p must be >= 1")
    perms._check_size(p, p_max, "limit_moment")
    if regime == "semicircle":
        return float(perms.catalan(p // 2)) if p % 2 == 0 else 0.0
    if regime == "d_fixed":
        if d is None or d <= 0:
            raise ValueError("regime 'd_fixed' requires d > 0")
        if p % 2:
            return 0.0
        table = perms.epsilon_table(p // 2, p_max)
        return float(sum(n * d ** (-2 * g) for g, n in table.items()))
    if regime == "ratio":
        if c is None or c <= 0:
            raise ValueError("regime 'ratio' requires c > 0")
        return float(
            sum(
                c ** (len(partition) - p / 2.0)
                for partition in perms.enumerate_nc_no_singletons(p, p_max)
            )
        )
    raise ValueError(f"unknown regime {regime!r}; expected 'd_fixed', 'ratio' or 'semicircle'")
