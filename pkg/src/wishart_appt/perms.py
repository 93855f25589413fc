"""Combinatorics of permutations of [p] = {1, ..., p}: cycle structure, genus,
fixed-point-free enumeration, pair partitions, and non-crossing partitions.

A permutation is a tuple of 1-based images: ``perm[i]`` is the image of
``i + 1``. The empty tuple ``()`` is the empty permutation. A set partition is
a tuple of blocks, each block a sorted tuple of points, blocks sorted by their
minimum.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterator, Sequence

#: Ceiling for exact enumerations; 12! permutations is the practical limit.
P_MAX_DEFAULT = 12


class EnumerationSizeError(ValueError):
    """Requested exact enumeration exceeds the configured size ceiling."""


def _check_size(p: int, p_max: int, what: str) -> None:
    if p < 0:
        raise ValueError(f"{what}: p must be >= 0, got {p}")
    if p > p_max:
        raise EnumerationSizeError(
            f"{what}: p = {p} exceeds p_max = {p_max} "
            f"(~{math.factorial(min(p, 20))} objects); raise p_max explicitly to override"
        )


def is_permutation(perm: Sequence[int]) -> bool:
    """Check that perm is a bijection of {1, ..., len(perm)}."""
    return sorted(perm) == list(range(1, len(perm) + 1))


def identity(p: int) -> tuple[int, ...]:
    return tuple(range(1, p + 1))


def full_cycle(p: int) -> tuple[int, ...]:
    """The increasing full cycle (1 2 ... p).

    >>> full_cycle(4)
    (2, 3, 4, 1)
    """
    if p == 0:
        return ()
    return tuple(range(2, p + 1)) + (1,)


def inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v - 1] = i + 1
    return tuple(inv)


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Compose (a, b) -> ab, applying b first: (ab)(i) = a(b(i))."""
    if len(a) != len(b):
        raise ValueError(f"cannot compose permutations of sizes {len(a)} and {len(b)}")
    return tuple(a[v - 1] for v in b)


def cycle_count(perm: Sequence[int]) -> int:
    """Number of cycles, fixed points included.

    >>> cycle_count((2, 1, 4, 3))
    2
    """
    p = len(perm)
    if p == 0:
        raise ValueError("cycle_count requires p >= 1")
    seen = [False] * (p + 1)
    count = 0
    for i in range(1, p + 1):
        if seen[i]:
            continue
        count += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j - 1]
    return count


def length(perm: Sequence[int]) -> int:
    """Minimal number of transpositions: p minus the number of cycles.

    >>> length(())
    0
    >>> length((2, 3, 4, 5, 1))
    4
    """
    if len(perm) == 0:
        return 0
    return len(perm) - cycle_count(perm)


def genus(perm: Sequence[int]) -> int:
    """Genus (|a| + |a^-1 g| - p + 1) / 2 against the increasing full cycle g.

    Always a non-negative integer. The empty permutation is rejected: its
    genus is a sign convention no caller needs.

    >>> genus((2, 3, 4, 1))
    0
    >>> genus((3, 4, 1, 2))
    1
    """
    p = len(perm)
    if p == 0:
        raise ValueError("genus of the empty permutation is not defined here")
    total = length(perm) + length(compose(inverse(perm), full_cycle(p))) - p + 1
    if total < 0 or total % 2:
        raise AssertionError(f"genus numerator {total} is not a non-negative even integer")
    return total // 2


def strip_fixed_points(perm: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Remove fixed points, relabelling the support order-preservingly to [k].

    Returns ``(reduced_perm, support)`` where support lists the original
    non-fixed points in increasing order. Genus and length are unchanged by
    this reduction (genus is taken against the full cycle of the support).

    >>> strip_fixed_points((1, 4, 3, 2))
    ((2, 1), (2, 4))
    """
    support = tuple(i + 1 for i, v in enumerate(perm) if v != i + 1)
    relabel = {v: i + 1 for i, v in enumerate(support)}
    reduced = tuple(relabel[perm[v - 1]] for v in support)
    return reduced, support


def derangement_count(p: int) -> int:
    """Number of fixed-point-free permutations of [p]."""
    if p < 0:
        raise ValueError("p must be >= 0")
    count = 1
    for i in range(1, p + 1):
        count = i * count + (-1) ** i
    return count


def enumerate_fixed_point_free(p: int, p_max: int = P_MAX_DEFAULT) -> Iterator[tuple[int, ...]]:
    """Yield every fixed-point-free permutation of [p] exactly once.

    Built by backtracking so permutations with fixed points are never
    materialised. Yields the empty permutation for p = 0 and nothing for
    p = 1.
    """
    _check_size(p, p_max, "enumerate_fixed_point_free")
    values = list(range(1, p + 1))

    def rec(i: int, free: list[int], images: list[int]) -> Iterator[tuple[int, ...]]:
        if i > p:
            yield tuple(images)
            return
        for k, v in enumerate(free):
            if v == i:
                continue
            images.append(v)
            yield from rec(i + 1, free[:k] + free[k + 1:], images)
            images.pop()

    yield from rec(1, values, [])


def enumerate_pairings(p: int, p_max: int = P_MAX_DEFAULT) -> Iterator[tuple[int, ...]]:
    """Yield the (p-1)!! fixed-point-free involutions of [p] (p even).

    Each is a product of p/2 disjoint transpositions, returned in image form.
    """
    _check_size(p, p_max, "enumerate_pairings")
    if p % 2:
        return
    points = tuple(range(1, p + 1))

    def rec(remaining: tuple[int, ...], images: list[int]) -> Iterator[tuple[int, ...]]:
        if not remaining:
            yield tuple(images)
            return
        a = remaining[0]
        for i in range(1, len(remaining)):
            b = remaining[i]
            images[a - 1], images[b - 1] = b, a
            yield from rec(remaining[1:i] + remaining[i + 1:], images)

    yield from rec(points, list(range(1, p + 1)))


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def double_factorial_odd(n: int) -> int:
    """(2n - 1)!! = 1 * 3 * ... * (2n - 1)."""
    return math.prod(range(1, 2 * n, 2))


@lru_cache(maxsize=None)
def epsilon_table(n: int, p_max: int = P_MAX_DEFAULT) -> dict[int, int]:
    """Genus distribution of the pairings of [2n]: genus -> count."""
    if n < 1:
        raise ValueError("epsilon_table requires n >= 1")
    _check_size(2 * n, p_max, "epsilon_table")
    table: dict[int, int] = {}
    for pairing in enumerate_pairings(2 * n, p_max):
        g = genus(pairing)
        table[g] = table.get(g, 0) + 1
    return table


def epsilon_count(n: int, g: int, p_max: int = P_MAX_DEFAULT) -> int:
    """Number of products of n disjoint transpositions in S_{2n} of genus g.

    Equivalently, the number of gluings of a 2n-gon into a genus-g surface.
    epsilon_count(n, 0) is the n-th Catalan number and the counts over g sum
    to (2n - 1)!!.
    """
    if g < 0:
        raise ValueError("genus must be >= 0")
    return epsilon_table(n, p_max).get(g, 0)


def is_noncrossing(blocks: Sequence[Sequence[int]]) -> bool:
    """Quadruple-scan crossing test: a < b < c < d with a,c and b,d split
    across two blocks means a crossing."""
    block_of: dict[int, int] = {}
    for i, block in enumerate(blocks):
        for x in block:
            block_of[x] = i
    points = sorted(block_of)
    for a, b, c, d in itertools.combinations(points, 4):
        if block_of[a] == block_of[c] != block_of[b] == block_of[d]:
            return False
    return True


def enumerate_noncrossing(p: int, p_max: int = P_MAX_DEFAULT) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield all non-crossing partitions of [p] (Catalan(p) of them).

    The block of the minimum splits the rest into independent segments; only
    non-crossing partitions are ever constructed.
    """
    _check_size(p, p_max, "enumerate_noncrossing")
    yield from _noncrossing_of(tuple(range(1, p + 1)))


def _noncrossing_of(points: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for r in range(len(rest) + 1):
        for chosen in itertools.combinations(rest, r):
            block = (first,) + chosen
            segments = [
                tuple(x for x in rest if block[i] < x < block[i + 1])
                for i in range(len(block) - 1)
            ] + [tuple(x for x in rest if x > block[-1])]
            for parts in itertools.product(*map(_noncrossing_of, segments)):
                other_blocks = tuple(b for part in parts for b in part)
                yield tuple(sorted((block,) + other_blocks))


def enumerate_nc_no_singletons(p: int, p_max: int = P_MAX_DEFAULT) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield the non-crossing partitions of [p] with every block of size >= 2.

    Their number is the p-th Riordan number (0, 1, 1, 3, 6, 15, ... from
    p = 1).
    """
    for partition in enumerate_noncrossing(p, p_max):
        if all(len(block) >= 2 for block in partition):
            yield partition
