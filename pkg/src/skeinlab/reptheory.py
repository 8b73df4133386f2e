"""Symmetric-group characters and the S_n action on perfect matchings."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, prod

from sympy.utilities.iterables import partitions as _sympy_partitions

from .diagram import _all_matchings

__all__ = [
    "SizeMismatch",
    "Partition",
    "partitions",
    "class_size",
    "mn_character",
    "representative",
    "matching_action_trace",
    "decompose_matching_rep",
    "orthogonality_holds",
]


class SizeMismatch(ValueError):
    pass


Partition = tuple  # weakly decreasing positive ints


def partitions(n: int) -> list[Partition]:
    out = []
    for p in _sympy_partitions(n):
        out.append(tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True)))
    return sorted(out, reverse=True)


def _canon(p) -> Partition:
    parts = tuple(sorted((int(x) for x in p if x), reverse=True))
    if any(x < 0 for x in parts):
        raise ValueError(f"negative part in {p}")
    return parts


def class_size(mu) -> int:
    mu = _canon(mu)
    n = sum(mu)
    return factorial(n) // prod(k ** m * factorial(m) for k, m in Counter(mu).items())


@lru_cache(maxsize=None)
def _mn_beta(beta: frozenset, mu: tuple) -> int:
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in beta:
            continue
        # leg length = number of beads jumped over
        height = sum(1 for c in beta if nb < c < b)
        total += (-1) ** height * _mn_beta((beta - {b}) | {nb}, rest)
    return total


def mn_character(lam, mu) -> int:
    """chi^lam evaluated on cycle type mu, by rim-hook removal on beta-numbers."""
    lam, mu = _canon(lam), _canon(mu)
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    l = len(lam)
    beta = frozenset(part + (l - 1 - i) for i, part in enumerate(lam))
    return _mn_beta(beta, mu)


def representative(mu, shift: int = 0) -> tuple:
    """A permutation (0-based images) of cycle type mu; ``shift`` relabels points."""
    mu = _canon(mu)
    n = sum(mu)
    order = [(i + shift) % n for i in range(n)]
    if shift:
        order = order[::-1]
    perm = list(range(n))
    pos = 0
    for k in mu:
        cyc = order[pos : pos + k]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
        pos += k
    return tuple(perm)


def matching_action_trace(mu, shift: int = 0) -> int:
    """Number of perfect matchings of sum(mu) points fixed by a permutation of type mu."""
    sigma = representative(mu, shift)
    n = len(sigma)
    if n % 2:
        return 0
    count = 0
    for m in _all_matchings(list(range(n))):
        pairs = {frozenset(p) for p in m}
        if {frozenset((sigma[a], sigma[b])) for a, b in m} == pairs:
            count += 1
    return count


def decompose_matching_rep(n: int = 6) -> dict:
    classes = partitions(n)
    traces = {mu: matching_action_trace(mu) for mu in classes}
    order = factorial(n)
    out = {}
    for lam in classes:
        s = sum(class_size(mu) * traces[mu] * mn_character(lam, mu) for mu in classes)
        mult = Fraction(s, order)
        if mult.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity for {lam}: {mult}")
        out[lam] = int(mult)
    return out


def orthogonality_holds(n: int = 6) -> bool:
    classes = partitions(n)
    order = factorial(n)
    for lam in classes:
        for kap in classes:
            s = sum(class_size(mu) * mn_character(lam, mu) * mn_character(kap, mu) for mu in classes)
            if s != (order if lam == kap else 0):
                return False
    return True


def brute_force_class_sizes(lam) -> bool:
    """Cross-check class sizes by enumerating S_n (small n only)."""
    n = sum(lam)
    counts = Counter()
    for p in permutations(range(n)):
        seen, cyc = set(), []
        for i in range(n):
            if i in seen:
                continue
            j, k = i, 0
            while j not in seen:
                seen.add(j)
                j = p[j]
                k += 1
            cyc.append(k)
        counts[_canon(cyc)] += 1
    return all(counts[mu] == class_size(mu) for mu in partitions(n))
