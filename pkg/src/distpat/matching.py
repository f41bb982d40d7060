"""Decide containment of a distant pattern in a host permutation.

An occurrence witness is a strictly increasing tuple of 1-based host
positions (i_1, ..., i_k) such that the host values at those positions
flatten to the pattern letters and every gap constraint holds:

    i_1 - 1            >= r_0
    i_{j+1} - i_j - 1  >= r_j   (exactly r_j when the gap is tight)
    n - i_k            >= r_k

The search is a depth-first scan over index tuples with footprint
pruning; witnesses come out in lexicographic order and the scan is
exhaustive.  Everything here is pure and reentrant.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from .patterns import DistantPattern
from .perms import Permutation, flatten

__all__ = [
    "OccurrenceWitness",
    "iter_occurrences",
    "occurrences",
    "avoids",
    "avoids_all",
    "check_witness",
]

OccurrenceWitness = tuple[int, ...]


def iter_occurrences(host: Permutation, pattern: DistantPattern) -> Iterator[OccurrenceWitness]:
    """Yield every occurrence witness in lexicographic position order."""
    values = host.values
    n = len(values)
    q = pattern.letters.values
    k = len(q)
    mins = tuple(g.min_gap for g in pattern.gaps)
    tights = tuple(g.tight for g in pattern.gaps)
    if pattern.min_host_size > n:
        return

    # earliest possible position of letter t (0-based), from the gaps before it
    lo = [0] * k
    lo[0] = mins[0] + 1
    for t in range(1, k):
        lo[t] = lo[t - 1] + mins[t] + 1
    # latest possible position, leaving room for the letters and gaps after it
    hi = [0] * k
    hi[k - 1] = n - mins[k]
    for t in range(k - 2, -1, -1):
        hi[t] = hi[t + 1] - mins[t + 1] - 1

    chosen = [0] * k  # positions, 1-based

    def consistent(t: int, v: int) -> bool:
        for s in range(t):
            if (values[chosen[s] - 1] < v) != (q[s] < q[t]):
                return False
        return True

    def scan(t: int) -> Iterator[OccurrenceWitness]:
        if t == k:
            yield tuple(chosen)
            return
        if t == 0:
            first, last = lo[0], hi[0]
        else:
            prev = chosen[t - 1]
            if tights[t]:
                first = last = prev + mins[t] + 1
            else:
                first, last = prev + mins[t] + 1, hi[t]
        first = max(first, lo[t])
        for i in range(first, last + 1):
            if consistent(t, values[i - 1]):
                chosen[t] = i
                yield from scan(t + 1)

    yield from scan(0)


def occurrences(host: Permutation, pattern: DistantPattern) -> list[OccurrenceWitness]:
    """All occurrence witnesses, lexicographically ordered and exhaustive."""
    return list(iter_occurrences(host, pattern))


def avoids(host: Permutation, pattern: DistantPattern) -> bool:
    """True iff the host has no occurrence of the pattern (early exit)."""
    for _ in iter_occurrences(host, pattern):
        return False
    return True


def avoids_all(host: Permutation, patterns: Iterable[DistantPattern]) -> bool:
    """True iff the host avoids every pattern in a nonempty set."""
    ps = list(patterns)
    if not ps:
        raise ValueError("avoids_all needs a nonempty pattern set")
    return all(avoids(host, p) for p in ps)


def check_witness(host: Permutation, pattern: DistantPattern, positions: OccurrenceWitness) -> bool:
    """Re-check the occurrence conditions on an alleged witness, from scratch."""
    n = len(host)
    k = pattern.size
    if len(positions) != k:
        return False
    if any(positions[i] >= positions[i + 1] for i in range(k - 1)):
        return False
    if not all(1 <= i <= n for i in positions):
        return False
    if flatten([host.values[i - 1] for i in positions]) != pattern.letters:
        return False
    gaps = pattern.gaps
    if positions[0] - 1 < gaps[0].min_gap or n - positions[-1] < gaps[-1].min_gap:
        return False
    for j in range(1, k):
        size = positions[j] - positions[j - 1] - 1
        if size < gaps[j].min_gap or (gaps[j].tight and size != gaps[j].min_gap):
            return False
    return True
