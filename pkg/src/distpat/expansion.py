"""Structural reductions of distant patterns.

A classical distant pattern with letter count k and total minimum gap S is
equivalent to simultaneously avoiding (S+k)!/k! classical patterns of size
S+k: fix the relative order of the k letter slots, then fill the S gap
slots with the remaining values in every possible way.  Boundary-only
constraints reduce instead to a falling-factorial multiple of a smaller
avoidance count.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .enumeration import count_avoiders
from .patterns import DistantPattern, FREE_GAP
from .perms import Permutation

__all__ = [
    "ExpansionResult",
    "expand_classical",
    "boundary_reduced_count",
    "falling_factorial",
]


@dataclass(frozen=True)
class ExpansionResult:
    """A distant pattern and the classical pattern set equivalent to it."""

    source: DistantPattern
    classical_set: frozenset[Permutation]


def falling_factorial(x: int, y: int) -> int:
    """x(x-1)...(x-y+1); zero when the product crosses zero."""
    result = 1
    for i in range(y):
        result *= x - i
    return result


def expand_classical(p: DistantPattern) -> ExpansionResult:
    """Expand a classical distant pattern into its equivalent classical set.

    Tight gaps are rejected: the expansion argument needs every gap to be
    a pure minimum.
    """
    if not p.is_classical_distant:
        raise ValueError(f"expansion needs a pattern without tight gaps, got {p}")
    q = p.letters.values
    k = len(q)
    s = p.total_min_gap
    size = s + k

    # slot layout of the expanded word: letter positions are fixed by the gaps
    letter_slots = []
    cursor = p.gaps[0].min_gap
    for t in range(k):
        letter_slots.append(cursor)
        cursor += 1 + p.gaps[t + 1].min_gap
    letter_slot_set = set(letter_slots)
    gap_slots = [i for i in range(size) if i not in letter_slot_set]

    members: set[Permutation] = set()
    for chosen in itertools.combinations(range(1, size + 1), s):
        remaining = sorted(set(range(1, size + 1)) - set(chosen))
        word = [0] * size
        for t, slot in enumerate(letter_slots):
            word[slot] = remaining[q[t] - 1]
        for filling in itertools.permutations(chosen):
            for slot, value in zip(gap_slots, filling):
                word[slot] = value
            members.add(Permutation(tuple(word)))
    expected = math.factorial(size) // math.factorial(k)
    assert len(members) == expected, (len(members), expected)
    return ExpansionResult(p, frozenset(members))


def boundary_reduced_count(n: int, p: DistantPattern, **count_kwargs) -> int:
    """Avoider count of a pattern with boundary-only squares, via reduction.

    For p with leading minimum r1 and trailing minimum r2 around an inner
    pattern q (whose own boundaries are unconstrained), the avoiders of
    size n number n^(r) * |Av_{n-r}(q)| with r = r1 + r2.  Falling-factorial
    zero handling covers n < r.
    """
    r1 = p.gaps[0].min_gap
    r2 = p.gaps[-1].min_gap
    r = r1 + r2
    inner = DistantPattern(p.letters, (FREE_GAP,) + p.gaps[1:-1] + (FREE_GAP,))
    factor = falling_factorial(n, r)
    if factor == 0:
        return 0
    return factor * count_avoiders(n - r, [inner], **count_kwargs)
