"""Constructive maps between avoider classes and cycle-structured permutations.

Three executable constructions live here:

* ``cycle_image`` / ``cycle_preimage``: the bijection between permutations
  whose inversions all span at most r positions (avoiders of "2 #r 1") and
  permutations whose cycles each have value spread at most r.
* ``insert_rise``: the insertion map sending (permutation containing a
  rise, value j) to a permutation of one size larger that contains a
  distant rise "1 #1 2"; ``rise_insertion_profile`` classifies how often
  each distant-rise container is hit.
* ``ap_avoider_count``: permutations avoiding value arithmetic
  progressions, counted directly and through the inverse-permutation
  correspondence with consecutive uniform patterns.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping

from .closedforms import (
    fibonacci,
    rise_insertion_double_count,
    rise_insertion_missed_count,
)
from .enumeration import DEFAULT_LIST_CAP, CapExceeded, count_avoiders
from .matching import avoids, iter_occurrences
from .patterns import make_uniform
from .perms import Permutation, all_permutations

__all__ = [
    "CyclePermutation",
    "PreimageProfile",
    "cycle_image",
    "cycle_preimage",
    "insert_rise",
    "rise_insertion_profile",
    "ap_avoider_count",
    "contains_value_progression",
]


@dataclass(frozen=True)
class CyclePermutation:
    """Cycle notation in standard form: minimum first in each cycle, cycles
    ordered by increasing minima; the cycles partition 1..n."""

    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        normalized = []
        seen: set[int] = set()
        for cycle in self.cycles:
            if not cycle:
                raise ValueError("empty cycle")
            pivot = cycle.index(min(cycle))
            rotated = tuple(cycle[pivot:] + cycle[:pivot])
            normalized.append(rotated)
            seen.update(rotated)
        normalized.sort(key=lambda c: c[0])
        object.__setattr__(self, "cycles", tuple(normalized))
        n = sum(len(c) for c in self.cycles)
        if seen != set(range(1, n + 1)):
            raise ValueError(f"cycles must partition 1..{n}")

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.cycles)

    def max_spread(self) -> int:
        """Largest max-min difference inside one cycle (0 for the identity)."""
        return max((max(c) - min(c) for c in self.cycles), default=0)

    def to_permutation(self) -> Permutation:
        image = list(range(1, self.size + 1))
        for cycle in self.cycles:
            for i, element in enumerate(cycle):
                image[element - 1] = cycle[(i + 1) % len(cycle)]
        return Permutation(tuple(image))

    @classmethod
    def from_permutation(cls, p: Permutation) -> "CyclePermutation":
        remaining = set(range(1, len(p) + 1))
        cycles = []
        while remaining:
            start = min(remaining)
            cycle = [start]
            remaining.discard(start)
            cursor = p[start]
            while cursor != start:
                cycle.append(cursor)
                remaining.discard(cursor)
                cursor = p[cursor]
            cycles.append(tuple(cycle))
        return cls(tuple(cycles))

    def __str__(self) -> str:
        return "".join("(" + " ".join(str(v) for v in c) + ")" for c in self.cycles)

    @classmethod
    def from_text(cls, text: str) -> "CyclePermutation":
        """Parse "(1 3 4)(2 5)" style cycle notation (commas also accepted)."""
        chunks = re.findall(r"\(([^()]*)\)", text)
        if not chunks or "".join(chunks).strip() == "":
            raise ValueError(f"cannot parse cycles from {text!r}")
        cycles = tuple(
            tuple(int(tok) for tok in re.split(r"[,\s]+", chunk.strip()) if tok)
            for chunk in chunks
        )
        return cls(cycles)


def cycle_image(p: Permutation, r: int) -> CyclePermutation:
    """Map an avoider of "2 #r 1" to its bounded-spread cycle permutation.

    Cycles are built greedily: the next cycle is led by the smallest unused
    position j, followed by the positions of the values p_j - 1 down to one
    above the previous leader's value.  Rejects hosts that contain "2 #r 1",
    reporting the offending witness.
    """
    wide_inversion = make_uniform((2, 1), r)
    witness = next(iter_occurrences(p, wide_inversion), None)
    if witness is not None:
        raise ValueError(
            f"{p} contains an inversion spanning more than {r} positions at {witness}"
        )
    n = len(p)
    position_of = {v: i for i, v in enumerate(p.values, start=1)}
    used = [False] * (n + 1)
    cycles = []
    ceiling = 0
    remaining = n
    leader = 1
    while remaining:
        while used[leader]:
            leader += 1
        value = p[leader]
        cycle = [leader] + [position_of[v] for v in range(value - 1, ceiling, -1)]
        for i in cycle:
            used[i] = True
        remaining -= len(cycle)
        ceiling = value
        cycles.append(tuple(cycle))
    image = CyclePermutation(tuple(cycles))
    spread = image.max_spread()
    assert spread <= r, f"construction broke the spread bound: {spread} > {r}"
    return image


def cycle_preimage(c: CyclePermutation, r: int) -> Permutation:
    """Inverse of ``cycle_image``: rejects cycles whose spread exceeds r."""
    spread = c.max_spread()
    if spread > r:
        raise ValueError(f"cycle spread {spread} exceeds the bound {r}")
    n = c.size
    values = [0] * n
    placed = 0
    for cycle in c.cycles:
        top = placed + len(cycle)
        for offset, position in enumerate(cycle):
            values[position - 1] = top - offset
        placed = top
    return Permutation(tuple(values))


def insert_rise(p: Permutation, j: int) -> Permutation:
    """Insert value j just after the leftmost letter that starts a rise.

    The host must contain a rise (a classical 12 occurrence); values >= j
    in the host shift up by one, the inserted letter keeps the value j.
    The result always contains the distant rise "1 #1 2".
    """
    n = len(p) + 1
    if not 1 <= j <= n:
        raise ValueError(f"insertion value {j} outside 1..{n}")
    if not p.contains_rise():
        raise ValueError(f"{p} has no rise to insert after")
    best = None
    for i in range(len(p) - 1):
        if any(p.values[t] > p.values[i] for t in range(i + 1, len(p))):
            best = i
            break
    assert best is not None
    shifted = [v + 1 if v >= j else v for v in p.values]
    result = shifted[: best + 1] + [j] + shifted[best + 1 :]
    return Permutation(tuple(result))


@dataclass(frozen=True)
class PreimageProfile:
    """How many distant-rise containers of size n have 0, 1 or 2 preimages."""

    n: int
    histogram: Mapping[int, int]

    @property
    def container_total(self) -> int:
        return sum(self.histogram.values())


def rise_insertion_profile(n: int, *, cap: int = DEFAULT_LIST_CAP) -> PreimageProfile:
    """Apply the insertion map to every valid (host, value) pair at size n
    and histogram the distant-rise containers by preimage multiplicity.

    Cross-checks, all enforced here: multiplicity never exceeds 2, the
    double and missed counts match their summation formulas, and the
    inclusion-exclusion identity between them balances.
    """
    if n > cap:
        raise CapExceeded(f"profile at n={n} exceeds the cap {cap}; raise it explicitly")
    if n < 2:
        raise ValueError("need n >= 2")
    distant_rise = make_uniform((1, 2), 1)
    hits: dict[tuple[int, ...], int] = {}
    for host in all_permutations(n - 1):
        if not host.contains_rise():
            continue
        for j in range(1, n + 1):
            image = insert_rise(host, j)
            assert not avoids(image, distant_rise), image
            hits[image.values] = hits.get(image.values, 0) + 1

    histogram = {0: 0, 1: 0, 2: 0}
    containers = 0
    for candidate in all_permutations(n):
        if avoids(candidate, distant_rise):
            continue
        containers += 1
        multiplicity = hits.get(candidate.values, 0)
        if multiplicity > 2:
            raise AssertionError(f"{candidate} hit {multiplicity} times")
        histogram[multiplicity] += 1

    expected_containers = math.factorial(n) - fibonacci(n + 1)
    if containers != expected_containers:
        raise AssertionError(f"container count {containers} != n! - F_(n+1)")
    if histogram[2] != rise_insertion_double_count(n):
        raise AssertionError("double-hit count disagrees with its formula")
    if histogram[0] != rise_insertion_missed_count(n):
        raise AssertionError("missed count disagrees with its formula")
    # inclusion-exclusion over the map's domain
    if (containers - histogram[0]) - (math.factorial(n) - n - histogram[2]) != 0:
        raise AssertionError("inclusion-exclusion identity out of balance")
    return PreimageProfile(n, histogram)


def contains_value_progression(p: Permutation, k: int, r: int) -> bool:
    """Does p hold values x, x+r, ..., x+(k-1)r at increasing positions?"""
    n = len(p)
    position_of = {v: i for i, v in enumerate(p.values, start=1)}
    for x in range(1, n - (k - 1) * r + 1):
        positions = [position_of[x + t * r] for t in range(k)]
        if all(positions[t] < positions[t + 1] for t in range(k - 1)):
            return True
    return False


def ap_avoider_count(n: int, k: int, r: int, *, cap: int = DEFAULT_LIST_CAP) -> int:
    """Permutations of size n with no length-k difference-r value progression.

    Counted two independent ways, which must agree: a direct scan of every
    permutation, and avoidance of the all-tight uniform rise pattern under
    the inverse-permutation correspondence.  A progression of difference r
    sits at positions exactly r apart in the inverse, so the corresponding
    pattern has r-1 letters inside each gap.
    """
    if k < 2 or r < 1:
        raise ValueError("need progression length k >= 2 and difference r >= 1")
    if n > cap:
        raise CapExceeded(f"AP count at n={n} exceeds the cap {cap}; raise it explicitly")
    direct = sum(
        1 for p in all_permutations(n) if not contains_value_progression(p, k, r)
    )
    pattern = make_uniform(tuple(range(1, k + 1)), r - 1, tight=True)
    via_pattern = count_avoiders(n, [pattern], cap=max(cap, n))
    if direct != via_pattern:
        raise AssertionError(
            f"AP scan ({direct}) and pattern avoidance ({via_pattern}) disagree at n={n}"
        )
    return direct
