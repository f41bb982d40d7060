"""Permutations in one-line notation and the order-isomorphism (flatten) map.

A permutation of size n is a bijection on {1, ..., n}, stored as the tuple
of its values.  The empty permutation is allowed and acts as the identity
for concatenation-style constructions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Permutation",
    "flatten",
    "apply_symmetry",
    "SYMMETRY_OPS",
]


@dataclass(frozen=True)
class Permutation:
    """One-line notation permutation; ``values`` is a bijection on {1..n}."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if sorted(vals) != list(range(1, len(vals) + 1)):
            raise ValueError(f"not a permutation of 1..{len(vals)}: {vals}")

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> "Permutation":
        return cls(tuple(int(v) for v in values))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        """Parse '42513', '4 2 5 1 3' or '4,2,5,1,3'; digits-only form needs n <= 9."""
        text = text.strip()
        if not text:
            return cls(())
        if "," in text:
            parts = text.split(",")
        elif " " in text:
            parts = text.split()
        else:
            if not text.isdigit():
                raise ValueError(f"cannot parse permutation from {text!r}")
            parts = list(text)
        return cls(tuple(int(p) for p in parts))

    @property
    def size(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, position: int) -> int:
        """Value at 1-based position."""
        if not 1 <= position <= len(self.values):
            raise IndexError(f"position {position} outside 1..{len(self.values)}")
        return self.values[position - 1]

    def __str__(self) -> str:
        if not self.values:
            return "()"
        if len(self.values) <= 9:
            return "".join(str(v) for v in self.values)
        return " ".join(str(v) for v in self.values)

    def reverse(self) -> "Permutation":
        return Permutation(self.values[::-1])

    def complement(self) -> "Permutation":
        n = len(self.values)
        return Permutation(tuple(n + 1 - v for v in self.values))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.values)
        for pos, val in enumerate(self.values, start=1):
            inv[val - 1] = pos
        return Permutation(tuple(inv))

    def position_of(self, value: int) -> int:
        """1-based position of ``value``."""
        return self.values.index(value) + 1

    def contains_rise(self) -> bool:
        """True iff some pair i < j has values[i] < values[j] (contains classical 12)."""
        lowest = None
        for v in self.values:
            if lowest is not None and v > lowest:
                return True
            if lowest is None or v < lowest:
                lowest = v
        return False


def flatten(keys: Sequence[float]) -> Permutation:
    """The unique permutation order-isomorphic to a sequence of distinct keys.

    >>> flatten((3, 5, 1)).values
    (2, 3, 1)
    >>> flatten((4, 1, 3, 5, 2)).values
    (4, 1, 3, 5, 2)
    """
    if len(set(keys)) != len(keys):
        raise ValueError(f"flatten requires pairwise distinct keys, got {tuple(keys)}")
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    ranks = [0] * len(keys)
    for rank, i in enumerate(order, start=1):
        ranks[i] = rank
    return Permutation(tuple(ranks))


SYMMETRY_OPS = ("reverse", "complement", "inverse")


def apply_symmetry(p: Permutation, op: str) -> Permutation:
    """Apply one of the standard symmetries: reverse, complement or inverse."""
    if op == "reverse":
        return p.reverse()
    if op == "complement":
        return p.complement()
    if op == "inverse":
        return p.inverse()
    raise ValueError(f"unknown symmetry {op!r}; expected one of {SYMMETRY_OPS}")


def all_permutations(n: int) -> Iterator[Permutation]:
    """All n-permutations in lexicographic order."""
    for vals in itertools.permutations(range(1, n + 1)):
        yield Permutation(vals)
