"""Exact recurrences, summations and generating-function identities.

Everything is big-integer or rational arithmetic; power series are plain
truncated coefficient vectors.  Each formula here has an independent
enumeration oracle in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .perms import Permutation

__all__ = [
    "SeriesTable",
    "RecurrenceTrace",
    "fibonacci",
    "fib_distant_recurrence",
    "firro_count",
    "counts_12_then_distant_3",
    "counts_1_then_distant_32",
    "consecutive_uniform_count",
    "catalan_series",
    "verify_gap132_identity",
    "rise_insertion_double_count",
    "rise_insertion_missed_count",
    "uniform_avoidance_upper_bound",
]


# ---------------------------------------------------------------------------
# truncated power series


@dataclass(frozen=True)
class SeriesTable:
    """Coefficients of a power series truncated at a fixed degree."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("series needs at least the constant coefficient")

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], truncation: int) -> "SeriesTable":
        padded = list(coeffs)[: truncation + 1]
        padded += [0] * (truncation + 1 - len(padded))
        return cls(tuple(padded))

    @classmethod
    def constant(cls, value: int, truncation: int) -> "SeriesTable":
        return cls.from_coeffs([value], truncation)

    def _match(self, other: "SeriesTable") -> None:
        if self.truncation != other.truncation:
            raise ValueError(
                f"truncation mismatch: {self.truncation} vs {other.truncation}"
            )

    def __add__(self, other: "SeriesTable") -> "SeriesTable":
        self._match(other)
        return SeriesTable(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "SeriesTable") -> "SeriesTable":
        self._match(other)
        return SeriesTable(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "SeriesTable") -> "SeriesTable":
        self._match(other)
        n = self.truncation
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return SeriesTable(tuple(out))

    def shift(self, power: int) -> "SeriesTable":
        """Multiply by x**power, truncating at the same degree."""
        if power < 0:
            raise ValueError("shift power must be >= 0")
        return SeriesTable(tuple([0] * power + list(self.coeffs))[: len(self.coeffs)])

    def __getitem__(self, degree: int) -> int:
        return self.coeffs[degree]


def catalan_series(truncation: int) -> SeriesTable:
    """Catalan number series 1, 1, 2, 5, 14, ...; satisfies C = 1 + x C^2."""
    c = [1]
    for n in range(truncation):
        c.append(sum(c[i] * c[n - i] for i in range(n + 1)))
    return SeriesTable(tuple(c[: truncation + 1]))


# ---------------------------------------------------------------------------
# Fibonacci forms


def fibonacci(n: int) -> int:
    """F_1 = F_2 = 1, F_n = F_{n-1} + F_{n-2}."""
    if n < 1:
        raise ValueError("index must be >= 1")
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def fib_distant_recurrence(n: int) -> int:
    """Summation form of F_{n+1} coming from the rise-insertion count.

    For n >= 3:  n + sum_{k=1}^{n-3} (n - (k+2) F_{n-(k+1)}) * k * k!
    """
    if n < 3:
        raise ValueError("defined for n >= 3")
    total = n
    for k in range(1, n - 2):
        total += (n - (k + 2) * fibonacci(n - (k + 1))) * k * math.factorial(k)
    return total


# ---------------------------------------------------------------------------
# avoiders of "1 2 #1 3"-type patterns (one square, three letters)


def firro_count(n: int) -> int:
    """Avoiders of size n for any pattern 'xy #1 z' or 'x #1 yz' (x,y,z in S_3).

    sum_{k >= 0} (1/(n-k)) C(2n-2k, n-1-2k) C(n-k, k), summed while the
    binomial lower index stays non-negative; each term is an integer.
    """
    if n < 1:
        raise ValueError("size must be >= 1")
    total = 0
    for k in range((n - 1) // 2 + 1):
        term = Fraction(math.comb(2 * n - 2 * k, n - 1 - 2 * k) * math.comb(n - k, k), n - k)
        if term.denominator != 1:
            raise ArithmeticError(f"non-integral term at n={n}, k={k}: {term}")
        total += term.numerator
    return total


# ---------------------------------------------------------------------------
# recurrences for the two vincular gap patterns of size 3


@dataclass(frozen=True)
class RecurrenceTrace:
    """Values of a recurrence together with the explicit basis rows."""

    name: str
    rows: tuple[tuple[int, int], ...]
    basis: tuple[tuple[int, int], ...]

    def value(self, n: int) -> int:
        return dict(self.rows)[n]


def counts_12_then_distant_3(n_max: int) -> RecurrenceTrace:
    """Avoider counts for "1 =0 2 #1 3": an adjacent rise, then a bigger letter
    at distance at least two.

    Basis n! for n <= 3, then
    a_n = a_{n-1} + (n-1) a_{n-2} + (n+1)(n-2)/2 a_{n-3}
          + sum_{i=4}^{n-1} (C(n, i-1) - 1) a_{n-i} + (n-1).
    """
    a = [math.factorial(n) for n in range(min(n_max, 3) + 1)]
    for n in range(4, n_max + 1):
        value = a[n - 1] + (n - 1) * a[n - 2] + ((n + 1) * (n - 2) // 2) * a[n - 3]
        value += sum((math.comb(n, i - 1) - 1) * a[n - i] for i in range(4, n))
        value += n - 1
        a.append(value)
    rows = tuple(enumerate(a))
    return RecurrenceTrace("1 =0 2 #1 3", rows, rows[: min(n_max, 3) + 1])


def counts_1_then_distant_32(n_max: int) -> RecurrenceTrace:
    """Avoider counts for "1 #1 3 =0 2": a letter, and at distance at least
    two an adjacent descent of two bigger letters.

    Basis n! for n <= 3, then
    b_n = b_{n-1} + (n-1) b_{n-2} + (n+1)(n-2)/2 b_{n-3}
          + sum_{i=2}^{n-3} (i C(n-2, i) + C(n-1, i-1)) b_{i-1} + (n-1).

    The sum is also evaluated in its reindexed form (j = n-i+1) and the two
    must agree, guarding against transcription drift.
    """
    b = [math.factorial(n) for n in range(min(n_max, 3) + 1)]
    for n in range(4, n_max + 1):
        head = b[n - 1] + (n - 1) * b[n - 2] + ((n + 1) * (n - 2) // 2) * b[n - 3]
        tail = sum(
            (i * math.comb(n - 2, i) + math.comb(n - 1, i - 1)) * b[i - 1]
            for i in range(2, n - 2)
        )
        reindexed = sum(
            ((n - j + 1) * math.comb(n - 2, j - 3) + math.comb(n - 1, j - 1)) * b[n - j]
            for j in range(4, n)
        )
        if tail != reindexed:
            raise ArithmeticError(f"sum evaluators disagree at n={n}: {tail} vs {reindexed}")
        b.append(head + tail + (n - 1))
    rows = tuple(enumerate(b))
    return RecurrenceTrace("1 #1 3 =0 2", rows, rows[: min(n_max, 3) + 1])


# ---------------------------------------------------------------------------
# consecutive uniform patterns


def consecutive_uniform_count(
    n: int, r: int, q: Permutation, base: Mapping[int, int]
) -> int:
    """Avoiders of the all-tight uniform pattern built from q with gap r.

    With l = floor(n/(r+1)) and u = n mod (r+1):

        n! / (l!^(r+1-u) (l+1)!^u) * base[l]^(r+1-u) * base[l+1]^u

    where base maps a size to its count of consecutive-q avoiders.
    """
    if r < 0:
        raise ValueError("gap must be >= 0")
    l, u = divmod(n, r + 1)
    needed = {l} | ({l + 1} if u else set())
    missing = needed - set(base)
    if missing:
        raise ValueError(f"base is missing consecutive avoider counts for sizes {sorted(missing)}")
    numerator = math.factorial(n) * base[l] ** (r + 1 - u)
    denominator = math.factorial(l) ** (r + 1 - u)
    if u:
        numerator *= base[l + 1] ** u
        denominator *= math.factorial(l + 1) ** u
    if numerator % denominator:
        raise ArithmeticError(f"non-integral count for n={n}, r={r}")
    return numerator // denominator


# ---------------------------------------------------------------------------
# the generating-function identity for avoiders of "1 #1 3 #1 2"


def verify_gap132_identity(g: SeriesTable, h1: SeriesTable, h2: SeriesTable) -> bool:
    """Check G = 1 + G(xH1 + xH2 + x^3 H1) + G^2 (x - 2x^2 - x^3 - x^4).

    G counts avoiders of "1 #1 3 #1 2"; H1/H2 count those avoiders without
    an anchored occurrence of "1 #1 3 =0 2" at the end (resp. "1 =0 3 #1 2"
    at the start).  All three series must share one truncation.
    """
    g._match(h1)
    g._match(h2)
    n = g.truncation
    one = SeriesTable.constant(1, n)
    poly = SeriesTable.from_coeffs([0, 1, -2, -1, -1], n)
    rhs = one + g * (h1.shift(1) + h2.shift(1) + h1.shift(3)) + (g * g) * poly
    return rhs == g


# ---------------------------------------------------------------------------
# counting formulas for the rise-insertion map


def rise_insertion_double_count(n: int) -> int:
    """Permutations hit twice by the rise-insertion map at size n.

    sum_{j=3}^{n-1} (j-2)(n-j)(n-j)!
    """
    return sum((j - 2) * (n - j) * math.factorial(n - j) for j in range(3, n))


def rise_insertion_missed_count(n: int) -> int:
    """Permutations containing "1 #1 2" that the rise-insertion map never hits.

    sum_{k=3}^{n-2} (F_{n-k+1} - 1) k (k-2) (k-2)!
    """
    return sum(
        (fibonacci(n - k + 1) - 1) * k * (k - 2) * math.factorial(k - 2)
        for k in range(3, n - 1)
    )


# ---------------------------------------------------------------------------
# probabilistic upper bound for uniform patterns


def uniform_avoidance_upper_bound(n: int, k: int, r: int) -> Fraction:
    """Strict upper bound d^n n! with d = (1 - 1/k!)^((r+1)/n) for avoiders
    of the uniform gap-r pattern of a size-k letter permutation, valid for
    n >= k(r+1)."""
    if n < k * (r + 1):
        raise ValueError(f"bound needs n >= k(r+1) = {k * (r + 1)}")
    kf = math.factorial(k)
    return Fraction(kf - 1, kf) ** (r + 1) * math.factorial(n)
