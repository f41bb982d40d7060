"""Distant patterns: permutation letters with per-gap distance constraints.

A pattern of size k carries k+1 gap constraints: one before the first
letter, one between each pair of consecutive letters and one after the
last letter.  Each constraint is a minimum number of interleaved host
letters, optionally tight (gap size must be exact).  A tight gap of size
0 forces adjacency, so vincular patterns are the tight-0 special case;
patterns whose internal gaps are all tight are consecutive patterns.

Text form (whitespace-separated tokens):

    letter       positive integer
    "#r"         gap with at least r interleaved letters (r >= 1); "#" = "#1"
    "=r"         gap with exactly r interleaved letters (r >= 0)

A missing gap token between adjacent letters means "at least 0", i.e. no
constraint.  "#r" may open or close the pattern; "=r" may not.  A
digits-only string such as "132" is shorthand for the classical pattern
with those single-digit letters.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .perms import Permutation, flatten

__all__ = [
    "GapConstraint",
    "DistantPattern",
    "PatternParseError",
    "parse_pattern",
    "render_pattern",
    "make_uniform",
    "make_classical",
    "pattern_symmetry",
    "symmetry_class",
    "add_boundary_gaps",
    "pattern_set_key",
]


class PatternParseError(ValueError):
    """Malformed pattern text; carries the offending token position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (token {position})"
        super().__init__(message)


@dataclass(frozen=True)
class GapConstraint:
    """Gap between consecutive pattern letters: at least (or exactly) min_gap letters."""

    min_gap: int
    tight: bool = False

    def __post_init__(self) -> None:
        if self.min_gap < 0:
            raise ValueError(f"min_gap must be >= 0, got {self.min_gap}")

    @property
    def is_free(self) -> bool:
        """No constraint at all: at least zero interleaved letters."""
        return self.min_gap == 0 and not self.tight


FREE_GAP = GapConstraint(0, False)
ADJACENT = GapConstraint(0, True)


@dataclass(frozen=True)
class DistantPattern:
    """Pattern letters (a permutation of [k]) plus k+1 gap constraints."""

    letters: Permutation
    gaps: tuple[GapConstraint, ...]

    def __post_init__(self) -> None:
        k = len(self.letters)
        if k < 1:
            raise ValueError("pattern needs at least one letter")
        if len(self.gaps) != k + 1:
            raise ValueError(f"need {k + 1} gap constraints for {k} letters, got {len(self.gaps)}")
        if self.gaps[0].tight or self.gaps[-1].tight:
            raise ValueError("boundary gaps must be minimum-only, not tight")

    @property
    def size(self) -> int:
        return len(self.letters)

    @property
    def total_min_gap(self) -> int:
        """Sum of all k+1 minimum gap sizes."""
        return sum(g.min_gap for g in self.gaps)

    @property
    def min_host_size(self) -> int:
        """Smallest host size in which an occurrence can fit."""
        return self.size + self.total_min_gap

    @property
    def is_classical_distant(self) -> bool:
        """True iff no gap is tight."""
        return not any(g.tight for g in self.gaps)

    @property
    def is_consecutive(self) -> bool:
        """True iff every internal gap is tight."""
        return all(g.tight for g in self.gaps[1:-1])

    def __str__(self) -> str:
        return render_pattern(self)


def make_classical(letters: Permutation | Sequence[int]) -> DistantPattern:
    """The classical pattern: all gaps unconstrained."""
    q = letters if isinstance(letters, Permutation) else Permutation(tuple(letters))
    return DistantPattern(q, (FREE_GAP,) * (len(q) + 1))


def make_uniform(
    letters: Permutation | Sequence[int], r: int, *, tight: bool = False
) -> DistantPattern:
    """Uniform pattern: every internal gap at least (or, if tight, exactly) r.

    Boundary gaps stay unconstrained; tight=True gives the consecutive variant.
    """
    q = letters if isinstance(letters, Permutation) else Permutation(tuple(letters))
    if len(q) == 0:
        raise ValueError("uniform pattern needs a nonempty permutation")
    inner = GapConstraint(r, tight)
    return DistantPattern(q, (FREE_GAP,) + (inner,) * (len(q) - 1) + (FREE_GAP,))


def add_boundary_gaps(p: DistantPattern, before: int, after: int) -> DistantPattern:
    """Require at least ``before`` letters in front of and ``after`` behind any occurrence.

    The pattern must not already constrain its boundaries.
    """
    if p.gaps[0].min_gap or p.gaps[-1].min_gap:
        raise ValueError("pattern already has boundary constraints")
    gaps = (GapConstraint(before, False),) + p.gaps[1:-1] + (GapConstraint(after, False),)
    return DistantPattern(p.letters, gaps)


def parse_pattern(text: str) -> DistantPattern:
    """Parse pattern text; see the module docstring for the grammar."""
    stripped = text.strip()
    if not stripped:
        raise PatternParseError("empty pattern text")
    if stripped.isdigit():
        # compact classical sugar, one digit per letter
        letters = tuple(int(ch) for ch in stripped)
        try:
            return make_classical(letters)
        except ValueError as exc:
            raise PatternParseError(f"bad classical pattern {stripped!r}: {exc}") from None

    tokens = stripped.split()
    letters: list[int] = []
    gaps: list[GapConstraint] = []
    pending_gap: GapConstraint | None = None
    seen_letter = False
    for idx, tok in enumerate(tokens, start=1):
        if tok == "#":
            gap = GapConstraint(1, False)
        elif tok.startswith("#"):
            r = _parse_gap_size(tok[1:], tok, idx)
            if r < 1:
                raise PatternParseError(f"'#{r}' needs r >= 1; omit the token for a free gap", idx)
            gap = GapConstraint(r, False)
        elif tok.startswith("="):
            r = _parse_gap_size(tok[1:], tok, idx)
            gap = GapConstraint(r, True)
        elif tok.isdigit():
            value = int(tok)
            if value < 1:
                raise PatternParseError(f"letter must be positive, got {tok!r}", idx)
            gaps.append(pending_gap if pending_gap is not None else FREE_GAP)
            seen_letter = True
            letters.append(value)
            pending_gap = None
            continue
        else:
            raise PatternParseError(f"unrecognized token {tok!r}", idx)
        # gap token handling
        if pending_gap is not None:
            raise PatternParseError("two gap tokens in a row", idx)
        if gap.tight and not seen_letter:
            raise PatternParseError("tight gap cannot open a pattern", idx)
        pending_gap = gap

    if not letters:
        raise PatternParseError("pattern has no letters")
    if pending_gap is not None:
        if pending_gap.tight:
            raise PatternParseError("tight gap cannot close a pattern", len(tokens))
        gaps.append(pending_gap)
    else:
        gaps.append(FREE_GAP)

    if sorted(letters) != list(range(1, len(letters) + 1)):
        raise PatternParseError(f"letters {letters} are not a permutation of 1..{len(letters)}")
    return DistantPattern(Permutation(tuple(letters)), tuple(gaps))


def _parse_gap_size(digits: str, token: str, position: int) -> int:
    if not digits.isdigit():
        raise PatternParseError(f"bad gap token {token!r}", position)
    return int(digits)


def render_pattern(p: DistantPattern) -> str:
    """Canonical text form; ``parse_pattern`` inverts it."""
    parts: list[str] = []
    lead = p.gaps[0]
    if not lead.is_free:
        parts.append(f"#{lead.min_gap}")
    for i, letter in enumerate(p.letters):
        if i > 0:
            gap = p.gaps[i]
            if gap.tight:
                parts.append(f"={gap.min_gap}")
            elif gap.min_gap:
                parts.append(f"#{gap.min_gap}")
        parts.append(str(letter))
    trail = p.gaps[-1]
    if not trail.is_free:
        parts.append(f"#{trail.min_gap}")
    return " ".join(parts)


def pattern_symmetry(p: DistantPattern, op: str) -> DistantPattern:
    """Reverse or complement a distant pattern.

    Reverse flips both the letter word and the gap sequence; complement
    flips letter values and keeps gaps.  Inversion is rejected: positional
    gap constraints do not transport through it.
    """
    if op == "reverse":
        return DistantPattern(p.letters.reverse(), p.gaps[::-1])
    if op == "complement":
        return DistantPattern(p.letters.complement(), p.gaps)
    if op == "inverse":
        raise ValueError("inverse is not defined for patterns with positional gap constraints")
    raise ValueError(f"unknown pattern symmetry {op!r}; expected 'reverse' or 'complement'")


def symmetry_class(p: DistantPattern) -> frozenset[DistantPattern]:
    """Closure of a pattern under reverse and complement."""
    rev = pattern_symmetry(p, "reverse")
    com = pattern_symmetry(p, "complement")
    return frozenset({p, rev, com, pattern_symmetry(rev, "complement")})


def pattern_set_key(patterns: Iterable[DistantPattern]) -> str:
    """Canonical cache/table key for a pattern set."""
    return ";".join(sorted(render_pattern(p) for p in patterns))
