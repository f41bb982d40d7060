"""Count or list n-permutations avoiding a set of distant patterns.

The engine backtracks over prefixes p_1..p_m of the one-line notation,
abandoning a prefix as soon as it fully contains an occurrence of any
pattern.  Because witness conditions depend only on the witness positions,
the witness values and the final size n, a witness inside a prefix
survives every completion, so the pruning is sound; and any completed
occurrence is detected the moment its last letter is placed, so counting
the surviving leaves is exact.

Counting may fan out across worker processes, split by the value placed
at position 1; partial counts are summed in a fixed order, so results do
not depend on the worker count.
"""
from __future__ import annotations

import json
import logging
import math
import os
import random
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .patterns import DistantPattern, parse_pattern, pattern_set_key, render_pattern
from .perms import Permutation

__all__ = [
    "CapExceeded",
    "CountTable",
    "PrefixQuery",
    "CountCache",
    "count_avoiders",
    "list_avoiders",
    "count_avoiders_with_prefix",
    "sequence",
    "DEFAULT_COUNT_CAP",
    "DEFAULT_LIST_CAP",
    "ENGINE_VERSION",
]

log = logging.getLogger(__name__)

DEFAULT_COUNT_CAP = 12
DEFAULT_LIST_CAP = 9
ENGINE_VERSION = "0.1.0"

CACHE_ENV_VAR = "DISTPAT_CACHE"


class CapExceeded(RuntimeError):
    """Requested size exceeds the configured resource cap."""


@dataclass(frozen=True)
class PrefixQuery:
    """Ask for avoiders of size n whose one-line notation starts with ``prefix``."""

    n: int
    prefix: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("size must be >= 0")
        vals = tuple(self.prefix)
        object.__setattr__(self, "prefix", vals)
        if len(set(vals)) != len(vals):
            raise ValueError(f"prefix values must be distinct: {vals}")
        if len(vals) > self.n or any(not 1 <= v <= self.n for v in vals):
            raise ValueError(f"prefix {vals} does not fit into [1..{self.n}]")


@dataclass(frozen=True)
class CountTable:
    """Avoider counts for one pattern set, one row per size."""

    patterns: str
    rows: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        ns = [n for n, _ in self.rows]
        if ns != sorted(set(ns)):
            raise ValueError("rows must be strictly increasing in n")

    def counts(self) -> dict[int, int]:
        return dict(self.rows)


# ---------------------------------------------------------------------------
# compiled patterns and the incremental witness check


def _compile(patterns: Sequence[DistantPattern], n: int):
    """Preprocess patterns for hosts of size n; unsatisfiable ones drop out."""
    compiled = []
    for p in patterns:
        if p.min_host_size > n:
            continue
        q = p.letters.values
        k = len(q)
        mins = tuple(g.min_gap for g in p.gaps)
        tights = tuple(g.tight for g in p.gaps)
        lo = [mins[0] + 1]
        for t in range(1, k):
            lo.append(lo[-1] + mins[t] + 1)
        min_end = lo[-1]
        max_end = n - mins[k]
        compiled.append((q, k, mins, tights, tuple(lo), min_end, max_end))
    return compiled


_NO_UPPER = 1 << 62


def _ends_at(vals: list[int], m: int, pat) -> bool:
    """Is there a witness whose last letter sits at position m of the prefix?"""
    q, k, mins, tights, lo, _min_end, _max_end = pat
    if k == 1:
        return True  # window already checked by the caller
    pos = [0] * k
    pv = [0] * k
    pos[k - 1] = m
    pv[k - 1] = vals[m - 1]

    def place(t: int) -> bool:
        nxt = pos[t + 1]
        top = nxt - mins[t + 1] - 1
        bottom = lo[t]
        if top < bottom:
            return False
        if tights[t + 1]:
            bottom = top
        qt = q[t]
        lo_v = 0
        hi_v = _NO_UPPER
        for s in range(t + 1, k):
            if q[s] > qt:
                hi_v = min(hi_v, pv[s])
            else:
                lo_v = max(lo_v, pv[s])
        for i in range(top, bottom - 1, -1):
            v = vals[i - 1]
            if lo_v < v < hi_v:
                if t == 0:
                    return True
                pos[t] = i
                pv[t] = v
                if place(t - 1):
                    return True
        return False

    return place(k - 2)


def _search(n: int, compiled, prefix: Sequence[int], collect: list | None) -> int:
    """Count (and optionally collect) avoiding completions of a value prefix."""
    used = [False] * (n + 1)
    vals: list[int] = []
    for v in prefix:
        used[v] = True
        vals.append(v)
        m = len(vals)
        for pat in compiled:
            if pat[5] <= m <= pat[6] and _ends_at(vals, m, pat):
                return 0  # prefix already contains a witness

    count = 0

    def extend() -> None:
        nonlocal count
        m = len(vals)
        if m == n:
            count += 1
            if collect is not None:
                collect.append(tuple(vals))
            return
        m += 1
        for v in range(1, n + 1):
            if used[v]:
                continue
            used[v] = True
            vals.append(v)
            pruned = False
            for pat in compiled:
                if pat[5] <= m <= pat[6] and _ends_at(vals, m, pat):
                    pruned = True
                    break
            if not pruned:
                extend()
            vals.pop()
            used[v] = False

    extend()
    return count


def _count_task(args) -> int:
    n, pattern_texts, first = args
    patterns = [parse_pattern(t) for t in pattern_texts]
    return _search(n, _compile(patterns, n), (first,), None)


# ---------------------------------------------------------------------------
# public enumeration API


def _check_patterns(patterns: Iterable[DistantPattern]) -> list[DistantPattern]:
    ps = list(patterns)
    if not ps:
        raise ValueError("need a nonempty pattern set")
    return ps


def count_avoiders(
    n: int,
    patterns: Iterable[DistantPattern],
    *,
    cap: int = DEFAULT_COUNT_CAP,
    workers: int = 1,
    cache: "CountCache | None" = None,
) -> int:
    """|{pi in S_n : pi avoids every pattern}|, by pruned backtracking."""
    ps = _check_patterns(patterns)
    if n < 0:
        raise ValueError("size must be >= 0")
    if n > cap:
        raise CapExceeded(f"count_avoiders(n={n}) exceeds the cap {cap}; raise it explicitly")
    key = pattern_set_key(ps)
    if cache is not None:
        hit = cache.get(key, n)
        if hit is not None:
            return hit
    compiled = _compile(ps, n)
    if not compiled:
        result = math.factorial(n)  # no pattern fits into n
    elif workers > 1 and n >= 7:
        texts = tuple(render_pattern(p) for p in ps)
        tasks = [(n, texts, v) for v in range(1, n + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            result = sum(pool.map(_count_task, tasks))
    else:
        result = _search(n, compiled, (), None)
    if cache is not None:
        cache.put(key, n, result)
    return result


def list_avoiders(
    n: int,
    patterns: Iterable[DistantPattern],
    *,
    cap: int = DEFAULT_LIST_CAP,
) -> list[Permutation]:
    """All avoiders of size n in lexicographic order."""
    ps = _check_patterns(patterns)
    if n < 0:
        raise ValueError("size must be >= 0")
    if n > cap:
        raise CapExceeded(f"list_avoiders(n={n}) exceeds the cap {cap}; raise it explicitly")
    out: list[tuple[int, ...]] = []
    _search(n, _compile(ps, n), (), out)
    return [Permutation(vals) for vals in out]


def count_avoiders_with_prefix(
    query: PrefixQuery,
    patterns: Iterable[DistantPattern],
    *,
    cap: int = DEFAULT_COUNT_CAP,
) -> int:
    """Avoiders of size query.n whose first positions hold query.prefix."""
    ps = _check_patterns(patterns)
    if query.n > cap:
        raise CapExceeded(f"count (n={query.n}) exceeds the cap {cap}; raise it explicitly")
    return _search(query.n, _compile(ps, query.n), query.prefix, None)


def sequence(
    patterns: Iterable[DistantPattern],
    n_max: int,
    *,
    cap: int = DEFAULT_COUNT_CAP,
    workers: int = 1,
    cache: "CountCache | None" = None,
) -> CountTable:
    """Counts for every size 0..n_max as a CountTable; cache consulted and updated."""
    ps = _check_patterns(patterns)
    rows = tuple(
        (n, count_avoiders(n, ps, cap=cap, workers=workers, cache=cache))
        for n in range(n_max + 1)
    )
    return CountTable(pattern_set_key(ps), rows)


# ---------------------------------------------------------------------------
# persistent count cache


class CountCache:
    """Append-only JSON-lines store of (pattern-set key, n) -> count rows.

    Corrupt lines are skipped with a warning.  Writes take an exclusive
    in-process lock; concurrent readers are safe.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._rows: dict[tuple[str, int], int] = {}
        self._loaded = False

    @classmethod
    def from_env(cls, default: str | Path | None = None) -> "CountCache | None":
        path = os.environ.get(CACHE_ENV_VAR) or default
        return cls(path) if path else None

    def _load(self) -> None:
        if self._loaded:
            return
        self._loaded = True
        if not self.path.exists():
            return
        for lineno, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                key = rec["patterns"]
                n = int(rec["n"])
                count = int(rec["count"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                log.warning("skipping corrupt cache line %d in %s", lineno, self.path)
                continue
            self._rows[(key, n)] = count

    def get(self, key: str, n: int) -> int | None:
        with self._lock:
            self._load()
            return self._rows.get((key, n))

    def put(self, key: str, n: int, count: int) -> None:
        with self._lock:
            self._load()
            if self._rows.get((key, n)) == count:
                return
            self._rows[(key, n)] = count
            record = {
                "patterns": key,
                "n": n,
                "count": count,
                "engine_version": ENGINE_VERSION,
            }
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")

    def rows(self) -> list[tuple[str, int, int]]:
        with self._lock:
            self._load()
            return sorted((k, n, c) for (k, n), c in self._rows.items())

    def clear(self) -> None:
        with self._lock:
            self._rows = {}
            self._loaded = True
            if self.path.exists():
                self.path.unlink()

    def verify(self, *, sample: int = 5, max_n: int = 7, seed: int = 0) -> list[tuple[str, int, int, int]]:
        """Recompute a random sample of small cached rows; return mismatches.

        Each mismatch is (key, n, cached, recomputed).
        """
        candidates = [(k, n, c) for (k, n, c) in self.rows() if n <= max_n]
        rng = random.Random(seed)
        rng.shuffle(candidates)
        mismatches = []
        for key, n, cached in candidates[:sample]:
            ps = [parse_pattern(t) for t in key.split(";")]
            fresh = count_avoiders(n, ps)
            if fresh != cached:
                mismatches.append((key, n, cached, fresh))
        return mismatches
