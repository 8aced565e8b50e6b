"""Permutations as finite sequences of distinct integers.

A permutation here is a word, not a group element: ``2894`` is a valid
permutation of size 4 and it is equivalent to ``1342`` because both have the
same relative order.  All positions exposed by this module are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _itertools_permutations
from math import factorial
from typing import Iterable, Iterator

__all__ = [
    "Permutation",
    "parse_permutation",
    "standardize",
    "equivalent",
    "descent_set",
    "inversion_set",
    "disjoint",
    "all_permutations",
    "unrank",
]

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True, order=True)
class Permutation:
    """Immutable sequence of pairwise distinct integers."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int] = ()):
        entries = tuple(entries)
        for x in entries:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"permutation entries must be integers, got {x!r}")
            if not _INT64_MIN <= x <= _INT64_MAX:
                raise ValueError(f"entry {x} is outside the 64-bit integer range")
        if len(set(entries)) != len(entries):
            raise ValueError(f"permutation entries must be distinct: {entries}")
        object.__setattr__(self, "entries", entries)

    def size(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        if all(1 <= x <= 9 for x in self.entries):
            return "".join(map(str, self.entries))
        return ",".join(map(str, self.entries))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


def parse_permutation(text: str) -> Permutation:
    """Parse ``"2413"`` (compact digits) or ``"12,9,40"`` (comma separated).

    The empty string is the empty permutation.
    """
    text = text.strip()
    if not text:
        return Permutation(())
    if "," in text:
        parts = [t.strip() for t in text.split(",")]
        try:
            return Permutation(int(t) for t in parts)
        except ValueError as exc:
            raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None
    if not text.isdigit():
        raise ValueError(f"cannot parse permutation {text!r}: expected digits 1-9 or a comma-separated list")
    if "0" in text:
        raise ValueError(f"cannot parse permutation {text!r}: compact form uses digits 1-9 only")
    return Permutation(int(c) for c in text)


def standardize(p: Permutation) -> Permutation:
    """Replace every entry by its rank among the entries (``2894 -> 1342``)."""
    rank = {x: i for i, x in enumerate(sorted(p.entries), start=1)}
    return Permutation(rank[x] for x in p.entries)


def equivalent(p: Permutation, q: Permutation) -> bool:
    return len(p) == len(q) and standardize(p) == standardize(q)


def descent_set(p: Permutation) -> frozenset[int]:
    e = p.entries
    return frozenset(i + 1 for i in range(len(e) - 1) if e[i] > e[i + 1])


def inversion_set(p: Permutation) -> frozenset[tuple[int, int]]:
    e = p.entries
    n = len(e)
    return frozenset(
        (i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if e[i] > e[j]
    )


def disjoint(p: Permutation, q: Permutation) -> bool:
    return set(p.entries).isdisjoint(q.entries)


def all_permutations(n: int) -> Iterator[Permutation]:
    """Standardized permutations of size ``n`` in lexicographic order."""
    for t in _itertools_permutations(range(1, n + 1)):
        yield Permutation(t)


def unrank(values: Iterable[int], index: int) -> tuple[int, ...]:
    """The ``index``-th arrangement of ``values`` in lexicographic order.

    Agrees with the order of ``itertools.permutations(sorted(values))``.
    """
    pool = sorted(values)
    if not 0 <= index < factorial(len(pool)):
        raise IndexError(f"arrangement index {index} out of range for {len(pool)} values")
    out = []
    for k in range(len(pool), 0, -1):
        block = factorial(k - 1)
        q, index = divmod(index, block)
        out.append(pool.pop(q))
    return tuple(out)
