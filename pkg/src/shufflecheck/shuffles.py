"""Shuffle sets of disjoint permutations and canonical value multisets."""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import TYPE_CHECKING, Iterable, Iterator

from .perm_core import Permutation, disjoint

if TYPE_CHECKING:
    from .stats import Statistic, StatValue

__all__ = [
    "EAGER_LIMIT",
    "ShuffleSet",
    "ValueMultiset",
    "shuffle",
    "left_shuffle",
    "iter_shuffles",
    "shuffle_count",
    "value_multiset",
    "shuffle_positions",
]

# total size up to which ShuffleSet.elements may be materialized
EAGER_LIMIT = 12

_INT64_MAX = 2**63 - 1


def shuffle_count(m: int, n: int) -> int:
    if m < 0 or n < 0:
        raise ValueError(f"sizes must be non-negative, got ({m}, {n})")
    count = comb(m + n, m)
    if count > _INT64_MAX:
        raise OverflowError(f"binomial({m + n}, {m}) exceeds the 64-bit integer range")
    return count


def shuffle_positions(m: int, n: int, left: bool = False) -> list[tuple[int, ...]]:
    """0-based position sets for the first word, in lexicographic order.

    With ``left=True`` only the sets containing position 0 are kept, i.e. the
    shuffles that start with the first word's first letter.
    """
    positions = list(combinations(range(m + n), m))
    if left:
        positions = [p for p in positions if p and p[0] == 0]
    return positions


def iter_shuffles(sigma: Permutation, phi: Permutation, left: bool = False) -> Iterator[Permutation]:
    """Stream the shuffles of ``sigma`` and ``phi`` in deterministic order."""
    if not disjoint(sigma, phi):
        raise ValueError(f"cannot shuffle {sigma} and {phi}: they share entries")
    if left and len(sigma) == 0:
        raise ValueError("left shuffle needs a nonempty first permutation")
    m, n = len(sigma), len(phi)
    s, f = sigma.entries, phi.entries
    for pos in combinations(range(m + n), m):
        if left and pos[0] != 0:
            # combinations are lexicographic, so nothing later starts at 0
            return
        word = [0] * (m + n)
        chosen = set(pos)
        i = j = 0
        for k in range(m + n):
            if k in chosen:
                word[k] = s[i]
                i += 1
            else:
                word[k] = f[j]
                j += 1
        yield Permutation(word)


class ShuffleSet:
    """All shuffles of two disjoint permutations.

    Iteration streams the elements; ``elements`` materializes them, which is
    only allowed up to ``EAGER_LIMIT`` total size.
    """

    def __init__(self, sigma: Permutation, phi: Permutation, left: bool = False,
                 eager_limit: int = EAGER_LIMIT):
        if not disjoint(sigma, phi):
            raise ValueError(f"cannot shuffle {sigma} and {phi}: they share entries")
        if left and len(sigma) == 0:
            raise ValueError("left shuffle needs a nonempty first permutation")
        self.sigma = sigma
        self.phi = phi
        self.left = left
        self.eager_limit = eager_limit
        self._elements: tuple[Permutation, ...] | None = None

    def __iter__(self) -> Iterator[Permutation]:
        if self._elements is not None:
            return iter(self._elements)
        return iter_shuffles(self.sigma, self.phi, self.left)

    def __len__(self) -> int:
        m, n = len(self.sigma), len(self.phi)
        if self.left:
            return shuffle_count(m - 1, n)
        return shuffle_count(m, n)

    @property
    def elements(self) -> tuple[Permutation, ...]:
        if self._elements is None:
            total = len(self.sigma) + len(self.phi)
            if total > self.eager_limit:
                raise MemoryError(
                    f"refusing to materialize a shuffle set of total size {total} "
                    f"(limit {self.eager_limit}); iterate over it instead"
                )
            self._elements = tuple(iter_shuffles(self.sigma, self.phi, self.left))
        return self._elements

    def __contains__(self, p) -> bool:
        return p in set(self.elements)

    def as_set(self) -> frozenset[Permutation]:
        return frozenset(self.elements)

    def to_strings(self) -> list[str]:
        """Sorted textual form, the serialized shape of a shuffle set."""
        return [str(p) for p in sorted(self.elements)]

    def __repr__(self) -> str:
        op = "left_shuffle" if self.left else "shuffle"
        return f"{op}({self.sigma}, {self.phi})"


def shuffle(sigma: Permutation, phi: Permutation) -> ShuffleSet:
    return ShuffleSet(sigma, phi)


def left_shuffle(sigma: Permutation, phi: Permutation) -> ShuffleSet:
    """Shuffles whose first entry is the first entry of ``sigma``."""
    return ShuffleSet(sigma, phi, left=True)


class ValueMultiset:
    """Frozen multiset of statistic values, stored as a sorted tuple."""

    __slots__ = ("items",)

    def __init__(self, values: Iterable[StatValue]):
        self.items = tuple(sorted(values))

    def __eq__(self, other) -> bool:
        if isinstance(other, ValueMultiset):
            return self.items == other.items
        return NotImplemented

    def __lt__(self, other: ValueMultiset) -> bool:
        return self.items < other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __str__(self) -> str:
        return "{{" + ",".join(str(v) for v in self.items) + "}}"

    def __repr__(self) -> str:
        return f"ValueMultiset({str(self)})"


def value_multiset(s: Iterable[Permutation], st: Statistic) -> ValueMultiset:
    return ValueMultiset(st(p) for p in s)
