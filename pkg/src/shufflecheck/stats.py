"""Statistic values, the statistic registry, and the built-in statistics.

Values of different statistics live in one totally ordered domain so that
multisets of them can be sorted, compared and printed uniformly:

>>> from shufflecheck.perm_core import parse_permutation as P
>>> str(lookup("des")(P("2413"))), str(lookup("psi")(P("2413")))
('{2}', '1')
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Iterable

from .perm_core import Permutation, descent_set, inversion_set, standardize

__all__ = [
    "Kind",
    "StatValue",
    "Statistic",
    "stat_one",
    "stat_des",
    "stat_inv",
    "stat_inv12",
    "stat_adj34",
    "stat_lambda",
    "stat_psi",
    "register",
    "lookup",
    "available",
    "check_invariance",
]


class Kind(IntEnum):
    # declaration order is the cross-variant sort order
    INT = 0
    INT_SET = 1
    PAIR_SET = 2


@dataclass(frozen=True, order=True)
class StatValue:
    kind: Kind
    payload: int | tuple

    @classmethod
    def of_int(cls, x: int) -> StatValue:
        return cls(Kind.INT, int(x))

    @classmethod
    def of_set(cls, xs: Iterable[int]) -> StatValue:
        return cls(Kind.INT_SET, tuple(sorted(set(xs))))

    @classmethod
    def of_pairs(cls, pairs: Iterable[tuple[int, int]]) -> StatValue:
        return cls(Kind.PAIR_SET, tuple(sorted({(int(a), int(b)) for a, b in pairs})))

    def __str__(self) -> str:
        if self.kind is Kind.INT:
            return str(self.payload)
        if self.kind is Kind.INT_SET:
            return "{" + ",".join(map(str, self.payload)) + "}"
        return "{" + ",".join(f"({a},{b})" for a, b in self.payload) + "}"

    def __repr__(self) -> str:
        return f"StatValue({self})"


@dataclass(frozen=True)
class Statistic:
    """A named map from permutations to ``StatValue``.

    ``sizes`` restricts the domain (``None`` means every size).  Evaluating
    outside the domain raises ``ValueError``.
    """

    name: str
    kind: Kind
    func: Callable[[Permutation], StatValue] = field(compare=False)
    sizes: frozenset[int] | None = None
    description: str = ""

    def __call__(self, p: Permutation) -> StatValue:
        return self.func(p)

    def defined_on(self, n: int) -> bool:
        return self.sizes is None or n in self.sizes


ONE = StatValue.of_int(1)
MINUS_ONE = StatValue.of_int(-1)


def _sign(flag: bool) -> StatValue:
    return ONE if flag else MINUS_ONE


def _require_size4(p: Permutation, name: str) -> tuple[int, int, int, int]:
    if len(p) != 4:
        raise ValueError(f"{name} is only defined on permutations of size 4, got {p} (size {len(p)})")
    return tuple(sorted(p.entries))


def stat_one(p: Permutation) -> StatValue:
    return ONE


def stat_des(p: Permutation) -> StatValue:
    return StatValue.of_set(descent_set(p))


def stat_inv(p: Permutation) -> StatValue:
    return StatValue.of_pairs(inversion_set(p))


def stat_inv12(p: Permutation) -> StatValue:
    """+1 when the smallest entry lies left of the second smallest."""
    a1, a2, _, _ = _require_size4(p, "inv12")
    return _sign(p.entries.index(a1) < p.entries.index(a2))


def stat_adj34(p: Permutation) -> StatValue:
    """+1 when the two largest entries sit in adjacent positions."""
    _, _, a3, a4 = _require_size4(p, "adj34")
    return _sign(abs(p.entries.index(a3) - p.entries.index(a4)) == 1)


def stat_lambda(p: Permutation) -> StatValue:
    return StatValue.of_int(stat_inv12(p).payload * stat_adj34(p).payload)


def stat_psi(p: Permutation) -> StatValue:
    """Lambda on size 4, constantly 1 on every other size."""
    if len(p) == 4:
        return stat_lambda(p)
    return ONE


_FOUR = frozenset({4})

_REGISTRY: dict[str, Statistic] = {}


def check_invariance(st: Statistic, samples: int = 200, max_size: int = 6,
                     seed: int = 0) -> None:
    """Raise ``ValueError`` unless ``st`` is constant on equivalence classes.

    Draws random standardized permutations and random order-preserving
    relabelings of them; ``samples`` relabelings are tried for each size.
    """
    rng = random.Random(seed)
    for n in range(max_size + 1):
        if not st.defined_on(n):
            continue
        for _ in range(samples):
            base = list(range(1, n + 1))
            rng.shuffle(base)
            p = Permutation(base)
            labels = sorted(rng.sample(range(-1000, 1000), n))
            q = Permutation(labels[x - 1] for x in p.entries)
            assert standardize(q) == p
            if st(q) != st(p):
                raise ValueError(
                    f"{st.name} is not a permutation statistic: "
                    f"{st.name}({q}) = {st(q)} but {st.name}({p}) = {st(p)}"
                )


def register(st: Statistic, *, verify: bool = True, replace: bool = False) -> Statistic:
    """Add a statistic to the registry, after a sampled invariance check."""
    if st.name in _REGISTRY and not replace:
        raise ValueError(f"statistic {st.name!r} is already registered")
    if verify:
        check_invariance(st, samples=50)
    _REGISTRY[st.name] = st
    return st


def lookup(name: str) -> Statistic:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown statistic {name!r}; available: {', '.join(available())}"
        ) from None


def available() -> list[str]:
    return list(_REGISTRY)


for _st in (
    Statistic("one", Kind.INT, stat_one, description="constant 1"),
    Statistic("des", Kind.INT_SET, stat_des, description="descent set"),
    Statistic("inv", Kind.PAIR_SET, stat_inv, description="inversion set"),
    Statistic("inv12", Kind.INT, stat_inv12, _FOUR, "order of the two smallest entries"),
    Statistic("adj34", Kind.INT, stat_adj34, _FOUR, "adjacency of the two largest entries"),
    Statistic("lambda", Kind.INT, stat_lambda, _FOUR, "inv12 * adj34"),
    Statistic("psi", Kind.INT, stat_psi, description="lambda on size 4, 1 elsewhere"),
):
    register(_st, verify=False)
del _st
