"""Bounded exhaustive checks of shuffle compatibility and related properties.

Because a statistic only sees relative order, the multiset of its values on
the shuffles of ``(sigma, phi)`` is unchanged when both words are relabeled
by one order-preserving map onto ``{1..m+n}``: every shuffle gets relabeled
to an equivalent permutation.  The checker therefore only enumerates pairs
whose entries partition ``{1..m+n}``.

Pairs of a size pair ``(m, n)`` are enumerated in a fixed order: the value
subset of ``sigma`` lexicographically, then the arrangement of ``sigma``, then
the arrangement of ``phi``, both lexicographic.  Size pairs go by total size,
then by ``m``.  The witness of a violation is always the first offending pair
in that order, whatever the number of worker processes.
"""

from __future__ import annotations

import logging
import os
import pickle
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial
from typing import Optional, Union

import numpy as np

from .perm_core import Permutation, all_permutations, descent_set, unrank
from .shuffles import ShuffleSet, ValueMultiset, shuffle_positions, value_multiset
from .stats import StatValue, Statistic

__all__ = [
    "SHUFFLE",
    "LEFT",
    "DESCENT",
    "MODES",
    "COMPATIBLE",
    "VIOLATED",
    "DEFAULT_HARD_CAP",
    "hard_cap",
    "GroupKey",
    "DescentKey",
    "PairRecord",
    "ShuffleWitness",
    "DescentWitness",
    "GroupSummary",
    "CompatReport",
    "check_shuffle_compatible",
    "check_left_shuffle_compatible",
    "check_descent_statistic",
    "find_witness",
    "run_check",
    "flatten",
]

log = logging.getLogger(__name__)

SHUFFLE = "shuffle"
LEFT = "left-shuffle"
DESCENT = "descent"
MODES = (SHUFFLE, LEFT, DESCENT)

COMPATIBLE = "compatible-up-to-bound"
VIOLATED = "violated"

DEFAULT_HARD_CAP = 10
HARD_CAP_ENV = "SHUFFLECHECK_HARD_CAP"


def hard_cap() -> int:
    """The largest allowed total size, from ``SHUFFLECHECK_HARD_CAP`` if set."""
    raw = os.environ.get(HARD_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_HARD_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{HARD_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError(f"{HARD_CAP_ENV} must be non-negative, got {cap}")
    return cap


def _check_bound(bound: int) -> None:
    cap = hard_cap()
    if bound < 0:
        raise ValueError(f"size bound must be non-negative, got {bound}")
    if bound > cap:
        raise ValueError(
            f"size bound {bound} exceeds the hard cap {cap}: a size pair (m, n) costs "
            f"(m+n)! * binomial(m+n, m) statistic lookups, i.e. {factorial(bound):,} pairs "
            f"at total {bound}; raise {HARD_CAP_ENV} to go further"
        )


@dataclass(frozen=True, order=True)
class GroupKey:
    st_sigma: StatValue
    st_phi: StatValue
    size_sigma: int
    size_phi: int

    def __str__(self) -> str:
        return f"({self.st_sigma}, {self.st_phi}, {self.size_sigma}, {self.size_phi})"


@dataclass(frozen=True, order=True)
class DescentKey:
    size: int
    descents: StatValue

    def __str__(self) -> str:
        return f"(n={self.size}, Des={self.descents})"


@dataclass(frozen=True)
class PairRecord:
    sigma: Permutation
    phi: Permutation
    multiset: ValueMultiset

    def to_dict(self) -> dict:
        return {"sigma": str(self.sigma), "phi": str(self.phi), "multiset": str(self.multiset)}


@dataclass(frozen=True)
class ShuffleWitness:
    """Two pairs with the same group key but different value multisets."""

    key: GroupKey
    first: PairRecord
    second: PairRecord

    def to_dict(self) -> dict:
        return {"group_key": str(self.key), "first": self.first.to_dict(),
                "second": self.second.to_dict()}


@dataclass(frozen=True)
class DescentWitness:
    """Two permutations with one descent set and different statistic values."""

    size: int
    descents: StatValue
    first: Permutation
    first_value: StatValue
    second: Permutation
    second_value: StatValue
    # every standardized permutation of this size with this descent set
    members: tuple[Permutation, ...] = ()

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "descent_set": str(self.descents),
            "first": {"perm": str(self.first), "value": str(self.first_value)},
            "second": {"perm": str(self.second), "value": str(self.second_value)},
            "class": [str(p) for p in self.members],
        }


Witness = Union[ShuffleWitness, DescentWitness]


@dataclass(frozen=True)
class GroupSummary:
    key: Union[GroupKey, DescentKey]
    # the common multiset, or the first pair's multiset if the group broke
    multiset: ValueMultiset
    members: int

    def to_dict(self) -> dict:
        return {"key": str(self.key), "multiset": str(self.multiset), "members": self.members}


@dataclass
class CompatReport:
    statistic: str
    mode: str
    bound: int
    verdict: str
    witness: Optional[Witness]
    groups_examined: int
    groups: list[GroupSummary] = field(default_factory=list)
    wall_time: float = 0.0

    def __post_init__(self):
        if (self.verdict == VIOLATED) != (self.witness is not None):
            raise ValueError("a report is violated exactly when it carries a witness")

    @property
    def compatible(self) -> bool:
        return self.verdict == COMPATIBLE

    def groups_for(self, m: int, n: int) -> list[GroupSummary]:
        return [g for g in self.groups
                if isinstance(g.key, GroupKey) and (g.key.size_sigma, g.key.size_phi) == (m, n)]

    def to_dict(self, include_groups: bool = False, include_timing: bool = False) -> dict:
        out = {
            "statistic": self.statistic,
            "mode": self.mode,
            "bound": self.bound,
            "verdict": self.verdict,
            "note": _verdict_note(self),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "groups_examined": self.groups_examined,
        }
        if include_groups:
            out["groups"] = [g.to_dict() for g in self.groups]
        if include_timing:
            out["wall_time_s"] = round(self.wall_time, 6)
        return out

    def to_text(self, include_groups: bool = False, include_timing: bool = False) -> str:
        d = self.to_dict(include_groups=include_groups, include_timing=include_timing)
        return "\n".join(f"{k}: {v}" for k, v in flatten(d))


def flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    """Dotted ``(path, text)`` leaves of a nested dict/list, in order.

    This is the text rendering of every report, so text and JSON output carry
    the same fields.
    """
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list):
        if not obj:
            return [(prefix, "[]")]
        out = []
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}.{i}")
        return out
    if obj is None:
        return [(prefix, "none")]
    return [(prefix, str(obj))]


def _verdict_note(report: CompatReport) -> str:
    what = {SHUFFLE: "shuffle compatible", LEFT: "left shuffle compatible",
            DESCENT: "a descent statistic"}[report.mode]
    limit = "size" if report.mode == DESCENT else "total size"
    if report.compatible:
        return (f"no violation among all cases of {limit} <= {report.bound}; "
                f"this does not prove {report.statistic} is {what}")
    return f"{report.statistic} is not {what}"


# --- vectorized scan of one size pair -------------------------------------

class _CodeTable:
    """Statistic values on all standardized permutations of one size.

    ``codes[r]`` is the index, in the sorted list ``values``, of the value on
    the permutation of lexicographic rank ``r``; sorting codes therefore sorts
    values.
    """

    def __init__(self, st: Statistic, n: int):
        raw = [st(p) for p in all_permutations(n)]
        self.values = sorted(set(raw))
        index = {v: i for i, v in enumerate(self.values)}
        self.codes = np.fromiter((index[v] for v in raw), dtype=np.int64, count=len(raw))


def _lex_ranks(words: np.ndarray) -> np.ndarray:
    """Lexicographic ranks of the rows of ``words`` (permutations of 1..N).

    Lehmer digits come from a bitmask of the values already used: the digit
    of value v is v minus the number of smaller values seen so far.
    """
    rows, n = words.shape
    popcount = np.array([bin(i).count("1") for i in range(1 << n)], dtype=np.int64)
    values = words.astype(np.int64) - 1
    used = np.zeros(rows, dtype=np.int64)
    rank = np.zeros(rows, dtype=np.int64)
    for i in range(n - 1):
        v = values[:, i]
        rank += (v - popcount[used & ((1 << v) - 1)]) * factorial(n - 1 - i)
        used |= 1 << v
    return rank


def _arrangements(k: int) -> np.ndarray:
    """All permutations of ``range(k)`` in lexicographic order, one per row."""
    return np.array(list(permutations(range(k))), dtype=np.int64).reshape(factorial(k), k)


@dataclass
class _PairScan:
    m: int
    n: int
    groups: list[GroupSummary]
    # (representative index, offending index) of the first violation
    violation: Optional[tuple[int, int]]


def _scan_size_pair(st: Statistic, m: int, n: int, left: bool,
                    tables: Optional[dict] = None) -> _PairScan:
    if tables is None:
        tables = {}

    def table(k: int) -> _CodeTable:
        if k not in tables:
            tables[k] = _CodeTable(st, k)
        return tables[k]

    total = m + n
    t_all, t_sigma, t_phi = table(total), table(m), table(n)
    positions = shuffle_positions(m, n, left)
    # place[c, k] says which letter of sigma+phi lands in position k of shuffle c
    place = np.empty((len(positions), total), dtype=np.int64)
    for c, pos in enumerate(positions):
        rest = [k for k in range(total) if k not in set(pos)]
        place[c, list(pos)] = np.arange(m)
        place[c, rest] = m + np.arange(n)

    arr_m, arr_n = _arrangements(m), _arrangements(n)
    fm, fn = factorial(m), factorial(n)
    sigma_pattern = np.repeat(np.arange(fm), fn)
    phi_pattern = np.tile(np.arange(fn), fm)
    n_phi_values = len(t_phi.values)
    keys = t_sigma.codes[sigma_pattern] * n_phi_values + t_phi.codes[phi_pattern]

    reps: dict[int, tuple[int, np.ndarray]] = {}
    counts: dict[int, int] = {}
    violation = None
    universe = np.arange(1, total + 1)
    per_subset = fm * fn
    for s, subset in enumerate(combinations(range(1, total + 1), m)):
        mask = np.ones(total, dtype=bool)
        mask[np.array(subset, dtype=np.int64) - 1] = False
        S = np.array(subset, dtype=np.int8)
        T = universe[mask].astype(np.int8)
        words = np.concatenate([S[arr_m][sigma_pattern], T[arr_n][phi_pattern]], axis=1)
        shuffled = words[:, place]                      # (pairs, shuffles, total)
        ranks = _lex_ranks(shuffled.reshape(len(words) * len(positions), total))
        ranks = ranks.reshape(len(words), len(positions))
        multisets = np.sort(t_all.codes[ranks], axis=1)

        uniq, first, inverse, cnt = np.unique(keys, return_index=True,
                                              return_inverse=True, return_counts=True)
        base = s * per_subset
        for u, f, c in zip(uniq.tolist(), first.tolist(), cnt.tolist()):
            if u not in reps:
                reps[u] = (base + f, multisets[f].copy())
            counts[u] = counts.get(u, 0) + c
        expected = np.stack([reps[u][1] for u in uniq.tolist()])[inverse.reshape(-1)]
        bad = np.flatnonzero((multisets != expected).any(axis=1))
        if bad.size:
            row = int(bad[0])
            violation = (reps[int(keys[row])][0], base + row)
            break

    groups = []
    for u, (_, ms) in sorted(reps.items(), key=lambda kv: kv[1][0]):
        ks, kf = divmod(u, n_phi_values)
        key = GroupKey(t_sigma.values[ks], t_phi.values[kf], m, n)
        groups.append(GroupSummary(key, ValueMultiset(t_all.values[c] for c in ms.tolist()),
                                   counts[u]))
    return _PairScan(m, n, groups, violation)


def _decode_pair(m: int, n: int, index: int) -> tuple[Permutation, Permutation]:
    fm, fn = factorial(m), factorial(n)
    s, r = divmod(index, fm * fn)
    a, b = divmod(r, fn)
    total = m + n
    # the s-th m-subset in lexicographic order
    for i, subset in enumerate(combinations(range(1, total + 1), m)):
        if i == s:
            break
    rest = sorted(set(range(1, total + 1)) - set(subset))
    return Permutation(unrank(subset, a)), Permutation(unrank(rest, b))


def _shuffle_witness(st: Statistic, scan: _PairScan, left: bool) -> ShuffleWitness:
    assert scan.violation is not None
    records = []
    for index in scan.violation:
        sigma, phi = _decode_pair(scan.m, scan.n, index)
        # recomputed on the plain enumeration path, independent of the scan
        records.append(PairRecord(sigma, phi, value_multiset(ShuffleSet(sigma, phi, left=left), st)))
    a, b = records
    key_a = GroupKey(st(a.sigma), st(a.phi), scan.m, scan.n)
    key_b = GroupKey(st(b.sigma), st(b.phi), scan.m, scan.n)
    if key_a != key_b or a.multiset == b.multiset:
        raise RuntimeError(f"inconsistent witness for {st.name}: {a} vs {b}")
    return ShuffleWitness(key_a, a, b)


def _size_pairs(bound: int, left: bool) -> list[tuple[int, int]]:
    return [(m, total - m) for total in range(bound + 1)
            for m in range(1 if left else 0, total + 1)]


def _scan_task(args):
    st, m, n, left = args
    return _scan_size_pair(st, m, n, left)


def _executor(st: Statistic, jobs: int) -> Executor:
    try:
        pickle.dumps(st)
    except Exception:
        log.debug("statistic %s is not picklable, using threads", st.name)
        return ThreadPoolExecutor(max_workers=jobs)
    return ProcessPoolExecutor(max_workers=jobs)


def _check_shuffles(st: Statistic, bound: int, left: bool, jobs: int) -> CompatReport:
    _check_bound(bound)
    start = time.perf_counter()
    pairs = _size_pairs(bound, left)
    scans: list[_PairScan] = []
    if jobs <= 1 or len(pairs) <= 1:
        tables: dict = {}
        for m, n in pairs:
            scan = _scan_size_pair(st, m, n, left, tables)
            scans.append(scan)
            if scan.violation is not None:
                break
    else:
        with _executor(st, jobs) as pool:
            for scan in pool.map(_scan_task, [(st, m, n, left) for m, n in pairs]):
                scans.append(scan)
        # keep exactly what the sequential scan would have kept
        for i, scan in enumerate(scans):
            if scan.violation is not None:
                del scans[i + 1:]
                break

    groups = [g for scan in scans for g in scan.groups]
    witness = None
    if scans and scans[-1].violation is not None:
        witness = _shuffle_witness(st, scans[-1], left)
    return CompatReport(
        statistic=st.name,
        mode=LEFT if left else SHUFFLE,
        bound=bound,
        verdict=VIOLATED if witness else COMPATIBLE,
        witness=witness,
        groups_examined=len(groups),
        groups=groups,
        wall_time=time.perf_counter() - start,
    )


def check_shuffle_compatible(st: Statistic, max_total_size: int, jobs: int = 1) -> CompatReport:
    """Check that the value multiset over ``sigma ⧢ phi`` only depends on the
    statistic values and sizes of ``sigma`` and ``phi``, for all pairs of
    total size up to ``max_total_size``."""
    return _check_shuffles(st, max_total_size, left=False, jobs=jobs)


def check_left_shuffle_compatible(st: Statistic, max_total_size: int, jobs: int = 1) -> CompatReport:
    """Same as ``check_shuffle_compatible`` but only over shuffles that begin
    with the first letter of ``sigma``; pairs with empty ``sigma`` are skipped."""
    return _check_shuffles(st, max_total_size, left=True, jobs=jobs)


def check_descent_statistic(st: Statistic, max_size: int) -> CompatReport:
    if max_size < 1:
        raise ValueError(f"max_size must be at least 1, got {max_size}")
    start = time.perf_counter()
    groups: list[GroupSummary] = []
    witness = None
    for n in range(1, max_size + 1):
        classes: dict[frozenset, list[tuple[Permutation, StatValue]]] = {}
        for p in all_permutations(n):
            d = descent_set(p)
            v = st(p)
            members = classes.setdefault(d, [])
            if members and members[0][1] != v and witness is None:
                (q, w) = members[0]
                same_class = tuple(r for r in all_permutations(n) if descent_set(r) == d)
                witness = DescentWitness(n, StatValue.of_set(d), q, w, p, v, same_class)
            members.append((p, v))
            if witness is not None:
                break
        for d, members in classes.items():
            groups.append(GroupSummary(DescentKey(n, StatValue.of_set(d)),
                                       ValueMultiset(v for _, v in members), len(members)))
        if witness is not None:
            break
    return CompatReport(
        statistic=st.name,
        mode=DESCENT,
        bound=max_size,
        verdict=VIOLATED if witness else COMPATIBLE,
        witness=witness,
        groups_examined=len(groups),
        groups=groups,
        wall_time=time.perf_counter() - start,
    )


def run_check(st: Statistic, mode: str, bound: int, jobs: int = 1) -> CompatReport:
    if mode == SHUFFLE:
        return check_shuffle_compatible(st, bound, jobs)
    if mode == LEFT:
        return check_left_shuffle_compatible(st, bound, jobs)
    if mode == DESCENT:
        return check_descent_statistic(st, bound)
    raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")


def find_witness(st: Statistic, mode: str, bound: int, jobs: int = 1) -> Optional[Witness]:
    return run_check(st, mode, bound, jobs).witness
