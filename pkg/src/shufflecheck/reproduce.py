"""Recompute the published Psi computations and compare them with the record.

``TABLE1`` holds, for each of the twelve pairs examined in the Psi table,
the shuffles with Psi = +1 and those with Psi = -1, exactly as published.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping

from .checker import (
    CompatReport,
    check_descent_statistic,
    check_left_shuffle_compatible,
    check_shuffle_compatible,
)
from .perm_core import descent_set, parse_permutation
from .shuffles import left_shuffle, shuffle, value_multiset
from .stats import StatValue, Statistic, lookup

__all__ = [
    "TABLE1",
    "table1_digest",
    "verify_table1",
    "verify_prop1_identities",
    "ItemResult",
    "reproduce_paper",
]

# (sigma, phi) -> (shuffles with Psi = +1, shuffles with Psi = -1)
TABLE1: dict[tuple[str, str], tuple[tuple[str, ...], tuple[str, ...]]] = {
    ("134", "2"): (("1234", "1342"), ("1324", "2134")),
    ("314", "2"): (("2314", "3214"), ("3124", "3142")),
    ("341", "2"): (("3412", "3241"), ("3421", "2341")),
    ("234", "1"): (("1234", "2314"), ("2341", "2134")),
    ("324", "1"): (("3241", "3214"), ("3124", "1324")),
    ("342", "1"): (("3412", "1342"), ("3421", "3142")),
    ("12", "34"): (("1234", "1342", "3412"), ("1324", "3124", "3142")),
    ("13", "24"): (("1234", "1243", "2413"), ("2134", "2143", "1324")),
    ("13", "42"): (("4213", "1432", "1342"), ("4132", "4123", "1423")),
    ("21", "34"): (("2314", "3241", "3214"), ("2134", "2341", "3421")),
    ("23", "14"): (("2314", "1243", "1234"), ("1423", "2134", "2143")),
    ("23", "41"): (("4213", "2413", "4231"), ("4123", "2341", "2431")),
}


def table1_digest(table: Mapping = TABLE1) -> str:
    """SHA-256 of a canonical rendering of a Table-1-shaped mapping."""
    lines = []
    for (a, b), (plus, minus) in sorted(table.items()):
        lines.append(f"{a}|{b}:+{','.join(sorted(plus))}:-{','.join(sorted(minus))}")
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def verify_table1(table: Mapping = TABLE1, st: Statistic | None = None) -> tuple[bool, list[str]]:
    """Recompute every row and return ``(all rows match, discrepancies)``."""
    st = st or lookup("psi")
    problems = []
    for (a, b), (plus, minus) in table.items():
        sh = shuffle(parse_permutation(a), parse_permutation(b)).elements
        got_plus = {str(g) for g in sh if st(g) == StatValue.of_int(1)}
        got_minus = {str(g) for g in sh if st(g) == StatValue.of_int(-1)}
        if got_plus != set(plus):
            problems.append(f"shuffle({a},{b}) Psi=+1: expected {sorted(plus)}, computed {sorted(got_plus)}")
        if got_minus != set(minus):
            problems.append(f"shuffle({a},{b}) Psi=-1: expected {sorted(minus)}, computed {sorted(got_minus)}")
    return not problems, problems


_PROP1_SHUFFLES = {
    ("12", "3"): {"123", "132", "312"},
    ("13", "2"): {"132", "123", "213"},
    ("23", "1"): {"231", "213", "123"},
}


def verify_prop1_identities(stats: tuple[str, ...] = ("one", "des", "psi")) -> tuple[bool, list[str]]:
    """The two size-3 multiset identities behind the small-size descent argument.

    For each listed statistic: the multisets over ``12⧢3`` and ``23⧢1`` both
    equal the multiset over ``13⧢2``.  The shuffle sets themselves are also
    compared with the sets written out by hand.
    """
    P = parse_permutation
    problems = []
    for (a, b), expected in _PROP1_SHUFFLES.items():
        got = set(shuffle(P(a), P(b)).to_strings())
        if got != expected:
            problems.append(f"shuffle({a},{b}): expected {sorted(expected)}, computed {sorted(got)}")
    for name in stats:
        st = lookup(name)
        ref = value_multiset(shuffle(P("13"), P("2")), st)
        for a, b in (("12", "3"), ("23", "1")):
            ms = value_multiset(shuffle(P(a), P(b)), st)
            if ms != ref:
                problems.append(f"{name}: shuffle({a},{b}) gives {ms}, shuffle(13,2) gives {ref}")
    return not problems, problems


@dataclass
class ItemResult:
    name: str
    claim: str
    passed: bool
    details: list[str] = field(default_factory=list)
    report: CompatReport | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "claim": self.claim,
               "status": "pass" if self.passed else "fail", "details": list(self.details)}
        if self.report is not None:
            out["report"] = self.report.to_dict()
        return out


def _item_table1(table: Mapping) -> ItemResult:
    ok, problems = verify_table1(table)
    details = problems or [f"{len(table)} rows, {sum(len(p) + len(m) for p, m in table.values())} "
                           f"shuffles classified, digest {table1_digest(table)[:16]}"]
    return ItemResult("table1", "Psi values of the shuffles listed in the table", ok, details)


def _item_prop1() -> ItemResult:
    ok, problems = verify_prop1_identities()
    return ItemResult("prop1-identities",
                      "shuffle(12,3) and shuffle(23,1) give the same multisets as shuffle(13,2)",
                      ok, problems or ["both identities hold"])


def _item_descent() -> ItemResult:
    psi = lookup("psi")
    report = check_descent_statistic(psi, 4)
    P = parse_permutation
    s, f = P("2413"), P("1423")
    w = report.witness
    ok = (not report.compatible
          and w.descents == StatValue.of_set({2})
          and {w.first_value, w.second_value} == {StatValue.of_int(1), StatValue.of_int(-1)}
          and s in w.members and f in w.members
          and descent_set(s) == descent_set(f) == frozenset({2})
          and psi(s) == StatValue.of_int(1) and psi(f) == StatValue.of_int(-1))
    details = [f"Des(2413) = Des(1423) = {{2}}, psi(2413) = {psi(s)}, psi(1423) = {psi(f)}"]
    return ItemResult("psi-not-descent", "psi is not a descent statistic", ok, details, report)


def _item_psi_shuffle(jobs: int) -> ItemResult:
    report = check_shuffle_compatible(lookup("psi"), 8, jobs=jobs)
    problems = []
    for (m, n), expected in (((3, 1), "{{-1,-1,1,1}}"), ((1, 3), "{{-1,-1,1,1}}"),
                             ((2, 2), "{{-1,-1,-1,1,1,1}}")):
        for g in report.groups_for(m, n):
            if str(g.multiset) != expected:
                problems.append(f"group {g.key}: {g.multiset}, expected {expected}")
    ok = report.compatible and not problems
    return ItemResult("psi-shuffle-compatible", "psi is shuffle compatible (total size <= 8)",
                      ok, problems or ["case multisets at (3,1), (1,3), (2,2) as claimed"], report)


def _item_psi_left() -> ItemResult:
    psi = lookup("psi")
    report = check_left_shuffle_compatible(psi, 4)
    P = parse_permutation
    a = value_multiset(left_shuffle(P("12"), P("34")), psi)
    b = value_multiset(left_shuffle(P("34"), P("12")), psi)
    one = StatValue.of_int(1)
    same_key = psi(P("12")) == psi(P("34")) == one
    ok = (not report.compatible and same_key
          and str(a) == "{{-1,1,1}}" and str(b) == "{{-1,-1,1}}")
    return ItemResult("psi-not-left-shuffle", "psi is not left shuffle compatible", ok,
                      [f"left_shuffle(12,34): {a}", f"left_shuffle(34,12): {b}"], report)


def _item_des_shuffle(jobs: int) -> ItemResult:
    report = check_shuffle_compatible(lookup("des"), 6, jobs=jobs)
    return ItemResult("des-shuffle-compatible", "des is shuffle compatible (total size <= 6)",
                      report.compatible, [], report)


def _item_inv_witness(jobs: int) -> ItemResult:
    report = check_shuffle_compatible(lookup("inv"), 6, jobs=jobs)
    w = report.witness
    return ItemResult("inv-not-shuffle-compatible", "inv is not shuffle compatible",
                      w is not None, [] if w is None else
                      [f"shuffle({w.first.sigma},{w.first.phi}) vs shuffle({w.second.sigma},{w.second.phi})"], report)


def reproduce_paper(table: Mapping = TABLE1, jobs: int = 1) -> list[ItemResult]:
    return [
        _item_table1(table),
        _item_prop1(),
        _item_descent(),
        _item_psi_shuffle(jobs),
        _item_psi_left(),
        _item_des_shuffle(jobs),
        _item_inv_witness(jobs),
    ]
