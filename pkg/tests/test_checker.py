from math import comb, factorial

import pytest

from oracles import naive_descent_verdict, naive_verdict
from shufflecheck import Permutation, lookup, parse_permutation as P
from shufflecheck.checker import (
    COMPATIBLE,
    VIOLATED,
    CompatReport,
    GroupKey,
    ShuffleWitness,
    check_descent_statistic,
    check_left_shuffle_compatible,
    check_shuffle_compatible,
    find_witness,
    hard_cap,
    run_check,
)
from shufflecheck.shuffles import ShuffleSet, value_multiset
from shufflecheck.stats import Kind, StatValue, Statistic

psi, des, inv, one = (lookup(n) for n in ("psi", "des", "inv", "one"))


def test_psi_shuffle_compatible_small_bound():
    report = check_shuffle_compatible(psi, 6)
    assert report.verdict == COMPATIBLE and report.witness is None


def test_des_and_one_compatible():
    assert check_shuffle_compatible(des, 6).compatible
    assert check_shuffle_compatible(one, 6).compatible
    assert check_left_shuffle_compatible(one, 2).compatible


def test_inv_witness_frozen():
    # first violation in enumeration order, recorded from the checker and
    # confirmed by the brute-force test below
    w = find_witness(inv, "shuffle", 6)
    assert isinstance(w, ShuffleWitness)
    assert (str(w.first.sigma), str(w.first.phi)) == ("1", "23")
    assert (str(w.second.sigma), str(w.second.phi)) == ("2", "13")
    assert str(w.key) == "({}, {}, 1, 2)"
    assert str(w.first.multiset) == "{{{},{(1,2)},{(1,3),(2,3)}}}"
    assert str(w.second.multiset) == "{{{},{(1,2)},{(2,3)}}}"


def test_inv_witness_by_hand():
    # 1⧢23 contains 231, 2⧢13 contains 132 instead
    a = value_multiset(ShuffleSet(P("1"), P("23")), inv)
    b = value_multiset(ShuffleSet(P("2"), P("13")), inv)
    assert inv(P("1")) == inv(P("2")) and inv(P("23")) == inv(P("13"))
    assert a != b


def test_des_left_shuffle_witness_frozen():
    # the left-shuffle condition as stated has no ordering requirement on the
    # first letters, and then des already fails at 1⧢2 vs 2⧢1
    w = find_witness(des, "left-shuffle", 4)
    assert (str(w.first.sigma), str(w.first.phi)) == ("1", "2")
    assert (str(w.second.sigma), str(w.second.phi)) == ("2", "1")


def test_psi_left_witness_frozen():
    report = check_left_shuffle_compatible(psi, 4)
    w = report.witness
    assert report.verdict == VIOLATED
    assert str(w.key) == "(1, 1, 1, 3)"
    assert (str(w.first.phi), str(w.first.multiset)) == ("234", "{{1}}")
    assert (str(w.second.phi), str(w.second.multiset)) == ("324", "{{-1}}")


def test_descent_check_psi():
    report = check_descent_statistic(psi, 4)
    w = report.witness
    assert report.verdict == VIOLATED
    assert w.descents == StatValue.of_set({2})
    assert {str(w.first), str(w.second)} == {"1324", "2314"}
    assert {w.first_value, w.second_value} == {StatValue.of_int(1), StatValue.of_int(-1)}
    assert [str(p) for p in w.members] == ["1324", "1423", "2314", "2413", "3412"]
    assert check_descent_statistic(psi, 3).compatible
    assert check_descent_statistic(des, 6).compatible
    assert find_witness(des, "descent", 5) is None


def test_descent_check_rejects_zero():
    with pytest.raises(ValueError):
        check_descent_statistic(psi, 0)


@pytest.mark.parametrize("bound", range(6))
@pytest.mark.parametrize("name", ["des", "inv", "psi", "one"])
def test_grouped_checker_agrees_with_naive(name, bound):
    st = lookup(name)
    assert check_shuffle_compatible(st, bound).compatible == naive_verdict(st, bound)


@pytest.mark.parametrize("bound", range(5))
@pytest.mark.parametrize("name", ["des", "psi", "one"])
def test_left_checker_agrees_with_naive(name, bound):
    st = lookup(name)
    assert check_left_shuffle_compatible(st, bound).compatible == naive_verdict(st, bound, left=True)


@pytest.mark.parametrize("name", ["des", "inv", "psi"])
def test_descent_checker_agrees_with_naive(name):
    st = lookup(name)
    for n in range(1, 6):
        assert check_descent_statistic(st, n).compatible == naive_descent_verdict(st, n)


@pytest.mark.parametrize("name, mode", [("inv", "shuffle"), ("psi", "left-shuffle"),
                                        ("des", "left-shuffle")])
def test_witness_soundness(name, mode):
    st = lookup(name)
    w = find_witness(st, mode, 5)
    left = mode == "left-shuffle"
    ms = [value_multiset(ShuffleSet(r.sigma, r.phi, left=left), st) for r in (w.first, w.second)]
    keys = [(st(r.sigma), st(r.phi), len(r.sigma), len(r.phi)) for r in (w.first, w.second)]
    assert keys[0] == keys[1]
    assert ms[0] != ms[1]
    assert (ms[0], ms[1]) == (w.first.multiset, w.second.multiset)


@pytest.mark.parametrize("name, mode", [("inv", "shuffle"), ("psi", "left-shuffle"),
                                        ("psi", "descent")])
def test_monotone_in_bound(name, mode):
    st = lookup(name)
    first = run_check(st, mode, 4).witness
    for bound in (5, 6):
        assert run_check(st, mode, bound).witness == first


def test_theorem_case_multisets():
    report = check_shuffle_compatible(psi, 6)
    for (m, n), expected in [((3, 1), "{{-1,-1,1,1}}"), ((1, 3), "{{-1,-1,1,1}}"),
                             ((2, 2), "{{-1,-1,-1,1,1,1}}")]:
        groups = report.groups_for(m, n)
        assert groups and all(str(g.multiset) == expected for g in groups)
    for total in (0, 1, 2, 3, 5, 6):
        for m in range(total + 1):
            for g in report.groups_for(m, total - m):
                assert str(g.multiset) == "{{" + ",".join(["1"] * comb(total, m)) + "}}"


def test_group_member_counts_cover_all_pairs():
    report = check_shuffle_compatible(des, 5)
    for total in range(6):
        for m in range(total + 1):
            assert sum(g.members for g in report.groups_for(m, total - m)) == factorial(total)


def test_parallel_matches_sequential():
    for name, mode, bound in [("psi", "shuffle", 6), ("inv", "shuffle", 5),
                              ("des", "left-shuffle", 4), ("des", "shuffle", 5)]:
        st = lookup(name)
        a = run_check(st, mode, bound, jobs=1)
        b = run_check(st, mode, bound, jobs=3)
        assert a.to_dict(include_groups=True) == b.to_dict(include_groups=True)


def test_unpicklable_statistic_uses_threads():
    st = Statistic("local-des", Kind.INT_SET, lambda p: des(p))
    a = check_shuffle_compatible(st, 4, jobs=2)
    assert a.compatible and a.groups_examined == check_shuffle_compatible(des, 4).groups_examined


def test_hard_cap(monkeypatch):
    monkeypatch.delenv("SHUFFLECHECK_HARD_CAP", raising=False)
    assert hard_cap() == 10
    with pytest.raises(ValueError, match="hard cap"):
        check_shuffle_compatible(psi, 11)
    with pytest.raises(ValueError):
        check_shuffle_compatible(psi, -1)
    monkeypatch.setenv("SHUFFLECHECK_HARD_CAP", "3")
    with pytest.raises(ValueError, match="hard cap 3"):
        check_shuffle_compatible(psi, 4)
    assert check_shuffle_compatible(psi, 3).compatible
    monkeypatch.setenv("SHUFFLECHECK_HARD_CAP", "lots")
    with pytest.raises(ValueError, match="integer"):
        hard_cap()


def test_size4_statistics_fail_loudly():
    with pytest.raises(ValueError):
        check_shuffle_compatible(lookup("lambda"), 4)


def test_report_invariant_and_wording():
    with pytest.raises(ValueError):
        CompatReport("x", "shuffle", 3, VIOLATED, None, 0)
    report = check_shuffle_compatible(psi, 5)
    assert "does not prove" in report.to_dict()["note"]
    text = report.to_text(include_timing=True)
    assert "verdict: compatible-up-to-bound" in text and "wall_time_s" in text


def test_run_check_unknown_mode():
    with pytest.raises(ValueError):
        run_check(psi, "sideways", 3)


def test_group_key_ordering():
    k1 = GroupKey(StatValue.of_int(1), StatValue.of_int(1), 2, 2)
    k2 = GroupKey(StatValue.of_int(1), StatValue.of_int(1), 2, 2)
    assert k1 == k2 and hash(k1) == hash(k2)
    assert Permutation((1,)) != Permutation((2,))


@pytest.mark.parametrize("n", range(1, 8))
def test_lex_ranks_match_itertools_order(n):
    import numpy as np
    from itertools import permutations
    from shufflecheck.checker import _lex_ranks

    words = np.array(list(permutations(range(1, n + 1))), dtype=np.int8)
    assert _lex_ranks(words).tolist() == list(range(factorial(n)))
