from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobweb.combinatorics import fnomial
from cobweb.exceptions import BudgetExceeded, OutOfRange
from cobweb.properties import (
    check_admissible,
    check_gcd_morphic,
    gcd_pair_holds,
    search_admissible,
    search_gcd_morphic,
)
from cobweb.sequences import make_builtin, make_custom, parse_seq_spec


def test_natural_admissible():
    assert check_admissible(make_builtin("natural"), 20).holds


def test_odd_not_admissible():
    v = check_admissible(make_builtin("odd"), 10)
    assert not v.holds
    assert v.witness == {"n": 4, "k": 2, "value": Fraction(7 * 5, 1 * 3)}
    assert v.to_dict()["witness"]["value"] == "35/3"


def test_fibonacci_admissible_30():
    assert check_admissible(make_builtin("fibonacci"), 30).holds


def test_short_custom_raises():
    with pytest.raises(OutOfRange):
        check_admissible(make_custom([1, 2, 3]), 5)
    with pytest.raises(OutOfRange):
        check_gcd_morphic(make_custom([1, 2, 3]), 5)


def test_fibonacci_gcd_morphic():
    assert check_gcd_morphic(make_builtin("fibonacci"), 50).holds


def test_shifted_natural_not_gcd_morphic():
    F = make_custom(range(2, 12))  # F_n = n + 1
    v = check_gcd_morphic(F, 10)
    assert not v.holds
    # (2, 1) is the first failing pair in scan order; (4, 2) fails too
    assert (v.witness["n"], v.witness["m"]) == (2, 1)
    assert not gcd_pair_holds(F, 4, 2)
    assert gcd(F.term(4), F.term(2)) == 1 and F.term(2) == 3


@pytest.mark.parametrize("c", [1, 2, 6, 35])
def test_constant_gcd_morphic(c):
    assert check_gcd_morphic(make_builtin("const", [c]), 30).holds


def _witness_reproduces(F, verdict):
    w = verdict.witness
    if verdict.property == "cobweb-admissible":
        value = fnomial(F, w["n"], w["k"])
        return value == w["value"] and value.denominator != 1
    return not gcd_pair_holds(F, w["n"], w["m"]) and gcd(F.term(w["n"]), F.term(w["m"])) == w["gcd"]


terms = st.lists(st.integers(1, 12), min_size=1, max_size=7)


@given(terms)
def test_witnesses_recheck(ts):
    F = make_custom(ts)
    for check in (check_admissible, check_gcd_morphic):
        v = check(F, len(ts))
        if v.holds:
            assert v.witness is None
        else:
            assert _witness_reproduces(F, v)


@given(terms)
def test_admissibility_monotone(ts):
    F = make_custom(ts)
    if check_admissible(F, len(ts)).holds:
        assert all(check_admissible(F, N).holds for N in range(1, len(ts) + 1))


@given(terms)
def test_admissible_verdict_matches_definition(ts):
    F = make_custom(ts)
    direct = all(
        fnomial(F, n, k).denominator == 1 for n in range(len(ts) + 1) for k in range(n + 1)
    )
    assert check_admissible(F, len(ts)).holds == direct


def test_search_admissible_len2():
    report = search_admissible(2, 3)
    for seq in ([1, 1], [1, 2], [1, 3], [2, 2]):
        assert seq in report.found
    brute = [list(p) for p in product(range(1, 4), repeat=2) if check_admissible(make_custom(p), 2).holds]
    assert report.found == brute
    assert report.exhausted


def test_search_admissible_len1():
    assert search_admissible(1, 2).found == [[1], [2]]


def test_search_admissible_with_prefix():
    report = search_admissible(4, 7, [1, 3])
    assert report.found
    for seq in report.found:
        assert seq[:2] == [1, 3]
        assert check_admissible(make_custom(seq), 4).holds
    brute = [
        [1, 3, a, b]
        for a, b in product(range(1, 8), repeat=2)
        if check_admissible(make_custom([1, 3, a, b]), 4).holds
    ]
    assert report.found == brute


def test_search_gcd_len4():
    report = search_gcd_morphic(4, 3)
    assert [1, 1, 2, 3] in report.found
    assert all(check_gcd_morphic(make_custom(s), 4).holds for s in report.found)
    brute = [list(p) for p in product(range(1, 4), repeat=4) if check_gcd_morphic(make_custom(p), 4).holds]
    assert report.found == brute


def test_search_gcd_small():
    assert search_gcd_morphic(1, 5).found == [[1], [2], [3], [4], [5]]
    assert search_gcd_morphic(2, 2).found == [[1, 1], [1, 2], [2, 2]]


@pytest.mark.parametrize("fn", [search_admissible, search_gcd_morphic])
def test_search_ceiling(fn):
    with pytest.raises(BudgetExceeded):
        fn(9, 3)
    with pytest.raises(BudgetExceeded):
        fn(2, 31)
    assert fn(9, 2, max_len_ceiling=9).exhausted


@pytest.mark.parametrize("fn", [search_admissible, search_gcd_morphic])
@pytest.mark.parametrize("max_len,max_term", [(1, 4), (2, 5)])
def test_search_complete_on_tiny_spaces(fn, max_len, max_term):
    check = check_admissible if fn is search_admissible else check_gcd_morphic
    brute = [
        list(p)
        for p in product(range(1, max_term + 1), repeat=max_len)
        if check(make_custom(p), max_len).holds
    ]
    assert fn(max_len, max_term).found == brute


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 6))
def test_search_sound(max_len, max_term):
    for fn, check in ((search_admissible, check_admissible), (search_gcd_morphic, check_gcd_morphic)):
        found = fn(max_len, max_term).found
        assert found == sorted(found)
        assert all(check(make_custom(s), max_len).holds for s in found)


def test_search_parallel_matches_serial():
    assert search_admissible(4, 8, workers=3).found == search_admissible(4, 8).found
    assert search_gcd_morphic(4, 6, workers=3).found == search_gcd_morphic(4, 6).found


@pytest.mark.parametrize("spec", ["natural", "even", "gauss:2", "gauss:3", "fibonacci"])
def test_builtin_admissible_kinds(spec):
    assert check_admissible(parse_seq_spec(spec), 15).holds
