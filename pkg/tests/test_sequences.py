import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobweb.exceptions import InvalidParameter, NonpositiveTerm, OutOfRange
from cobweb.sequences import (
    load_seq_file,
    make_builtin,
    make_custom,
    parse_seq_spec,
    term,
)


def test_fibonacci_term_6():
    assert make_builtin("fibonacci").term(6) == 8


def test_natural_term_1():
    assert make_builtin("natural").term(1) == 1


def test_gauss_q2_term_4():
    # 1 + 2 + 4 + 8
    assert make_builtin("gauss-q", [2]).term(4) == sum(2**i for i in range(4)) == 15


def test_odd_term_4():
    assert term(make_builtin("odd"), 4) == 7


def test_root_conventions():
    assert term(make_builtin("fibonacci"), 0) == 0
    assert term(make_builtin("natural"), 0) == 1
    assert make_custom([3, 4], root=0).term(0) == 0


def test_constant():
    assert term(make_builtin("constant", [1]), 17) == 1


def test_builtin_formulas():
    assert [make_builtin("even").term(n) for n in (1, 2, 3)] == [2, 4, 6]
    assert [make_builtin("k-multiples", [3]).term(n) for n in (1, 2, 3)] == [3, 6, 9]
    assert make_builtin("gauss", [3]).term(3) == 13


def test_custom_lookup():
    assert make_custom([1, 3, 5, 7], root=1).term(3) == 5


def test_custom_rejects_nonpositive():
    with pytest.raises(NonpositiveTerm):
        make_custom([1, 0, 2], root=1)


def test_custom_out_of_range():
    F = make_custom([2, 4], root=1)
    with pytest.raises(OutOfRange):
        F.term(5)


@pytest.mark.parametrize(
    "kind,params", [("mult", [0]), ("gauss", [0]), ("const", [-1]), ("natural", [2]), ("mult", [])]
)
def test_invalid_parameters(kind, params):
    with pytest.raises(InvalidParameter):
        make_builtin(kind, params)


def test_negative_index():
    with pytest.raises(InvalidParameter):
        make_builtin("natural").term(-1)


def test_parse_spec_roundtrip():
    for spec in ("natural", "mult:4", "gauss:2", "const:5", "fibonacci"):
        assert parse_seq_spec(spec).spec == spec
    with pytest.raises(InvalidParameter):
        parse_seq_spec("gauss:x")
    with pytest.raises(InvalidParameter):
        parse_seq_spec("primes")


def test_seq_file(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("root=0\n1\n1\n2\n3\n")
    F = load_seq_file(path)
    assert F.root_convention == 0
    assert F.terms_upto(4) == [1, 1, 2, 3]
    path.write_text("2\n4\n")
    assert load_seq_file(path).root_convention == 1
    path.write_text("2\n-4\n")
    with pytest.raises(NonpositiveTerm):
        load_seq_file(path)


def test_fibonacci_additivity():
    F = make_builtin("fibonacci")
    for n in range(2, 81):
        assert F.term(n + 1) == F.term(n) + F.term(n - 1)


def test_gauss_q1_is_natural():
    G, N = make_builtin("gauss", [1]), make_builtin("natural")
    assert all(G.term(n) == N.term(n) for n in range(101))


def test_arbitrary_precision():
    # F_300 has 63 digits
    assert len(str(make_builtin("fibonacci").term(300))) == 63


@given(st.sampled_from(["natural", "even", "odd", "mult:7", "fibonacci", "gauss:5", "const:3"]),
       st.integers(0, 500))
def test_deterministic_and_positive(spec, n):
    F = parse_seq_spec(spec)
    assert F.term(n) == parse_seq_spec(spec).term(n)
    if n >= 1:
        assert F.term(n) >= 1
