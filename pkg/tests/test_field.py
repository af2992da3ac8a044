import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from frolicher.field import (
    FormatError,
    GaussianRational,
    conj,
    format_rational,
    format_scalar,
    gq,
    parse_scalar,
    pretty,
)

rationals = st.fractions(max_denominator=50).map(lambda f: mpq(f.numerator, f.denominator))
scalars = st.tuples(rationals, rationals).map(lambda t: gq(*t))


def test_gq_collapses_to_mpq_when_real():
    assert isinstance(gq(3, 0), type(mpq(1)))
    assert isinstance(gq(0, 1), GaussianRational)


@pytest.mark.parametrize("raw,expected", [
    ("3/4", mpq(3, 4)),
    ("-2", mpq(-2)),
    (5, mpq(5)),
    (["1/2", "-1/3"], gq(mpq(1, 2), mpq(-1, 3))),
    (["2", "0"], mpq(2)),
])
def test_parse_scalar(raw, expected):
    assert parse_scalar(raw) == expected


@pytest.mark.parametrize("bad", ["1/0", "a/b", "", ["1"], ["1", "2", "3"], None, 1.5])
def test_parse_scalar_rejects(bad):
    with pytest.raises(FormatError):
        parse_scalar(bad)


def test_format_is_canonical():
    assert format_rational(mpq(6, 4)) == "3/2"
    assert format_rational(mpq(-2)) == "-2/1"
    assert format_scalar(gq(1, -1)) == ["1/1", "-1/1"]
    assert pretty(mpq(-1, 2)) == "-1/2"


@settings(max_examples=200)
@given(scalars)
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@settings(max_examples=200)
@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert conj(a * b) == conj(a) * conj(b)
    if a != 0:
        assert (b / a) * a == b


def test_i_squared():
    i = gq(0, 1)
    assert i * i == -1
    assert conj(i) == gq(0, -1)


def test_immutable():
    x = gq(1, 1)
    with pytest.raises(AttributeError):
        x.re = mpq(0)
