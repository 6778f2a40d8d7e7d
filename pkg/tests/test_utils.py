from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coop2nf.errors import InputError
from coop2nf.utils import (
    format_coalition,
    format_label,
    format_rational,
    parse_costs,
    parse_label,
    parse_rational,
)


@pytest.mark.parametrize('raw, expected', [
    ('3', Fraction(3)),
    ('-7/2', Fraction(-7, 2)),
    ('12100/9', Fraction(12100, 9)),
    ('10.2', Fraction(51, 5)),
    (4, Fraction(4)),
    (Fraction(1, 3), Fraction(1, 3)),
])
def test_parse_rational(raw, expected):
    assert parse_rational(raw) == expected


@pytest.mark.parametrize('raw', ['1/0', 'abc', '1e5', '', 0.5, True, None])
def test_parse_rational_rejects(raw):
    with pytest.raises(InputError):
        parse_rational(raw)


@given(st.fractions())
def test_rational_text_round_trip(value):
    assert parse_rational(format_rational(value)) == value


def test_cost_list():
    assert parse_costs('10, 101/10, 10.2') == [Fraction(10), Fraction(101, 10), Fraction(51, 5)]
    with pytest.raises(InputError):
        parse_costs('10,,20')


def test_labels_are_one_indexed():
    assert format_coalition(0b101) == '{1,3}'
    assert format_label(0, 0b011) == '1:{1,2}'
    assert parse_label('1:{1,2}', 3) == (0, 0b011)
    assert parse_label(' 3 : { 1 , 3 } ', 3) == (2, 0b101)


@pytest.mark.parametrize('raw', ['1:{2}', '4:{4}', '1{1}', '0:{1}'])
def test_bad_labels(raw):
    with pytest.raises(InputError):
        parse_label(raw, 3)
