"""Monomial parsing, monomial ideals, and graded piece dimensions."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cechmv import (
    InputError,
    MonomialIdeal,
    format_monomial,
    localized_piece_dim,
    monomial_divides,
    monomial_mul,
    multiplication_map,
    parse_monomial,
    product_sequence,
    shift_map_dim,
    support_mask,
    window_degrees,
)


def test_parse_monomial_basics():
    assert parse_monomial("x1^2*x3", 3) == (2, 0, 1)
    assert parse_monomial("x2", 2) == (0, 1)
    assert parse_monomial("1", 4) == (0, 0, 0, 0)
    assert parse_monomial("x1 * x1", 1) == (2,)
    assert parse_monomial("x2^3*x2", 2) == (0, 4)


@pytest.mark.parametrize(
    "text,msg",
    [
        ("", "empty monomial"),
        ("zebra", "zebra"),
        ("x1^", "'x1\\^'"),
        ("x0", "out of range"),
        ("x3", "out of range"),
        ("x1**x2", "unparsable"),
        ("x1^-2", "unparsable"),
    ],
)
def test_parse_monomial_errors_name_the_token(text, msg):
    with pytest.raises(InputError, match=msg):
        parse_monomial(text, 2)


exps = st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=4).map(tuple)


@settings(max_examples=80, deadline=None)
@given(exps)
def test_format_parse_round_trip(e):
    assert parse_monomial(format_monomial(e), len(e)) == e


def test_support_mask_and_divisibility():
    assert support_mask((0, 2, 1)) == 0b110
    assert support_mask((0, 0)) == 0
    assert monomial_divides((1, 0), (2, 3))
    assert not monomial_divides((1, 4), (2, 3))
    assert monomial_mul((1, 2), (3, 0)) == (4, 2)


def test_ideal_minimalizes_generators():
    J = MonomialIdeal(2, ((2, 0), (3, 0), (0, 1), (2, 1)))
    assert J.gens == ((0, 1), (2, 0))
    assert MonomialIdeal.zero(3).is_zero()
    assert J.describe() == "(x2, x1^2)"


def test_ideal_rejects_bad_generators():
    with pytest.raises(InputError):
        MonomialIdeal(2, ((1, 2, 3),))
    with pytest.raises(InputError):
        MonomialIdeal(2, ((-1, 0),))


def test_piece_dim_plain_ring():
    J = MonomialIdeal.zero(2)
    assert localized_piece_dim(0, J, (0, 0)) == 1
    assert localized_piece_dim(0, J, (2, 1)) == 1
    assert localized_piece_dim(0, J, (-1, 0)) == 0
    # inverting x1 frees its exponent
    assert localized_piece_dim(0b01, J, (-1, 0)) == 1
    assert localized_piece_dim(0b01, J, (-1, -1)) == 0
    assert localized_piece_dim(0b11, J, (-5, -5)) == 1


def test_piece_dim_against_divisibility_oracle():
    # non-localized case: the piece is 1 exactly when x^b is a monomial of R
    # outside J, which is a direct divisibility statement
    J = MonomialIdeal(3, ((2, 0, 0), (0, 1, 1)))
    for b1 in range(-1, 4):
        for b2 in range(-1, 4):
            for b3 in range(-1, 4):
                b = (b1, b2, b3)
                want = 0
                if all(x >= 0 for x in b) and not any(monomial_divides(g, b) for g in J.gens):
                    want = 1
                assert localized_piece_dim(0, J, b) == want


def test_piece_dim_quotient_kills_inverted_nilpotents():
    # J contains a power of x1, so any localization inverting x1 collapses
    J = MonomialIdeal(2, ((3, 0),))
    for b1 in range(-3, 4):
        for b2 in range(-3, 4):
            assert localized_piece_dim(0b01, J, (b1, b2)) == 0
            assert localized_piece_dim(0b11, J, (b1, b2)) == 0
    assert localized_piece_dim(0b10, J, (2, -4)) == 1
    assert localized_piece_dim(0b10, J, (3, -4)) == 0


def test_multiplication_and_shift_maps():
    J = MonomialIdeal.zero(2)
    assert multiplication_map(0, 0b01, J, (1, 1)) == 1
    assert multiplication_map(0, 0b01, J, (-1, 1)) == 0  # source dead
    assert multiplication_map(0b01, 0b11, J, (-1, -1)) == 0  # target needs x2 inverted too
    with pytest.raises(Exception):
        multiplication_map(0b10, 0b01, J, (0, 0))
    assert shift_map_dim(0, J, (0, 0), (1, 0)) == 1
    J2 = MonomialIdeal(2, ((2, 0),))
    assert shift_map_dim(0, J2, (1, 0), (1, 0)) == 0  # lands in the ideal
    assert shift_map_dim(0, J2, (-1, 0), (1, 0)) == 0  # source dead


def test_product_sequence_order():
    x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    groups = ((x,), (y, z))
    assert product_sequence(groups) == ((1, 1, 0), (1, 0, 1))
    assert product_sequence(((x, y), (y, z))) == ((1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1))
    assert product_sequence(()) == ()


def test_window_degrees_lex_order():
    degs = list(window_degrees(((-1, 0), (0, 1))))
    assert degs == [(-1, 0), (-1, 1), (0, 0), (0, 1)]
