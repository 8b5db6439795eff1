from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genprob import helper
from genprob.errors import InvalidInputError

# Integer helpers


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    x, y, g = helper.xgcd(a, b)
    assert g >= 0
    assert x * a + y * b == g
    if a or b:
        assert a % g == 0 and b % g == 0


@pytest.mark.parametrize(
    "x, expected",
    [
        (Fraction(1), 0),
        (Fraction(4), 2),
        (Fraction(5), 3),
        (Fraction(20), 5),
        (Fraction(1, 3), -1),
        (Fraction(1, 4), -2),
        (Fraction(2**40), 40),
        (Fraction(2**40 + 1), 41),
    ],
)
def test_ceil_log2(x, expected):
    assert helper.ceil_log2(x) == expected


@given(
    st.fractions(min_value=Fraction(1, 10**12), max_value=10**12).filter(
        lambda x: x > 0
    )
)
def test_ceil_log2_brackets(x):
    m = helper.ceil_log2(x)
    assert Fraction(2) ** m >= x
    assert Fraction(2) ** (m - 1) < x


def test_ceil_log2_tiny_epsilon():
    epsilon = Fraction(1, 2**40) + Fraction(1, 2**100)
    assert helper.ceil_log2(1 / epsilon) == 40
    assert helper.ceil_log2(2 / epsilon) == 41


def test_ceil_log2_not_positive():
    with pytest.raises(InvalidInputError):
        helper.ceil_log2(Fraction(0))


@pytest.mark.parametrize(
    "n, parts", [(1, []), (12, [(2, 2), (3, 1)]), (97, [(97, 1)])]
)
def test_prime_power_parts(n, parts):
    assert helper.prime_power_parts(n) == parts


@pytest.mark.parametrize("n, total", [(1, 0), (12, 3), (1024, 10)])
def test_total_exponent(n, total):
    assert helper.total_exponent(n) == total


# Validation


@pytest.mark.parametrize("p", [1, 4, 9, 0])
def test_check_prime(p):
    with pytest.raises(InvalidInputError):
        helper.check_prime(p)


@pytest.mark.parametrize(
    "epsilon", [0, 1, Fraction(3, 2), Fraction(-1, 2), 0.1]
)
def test_check_epsilon_invalid(epsilon):
    with pytest.raises(InvalidInputError):
        helper.check_epsilon(epsilon)


@pytest.mark.parametrize(
    "text, value",
    [("1/10", Fraction(1, 10)), (" 3 / 4 ", Fraction(3, 4)), ("2", 2)],
)
def test_parse_rational(text, value):
    assert helper.parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.1", "1e-3", "1/0", "", "one"])
def test_parse_rational_invalid(text):
    with pytest.raises(InvalidInputError):
        helper.parse_rational(text)


# Randomness


def test_draw_below_range():
    rng = np.random.default_rng(0)
    draws = [helper.draw_below(rng, 7) for _ in range(2000)]
    assert set(draws) == set(range(7))


def test_draw_below_one():
    assert helper.draw_below(np.random.default_rng(0), 1) == 0


def test_draw_below_each():
    moduli = [2, 1, 3**50, 12]
    batch = helper.draw_below_each(np.random.default_rng(5), moduli)
    assert batch == helper.draw_below_each(np.random.default_rng(5), moduli)
    assert batch[1] == 0
    assert all(0 <= x < n for x, n in zip(batch, moduli))


def test_draw_below_each_uniform():
    rng = np.random.default_rng(6)
    draws = np.array([helper.draw_below_each(rng, [3, 4]) for _ in range(6000)])
    for column, n in enumerate([3, 4]):
        counts = np.bincount(draws[:, column], minlength=n)
        assert np.all(np.abs(counts / 6000 - 1 / n) < 0.03)


def test_draw_below_each_empty():
    assert helper.draw_below_each(np.random.default_rng(0), []) == []


@pytest.mark.parametrize("moduli", [[0], [3, -2]])
def test_draw_below_each_invalid(moduli):
    with pytest.raises(InvalidInputError):
        helper.draw_below_each(np.random.default_rng(0), moduli)


# Rank over Z/p


@pytest.mark.parametrize(
    "rows, p, rank",
    [
        ([], 2, 0),
        ([(0, 0)], 5, 0),
        ([(1, 0), (0, 1), (1, 1)], 2, 2),
        ([(1, 2), (2, 4)], 3, 1),
        ([(1, 2), (2, 1)], 3, 1),
        ([(1, 2), (2, 1)], 5, 2),
        ([(2, 0, 0), (0, 4, 0)], 2, 0),
    ],
)
def test_rank_mod_p(rows, p, rank):
    assert helper.rank_mod_p(rows, p) == rank


@given(
    st.sampled_from([2, 3, 5, 7]),
    st.lists(st.tuples(*[st.integers(-20, 20)] * 3), max_size=5),
)
def test_rank_mod_p_bounded(p, rows):
    rank = helper.rank_mod_p(rows, p)
    assert 0 <= rank <= min(len(rows), 3)
    assert helper.rank_mod_p(rows + rows, p) == rank


def test_trial_rng_independent_of_order():
    forward = [helper.trial_rng(11, i).integers(10**9) for i in range(5)]
    backward = [
        helper.trial_rng(11, i).integers(10**9) for i in (4, 3, 2, 1, 0)
    ]
    assert forward == backward[::-1]


# Rationals as JSON


def test_fraction_json():
    data = helper.fraction_to_json(Fraction(21, 32))
    assert data == {"num": "21", "den": "32"}
    assert helper.fraction_from_json(data) == Fraction(21, 32)


def test_fraction_from_json_invalid():
    with pytest.raises(InvalidInputError):
        helper.fraction_from_json({"num": "1", "den": "0"})
