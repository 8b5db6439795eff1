from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genprob import NilpotentProfile, parse_group
from genprob.base import AbelianGroup, iter_abelian_groups
from genprob.errors import InvalidInputError, ResourceLimitError
from genprob.probability import (
    MonteCarloEstimate,
    confidence_halfwidth,
    count_generating_tuples,
    estimate_phi,
    phi_abelian,
    phi_by_counting,
    phi_p_rank,
    phi_profile,
)

profiles = st.lists(
    st.tuples(
        st.sampled_from([2, 3, 5, 7, 97]),
        st.integers(1, 6),
        st.integers(0, 6),
    ),
    max_size=4,
    unique_by=lambda t: t[0],
).map(
    lambda triples: NilpotentProfile.from_entries(
        (p, r, r + extra) for p, r, extra in triples
    )
)

# Closed forms


@pytest.mark.parametrize(
    "p, r, k, value",
    [
        (2, 1, 1, Fraction(1, 2)),
        (2, 2, 2, Fraction(3, 8)),
        (3, 1, 2, Fraction(8, 9)),
        (2, 3, 2, Fraction(0)),
        (5, 0, 0, Fraction(1)),
    ],
)
def test_phi_p_rank(p, r, k, value):
    assert phi_p_rank(p, r, k) == value


@pytest.mark.parametrize("p, r, k", [(4, 1, 1), (2, -1, 1), (2, 1, -1)])
def test_phi_p_rank_invalid(p, r, k):
    with pytest.raises(InvalidInputError):
        phi_p_rank(p, r, k)


@pytest.mark.parametrize(
    "text, k, value",
    [
        ("2:1:1,3:1:1", 1, Fraction(1, 3)),
        ("2:1:2,3:1:1", 2, Fraction(2, 3)),
        ("", 0, Fraction(1)),
        ("", 5, Fraction(1)),
    ],
)
def test_phi_profile(text, k, value):
    assert phi_profile(NilpotentProfile.from_string(text), k).value == value


@pytest.mark.parametrize(
    "divisors, k, value",
    [
        ([4], 1, Fraction(1, 2)),
        ([2, 2], 3, Fraction(21, 32)),
        ([], 0, Fraction(1)),
        ([2], 0, Fraction(0)),
    ],
)
def test_phi_abelian(divisors, k, value):
    assert phi_abelian(parse_group(divisors), k).value == value


def test_PhiValue_json():
    phi = phi_abelian(parse_group([2, 2]), 3)
    assert phi.to_json() == {"k": 3, "value": {"num": "21", "den": "32"}}


@given(profiles, st.integers(0, 12))
def test_phi_profile_monotone(profile, k):
    now = phi_profile(profile, k).value
    later = phi_profile(profile, k + 1).value
    assert 0 <= now <= later <= 1
    if profile.entries and now > 0:
        assert later > now
    if k < profile.rank:
        assert now == 0


@given(
    st.sampled_from([3, 5, 7, 11, 97]), st.integers(0, 8), st.integers(0, 12)
)
def test_phi_p_rank_dominates_two(p, r, k):
    assert phi_p_rank(p, r, k) >= phi_p_rank(2, r, k)


@given(profiles)
def test_phi_profile_limit(profile):
    assert phi_profile(profile, profile.rank + 40).value > 1 - Fraction(
        1, 10**9
    )


@given(profiles, st.integers(0, 10))
def test_phi_profile_ignores_length(profile, k):
    quotient = profile.frattini_quotient()
    assert phi_profile(profile, k).value == phi_profile(quotient, k).value


# Tuple counting


@pytest.mark.parametrize(
    "divisors, k, count",
    [([2], 1, 1), ([2, 2], 2, 6), ([6], 1, 2), ([12], 2, 96), ([], 0, 1)],
)
def test_count_generating_tuples(divisors, k, count):
    assert count_generating_tuples(parse_group(divisors), k) == count


def test_count_generating_tuples_cap():
    with pytest.raises(ResourceLimitError):
        count_generating_tuples(parse_group([1024]), 3, cap=10**7)


def test_count_generating_tuples_empty_tuple_of_large_group():
    group = parse_group([2] * 21)
    assert count_generating_tuples(group, 0) == 0
    assert phi_by_counting(group, 0).value == 0
    assert count_generating_tuples(parse_group([]), 0) == 1


def test_count_generating_tuples_enumerates_up_to_cap():
    group = parse_group([2] * 5)
    assert count_generating_tuples(group, 1, cap=32) == 0
    with pytest.raises(ResourceLimitError):
        count_generating_tuples(group, 1, cap=31)


@pytest.mark.parametrize(
    "order",
    [
        *range(1, 33),
        *(pytest.param(n, marks=pytest.mark.slow) for n in range(33, 65)),
    ],
)
def test_phi_matches_counting(order):
    for group in iter_abelian_groups(order):
        for k in range(4):
            assert phi_abelian(group, k) == phi_by_counting(group, k)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("a", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_phi_frattini_invariance(p, a, k):
    big = AbelianGroup.from_divisors([p**a])
    small = AbelianGroup.from_divisors([p])
    assert phi_by_counting(big, k).value == phi_by_counting(small, k).value


@pytest.mark.parametrize(
    "first, second", [([2], [3]), ([4], [9]), ([2, 2], [3]), ([8], [5])]
)
@pytest.mark.parametrize("k", [1, 2])
def test_phi_product_law(first, second, k):
    product = phi_by_counting(parse_group(first + second), k).value
    factors = (
        phi_by_counting(parse_group(first), k).value
        * phi_by_counting(parse_group(second), k).value
    )
    assert product == factors


# Monte Carlo


def test_confidence_halfwidth_degenerate():
    assert confidence_halfwidth(0, 100) == 0
    assert confidence_halfwidth(100, 100) == 0


def test_confidence_halfwidth_rounds_up():
    halfwidth = confidence_halfwidth(50, 100)
    assert halfwidth >= Fraction(128791465177, 10**12)
    assert halfwidth.denominator <= 10**12


def test_estimate_phi_trivial():
    estimate = estimate_phi(parse_group([]), 0, trials=50, seed=3)
    assert estimate.point_estimate == 1
    assert estimate.confidence_halfwidth == 0


@pytest.mark.parametrize(
    "divisors, k, exact",
    [([2], 1, Fraction(1, 2)), ([12], 2, Fraction(2, 3))],
)
def test_estimate_phi_close(divisors, k, exact):
    estimate = estimate_phi(parse_group(divisors), k, trials=10**5, seed=0)
    assert abs(estimate.point_estimate - exact) < Fraction(1, 100)


def test_estimate_phi_deterministic():
    group = parse_group([2, 2])
    first = estimate_phi(group, 2, trials=500, seed=42)
    second = estimate_phi(group, 2, trials=500, seed=42)
    assert first == second


def test_estimate_phi_invalid():
    group = parse_group([2])
    with pytest.raises(InvalidInputError):
        estimate_phi(group, 1, trials=0, seed=1)
    with pytest.raises(InvalidInputError):
        estimate_phi(group, 1, trials=10, seed=-1)


def test_estimate_phi_coverage_over_seeds():
    group = parse_group([2, 2])
    exact = phi_abelian(group, 2).value
    covered = sum(
        estimate_phi(group, 2, trials=400, seed=seed).covers(exact)
        for seed in range(100)
    )
    # 99 of 100 expected
    assert covered >= 95


def test_MonteCarloEstimate_json():
    estimate = MonteCarloEstimate(trials=4, successes=3, seed=9)
    data = estimate.to_json()
    assert data["point_estimate"] == {"num": "3", "den": "4"}
    assert data["seed"] == 9
    assert "3/4" in str(estimate)
