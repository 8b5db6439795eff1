"""
The probability that k uniform random elements generate a group: closed
forms for nilpotent profiles, an exhaustive tuple counter and a seeded Monte
Carlo estimator.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Tuple

import numpy as np

from .base import AbelianGroup, NilpotentProfile, sylow_profile
from .errors import InvalidInputError, ResourceLimitError
from .helper import check_prime, fraction_to_json, trial_rng
from .lattice import Basis
from .subgroup import Subgroup, generates

logger = logging.getLogger(__name__)

MAX_TUPLES: int = 10**7
"""Largest number of k-tuples ``|G|^k`` that :func:`count_generating_tuples`
will count."""

CONFIDENCE_Z: float = 2.5758293035489004
"""Two-sided 99% quantile of the standard normal distribution."""

HALFWIDTH_RESOLUTION: int = 10**12
"""Confidence half-widths are rounded up to multiples of
1/HALFWIDTH_RESOLUTION."""


@dataclass(frozen=True)
class PhiValue:
    """Exact generation probability ``phi_k`` of a group.

    ``value`` is 0 whenever ``k`` is below the rank of the group.
    """

    k: int
    value: Fraction
    profile: NilpotentProfile

    def __str__(self) -> str:
        return f"phi_{self.k} = {self.value}"

    def to_json(self) -> dict:
        return {"k": self.k, "value": fraction_to_json(self.value)}


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Empirical generation rate over seeded independent trials.

    The half-width is ``CONFIDENCE_Z * sqrt(p(1-p)/trials)`` with the point
    estimate ``p``, rounded up to a multiple of ``1/HALFWIDTH_RESOLUTION``.
    """

    trials: int
    successes: int
    seed: int

    @property
    def point_estimate(self) -> Fraction:
        """Fraction: ``successes / trials``"""
        return Fraction(self.successes, self.trials)

    @property
    def confidence_halfwidth(self) -> Fraction:
        """Fraction: half-width of the two-sided 99% normal interval."""
        return confidence_halfwidth(self.successes, self.trials)

    def covers(self, value: Fraction) -> bool:
        """Whether **value** lies inside the confidence interval."""
        return abs(self.point_estimate - value) <= self.confidence_halfwidth

    def __str__(self) -> str:
        return (
            f"{float(self.point_estimate):.6f} "
            f"+/- {float(self.confidence_halfwidth):.6f} "
            f"({self.successes}/{self.trials}, seed={self.seed})"
        )

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "point_estimate": fraction_to_json(self.point_estimate),
            "confidence_halfwidth": fraction_to_json(
                self.confidence_halfwidth
            ),
            "seed": self.seed,
        }


def confidence_halfwidth(successes: int, trials: int) -> Fraction:
    """Normal approximation half-width of the 99% interval of a success
    rate, rounded up to ``1/HALFWIDTH_RESOLUTION``."""
    p = Fraction(successes, trials)
    spread = CONFIDENCE_Z * math.sqrt(float(p * (1 - p)) / trials)
    return Fraction(
        math.ceil(spread * HALFWIDTH_RESOLUTION), HALFWIDTH_RESOLUTION
    )


def phi_p_rank(p: int, r: int, k: int) -> Fraction:
    """Probability that k uniform elements generate ``(Z/p)^r``, and hence
    any p-group of rank r: ``prod_{i<r} (1 - p^(i-k))`` for ``k >= r``, 0
    otherwise.

    Args:
        p (int): prime
        r (int): rank, at least 0
        k (int): number of samples, at least 0

    Raises:
        InvalidInputError: if p is not prime or r, k are negative

    Examples:
        >>> phi_p_rank(2, 2, 2)
        Fraction(3, 8)
        >>> phi_p_rank(2, 3, 2)
        Fraction(0, 1)
    """
    check_prime(p)
    if r < 0 or k < 0:
        raise InvalidInputError("rank and k must be non-negative")
    if k < r:
        return Fraction(0)
    value = Fraction(1)
    for i in range(r):
        value *= 1 - Fraction(1, p ** (k - i))
    return value


def phi_profile(profile: NilpotentProfile, k: int) -> PhiValue:
    """Exact ``phi_k`` of a nilpotent group from its profile, the product of
    :func:`phi_p_rank` over its Sylow subgroups. Chain lengths do not enter:
    ``phi_k(G) = phi_k(G / Phi(G))``.
    """
    if k < 0:
        raise InvalidInputError("k must be non-negative")
    value = Fraction(1)
    for entry in profile.entries:
        value *= phi_p_rank(entry.prime, entry.rank, k)
        if not value:
            break
    return PhiValue(k=k, value=value, profile=profile)


def phi_abelian(group: AbelianGroup, k: int) -> PhiValue:
    """Exact ``phi_k`` of an abelian group."""
    return phi_profile(sylow_profile(group), k)


def count_generating_tuples(
    group: AbelianGroup, k: int, cap: int = MAX_TUPLES
) -> int:
    """Counts the k-tuples of elements that generate **group**, by running
    through all tuples. Tuples whose prefixes span the same subgroup share
    the count of their completions, and a prefix spanning the whole group
    accounts for all its completions at once.

    Args:
        group (AbelianGroup): the group
        k (int): tuple length
        cap (int, optional): largest admissible ``|G|^k``. Defaults to
            MAX_TUPLES.

    Raises:
        ResourceLimitError: if ``|G|^k`` exceeds cap

    Returns:
        int: the number ``N_k(G)`` of generating k-tuples
    """
    if k < 0:
        raise InvalidInputError("k must be non-negative")
    if group.order**k > cap:
        raise ResourceLimitError(
            f"{group.order}^{k} tuples exceed the brute force cap {cap}"
        )
    order = group.order
    if k == 0:
        return int(order == 1)
    elements = list(group.elements(cap=cap))
    memo: Dict[Tuple[Basis, int], int] = {}

    def completions(span: Subgroup, remaining: int) -> int:
        if span.order == order:
            return order**remaining
        if remaining == 0:
            return 0
        key = (span.basis, remaining)
        if key not in memo:
            inside = span.order
            total = inside * completions(span, remaining - 1)
            for g in elements:
                if not span.contains(g):
                    total += completions(span.join([g]), remaining - 1)
            memo[key] = total
        return memo[key]

    count = completions(Subgroup.trivial(group), k)
    logger.debug("N_%d(%s) = %d via %d spans", k, group, count, len(memo))
    return count


def phi_by_counting(
    group: AbelianGroup, k: int, cap: int = MAX_TUPLES
) -> PhiValue:
    """``phi_k`` as ``N_k(G) / |G|^k`` from :func:`count_generating_tuples`."""
    count = count_generating_tuples(group, k, cap=cap)
    return PhiValue(
        k=k,
        value=Fraction(count, group.order**k),
        profile=sylow_profile(group),
    )


def run_trials(
    trial: Callable[[np.random.Generator], bool], trials: int, seed: int
) -> MonteCarloEstimate:
    """Runs a Bernoulli experiment **trials** times. Trial i draws from
    :func:`helper.trial_rng(seed, i) <genprob.helper.trial_rng>`, so the
    result does not depend on the order in which trials execute.

    Raises:
        InvalidInputError: if trials is below 1 or seed is negative
    """
    if trials < 1:
        raise InvalidInputError("trials must be at least 1")
    if seed < 0:
        raise InvalidInputError("seed must be non-negative")
    successes = sum(bool(trial(trial_rng(seed, i))) for i in range(trials))
    logger.info("%d of %d trials succeeded (seed %d)", successes, trials, seed)
    return MonteCarloEstimate(trials=trials, successes=successes, seed=seed)


def estimate_phi(
    group: AbelianGroup, k: int, trials: int, seed: int
) -> MonteCarloEstimate:
    """Monte Carlo estimate of ``phi_k``: each trial draws k uniform elements
    and succeeds if they generate the group.

    Args:
        group (AbelianGroup): the group
        k (int): number of elements per trial
        trials (int): number of trials, at least 1
        seed (int): master seed
    """
    if k < 0:
        raise InvalidInputError("k must be non-negative")

    def trial(rng: np.random.Generator) -> bool:
        return generates(group, [group.sample(rng) for _ in range(k)])

    return run_trials(trial, trials, seed)
