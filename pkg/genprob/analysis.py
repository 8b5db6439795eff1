"""
Module containing the reproduction suite: exact and simulated checks of the
generation probability, both sampling bounds and the hidden subgroup
procedure over whole families of groups.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Tuple

import numpy as np
import pandas as pd

from .ahsp import (
    HspInstance,
    orthogonal_subgroup,
    plan_iterations,
    simulate_ahsp,
)
from .base import (
    AbelianGroup,
    iter_abelian_groups,
    random_abelian_group,
    random_profile,
)
from .bounds import len_bound, pak_bound, rank_bound, tightness_witness
from .errors import InvalidInputError
from .probability import (
    estimate_phi,
    phi_abelian,
    phi_by_counting,
    phi_profile,
)
from .subgroup import iter_subgroups

logger = logging.getLogger(__name__)

EPSILONS = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), Fraction(1, 100))
"""Error probabilities of the bound checks."""

SIMULATION_EPSILONS = EPSILONS[:3]


@dataclass(frozen=True)
class Scale:
    """Sizes of the families each criterion runs over."""

    max_oracle_order: int
    profiles: int
    max_tightness_size: int
    random_groups: int
    spot_trials: int
    spot_tolerance: Fraction
    max_duality_order: int
    instances: int
    max_instance_order: int
    instance_trials: int


SCALES: Dict[str, Scale] = {
    "full": Scale(
        max_oracle_order=64,
        profiles=500,
        max_tightness_size=20,
        random_groups=200,
        spot_trials=10**5,
        spot_tolerance=Fraction(1, 100),
        max_duality_order=36,
        instances=50,
        max_instance_order=2**16,
        instance_trials=10**4,
    ),
    "quick": Scale(
        max_oracle_order=16,
        profiles=50,
        max_tightness_size=20,
        random_groups=20,
        spot_trials=5000,
        spot_tolerance=Fraction(1, 20),
        max_duality_order=12,
        instances=4,
        max_instance_order=2**8,
        instance_trials=400,
    ),
}

Outcome = Tuple[int, int]
"""Number of cases and number of failed cases of one criterion."""


def _sub_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def _sub_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([seed, *key]).generate_state(1)[0])


def check_oracle(scale: Scale, seed: int) -> Outcome:
    """Closed form against tuple counting for every group of small order and
    ``k`` in 0..3."""
    cases = failures = 0
    for order in range(1, scale.max_oracle_order + 1):
        for group in iter_abelian_groups(order):
            for k in range(4):
                cases += 1
                exact = phi_abelian(group, k).value
                if exact != phi_by_counting(group, k).value:
                    logger.warning("phi_%d mismatch for %s", k, group)
                    failures += 1
    return cases, failures


def check_soundness(scale: Scale, seed: int) -> Outcome:
    """Both bounds reach ``1 - epsilon`` on random profiles."""
    rng = _sub_rng(seed, 2)
    cases = failures = 0
    for _ in range(scale.profiles):
        profile = random_profile(rng)
        for epsilon in EPSILONS:
            for k in (
                rank_bound(profile.rank, epsilon),
                len_bound(profile.length, epsilon),
            ):
                cases += 1
                if phi_profile(profile, k).value < 1 - epsilon:
                    logger.warning("bound k=%d fails on %s", k, profile)
                    failures += 1
    return cases, failures


def check_tightness(scale: Scale, seed: int) -> Outcome:
    """The reduced counts fall short on elementary abelian 2-groups."""
    cases = failures = 0
    for size in range(1, scale.max_tightness_size + 1):
        for epsilon in EPSILONS:
            for mode in ("len", "rank"):
                cases += 1
                if not tightness_witness(mode, size, epsilon).claim_holds:
                    failures += 1
    return cases, failures


def _random_groups(scale: Scale, seed: int) -> Iterator[AbelianGroup]:
    rng = _sub_rng(seed, 4)
    for _ in range(scale.random_groups):
        yield random_abelian_group(rng, 2**20)


def check_two_extra(scale: Scale, seed: int) -> Outcome:
    """``rank + 2`` elements generate with probability at least 1/2, plus a
    Monte Carlo spot check on ``(Z/2)^6`` with 8 elements."""
    cases = failures = 0
    for group in _random_groups(scale, seed):
        cases += 1
        if phi_abelian(group, group.rank + 2).value < Fraction(1, 2):
            logger.warning("phi_(rank+2) below 1/2 for %s", group)
            failures += 1
    group = AbelianGroup.elementary(2, 6)
    exact = phi_abelian(group, 8).value
    estimate = estimate_phi(group, 8, scale.spot_trials, _sub_seed(seed, 4))
    cases += 1
    if abs(estimate.point_estimate - exact) > scale.spot_tolerance:
        logger.warning("spot check %s misses %s", estimate, exact)
        failures += 1
    return cases, failures


def check_duality(scale: Scale, seed: int) -> Outcome:
    """Orthogonal subgroups of every subgroup of every small group."""
    cases = failures = 0
    for order in range(1, scale.max_duality_order + 1):
        for group in iter_abelian_groups(order):
            for hidden in iter_subgroups(group):
                cases += 1
                hperp = orthogonal_subgroup(group, hidden)
                ok = (
                    orthogonal_subgroup(group, hperp).equals(hidden)
                    and hidden.order * hperp.order == group.order
                    and hidden.length + hperp.length == group.length
                    and group.rank <= hidden.rank + hperp.rank
                )
                if not ok:
                    logger.warning("duality fails for %s in %s", hidden, group)
                    failures += 1
    return cases, failures


def random_instance(
    rng: np.random.Generator, max_order: int
) -> HspInstance:
    """A random group with a hidden subgroup spanned by up to ``rank``
    random elements, each multiplied by a random small factor."""
    group = random_abelian_group(rng, max_order)
    generators = [
        group.scale(group.sample(rng), int(rng.integers(1, 5)))
        for _ in range(int(rng.integers(0, group.rank + 1)))
    ]
    return HspInstance.from_generators(group, generators)


def check_recovery(scale: Scale, seed: int) -> Outcome:
    """Exact and simulated recovery rate at the planned counts of both
    strategies. Recovery succeeds exactly when the samples generate the
    orthogonal subgroup."""
    rng = _sub_rng(seed, 6)
    cases = failures = 0
    for i in range(scale.instances):
        instance = random_instance(rng, scale.max_instance_order)
        dual = orthogonal_subgroup(instance.group, instance.hidden).as_group()
        for j, epsilon in enumerate(SIMULATION_EPSILONS):
            for strategy in ("rank", "len"):
                plan = plan_iterations(
                    instance.group,
                    epsilon,
                    hidden_length=instance.hidden.length,
                    strategy=strategy,
                )
                result = simulate_ahsp(
                    instance,
                    plan,
                    scale.instance_trials,
                    _sub_seed(seed, 6, i, j),
                )
                cases += 1
                floor = 1 - epsilon - result.confidence_halfwidth
                exact = phi_abelian(dual, plan.k).value
                if exact < 1 - epsilon or result.point_estimate < floor:
                    logger.warning(
                        "recovery rate %s below %s for %s",
                        result.estimate,
                        floor,
                        instance.group,
                    )
                    failures += 1
    return cases, failures


def check_sharpening(scale: Scale, seed: int) -> Outcome:
    """The better of the two bounds never exceeds the order-based count."""
    cases = failures = 0
    for group in _random_groups(scale, seed):
        for epsilon in EPSILONS:
            cases += 1
            best = min(
                rank_bound(group.rank, epsilon),
                len_bound(group.length, epsilon),
            )
            if best > pak_bound(group.order, epsilon):
                failures += 1
    return cases, failures


CRITERIA: List[Tuple[int, str, Callable[[Scale, int], Outcome]]] = [
    (1, "closed form equals tuple counting", check_oracle),
    (2, "phi at both bounds is at least 1 - epsilon", check_soundness),
    (3, "phi below 1 - epsilon at reduced counts", check_tightness),
    (4, "phi_(rank+2) >= 1/2 and Monte Carlo spot check", check_two_extra),
    (5, "orthogonal subgroup duality", check_duality),
    (6, "simulated recovery rate at planned counts", check_recovery),
    (7, "min(rank_bound, len_bound) <= order-based count", check_sharpening),
]


def run_acceptance(scale: str = "full", seed: int = 0) -> pd.DataFrame:
    """Runs every criterion and collects one row per criterion.

    Args:
        scale (str, optional): ``"full"`` or the reduced ``"quick"``.
            Defaults to ``"full"``.
        seed (int, optional): master seed of all random families. Defaults
            to 0.

    Raises:
        InvalidInputError: if the scale is unknown

    Returns:
        pd.DataFrame: columns criterion, description, cases, failures,
        passed, seconds
    """
    try:
        sizes = SCALES[scale]
    except KeyError as e:
        raise InvalidInputError(f"unknown scale '{scale}'") from e
    if seed < 0:
        raise InvalidInputError("seed must be non-negative")
    rows = []
    for number, description, check in CRITERIA:
        start = time.perf_counter()
        cases, failures = check(sizes, seed)
        seconds = time.perf_counter() - start
        logger.info(
            "criterion %d: %d/%d failed in %.1fs",
            number,
            failures,
            cases,
            seconds,
        )
        rows.append(
            {
                "criterion": number,
                "description": description,
                "cases": cases,
                "failures": failures,
                "passed": failures == 0,
                "seconds": round(seconds, 3),
            }
        )
    return pd.DataFrame(rows)
