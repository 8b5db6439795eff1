"""
Classical side of the standard quantum algorithm for the finite abelian hidden
subgroup problem.

Each run of the quantum circuit yields a uniform element of the orthogonal
subgroup ``H^perp``. This module samples that distribution directly, recovers
``H`` from the samples, plans the number of runs, and simulates the success
rate of the whole procedure.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from .base import AbelianGroup, Element
from .bounds import len_bound, pak_bound, rank_bound
from .errors import InvalidInputError
from .helper import Rational, check_epsilon, fraction_to_json
from .probability import MonteCarloEstimate, run_trials
from .subgroup import Subgroup

logger = logging.getLogger(__name__)


class IterationStrategy(str, Enum):
    """Which sufficient count sizes the number of circuit runs."""

    rank = "rank"
    len = "len"
    len_unknown_H = "len_unknown_H"


@dataclass(frozen=True)
class HspInstance:
    """A group with a hidden subgroup. The oracle function constant on the
    cosets of ``H`` is never built; only its measurement distribution is
    sampled."""

    group: AbelianGroup
    hidden: Subgroup

    def __post_init__(self):
        if self.hidden.ambient != self.group:
            raise InvalidInputError("hidden subgroup lives in another group")

    @classmethod
    def from_generators(
        cls, group: AbelianGroup, generators: Iterable[Sequence[int]]
    ) -> HspInstance:
        """Canonicalizes the hidden subgroup from a list of generators."""
        return cls(group, Subgroup.from_generators(group, generators))


@dataclass(frozen=True)
class IterationPlan:
    """Number ``k`` of circuit runs chosen by a strategy for an error
    probability ``epsilon``."""

    strategy: IterationStrategy
    k: int
    epsilon: Fraction

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "k": self.k,
            "epsilon": fraction_to_json(self.epsilon),
        }


@dataclass(frozen=True)
class SimulationResult:
    """Empirical success rate of hidden subgroup recovery with ``k`` samples
    per trial."""

    estimate: MonteCarloEstimate
    k: int
    plan: Optional[IterationPlan] = None

    @property
    def trials(self) -> int:
        return self.estimate.trials

    @property
    def successes(self) -> int:
        return self.estimate.successes

    @property
    def point_estimate(self) -> Fraction:
        return self.estimate.point_estimate

    @property
    def confidence_halfwidth(self) -> Fraction:
        return self.estimate.confidence_halfwidth

    def to_json(self) -> dict:
        return {
            **self.estimate.to_json(),
            "k": self.k,
            "plan": self.plan.to_json() if self.plan else None,
        }


def orthogonal_subgroup(group: AbelianGroup, hidden: Subgroup) -> Subgroup:
    """The orthogonal subgroup ``H^perp = {t : sum_i t_i s_i / N_i in Z for
    all s in H}``, relative to the elementary divisor coordinates of
    **group**.

    With ``B`` the Hermite basis of ``H`` and ``D = diag(N_i)``, the lattice
    of ``H^perp`` is spanned by the columns of ``D B^-1``.

    Raises:
        InvalidInputError: if **hidden** is not a subgroup of **group**
    """
    if hidden.ambient != group:
        raise InvalidInputError("subgroup lives in another group")
    relations = hidden.relations()
    n = len(group.moduli)
    columns = [[relations[i][j] for i in range(n)] for j in range(n)]
    return Subgroup.from_generators(group, columns)


def is_orthogonal(
    group: AbelianGroup, t: Sequence[int], s: Sequence[int]
) -> bool:
    """Whether ``sum_i t_i s_i / N_i`` is an integer."""
    return sum(
        Fraction(a * b, n) for a, b, n in zip(t, s, group.moduli)
    ).denominator == 1


def sample_hperp(
    group: AbelianGroup, hidden: Subgroup, rng: np.random.Generator
) -> Element:
    """One simulated measurement: a uniform element of ``H^perp``."""
    return orthogonal_subgroup(group, hidden).sample(rng)


def recover_subgroup(
    group: AbelianGroup, samples: Iterable[Sequence[int]]
) -> Subgroup:
    """Solution set ``A = {x : W x = 0 mod 1}`` of the congruence system
    whose rows are ``(t_1/N_1, ..., t_l/N_l)`` for the samples t. This is
    the orthogonal subgroup of the span of the samples, and it contains
    ``H`` whenever the samples lie in ``H^perp``."""
    return orthogonal_subgroup(
        group, Subgroup.from_generators(group, samples)
    )


def solve_congruences(
    group: AbelianGroup, samples: Sequence[Sequence[int]]
) -> List[Element]:
    """Solves ``W x = 0 mod 1`` by trying every element of a small group."""
    samples = [group.validate(t) for t in samples]
    return [
        x
        for x in group.elements()
        if all(is_orthogonal(group, t, x) for t in samples)
    ]


def plan_iterations(
    group: AbelianGroup,
    epsilon: Rational,
    hidden_length: Optional[int] = None,
    strategy: Union[IterationStrategy, str] = IterationStrategy.rank,
) -> IterationPlan:
    """Number of circuit runs after which ``H`` is recovered with
    probability at least ``1 - epsilon``:

    * ``rank``: ``rank(G) + ceil(log2(2/epsilon))``
    * ``len``: ``len(G) - len(H) + ceil(log2(1/epsilon))``
    * ``len_unknown_H``: ``len(G) + ceil(log2(1/epsilon))``

    Args:
        group (AbelianGroup): the ambient group
        epsilon (Rational): error probability in (0, 1)
        hidden_length (int, optional): chain length of ``H``, required by
            the ``len`` strategy
        strategy (IterationStrategy, optional): Defaults to ``rank``.

    Raises:
        InvalidInputError: if the length of ``H`` is missing or exceeds
            ``len(G)``
    """
    epsilon = check_epsilon(epsilon)
    try:
        strategy = IterationStrategy(strategy)
    except ValueError as e:
        raise InvalidInputError(f"unknown strategy '{strategy}'") from e
    if hidden_length is not None and not 0 <= hidden_length <= group.length:
        raise InvalidInputError(
            f"len(H) = {hidden_length} must be in [0, {group.length}]"
        )
    if strategy is IterationStrategy.rank:
        k = rank_bound(group.rank, epsilon)
    elif strategy is IterationStrategy.len:
        if hidden_length is None:
            raise InvalidInputError("strategy 'len' needs len(H)")
        k = len_bound(group.length - hidden_length, epsilon)
    else:
        k = len_bound(group.length, epsilon)
    return IterationPlan(strategy=strategy, k=k, epsilon=epsilon)


def prior_iteration_counts(
    group: AbelianGroup, epsilon: Rational
) -> Dict[str, int]:
    """Earlier run counts for the same guarantee: ``floor(4/epsilon) *
    rank(G)`` and ``ceil(log2|G| + log2(1/epsilon) + 2)``."""
    epsilon = check_epsilon(epsilon)
    return {
        "rank_linear": int(4 / epsilon) * group.rank,
        "order_log": pak_bound(group.order, epsilon),
    }


def simulate_ahsp(
    instance: HspInstance,
    plan: Union[IterationPlan, int],
    trials: int,
    seed: int,
) -> SimulationResult:
    """Simulates the full procedure: every trial measures k uniform elements
    of ``H^perp`` and succeeds if the recovered ``A`` equals ``H``. Since
    ``A`` is the orthogonal subgroup of the span of the samples, this holds
    exactly when the samples generate ``H^perp``, which is what the trial
    checks.

    Args:
        instance (HspInstance): group and hidden subgroup
        plan (Union[IterationPlan, int]): a plan or an explicit k
        trials (int): number of trials, at least 1
        seed (int): master seed, see :func:`probability.run_trials
            <genprob.probability.run_trials>`
    """
    if isinstance(plan, IterationPlan):
        k, chosen = plan.k, plan
    else:
        k, chosen = int(plan), None
    if k < 0:
        raise InvalidInputError("k must be non-negative")
    group, hidden = instance.group, instance.hidden
    hperp = orthogonal_subgroup(group, hidden)
    logger.info("H^perp of order %d, %d samples per trial", hperp.order, k)

    def trial(rng: np.random.Generator) -> bool:
        samples = [hperp.sample(rng) for _ in range(k)]
        return Subgroup.from_generators(group, samples).equals(hperp)

    estimate = run_trials(trial, trials, seed)
    return SimulationResult(estimate=estimate, k=k, plan=chosen)


def regev_repetitions(rank: int) -> int:
    """``rank + 2`` random elements of an abelian group generate it with
    probability at least 1/2."""
    if rank < 0:
        raise InvalidInputError("rank must be non-negative")
    return rank + 2


def regev_comparison(n_bits: int) -> Dict[str, int]:
    """Circuit repetitions for factoring an n-bit integer, where the group
    rank is ``ceil(sqrt(n))``: the new count and the earlier ``+4`` one."""
    if n_bits < 1:
        raise InvalidInputError("n_bits must be positive")
    rank = isqrt(n_bits - 1) + 1
    return {
        "rank": rank,
        "repetitions": regev_repetitions(rank),
        "prior_repetitions": rank + 4,
    }
