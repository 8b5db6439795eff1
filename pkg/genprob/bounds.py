"""
Sample counts that make k random elements generate a finite nilpotent group
with probability at least ``1 - epsilon``: the rank and chain length bounds,
the order-based comparator, the exact minimum, and witnesses that the bounds
cannot be lowered by much.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional

import pandas as pd

from .base import AbelianGroup, NilpotentProfile
from .errors import GuaranteeError, InvalidInputError, ResourceLimitError
from .helper import Rational, ceil_log2, check_epsilon, fraction_to_json
from .probability import phi_p_rank, phi_profile

logger = logging.getLogger(__name__)


def rank_bound(rank: int, epsilon: Rational) -> int:
    """``rank + ceil(log2(2/epsilon))`` samples suffice.

    Examples:
        >>> rank_bound(3, Fraction(1, 2))
        5
        >>> rank_bound(0, Fraction(1, 10))
        5
    """
    epsilon = check_epsilon(epsilon)
    _check_count(rank, "rank")
    return rank + ceil_log2(2 / epsilon)


def len_bound(length: int, epsilon: Rational) -> int:
    """``length + ceil(log2(1/epsilon))`` samples suffice.

    Examples:
        >>> len_bound(0, Fraction(1, 3))
        2
    """
    epsilon = check_epsilon(epsilon)
    _check_count(length, "length")
    return length + ceil_log2(1 / epsilon)


def pak_bound(group_order: int, epsilon: Rational) -> int:
    """The order-based count ``ceil(log2|G| + 2 + log2(1/epsilon))`` valid
    for every finite group, i.e. ``ceil(log2(4 |G| / epsilon))``.

    Examples:
        >>> pak_bound(6, Fraction(1, 4))
        7
    """
    epsilon = check_epsilon(epsilon)
    if group_order < 1:
        raise InvalidInputError("group order must be positive")
    return ceil_log2(4 * group_order / epsilon)


def _check_count(value: int, name: str):
    if value < 0:
        raise InvalidInputError(f"{name} must be non-negative")


def min_k_exact(
    profile: NilpotentProfile, epsilon: Rational, limit: int = 10**4
) -> int:
    """Smallest k with ``phi_k >= 1 - epsilon``. Since ``phi_k`` grows with
    k, scanning upward from the rank finds it.

    Args:
        profile (NilpotentProfile): the group
        epsilon (Rational): error probability in (0, 1)
        limit (int, optional): safety stop of the scan. Defaults to 10**4.
    """
    epsilon = check_epsilon(epsilon)
    target = 1 - epsilon
    k = profile.rank
    while phi_profile(profile, k).value < target:
        k += 1
        if k > profile.rank + limit:
            raise ResourceLimitError("phi did not reach the target")
    return k


@dataclass(frozen=True)
class BoundReport:
    """All sample counts for one group and error probability.

    ``pak_bound_k`` is only known for concrete groups, since a profile does
    not determine the group order. ``phi_at_each`` maps every computed bound
    name to the exact probability at that k.
    """

    epsilon: Fraction
    rank_bound_k: int
    len_bound_k: int
    pak_bound_k: Optional[int] = None
    exact_min_k: Optional[int] = None
    phi_at_each: Dict[str, Fraction] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "epsilon": fraction_to_json(self.epsilon),
            "rank_bound_k": self.rank_bound_k,
            "len_bound_k": self.len_bound_k,
            "pak_bound_k": self.pak_bound_k,
            "exact_min_k": self.exact_min_k,
            "phi_at_each": {
                name: fraction_to_json(value)
                for name, value in self.phi_at_each.items()
            },
        }


def bound_report(
    profile: NilpotentProfile,
    epsilon: Rational,
    group_order: Optional[int] = None,
    exact: bool = True,
) -> BoundReport:
    """Evaluates both sufficient bounds, the order-based comparator when the
    group order is given, and optionally the exact minimum.

    Raises:
        GuaranteeError: if phi falls short of ``1 - epsilon`` at a bound
    """
    epsilon = check_epsilon(epsilon)
    counts = {
        "rank_bound": rank_bound(profile.rank, epsilon),
        "len_bound": len_bound(profile.length, epsilon),
    }
    if group_order is not None:
        counts["pak_bound"] = pak_bound(group_order, epsilon)
    if exact:
        counts["exact_min_k"] = min_k_exact(profile, epsilon)
    phis = {name: phi_profile(profile, k).value for name, k in counts.items()}
    for name in ("rank_bound", "len_bound"):
        if phis[name] < 1 - epsilon:
            raise GuaranteeError(
                f"phi_{counts[name]} = {phis[name]} is below 1 - {epsilon}"
            )
    return BoundReport(
        epsilon=epsilon,
        rank_bound_k=counts["rank_bound"],
        len_bound_k=counts["len_bound"],
        pak_bound_k=counts.get("pak_bound"),
        exact_min_k=counts.get("exact_min_k"),
        phi_at_each=phis,
    )


def group_bound_report(
    group: AbelianGroup, epsilon: Rational, exact: bool = True
) -> BoundReport:
    """:func:`bound_report` of a concrete abelian group."""
    return bound_report(group.profile, epsilon, group.order, exact=exact)


def lower_bound_chain(profile: NilpotentProfile, k: int) -> Dict[str, Fraction]:
    """The successively weaker lower bounds of ``phi_k`` behind the two
    sufficient bounds, each clamped at 0:

    * ``rank_uniform``: ``prod_p phi_k((Z/p)^r)`` with the overall rank r
    * ``rank_union``: ``1 - sum_p 1 / (p^(k-r) (p-1))``
    * ``length_worst``: ``phi_k((Z/2)^len)``
    * ``length_union``: ``1 - (2^len - 1) / 2^k``

    Every entry is at most ``phi_k`` of the profile.
    """
    r, length = profile.rank, profile.length
    uniform = Fraction(1)
    union = Fraction(1)
    for p in profile.primes:
        uniform *= phi_p_rank(p, r, k)
        union -= Fraction(1, p ** (k - r) * (p - 1)) if k >= r else 1
    return {
        "rank_uniform": uniform,
        "rank_union": max(union, Fraction(0)),
        "length_worst": phi_p_rank(2, length, k),
        "length_union": max(1 - Fraction(2**length - 1, 2**k), Fraction(0)),
    }


@dataclass(frozen=True)
class TightnessWitness:
    """A group and a sample count just below a bound at which the generation
    probability is still below ``1 - epsilon``."""

    mode: str
    group: AbelianGroup
    k: int
    phi: Fraction
    epsilon: Fraction

    @property
    def claim_holds(self) -> bool:
        """bool: ``phi < 1 - epsilon``"""
        return self.phi < 1 - self.epsilon

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "divisors": list(self.group.moduli),
            "k": self.k,
            "phi": fraction_to_json(self.phi),
            "epsilon": fraction_to_json(self.epsilon),
            "claim_holds": self.claim_holds,
        }


def tightness_witness(
    mode: str, size: int, epsilon: Rational
) -> TightnessWitness:
    """Evaluates ``phi_k((Z/2)^size)`` at the reduced count
    ``size + ceil(log2(1/epsilon)) - 2`` (mode ``len``) or
    ``size + ceil(log2(2/epsilon)) - 3`` (mode ``rank``), clamped at 0.

    Args:
        mode (str): ``"len"`` or ``"rank"``
        size (int): rank and length of the witness group, at least 1
        epsilon (Rational): error probability in (0, 1)
    """
    epsilon = check_epsilon(epsilon)
    if size < 1:
        raise InvalidInputError("size must be at least 1")
    if mode == "len":
        k = len_bound(size, epsilon) - 2
    elif mode == "rank":
        k = rank_bound(size, epsilon) - 3
    else:
        raise InvalidInputError(f"mode must be 'len' or 'rank', not '{mode}'")
    k = max(k, 0)
    return TightnessWitness(
        mode=mode,
        group=AbelianGroup.elementary(2, size),
        k=k,
        phi=phi_p_rank(2, size, k),
        epsilon=epsilon,
    )


def tightness_table(
    sizes: Iterable[int], epsilons: Iterable[Rational]
) -> pd.DataFrame:
    """Sweeps :func:`tightness_witness` over sizes, error probabilities and
    both modes.

    Returns:
        pd.DataFrame: columns mode, size, epsilon, k, phi, claim_holds
    """
    epsilons = list(epsilons)
    rows = []
    for size in sizes:
        for epsilon in epsilons:
            for mode in ("len", "rank"):
                witness = tightness_witness(mode, size, epsilon)
                rows.append(
                    {
                        "mode": mode,
                        "size": size,
                        "epsilon": str(witness.epsilon),
                        "k": witness.k,
                        "phi": float(witness.phi),
                        "claim_holds": witness.claim_holds,
                    }
                )
    return pd.DataFrame(rows)
