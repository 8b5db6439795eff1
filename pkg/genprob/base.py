"""
The core module of genprob: finite abelian groups in elementary divisor form,
their elements, and the Sylow profiles of finite nilpotent groups.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np
import pandas as pd
from sympy import primerange
from sympy.utilities.iterables import partitions

from .errors import InvalidInputError, ResourceLimitError
from .helper import check_prime, draw_below_each, prime_power_parts

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]
"""An element of an :class:`AbelianGroup`: one reduced coordinate per cyclic
factor."""

MAX_ENUMERATION: int = 10**6
"""Largest group order that :meth:`AbelianGroup.elements` will enumerate."""

_PROFILE_ENTRY_RE = re.compile(r"^\s*(\d+)\s*:\s*(\d+)\s*:\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class CyclicFactor:
    """A cyclic factor ``Z/p^a`` of an abelian group."""

    prime: int
    exponent: int

    @property
    def order(self) -> int:
        """int: the modulus ``p^a``"""
        return self.prime**self.exponent

    def __str__(self) -> str:
        return f"Z{self.order}"


@dataclass(frozen=True)
class SylowEntry:
    """Rank and chain length of the Sylow p-subgroup of a nilpotent group."""

    prime: int
    rank: int
    length: int

    def __str__(self) -> str:
        return f"{self.prime}:{self.rank}:{self.length}"


@dataclass(frozen=True)
class NilpotentProfile:
    """The per-prime data of a finite nilpotent group ``G = prod G_p``: for
    each prime ``p`` dividing ``|G|`` the rank and the chain length of the
    Sylow p-subgroup. This is all that the generation probability and both
    sampling bounds depend on.

    Use :meth:`from_entries` or :meth:`from_string` to build a validated
    profile. The empty profile describes the trivial group.

    Examples:
        >>> profile = NilpotentProfile.from_string("2:3:3,5:1:2")
        >>> profile.rank, profile.length
        (3, 5)
    """

    entries: Tuple[SylowEntry, ...] = ()

    def __post_init__(self):
        primes = [entry.prime for entry in self.entries]
        if primes != sorted(set(primes)):
            raise InvalidInputError("primes must be distinct and increasing")
        for entry in self.entries:
            check_prime(entry.prime)
            if entry.rank < 1:
                raise InvalidInputError("sylow rank must be at least 1")
            if entry.length < entry.rank:
                raise InvalidInputError(
                    f"length {entry.length} is below rank {entry.rank} "
                    f"for prime {entry.prime}"
                )

    @classmethod
    def from_entries(
        cls, entries: Iterable[Tuple[int, int, int]]
    ) -> NilpotentProfile:
        """Builds a profile from ``(prime, rank, length)`` triples in any
        order."""
        triples = sorted(tuple(int(v) for v in entry) for entry in entries)
        return cls(tuple(SylowEntry(p, r, ln) for p, r, ln in triples))

    @classmethod
    def from_string(cls, text: str) -> NilpotentProfile:
        """Parses the ``"p:r:l[,p:r:l...]"`` notation. An empty string is the
        trivial group."""
        if not text.strip():
            return cls()
        triples = []
        for part in text.split(","):
            match = _PROFILE_ENTRY_RE.match(part)
            if match is None:
                raise InvalidInputError(f"'{part}' is not of the form p:r:l")
            triples.append(tuple(map(int, match.groups())))
        return cls.from_entries(triples)

    def __str__(self) -> str:
        if not self.entries:
            return f"{self.__class__.__name__}, trivial group"
        return (
            f"{self.__class__.__name__}, rank {self.rank}, "
            f"length {self.length}:\n{self.to_frame()}"
        )

    def to_frame(self) -> pd.DataFrame:
        """pd.DataFrame: one row per prime with its Sylow rank and length."""
        return pd.DataFrame(
            data=[(e.prime, e.rank, e.length) for e in self.entries],
            columns=["prime", "rank", "length"],
        ).set_index("prime")

    @property
    def primes(self) -> List[int]:
        """List: the primes dividing the group order."""
        return [entry.prime for entry in self.entries]

    @property
    def rank(self) -> int:
        """int: rank of the group, the largest Sylow rank (0 if trivial)."""
        return max((entry.rank for entry in self.entries), default=0)

    @property
    def length(self) -> int:
        """int: chain length of the group, the sum of Sylow lengths."""
        return sum(entry.length for entry in self.entries)

    def frattini_quotient(self) -> NilpotentProfile:
        """Profile of ``G / Phi(G)``: the same primes and ranks, each Sylow
        factor elementary abelian."""
        return NilpotentProfile(
            tuple(SylowEntry(e.prime, e.rank, e.rank) for e in self.entries)
        )


@dataclass(frozen=True)
class AbelianGroup:
    """A finite abelian group ``Z/N_1 + ... + Z/N_l`` in elementary divisor
    form, every ``N_i`` a prime power. The factors are sorted by prime and
    exponent; the empty group is the trivial group.

    Start with :meth:`from_divisors`, which accepts any cyclic decomposition
    and splits it into prime powers.

    Examples:
        >>> G = AbelianGroup.from_divisors([12, 2])
        >>> G.moduli
        (2, 4, 3)
        >>> G.order, G.rank, G.length
        (24, 2, 4)
    """

    factors: Tuple[CyclicFactor, ...] = ()

    def __post_init__(self):
        if list(self.factors) != sorted(self.factors):
            raise InvalidInputError("factors must be sorted")
        for factor in self.factors:
            check_prime(factor.prime)
            if factor.exponent < 1:
                raise InvalidInputError("factor exponents must be positive")

    @classmethod
    def from_divisors(cls, divisors: Iterable[int]) -> AbelianGroup:
        """Normalizes the direct sum of cyclic groups ``Z/d`` into elementary
        divisor form by the Chinese remainder theorem.

        Args:
            divisors (Iterable[int]): orders of cyclic summands, each at
                least 2

        Raises:
            InvalidInputError: if a divisor is smaller than 2

        Returns:
            AbelianGroup: the normalized group
        """
        factors = []
        for d in divisors:
            if int(d) != d or d < 2:
                raise InvalidInputError(f"divisor {d} must be an integer >= 2")
            factors.extend(
                CyclicFactor(p, a) for p, a in prime_power_parts(int(d))
            )
        return cls(tuple(sorted(factors)))

    @classmethod
    def elementary(cls, p: int, r: int) -> AbelianGroup:
        """The elementary abelian group ``(Z/p)^r``."""
        return cls(tuple(CyclicFactor(check_prime(p), 1) for _ in range(r)))

    def __str__(self) -> str:
        if not self.factors:
            return "trivial"
        return " x ".join(map(str, self.factors))

    @property
    def moduli(self) -> Tuple[int, ...]:
        """Tuple: the prime power orders ``N_i`` of the cyclic factors."""
        return tuple(factor.order for factor in self.factors)

    @property
    def order(self) -> int:
        """int: number of elements, 1 for the trivial group."""
        return prod(self.moduli)

    @property
    def profile(self) -> NilpotentProfile:
        """NilpotentProfile: see :func:`sylow_profile`."""
        return sylow_profile(self)

    @property
    def rank(self) -> int:
        """int: minimal number of generators."""
        return self.profile.rank

    @property
    def length(self) -> int:
        """int: chain length, the sum of the exponents in ``|G|``."""
        return sum(factor.exponent for factor in self.factors)

    @property
    def zero(self) -> Element:
        """Element: the identity."""
        return (0,) * len(self.factors)

    def validate(self, element: Sequence[int]) -> Element:
        """Validates and reduces an element given as integer sequence.

        Raises:
            InvalidInputError: if the coordinate count does not match

        Returns:
            Element: coordinates reduced modulo each ``N_i``
        """
        element = tuple(int(c) for c in element)
        if len(element) != len(self.factors):
            raise InvalidInputError(
                f"element has {len(element)} coordinates, "
                f"group has {len(self.factors)} factors"
            )
        return tuple(c % n for c, n in zip(element, self.moduli))

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        """Sum of two elements."""
        a, b = self.validate(a), self.validate(b)
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def neg(self, a: Sequence[int]) -> Element:
        """Additive inverse of an element."""
        return tuple(-x % n for x, n in zip(self.validate(a), self.moduli))

    def scale(self, a: Sequence[int], m: int) -> Element:
        """The multiple ``m * a`` for any integer m."""
        return tuple(m * x % n for x, n in zip(self.validate(a), self.moduli))

    def sample(self, rng: np.random.Generator) -> Element:
        """Draws a uniform element; each coordinate is drawn independently
        with :func:`helper.draw_below_each <genprob.helper.draw_below_each>`.

        Args:
            rng (np.random.Generator): seeded random source

        Returns:
            Element: uniform random element
        """
        return tuple(draw_below_each(rng, self.moduli))

    def elements(self, cap: int = MAX_ENUMERATION) -> Iterator[Element]:
        """Iterates all elements once, in lexicographic order.

        Args:
            cap (int, optional): largest order that may be enumerated.
                Defaults to MAX_ENUMERATION.

        Raises:
            ResourceLimitError: if the group order exceeds cap
        """
        if self.order > cap:
            raise ResourceLimitError(
                f"group of order {self.order} exceeds enumeration cap {cap}"
            )
        return itertools.product(*(range(n) for n in self.moduli))


def parse_group(divisors: Iterable[int]) -> AbelianGroup:
    """Shortcut for :meth:`AbelianGroup.from_divisors`."""
    return AbelianGroup.from_divisors(divisors)


def sylow_profile(group: AbelianGroup) -> NilpotentProfile:
    """For each prime p dividing ``|G|``: the Sylow rank is the number of
    factors of that prime and the Sylow length is the sum of their exponents.

    Examples:
        >>> print(sylow_profile(parse_group([12])).entries)
        (SylowEntry(prime=2, rank=1, length=2), SylowEntry(prime=3, ...))
    """
    entries = []
    for p, factors in itertools.groupby(group.factors, key=lambda f: f.prime):
        exponents = [f.exponent for f in factors]
        entries.append(SylowEntry(p, len(exponents), sum(exponents)))
    return NilpotentProfile(tuple(entries))


def frattini_quotient_profile(group: AbelianGroup) -> NilpotentProfile:
    """Profile of ``G / Phi(G)``, which is elementary abelian per prime."""
    return sylow_profile(group).frattini_quotient()


def iter_abelian_groups(order: int) -> Iterator[AbelianGroup]:
    """Iterates every abelian group of the given order up to isomorphism,
    one per multiset of elementary divisors.

    Args:
        order (int): positive group order

    Examples:
        >>> [str(G) for G in iter_abelian_groups(8)]
        ['Z8', 'Z2 x Z4', 'Z2 x Z2 x Z2']
    """
    if order < 1:
        raise InvalidInputError("order must be positive")
    per_prime = []
    for p, a in prime_power_parts(order):
        # partitions() reuses its dict, so expand each one right away
        per_prime.append(
            [
                [CyclicFactor(p, e) for e, m in part.items() for _ in range(m)]
                for part in partitions(a)
            ]
        )
    for choice in itertools.product(*per_prime):
        yield AbelianGroup(tuple(sorted(itertools.chain(*choice))))


def random_abelian_group(
    rng: np.random.Generator,
    max_order: int,
    primes: Sequence[int] = tuple(primerange(2, 98)),
    max_factors: int = 8,
) -> AbelianGroup:
    """Draws a random abelian group of order at most **max_order**. Factors
    ``p^a`` with p from **primes** are added while they fit.

    Args:
        rng (np.random.Generator): seeded random source
        max_order (int): upper bound of the group order
        primes (Sequence[int], optional): candidate primes. Defaults to the
            primes up to 97.
        max_factors (int, optional): number of factor draws. Defaults to 8.
    """
    factors: List[CyclicFactor] = []
    order = 1
    for _ in range(int(rng.integers(0, max_factors + 1))):
        p = int(primes[int(rng.integers(0, len(primes)))])
        # half of the draws use 2, 3 or 5
        if rng.random() < 0.5:
            p = int(primes[int(rng.integers(0, min(3, len(primes))))])
        a = int(rng.integers(1, 4))
        if order * p**a <= max_order:
            factors.append(CyclicFactor(p, a))
            order *= p**a
    return AbelianGroup(tuple(sorted(factors)))


def random_profile(
    rng: np.random.Generator,
    primes: Sequence[int] = tuple(primerange(2, 98)),
    max_rank: int = 8,
    max_length: int = 16,
) -> NilpotentProfile:
    """Draws a random nilpotent profile with rank at most **max_rank** and
    chain length at most **max_length**. The trivial profile is never drawn.
    """
    if max_rank < 1 or max_length < 1:
        raise InvalidInputError("max_rank and max_length must be positive")
    count = int(rng.integers(1, min(len(primes), max_length) + 1))
    chosen = sorted(int(p) for p in rng.choice(primes, count, replace=False))
    budget = max_length
    triples = []
    for p in chosen:
        if budget < 1:
            break
        rank = int(rng.integers(1, min(max_rank, budget) + 1))
        length = int(rng.integers(rank, min(budget, 2 * max_rank) + 1))
        budget -= length
        triples.append((p, rank, length))
    return NilpotentProfile.from_entries(triples)
