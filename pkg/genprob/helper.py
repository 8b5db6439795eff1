"""
Exact integer and rational helpers shared by the genprob modules.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime

from .errors import InvalidInputError

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

SAMPLING_SLACK_BITS = 64
"""Extra random bits drawn beyond the bit length of a modulus. The modulo bias
of a wide draw is below 2**-SAMPLING_SLACK_BITS."""


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended Euclidean algorithm with a non-negative gcd.

    Args:
        a (int): first integer
        b (int): second integer

    Returns:
        Tuple[int, int, int]: ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b)``

    Examples:
        >>> helper.xgcd(12, 18)
        (-1, 1, 6)
        >>> helper.xgcd(0, -5)
        (0, -1, 5)
    """
    # x * a + y * b == g and next_x * a + next_y * b == next_g throughout
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def ceil_log2(x: Rational) -> int:
    """Smallest integer ``m`` with ``2**m >= x``, computed without floating
    point.

    Args:
        x (Rational): positive int or Fraction

    Raises:
        InvalidInputError: if x is not positive

    Returns:
        int: exact ceiling of the binary logarithm, can be negative

    Examples:
        Exact powers of two are not rounded up.

        >>> helper.ceil_log2(Fraction(4))
        2
        >>> helper.ceil_log2(Fraction(20))
        5
        >>> helper.ceil_log2(Fraction(1, 3))
        -1
    """
    x = Fraction(x)
    if x <= 0:
        raise InvalidInputError("x must be positive")
    num, den = x.numerator, x.denominator
    m = num.bit_length() - den.bit_length()
    while not _pow2_at_least(m, num, den):
        m += 1
    while _pow2_at_least(m - 1, num, den):
        m -= 1
    return m


def _pow2_at_least(m: int, num: int, den: int) -> bool:
    """Whether 2**m >= num/den."""
    if m >= 0:
        return den << m >= num
    return den >= num << -m


def prime_power_parts(n: int) -> List[Tuple[int, int]]:
    """Splits a positive integer into its prime power parts.

    Args:
        n (int): positive integer

    Returns:
        List[Tuple[int, int]]: ``(p, a)`` pairs sorted by prime, empty for 1

    Examples:
        >>> helper.prime_power_parts(12)
        [(2, 2), (3, 1)]
    """
    return sorted((int(p), int(a)) for p, a in factorint(n).items())


def total_exponent(n: int) -> int:
    """Number of prime factors of **n** counted with multiplicity. For the
    order of a finite solvable group this is its chain length.

    Examples:
        >>> helper.total_exponent(12)
        3
        >>> helper.total_exponent(1)
        0
    """
    return sum(int(a) for a in factorint(n).values())


def check_prime(p: int) -> int:
    """Validates that **p** is a prime number and returns it as int."""
    if not isprime(p):
        raise InvalidInputError(f"{p} is not a prime")
    return int(p)


def check_epsilon(epsilon: Rational) -> Fraction:
    """Validates an error probability, which must be an exact rational in
    the open interval (0, 1). Floats are rejected to keep the ceiling
    arithmetic exact.

    Raises:
        InvalidInputError: if epsilon is a float or lies outside (0, 1)
    """
    if isinstance(epsilon, float) or not isinstance(epsilon, (int, Fraction)):
        raise InvalidInputError("epsilon must be an int or Fraction")
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise InvalidInputError("epsilon must be in (0,1)")
    return epsilon


def parse_rational(text: str) -> Fraction:
    """Parses an exact rational written as ``"n"`` or ``"n/d"``. Decimal
    notation is rejected.

    Examples:
        >>> helper.parse_rational("1/10")
        Fraction(1, 10)
        >>> helper.parse_rational("0.1")
        Traceback (most recent call last):
        ...
        genprob.errors.InvalidInputError: '0.1' is not an exact rational n/d
    """
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise InvalidInputError(f"'{text}' is not an exact rational n/d")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise InvalidInputError("denominator must not be zero")
    return Fraction(int(num), int(den) if den is not None else 1)


def draw_below(rng: np.random.Generator, n: int) -> int:
    """Draws an integer from ``[0, n)`` by reducing a wide uniform integer
    modulo **n**. The draw uses ``n.bit_length() + SAMPLING_SLACK_BITS``
    random bits, so the distance to uniform is below ``2**-64`` for any n,
    including moduli beyond machine words.

    Args:
        rng (np.random.Generator): seeded random source
        n (int): positive modulus

    Returns:
        int: nearly uniform integer in ``[0, n)``
    """
    return draw_below_each(rng, [n])[0]


def draw_below_each(
    rng: np.random.Generator, moduli: Sequence[int]
) -> List[int]:
    """One :func:`draw_below` per modulus, all cut from a single byte string
    of the generator.

    Raises:
        InvalidInputError: if a modulus is below 1
    """
    if any(n < 1 for n in moduli):
        raise InvalidInputError("moduli must be positive")
    sizes = [
        (n.bit_length() + SAMPLING_SLACK_BITS + 7) // 8 if n > 1 else 0
        for n in moduli
    ]
    total = sum(sizes)
    data = rng.bytes(total) if total else b""
    draws = []
    start = 0
    for n, size in zip(moduli, sizes):
        chunk = data[start : start + size]
        draws.append(int.from_bytes(chunk, "little") % n if size else 0)
        start += size
    return draws


def rank_mod_p(rows: Iterable[Sequence[int]], p: int) -> int:
    """Rank of integer row vectors over the field ``Z/p``, p prime.

    Examples:
        >>> helper.rank_mod_p([(1, 1), (2, 2)], 3)
        1
        >>> helper.rank_mod_p([(1, 1), (2, 2)], 2)
        1
    """
    pivots: Dict[int, List[int]] = {}
    for row in rows:
        vec = [v % p for v in row]
        for j in range(len(vec)):
            v = vec[j]
            if v == 0:
                continue
            pivot_row = pivots.get(j)
            if pivot_row is None:
                inverse = pow(v, -1, p)
                pivots[j] = [a * inverse % p for a in vec]
                break
            vec = [(a - v * b) % p for a, b in zip(vec, pivot_row)]
    return len(pivots)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Random source of trial **index** under master **seed**. Trials are
    seeded independently, so they may run in any order."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def fraction_to_json(value: Fraction) -> dict:
    """Serializes a rational as decimal strings ``{"num": .., "den": ..}``."""
    value = Fraction(value)
    return {"num": str(value.numerator), "den": str(value.denominator)}


def fraction_from_json(data: dict) -> Fraction:
    """Inverse of :func:`fraction_to_json`."""
    try:
        return Fraction(int(data["num"]), int(data["den"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidInputError(f"invalid rational {data!r}") from e
