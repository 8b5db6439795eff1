"""
Subgroups of finite abelian groups, named by the Hermite normal form of their
lattice.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .base import MAX_ENUMERATION, AbelianGroup, Element, parse_group
from .errors import InvalidInputError, ResourceLimitError
from .helper import draw_below_each, rank_mod_p, total_exponent
from .lattice import Basis, ModularLattice, relation_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup ``H`` of an abelian group ``G = Z/N_1 + ... + Z/N_l``.

    ``H`` is stored as the Hermite basis of the lattice
    ``L = span(generators) + span(N_i e_i)``. The basis is canonical, so two
    subgroups of the same group are equal exactly when their bases are equal.

    Build subgroups with :meth:`from_generators`, :meth:`trivial` or
    :meth:`full`.

    Examples:
        >>> G = parse_group([4])
        >>> H = Subgroup.from_generators(G, [(2,)])
        >>> H.order, H.contains((1,))
        (2, False)
    """

    ambient: AbelianGroup
    basis: Basis

    @classmethod
    def from_generators(
        cls, ambient: AbelianGroup, generators: Iterable[Sequence[int]]
    ) -> Subgroup:
        """The subgroup generated by **generators**; the trivial subgroup if
        there are none.

        Args:
            ambient (AbelianGroup): the group containing the generators
            generators (Iterable[Sequence[int]]): elements of **ambient**
        """
        lattice = ModularLattice(ambient.moduli)
        for g in generators:
            lattice.add_vector(ambient.validate(g))
        return cls(ambient, lattice.hermite_basis())

    @classmethod
    def trivial(cls, ambient: AbelianGroup) -> Subgroup:
        return cls.from_generators(ambient, [])

    @classmethod
    def full(cls, ambient: AbelianGroup) -> Subgroup:
        n = len(ambient.moduli)
        return cls.from_generators(
            ambient, [tuple(int(i == j) for j in range(n)) for i in range(n)]
        )

    def __str__(self) -> str:
        return (
            f"{self.__class__.__name__} of order {self.order} "
            f"in {self.ambient}, {self.structure}"
        )

    def _lattice(self) -> ModularLattice:
        return ModularLattice.from_basis(self.ambient.moduli, self.basis)

    def _check_ambient(self, other: Subgroup):
        if self.ambient != other.ambient:
            raise InvalidInputError("subgroups live in different groups")

    @property
    def pivots(self) -> Tuple[int, ...]:
        """Tuple: diagonal of the Hermite basis."""
        return tuple(row[j] for j, row in enumerate(self.basis))

    @property
    def order(self) -> int:
        """int: ``|G| / det(basis)``, a divisor of ``|G|``."""
        return self.ambient.order // prod(self.pivots)

    @property
    def generators(self) -> List[Element]:
        """List: the non-zero basis rows reduced into the ambient group.
        They generate the subgroup."""
        gens = [self.ambient.validate(row) for row in self.basis]
        return [g for g in gens if any(g)]

    @property
    def is_full(self) -> bool:
        """bool: whether the subgroup is the whole ambient group."""
        return self.order == self.ambient.order

    def contains(self, element: Sequence[int]) -> bool:
        """Exact membership test by reduction against the Hermite basis."""
        return self.ambient.validate(element) in self._lattice()

    def equals(self, other: Subgroup) -> bool:
        """Set equality of two subgroups of the same group.

        Raises:
            InvalidInputError: if the ambient groups differ
        """
        self._check_ambient(other)
        return self.basis == other.basis

    def join(self, generators: Iterable[Sequence[int]]) -> Subgroup:
        """The subgroup generated by this one and further elements."""
        lattice = self._lattice()
        for g in generators:
            lattice.add_vector(self.ambient.validate(g))
        return Subgroup(self.ambient, lattice.hermite_basis())

    def relations(self) -> List[List[int]]:
        """Relation matrix of the subgroup in terms of its basis, see
        :func:`lattice.relation_matrix <genprob.lattice.relation_matrix>`."""
        return relation_matrix(self.ambient.moduli, self.basis)

    def invariant_factors(self) -> List[int]:
        """Orders of the cyclic factors of the subgroup read off the Smith
        form of its relation matrix, units dropped."""
        if not self.basis:
            return []
        snf = smith_normal_form(Matrix(self.relations()), domain=ZZ)
        diagonal = [abs(int(snf[i, i])) for i in range(snf.rows)]
        return sorted(d for d in diagonal if d > 1)

    def elementary_divisors(self) -> List[int]:
        """Prime power orders of the cyclic factors of the subgroup."""
        return list(self.as_group().moduli)

    def as_group(self) -> AbelianGroup:
        """AbelianGroup: the subgroup as an abstract group in elementary
        divisor form."""
        return parse_group(self.invariant_factors())

    @property
    def structure(self) -> str:
        """str: isomorphism type, e.g. ``Z2 x Z4``."""
        return str(self.as_group())

    @property
    def rank(self) -> int:
        """int: minimal number of generators of the subgroup."""
        return self.as_group().rank

    @property
    def length(self) -> int:
        """int: chain length of the subgroup."""
        return total_exponent(self.order)

    def _steps(self) -> List[int]:
        return [n // d for n, d in zip(self.ambient.moduli, self.pivots)]

    def _combine(self, coeffs: Sequence[int]) -> Element:
        vec = [0] * len(self.basis)
        for c, row in zip(coeffs, self.basis):
            if c:
                for j in range(len(vec)):
                    vec[j] += c * row[j]
        return self.ambient.validate(vec)

    def sample(self, rng: np.random.Generator) -> Element:
        """Draws a uniform element of the subgroup.

        The elements are exactly the combinations ``sum c_j b_j`` of the
        basis rows with ``0 <= c_j < N_j / pivot_j``, each hit once, so
        drawing the ``c_j`` uniformly gives a uniform element.
        """
        return self._combine(draw_below_each(rng, self._steps()))

    def elements(self, cap: int = MAX_ENUMERATION) -> Iterator[Element]:
        """Iterates the elements of the subgroup once each.

        Raises:
            ResourceLimitError: if the subgroup order exceeds cap
        """
        if self.order > cap:
            raise ResourceLimitError(
                f"subgroup of order {self.order} exceeds enumeration cap {cap}"
            )
        for coeffs in itertools.product(*(range(s) for s in self._steps())):
            yield self._combine(coeffs)


def subgroup_from_generators(
    group: AbelianGroup, generators: Iterable[Sequence[int]]
) -> Subgroup:
    """Shortcut for :meth:`Subgroup.from_generators`."""
    return Subgroup.from_generators(group, generators)


def subgroup_contains(subgroup: Subgroup, element: Sequence[int]) -> bool:
    return subgroup.contains(element)


def subgroups_equal(first: Subgroup, second: Subgroup) -> bool:
    return first.equals(second)


def subgroup_is_full(subgroup: Subgroup) -> bool:
    return subgroup.is_full


def generates(group: AbelianGroup, elements: Iterable[Sequence[int]]) -> bool:
    """Whether **elements** generate **group**, decided in the Frattini
    quotient ``G / Phi(G)``: for every prime p the residues mod p of the
    p-coordinates must span ``(Z/p)^rank_p``.

    Examples:
        >>> G = parse_group([4, 3])
        >>> generates(G, [(2, 1)]), generates(G, [(1, 1)])
        (False, True)
    """
    elements = [group.validate(x) for x in elements]
    for p, factors in itertools.groupby(
        enumerate(group.factors), key=lambda item: item[1].prime
    ):
        columns = [i for i, _ in factors]
        rows = ([x[i] for i in columns] for x in elements)
        if rank_mod_p(rows, p) < len(columns):
            return False
    return True


def iter_subgroups(
    group: AbelianGroup, cap: int = MAX_ENUMERATION
) -> Iterator[Subgroup]:
    """Enumerates all subgroups of a small group by brute force: starting
    from the trivial subgroup, every known subgroup is extended by every
    element until no new span appears.

    Args:
        group (AbelianGroup): the ambient group
        cap (int, optional): enumeration cap of the group. Defaults to
            MAX_ENUMERATION.
    """
    elements = list(group.elements(cap=cap))
    seen = {Subgroup.trivial(group)}
    frontier = list(seen)
    while frontier:
        found = []
        for subgroup in frontier:
            for g in elements:
                if subgroup.contains(g):
                    continue
                bigger = subgroup.join([g])
                if bigger not in seen:
                    seen.add(bigger)
                    found.append(bigger)
        frontier = found
    logger.debug("%s has %d subgroups", group, len(seen))
    return iter(sorted(seen, key=lambda s: (s.order, s.basis)))
