"""
Integer lattices that contain ``N_1 Z + ... + N_n Z``, kept in Hermite normal
form.

A subgroup of ``Z/N_1 + ... + Z/N_n`` corresponds to exactly one such lattice,
so the Hermite basis is a canonical name for the subgroup.
"""
from __future__ import annotations

from typing import List, Sequence, Tuple

from .helper import xgcd

Basis = Tuple[Tuple[int, ...], ...]


class ModularLattice:
    """Mutable lattice ``L`` with ``diag(moduli) Z^n <= L <= Z^n``.

    The basis is square and upper triangular at all times, because the rows
    ``N_i e_i`` are in the lattice from the start. Entries right of a pivot
    are kept reduced modulo the modulus of their column, which is allowed
    since ``N_c e_c`` lies in the span of rows ``c..n-1``.
    """

    __slots__ = ["moduli", "rows"]

    def __init__(self, moduli: Sequence[int]):
        self.moduli: Tuple[int, ...] = tuple(moduli)
        n = len(self.moduli)
        self.rows: List[List[int]] = [
            [m if i == j else 0 for j in range(n)]
            for i, m in enumerate(self.moduli)
        ]

    @classmethod
    def from_basis(cls, moduli: Sequence[int], basis: Basis) -> ModularLattice:
        """Rebuilds a lattice from a basis produced by :meth:`hermite_basis`."""
        lattice = object.__new__(cls)
        lattice.moduli = tuple(moduli)
        lattice.rows = [list(row) for row in basis]
        return lattice

    def __contains__(self, vec: Sequence[int]) -> bool:
        vec = [v % m for v, m in zip(vec, self.moduli)]
        for j, row in enumerate(self.rows):
            b = vec[j]
            if b == 0:
                continue
            a = row[j]
            if b % a != 0:
                # no pivot below row j can clear column j
                return False
            self._subtract(vec, row, b // a, j)
        return True

    def add_vector(self, vec: Sequence[int]) -> bool:
        """Adds a vector to the lattice.

        Args:
            vec (Sequence[int]): integer vector of the ambient dimension

        Returns:
            bool: True if the lattice grew
        """
        vec = [v % m for v, m in zip(vec, self.moduli)]
        grew = False
        for j, row in enumerate(self.rows):
            b = vec[j]
            if b == 0:
                continue
            a = row[j]
            if b % a == 0:
                self._subtract(vec, row, b // a, j)
                continue
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            for c in range(j, len(vec)):
                ra, vb = row[c], vec[c]
                row[c] = x * ra + y * vb
                vec[c] = ag * vb - bg * ra
            self._reduce_tail(row, j)
            self._reduce_tail(vec, j)
            grew = True
        return grew

    def _subtract(self, vec: List[int], row: List[int], q: int, j: int):
        vec[j] -= q * row[j]
        for c in range(j + 1, len(vec)):
            vec[c] = (vec[c] - q * row[c]) % self.moduli[c]

    def _reduce_tail(self, vec: List[int], j: int):
        for c in range(j + 1, len(vec)):
            vec[c] %= self.moduli[c]

    def pivots(self) -> Tuple[int, ...]:
        """Tuple: diagonal of the basis; each pivot divides its modulus."""
        return tuple(abs(row[j]) for j, row in enumerate(self.rows))

    def hermite_basis(self) -> Basis:
        """Returns the unique Hermite normal form of the lattice: upper
        triangular, positive pivots, and entries above each pivot reduced
        into ``[0, pivot)``.

        Returns:
            Basis: tuple of row tuples
        """
        rows = [list(row) for row in self.rows]
        for j, row in enumerate(rows):
            if row[j] < 0:
                rows[j] = row = [-v for v in row]
                self._reduce_tail(row, j)
        for j in range(len(rows)):
            d = rows[j][j]
            for i in range(j):
                q = rows[i][j] // d
                if q:
                    self._subtract(rows[i], rows[j], q, j)
        return tuple(tuple(row) for row in rows)


def relation_matrix(moduli: Sequence[int], basis: Basis) -> List[List[int]]:
    """Solves ``C B = diag(moduli)`` for the integer matrix ``C``.

    The rows of ``C`` express the rows ``N_i e_i`` in the lattice basis ``B``,
    so ``L / diag(moduli) Z^n`` is presented by the relations ``C``. The
    columns of ``C`` span the orthogonal lattice.

    Args:
        moduli (Sequence[int]): the moduli ``N_i``
        basis (Basis): upper triangular basis ``B`` of a lattice containing
            ``diag(moduli) Z^n``

    Returns:
        List[List[int]]: the upper triangular matrix ``C``
    """
    n = len(moduli)
    relations = []
    for i in range(n):
        coeffs = [0] * n
        for j in range(i, n):
            acc = moduli[i] if i == j else 0
            acc -= sum(coeffs[m] * basis[m][j] for m in range(i, j))
            q, r = divmod(acc, basis[j][j])
            if r:
                raise ArithmeticError("lattice does not contain the moduli")
            coeffs[j] = q
        relations.append(coeffs)
    return relations
