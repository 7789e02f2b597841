"""
Integer exponent vectors and sublattices of Z^r.

Exponents are stored in t-coordinates as plain integer tuples. Lattices are
kept in Hermite normal form (row style, positive pivots, entries above each
pivot reduced into [0, pivot)) so that two lattices are equal exactly when
their bases are identical.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from .errors import ContainmentError, DimensionError, InfiniteIndexError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


def as_exponent(values: Iterable[int]) -> Exponent:
    return tuple(int(v) for v in values)


def _check_dims(a: Sequence[int], b: Sequence[int]):
    if len(a) != len(b):
        raise DimensionError(f"exponent lengths differ: {len(a)} != {len(b)}")


def total(a: Sequence[int]) -> int:
    """Total degree of an exponent."""
    return sum(a)


def add(a: Exponent, b: Exponent) -> Exponent:
    _check_dims(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Exponent, b: Exponent) -> Exponent:
    _check_dims(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(k: int, a: Exponent) -> Exponent:
    return tuple(k * x for x in a)


def unit_vector(i: int, r: int, length: int = 1) -> Exponent:
    return tuple(length if j == i else 0 for j in range(r))


def product_le(a: Sequence[int], b: Sequence[int]) -> bool:
    """
    Product order: a precedes b when every coordinate of a is at most b's.

    Args:
        a: First exponent
        b: Second exponent

    Returns:
        True if a_i <= b_i for all i
    """
    _check_dims(a, b)
    return all(x <= y for x, y in zip(a, b))


def product_lt(a: Sequence[int], b: Sequence[int]) -> bool:
    return product_le(a, b) and tuple(a) != tuple(b)


def graded_lex_key(a: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Sort key for the graded lexicographic order (total degree first)."""
    return (sum(a), tuple(a))


def graded_lex_le(a: Sequence[int], b: Sequence[int]) -> bool:
    _check_dims(a, b)
    return graded_lex_key(a) <= graded_lex_key(b)


def graded_lex_sorted(exponents: Iterable[Exponent]) -> List[Exponent]:
    return sorted(exponents, key=graded_lex_key)


def minimal_antichain(exponents: Iterable[Exponent]) -> List[Exponent]:
    """
    Extract the minimal elements of a finite set under the product order.

    Args:
        exponents: Finite collection of exponents

    Returns:
        The minimal elements in graded-lex order; pairwise incomparable
    """
    minimal: List[Exponent] = []
    # Graded-lex order is a linear extension of the product order, so a
    # candidate can only be dominated by something already kept.
    for candidate in graded_lex_sorted(set(exponents)):
        if not any(product_le(m, candidate) for m in minimal):
            minimal.append(candidate)
    return minimal


def _exgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def hermite_reduce(rows: Sequence[Sequence[int]], dim: int) -> Tuple[np.ndarray, np.ndarray, List[int]]:
    """
    Row-style Hermite reduction with a recorded unimodular transform.

    Args:
        rows: Integer row vectors of length dim
        dim: Ambient dimension

    Returns:
        (H, U, pivots) with U @ rows == H, U unimodular, the first len(pivots)
        rows of H in Hermite normal form and the remaining rows zero
    """
    k = len(rows)
    A = np.array([list(row) for row in rows], dtype=object).reshape(k, dim)
    U = np.array([[1 if i == j else 0 for j in range(k)] for i in range(k)], dtype=object).reshape(k, k)
    pivots: List[int] = []
    p = 0
    for col in range(dim):
        if p == k:
            break
        for i in range(p + 1, k):
            if A[i, col] == 0:
                continue
            a, b = A[p, col], A[i, col]
            g, x, y = _exgcd(a, b)
            # [[x, y], [-b/g, a/g]] has determinant 1 and maps (a, b) to (g, 0)
            M = np.array([[x, y], [-(b // g), a // g]], dtype=object)
            A[[p, i]] = M.dot(A[[p, i]])
            U[[p, i]] = M.dot(U[[p, i]])
        if A[p, col] == 0:
            continue
        if A[p, col] < 0:
            A[p] = -A[p]
            U[p] = -U[p]
        for i in range(p):
            q = A[i, col] // A[p, col]
            if q:
                A[i] = A[i] - q * A[p]
                U[i] = U[i] - q * U[p]
        pivots.append(col)
        p += 1
    return A, U, pivots


class Lattice:
    """
    A subgroup of Z^r given by generators, with a canonical Hermite basis.
    """

    def __init__(self, generators: Iterable[Sequence[int]], dim: Optional[int] = None):
        """
        Build a lattice from spanning generators.

        Args:
            generators: Integer vectors spanning the lattice
            dim: Ambient dimension, required when there are no generators
        """
        self.generators: List[Exponent] = [as_exponent(g) for g in generators]
        if dim is None:
            if not self.generators:
                raise DimensionError("dimension required for an empty generator list")
            dim = len(self.generators[0])
        for g in self.generators:
            if len(g) != dim:
                raise DimensionError(f"generator {g} does not have length {dim}")
        self.dim = dim

        if self.generators:
            H, U, pivots = hermite_reduce(self.generators, dim)
        else:
            H = np.zeros((0, dim), dtype=object)
            U = np.zeros((0, 0), dtype=object)
            pivots = []
        rank = len(pivots)
        self.pivots: List[int] = pivots
        self.reduced_basis: List[Exponent] = [as_exponent(H[i]) for i in range(rank)]
        self.transform: List[Tuple[int, ...]] = [as_exponent(U[i]) for i in range(rank)]

    @property
    def rank(self) -> int:
        return len(self.reduced_basis)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Lattice) and self.dim == other.dim
                and self.reduced_basis == other.reduced_basis)

    def __hash__(self):
        return hash((self.dim, tuple(self.reduced_basis)))

    def __repr__(self) -> str:
        return f"Lattice(basis={self.reduced_basis})"

    def basis_coordinates(self, v: Sequence[int]) -> Optional[List[int]]:
        """
        Coordinates of v against the reduced basis, or None when v is outside.

        Args:
            v: Integer vector of the ambient dimension

        Returns:
            Integer coefficients x with v = sum x_j * basis_j, or None
        """
        if len(v) != self.dim:
            raise DimensionError(f"vector {tuple(v)} does not have length {self.dim}")
        residual = list(v)
        coords: List[int] = []
        row = 0
        for col in range(self.dim):
            if row < self.rank and self.pivots[row] == col:
                q, rem = divmod(residual[col], self.reduced_basis[row][col])
                if rem:
                    return None
                coords.append(q)
                basis = self.reduced_basis[row]
                residual = [x - q * y for x, y in zip(residual, basis)]
                row += 1
            elif residual[col] != 0:
                return None
        return coords

    def member(self, v: Sequence[int]) -> Tuple[bool, Optional[List[int]]]:
        """
        Decide membership and produce a witness over the generators.

        Args:
            v: Integer vector

        Returns:
            (True, c) with v = sum c_i * generator_i, or (False, None)
        """
        coords = self.basis_coordinates(v)
        if coords is None:
            return False, None
        witness = [0] * len(self.generators)
        for x, row in zip(coords, self.transform):
            for i, u in enumerate(row):
                witness[i] += x * u
        return True, witness

    def contains(self, v: Sequence[int]) -> bool:
        return self.basis_coordinates(v) is not None

    def extend(self, *vectors: Sequence[int]) -> "Lattice":
        """Lattice spanned by these generators and the given vectors."""
        return Lattice(self.generators + [as_exponent(v) for v in vectors], dim=self.dim)


def lattice_member(L: Lattice, v: Sequence[int]) -> Tuple[bool, Optional[List[int]]]:
    return L.member(v)


def lattice_index(sub_lattice: Lattice, sup_lattice: Lattice) -> int:
    """
    Index |sup : sub| of a sublattice.

    Args:
        sub_lattice: The smaller lattice
        sup_lattice: The larger lattice

    Returns:
        The positive integer index

    Raises:
        ContainmentError: if sub_lattice is not contained in sup_lattice
        InfiniteIndexError: if the ranks differ
    """
    if sub_lattice.dim != sup_lattice.dim:
        raise DimensionError("lattices live in different dimensions")
    for g in sub_lattice.reduced_basis:
        if not sup_lattice.contains(g):
            raise ContainmentError(f"{g} is not in {sup_lattice!r}")
    if sub_lattice.rank != sup_lattice.rank:
        raise InfiniteIndexError(f"rank {sub_lattice.rank} sublattice of a rank {sup_lattice.rank} lattice")
    if sub_lattice.rank == 0:
        return 1
    coordinates = Matrix([sup_lattice.basis_coordinates(g) for g in sub_lattice.reduced_basis])
    return abs(int(coordinates.det()))
