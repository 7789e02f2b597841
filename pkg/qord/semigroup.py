"""
Value semigroups of quasi-ordinary branches.

For characteristic exponents lambda_1 < ... < lambda_g (product order) and
multiplicity n the semigroup is generated by n*theta_j (j <= r) and the nus
built recursively from the lambdas. The lattices Q_0 = nZ^r and
Q_k = Q_{k-1} + lambda_k Z form the chain whose indices multiply to n.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import (DimensionError, InconsistentMultiplicityError,
                     InputError, InvalidCharacteristicError)
from .lattice import (Exponent, Lattice, add, as_exponent, lattice_index,
                      product_lt, scale, sub, total, unit_vector)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SemigroupData:
    """Generators, indices and lattice chain of a semigroup."""
    r: int
    n: int
    lambdas: Tuple[Exponent, ...]
    nus: Tuple[Exponent, ...]
    indices: Tuple[int, ...]
    lattices: Tuple[Lattice, ...]

    @property
    def g(self) -> int:
        return len(self.lambdas)

    @property
    def lambda1(self) -> Exponent:
        return self.lambdas[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "n": self.n,
            "lambdas": [list(l) for l in self.lambdas],
            "nus": [list(v) for v in self.nus],
            "indices": list(self.indices),
        }


def build_semigroup(r: int, n: int, lambdas: Sequence[Sequence[int]]) -> SemigroupData:
    """
    Build the semigroup data from a multiplicity and characteristic exponents.

    Args:
        r: Number of t-variables
        n: Multiplicity, at least 2
        lambdas: Characteristic exponents, strictly increasing in product order

    Returns:
        The populated SemigroupData

    Raises:
        InvalidCharacteristicError: if the chain is not strict or some
            lambda_j already lies in Q_{j-1}
        InconsistentMultiplicityError: if the indices do not multiply to n
    """
    if r < 1:
        raise InputError(f"dimension must be positive, got {r}")
    if n < 2:
        raise InputError(f"multiplicity must be at least 2, got {n}")
    lams = [as_exponent(l) for l in lambdas]
    if not lams:
        raise InvalidCharacteristicError("at least one characteristic exponent is required")
    for l in lams:
        if len(l) != r:
            raise DimensionError(f"characteristic exponent {l} does not have {r} coordinates")
        if any(x < 0 for x in l):
            raise InvalidCharacteristicError(f"characteristic exponent {l} has a negative coordinate")
    for a, b in zip(lams, lams[1:]):
        if not product_lt(a, b):
            raise InvalidCharacteristicError(f"{a} does not strictly precede {b}")

    nus: List[Exponent] = [unit_vector(j, r, n) for j in range(r)]
    lattices = [Lattice(nus, dim=r)]
    indices: List[int] = []
    for j, lam in enumerate(lams):
        previous = lattices[-1]
        if previous.contains(lam):
            raise InvalidCharacteristicError(f"lambda_{j + 1} = {lam} lies in Q_{j}")
        if j == 0:
            nu = lam
        else:
            nu = add(sub(scale(indices[-1], nus[-1]), lams[j - 1]), lam)
        nus.append(nu)
        current = Lattice(nus, dim=r)
        lattices.append(current)
        indices.append(lattice_index(previous, current))

    product = 1
    for k in indices:
        product *= k
    if product != n:
        raise InconsistentMultiplicityError(
            f"indices {indices} multiply to {product}, not to the multiplicity {n}",
            details={"indices": indices, "n": n})
    logger.debug(f"built semigroup r={r} n={n} nus={nus} indices={indices}")
    return SemigroupData(r=r, n=n, lambdas=tuple(lams), nus=tuple(nus),
                         indices=tuple(indices), lattices=tuple(lattices))


def standard_representation(G: SemigroupData, gamma: Sequence[int], k: Optional[int] = None) -> Optional[List[int]]:
    """
    Standard representation of gamma at level k.

    Args:
        G: Semigroup data
        gamma: Exponent in t-coordinates
        k: Level 0 <= k <= g, defaults to g

    Returns:
        Integers (a_1, ..., a_{r+k}) with gamma = sum a_i nu_i and
        0 <= a_{r+j} < n_j, or None when gamma is not in Q_k
    """
    if k is None:
        k = G.g
    if not 0 <= k <= G.g:
        raise ValueError(f"level {k} outside 0..{G.g}")
    gamma = as_exponent(gamma)
    if len(gamma) != G.r:
        raise DimensionError(f"{gamma} does not have {G.r} coordinates")
    if not G.lattices[k].contains(gamma):
        return None

    tail: List[int] = []
    residual = gamma
    for level in range(k, 0, -1):
        nu = G.nus[G.r + level - 1]
        below = G.lattices[level - 1]
        for a in range(G.indices[level - 1]):
            candidate = sub(residual, scale(a, nu))
            if below.contains(candidate):
                tail.append(a)
                residual = candidate
                break
        else:
            return None
    head = []
    for x in residual:
        if x % G.n:
            return None
        head.append(x // G.n)
    return head + list(reversed(tail))


def recompose(G: SemigroupData, coefficients: Sequence[int]) -> Exponent:
    """Sum of coefficients times generators."""
    result = (0,) * G.r
    for a, nu in zip(coefficients, G.nus):
        result = add(result, scale(a, nu))
    return result


def gamma_member(G: SemigroupData, gamma: Sequence[int]) -> bool:
    """True iff gamma lies in the semigroup."""
    rep = standard_representation(G, gamma, G.g)
    return rep is not None and all(a >= 0 for a in rep[:G.r])


def shifted_sources(G: SemigroupData) -> List[int]:
    """Coordinates i (0-based) with lambda_1i >= n."""
    return [i for i in range(G.r) if G.lambda1[i] >= G.n]


def shift_vector(G: SemigroupData, i: int) -> Exponent:
    """2*lambda_1 - nu_i, the offset of the i-th shifted copy of the semigroup."""
    return sub(scale(2, G.lambda1), G.nus[i])


def eliminable_set_member(G: SemigroupData, gamma: Sequence[int]) -> bool:
    """
    Membership in the semigroup or one of its shifted copies.

    Args:
        G: Semigroup data
        gamma: Exponent

    Returns:
        True if gamma is in the semigroup, or gamma - 2*lambda_1 + nu_i is
        for some i with lambda_1i >= n
    """
    if gamma_member(G, gamma):
        return True
    return any(gamma_member(G, sub(gamma, shift_vector(G, i))) for i in shifted_sources(G))


def quasi_short_violations(G: SemigroupData, support: Iterable[Sequence[int]]) -> Set[Exponent]:
    """Support exponents inside the eliminable set."""
    return {as_exponent(gamma) for gamma in support if eliminable_set_member(G, gamma)}


def multiplicity(G: SemigroupData) -> int:
    """Multiplicity of the hypersurface at the origin."""
    return min(G.n, total(G.lambda1))
