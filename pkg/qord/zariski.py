"""
Generalized Zariski exponents and the pool they are drawn from.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .branch import Parameterization, is_normalized
from .errors import (NormalizationRequiredError, QordError,
                     TemplateMismatchError, UnsupportedClassError)
from .lattice import (Exponent, add, graded_lex_sorted, minimal_antichain,
                      product_le, product_lt, scale, total)
from .semigroup import SemigroupData, eliminable_set_member

logger = logging.getLogger(__name__)


@dataclass
class ZariskiResult:
    """Zariski exponents of a parameterization; an empty set means none."""
    exponents: List[Exponent]
    is_quasi_short: bool
    violations: List[Exponent]
    valid_degree: Optional[int] = None
    method: str = "direct"
    discrepancy: List[Exponent] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.exponents

    def to_dict(self) -> Dict[str, Any]:
        return {
            "zariski": [list(e) for e in self.exponents],
            "empty": self.empty,
            "quasi_short": self.is_quasi_short,
            "violations": [list(e) for e in self.violations],
            "valid_degree": self.valid_degree,
            "method": self.method,
            "discrepancy": [list(e) for e in self.discrepancy],
        }


def _direct(P: Parameterization) -> ZariskiResult:
    G = P.semigroup
    lam = P.lambda1
    non_eliminable = []
    violations = []
    for delta in P.series.support():
        if delta == lam:
            continue
        if eliminable_set_member(G, delta):
            if product_lt(lam, delta):
                violations.append(delta)
        else:
            non_eliminable.append(delta)
    return ZariskiResult(
        exponents=minimal_antichain(non_eliminable),
        is_quasi_short=not violations,
        violations=graded_lex_sorted(violations),
        valid_degree=P.trunc,
    )


def _require_normalized(P: Parameterization):
    ok, reasons = is_normalized(P)
    if not ok:
        raise NormalizationRequiredError(f"parameterization is not normalized: {', '.join(reasons)}",
                                         details={"reasons": reasons})


def zariski_exponents_via_reduction(P: Parameterization, margin: int = 5,
                                    max_iterations: int = 500) -> ZariskiResult:
    """
    Reduce to quasi-short form first, then read the minima.

    Args:
        P: Normalized parameterization with g = 1
        margin: Degrees below the truncation excluded from comparisons
        max_iterations: Bound on elimination steps

    Returns:
        The result computed on the reduced parameterization
    """
    from .reduce import quasi_short_reduce

    _require_normalized(P)
    reduced, changes = quasi_short_reduce(P, max_iterations=max_iterations)
    result = _direct(reduced)
    result.is_quasi_short = not changes
    result.violations = _direct(P).violations
    result.method = "reduction"
    logger.info(f"reduced in {len(changes)} changes before reading Zariski exponents")
    return result


def zariski_exponents(P: Parameterization, margin: int = 5, max_iterations: int = 500) -> ZariskiResult:
    """
    Compute the generalized Zariski exponents of a normalized parameterization.

    Inputs that are already quasi-short use the support formula directly.
    Otherwise, for g = 1, the reduced parameterization is computed as well
    and the two answers are compared below valid_degree - margin; any
    difference is reported in the discrepancy field.

    Args:
        P: Normalized parameterization
        margin: Safety margin below the truncation
        max_iterations: Bound on elimination steps

    Returns:
        ZariskiResult

    Raises:
        NormalizationRequiredError: if P is not normalized
    """
    _require_normalized(P)
    direct = _direct(P)
    if direct.is_quasi_short or P.g != 1:
        return direct

    try:
        reduced = zariski_exponents_via_reduction(P, margin=margin, max_iterations=max_iterations)
    except QordError as e:
        logger.warning(f"quasi-short reduction failed ({e.code}: {e.message}), using the support formula")
        return direct

    bound = None
    if reduced.valid_degree is not None:
        bound = reduced.valid_degree - margin
    left = {e for e in direct.exponents if bound is None or total(e) <= bound}
    right = {e for e in reduced.exponents if bound is None or total(e) <= bound}
    reduced.discrepancy = graded_lex_sorted(left ^ right)
    if reduced.discrepancy:
        logger.warning(f"Zariski exponents differ before and after reduction at {reduced.discrepancy}")
    return reduced


def _check_plane_monomial(G: SemigroupData):
    if G.r != 2 or G.g != 1:
        raise UnsupportedClassError(f"only r = 2, g = 1 semigroups are supported (r = {G.r}, g = {G.g})")


# offsets (p, q) such that (n-1)*lambda_1 + n*(p, q) is a Zariski triple
_THREE_FAMILIES = [
    [(-4, 2), (-3, 1), (-2, 0)],
    [(-2, 0), (0, -2), (-1, -1)],
    [(-3, 1), (-2, 0), (-1, -1)],
]


def can_admit_three(G: SemigroupData) -> Tuple[bool, Optional[List[Exponent]]]:
    """
    Decide whether a plane monomial semigroup admits three Zariski exponents.

    Args:
        G: Semigroup with r = 2 and g = 1

    Returns:
        (True, witness triple) or (False, None)

    Raises:
        UnsupportedClassError: unless r = 2 and g = 1
        TemplateMismatchError: if a witness fails verification
    """
    _check_plane_monomial(G)
    n = G.n
    if n <= 2:
        return False, None
    swapped = G.lambda1[1] > G.lambda1[0]
    l1, l2 = (G.lambda1[1], G.lambda1[0]) if swapped else G.lambda1
    d = n - 2
    conditions = [
        d * l1 >= 4 * n,
        d * l2 >= 2 * n,
        d * l2 >= n and d * l1 >= 3 * n,
    ]
    for holds, family in zip(conditions, _THREE_FAMILIES):
        if not holds:
            continue
        base = scale(n - 1, (l1, l2))
        triple = [add(base, scale(n, offset)) for offset in family]
        if swapped:
            triple = [(b, a) for a, b in triple]
        _verify_triple(G, triple)
        return True, graded_lex_sorted(triple)
    return False, None


def _verify_triple(G: SemigroupData, triple: Sequence[Exponent]):
    lam = G.lambda1
    for gamma in triple:
        if not product_lt(lam, gamma) or eliminable_set_member(G, gamma):
            raise TemplateMismatchError(f"witness {gamma} is not a Zariski candidate for {G.to_dict()}")
    for a in triple:
        for b in triple:
            if a != b and product_le(a, b):
                raise TemplateMismatchError(f"witnesses {a} and {b} are comparable")


def candidate_zariski_search(G: SemigroupData, box: Optional[int] = None) -> Set[Exponent]:
    """
    Every exponent of the value lattice above lambda_1 of total degree
    <= box outside the eliminable set.

    Args:
        G: Semigroup with r = 2
        box: Degree bound, defaults to 2*(n + total(lambda_1))

    Returns:
        The candidate pool
    """
    if G.r != 2:
        raise UnsupportedClassError(f"candidate search needs r = 2, got r = {G.r}")
    if box is None:
        box = 2 * (G.n + total(G.lambda1))
    lam = G.lambda1
    lattice = G.lattices[G.g]
    xs, ys = np.indices((box + 1, box + 1))
    mask = (xs + ys <= box) & (xs >= lam[0]) & (ys >= lam[1]) & ((xs > lam[0]) | (ys > lam[1]))
    pool = set()
    for x, y in zip(xs[mask].tolist(), ys[mask].tolist()):
        if lattice.contains((x, y)) and not eliminable_set_member(G, (x, y)):
            pool.add((x, y))
    return pool


def find_three_antichain(pool: Set[Exponent]) -> Optional[List[Exponent]]:
    """
    Find three pairwise incomparable plane exponents in a pool.

    Points are ordered by increasing first coordinate (second coordinate
    increasing within ties) and a strictly decreasing run of second
    coordinates of length three is an antichain.
    """
    points = sorted(pool)
    length = [1] * len(points)
    previous: List[Optional[int]] = [None] * len(points)
    for j, (_, yj) in enumerate(points):
        for i in range(j):
            if points[i][1] > yj and points[i][0] < points[j][0] and length[i] + 1 > length[j]:
                length[j] = length[i] + 1
                previous[j] = i
        if length[j] >= 3:
            chain = []
            k: Optional[int] = j
            while k is not None and len(chain) < 3:
                chain.append(points[k])
                k = previous[k]
            return graded_lex_sorted(chain)
    return None
