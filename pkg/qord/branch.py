"""
Quasi-ordinary parameterizations H = (t_1^n, ..., t_r^n, S(t)).

Validation extracts the characteristic exponents from the support of S,
and h_star / psi pull polynomials and differential forms in X_1..X_{r+1}
back along H.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (DimensionError, InputError, NotQuasiOrdinaryError,
                     RejectionReport, UnreducedParameterizationError,
                     UnsupportedDimensionError)
from .lattice import (Exponent, Lattice, minimal_antichain, product_le, total,
                      unit_vector)
from .semigroup import SemigroupData, build_semigroup
from .series import FracSeries, euler_derivative, mul

logger = logging.getLogger(__name__)


@dataclass
class Parameterization:
    """A validated parameterization with its semigroup."""
    r: int
    n: int
    series: FracSeries
    semigroup: SemigroupData
    _powers: Dict[int, FracSeries] = field(default_factory=dict, repr=False, compare=False)

    @property
    def trunc(self) -> Optional[int]:
        return self.series.trunc

    @property
    def lambdas(self) -> Tuple[Exponent, ...]:
        return self.semigroup.lambdas

    @property
    def lambda1(self) -> Exponent:
        return self.semigroup.lambda1

    @property
    def g(self) -> int:
        return self.semigroup.g

    def s_power(self, k: int) -> FracSeries:
        """S^k at the parameterization's truncation, cached."""
        if k not in self._powers:
            if k == 0:
                self._powers[0] = FracSeries.constant(1, self.r, self.trunc)
            else:
                self._powers[k] = mul(self.s_power(k - 1), self.series, self.trunc)
        return self._powers[k]


@dataclass
class RForm:
    """
    A differential r-form sum_i h_i dX_1 ^ ... (dX_i omitted) ... ^ dX_{r+1}.

    Each component is a polynomial in X_1..X_{r+1}, stored as a FracSeries in
    r + 1 variables.
    """
    components: List[FracSeries]

    @property
    def r(self) -> int:
        return len(self.components) - 1

    def scale(self, h: FracSeries) -> "RForm":
        return RForm([mul(h, c) for c in self.components])


def dominant_exponent(s: FracSeries) -> Optional[Exponent]:
    """The unique product-order minimum of the support, or None."""
    minimal = minimal_antichain(s.terms)
    if len(minimal) != 1:
        return None
    return minimal[0]


def characteristic_exponents(n: int, S: FracSeries, report: Optional[RejectionReport] = None) -> Optional[List[Exponent]]:
    """
    Extract lambda_1 < ... < lambda_g from the support of S.

    Args:
        n: Multiplicity
        S: The last component of the parameterization
        report: Collects violations; a fresh report when omitted

    Returns:
        The characteristic exponents, or None if extraction failed
    """
    report = report if report is not None else RejectionReport()
    r = S.r
    lattice = Lattice([unit_vector(i, r, n) for i in range(r)], dim=r)
    lambdas: List[Exponent] = []
    support = S.support()
    while True:
        outside = [e for e in support if not lattice.contains(e)]
        if not outside:
            break
        minimal = minimal_antichain(outside)
        if len(minimal) > 1:
            report.add(NotQuasiOrdinaryError,
                       f"incomparable candidate characteristic exponents {[list(m) for m in minimal]} "
                       f"at stage {len(lambdas) + 1}")
            return None
        lambdas.append(minimal[0])
        lattice = lattice.extend(minimal[0])

    if not lambdas:
        report.add(NotQuasiOrdinaryError, "every support exponent lies in nZ^r")
        return None

    base = [unit_vector(i, r, n) for i in range(r)]
    for delta in support:
        allowed = Lattice(base + [l for l in lambdas if product_le(l, delta)], dim=r)
        if not allowed.contains(delta):
            report.add(NotQuasiOrdinaryError,
                       f"support exponent {list(delta)} lies outside its allowed lattice")
    return lambdas


def validate(r: int, n: int, S: FracSeries, trunc: Optional[int] = None) -> Parameterization:
    """
    Check a candidate parameterization and build its semigroup.

    Args:
        r: Number of t-variables
        n: Multiplicity
        S: Last component, a series in r variables
        trunc: Truncation order applied to S

    Returns:
        The validated Parameterization

    Raises:
        QordError: the first violated condition, with every violation listed
            under details["violations"]
    """
    if S.r != r:
        raise DimensionError(f"series in {S.r} variables for r = {r}")
    if trunc is not None:
        S = S.truncate(trunc)

    report = RejectionReport()
    if n < 2:
        report.add(InputError, f"multiplicity must be at least 2, got {n}")
    if S.is_zero():
        report.add(NotQuasiOrdinaryError, "S is zero")
        report.raise_first()
    if S.constant_term():
        report.add(InputError, "S must vanish at the origin")

    common = n
    for e in S.terms:
        for x in e:
            common = gcd(common, x)
    if common > 1:
        report.add(UnreducedParameterizationError,
                   f"n and every support coordinate share the divisor {common}")

    lambdas = characteristic_exponents(n, S, report)
    if report:
        logger.debug(f"rejected parameterization: {report.to_list()}")
        report.raise_first()

    G = build_semigroup(r, n, lambdas)
    return Parameterization(r=r, n=n, series=S, semigroup=G)


def with_series(P: Parameterization, S: FracSeries) -> Parameterization:
    """Revalidate a new last component against the same multiplicity."""
    return validate(P.r, P.n, S)


def is_normalized(P: Parameterization) -> Tuple[bool, List[str]]:
    """
    Check the normalized-form conditions.

    Returns:
        (ok, reasons) where reasons lists "leading-coefficient",
        "column-order" and "axis" for each failed condition
    """
    reasons = []
    lam = P.lambda1
    if dominant_exponent(P.series) != lam or P.series.coefficient(lam) != 1:
        reasons.append("leading-coefficient")
    columns = [tuple(l[i] for l in P.lambdas) for i in range(P.r)]
    if any(columns[i] < columns[i + 1] for i in range(P.r - 1)):
        reasons.append("column-order")
    if all(x == 0 for x in lam[1:]) and lam[0] <= P.n:
        reasons.append("axis")
    return not reasons, reasons


def permute_series(s: FracSeries, order: Sequence[int]) -> FracSeries:
    """Rename variables so that new coordinate k is old coordinate order[k]."""
    return FracSeries._raw({tuple(e[j] for j in order): c for e, c in s.terms.items()},
                           s.r, s.trunc)


def normalize_columns(P: Parameterization) -> Tuple[Parameterization, List[int]]:
    """
    Permute the t-variables so that columns of the characteristic exponents
    decrease lexicographically.

    Returns:
        (normalized parameterization, permutation used)
    """
    columns = [tuple(l[i] for l in P.lambdas) for i in range(P.r)]
    order = sorted(range(P.r), key=lambda i: columns[i], reverse=True)
    if order == list(range(P.r)):
        return P, order
    return validate(P.r, P.n, permute_series(P.series, order)), order


def h_star(P: Parameterization, poly: FracSeries) -> FracSeries:
    """
    Pull a polynomial back along H: X_i -> t_i^n, X_{r+1} -> S.

    Args:
        P: Parameterization
        poly: Polynomial in r + 1 variables; a truncated poly is known up to
            its X-degree truncation

    Returns:
        The pulled back series
    """
    if poly.r != P.r + 1:
        raise DimensionError(f"polynomial in {poly.r} variables for r = {P.r}")
    bound = P.trunc
    if poly.trunc is not None:
        lowest = min(P.n, total(P.lambda1))
        cap = (poly.trunc + 1) * lowest - 1
        bound = cap if bound is None else min(bound, cap)
    s_order = P.series.order() or 0
    result = FracSeries.zero(P.r, bound)
    for e, c in poly.items():
        shift = tuple(P.n * x for x in e[:P.r])
        if bound is not None and total(shift) + e[P.r] * s_order > bound:
            continue
        result = result + P.s_power(e[P.r]).scale(c).shift(shift).truncate(bound)
    return result


def psi(P: Parameterization, omega: RForm) -> FracSeries:
    """
    Pull back an r-form along H and divide by dt_1 ^ dt_2 / (t_1 t_2).

    The wedge of the Euler-derivative rows of the remaining coordinates gives
    the cofactor of each component: -n t_2^n E_1 S, n t_1^n E_2 S and
    n^2 t^(n,n).

    Raises:
        UnsupportedDimensionError: unless r = 2
    """
    if P.r != 2:
        raise UnsupportedDimensionError(f"psi is only available for r = 2, got r = {P.r}")
    if omega.r != P.r:
        raise DimensionError(f"form with {len(omega.components)} components for r = {P.r}")
    n = P.n
    S = P.series
    cofactors = [
        euler_derivative(S, 0).shift((0, n)).scale(-n),
        euler_derivative(S, 1).shift((n, 0)).scale(n),
        FracSeries.monomial((n, n), n * n),
    ]
    result = FracSeries.zero(P.r, P.trunc)
    for h, cofactor in zip(omega.components, cofactors):
        if h.is_zero():
            continue
        result = result + mul(h_star(P, h), cofactor)
    return result


def omega0(P: Parameterization, s1: Fraction, s2: Fraction) -> RForm:
    """
    The form s1 X_1/n dX_2^dX_3 + s2 X_2/n dX_1^dX_3 + c X_3 dX_1^dX_2 whose
    pullback kills the lambda_1 term; c = (s1 lambda_11 - s2 lambda_12)/n^2.
    """
    if P.r != 2:
        raise UnsupportedDimensionError("omega0 is only defined for r = 2")
    n = P.n
    lam = P.lambda1
    return RForm([
        FracSeries.monomial((1, 0, 0), Fraction(s1) / n),
        FracSeries.monomial((0, 1, 0), Fraction(s2) / n),
        FracSeries.monomial((0, 0, 1), (Fraction(s1) * lam[0] - Fraction(s2) * lam[1]) / (n * n)),
    ])
