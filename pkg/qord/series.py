"""
Truncated sparse multivariate power series with exact rational coefficients.

A FracSeries is a map exponent -> Fraction together with a truncation order D:
coefficients are known exactly for every exponent of total degree <= D and
nothing is stored beyond it. A truncation of None marks an exact polynomial.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import integer_nthroot

from .errors import (CompositionError, DimensionError, FieldError,
                     InversionError, NotAUnitError)
from .lattice import Exponent, add, graded_lex_key, total, unit_vector

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


def _min_trunc(*truncs: Optional[int]) -> Optional[int]:
    known = [t for t in truncs if t is not None]
    return min(known) if known else None


def rational_roots(x: Fraction, q: int) -> List[Fraction]:
    """
    All rational q-th roots of x.

    Args:
        x: A rational number
        q: Root degree, q >= 1

    Returns:
        The rational roots (two for even q and positive x, else at most one)
    """
    x = Fraction(x)
    if q == 1:
        return [x]
    if x == 0:
        return [Fraction(0)]
    if x < 0 and q % 2 == 0:
        return []
    num, num_exact = integer_nthroot(abs(x.numerator), q)
    den, den_exact = integer_nthroot(x.denominator, q)
    if not (num_exact and den_exact):
        return []
    root = Fraction(int(num), int(den))
    if x < 0:
        return [-root]
    if q % 2 == 0:
        return [root, -root]
    return [root]


def rational_root(x: Fraction, q: int) -> Fraction:
    """The principal rational q-th root of x, or a field error."""
    roots = rational_roots(x, q)
    if not roots:
        raise FieldError(f"{x} has no rational {q}-th root")
    return roots[0]


class TruncationOrder:
    """Total-degree bound D up to which a series is known exactly."""

    def __init__(self, degree_bound: int):
        if int(degree_bound) < 1:
            raise ValueError(f"truncation order must be at least 1, got {degree_bound}")
        self.degree_bound = int(degree_bound)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncationOrder) and other.degree_bound == self.degree_bound

    def __repr__(self) -> str:
        return f"TruncationOrder({self.degree_bound})"


class FracSeries:
    """
    Sparse truncated power series in r variables over the rationals.
    """

    __slots__ = ("r", "trunc", "terms")

    def __init__(self, terms: Optional[Dict[Exponent, Scalar]] = None, r: int = 1,
                 trunc: Optional[int] = None):
        """
        Initialize a series.

        Args:
            terms: Map from exponent tuples to coefficients
            r: Number of variables
            trunc: Total-degree truncation order, None for exact polynomials
        """
        self.r = r
        self.trunc = trunc
        self.terms: Dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != r:
                raise DimensionError(f"exponent {exp} does not have {r} coordinates")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp} in a power series")
            coef = Fraction(coef)
            if coef and (trunc is None or sum(exp) <= trunc):
                self.terms[exp] = self.terms.get(exp, Fraction(0)) + coef
                if not self.terms[exp]:
                    del self.terms[exp]

    @classmethod
    def _raw(cls, terms: Dict[Exponent, Fraction], r: int, trunc: Optional[int]) -> "FracSeries":
        s = cls.__new__(cls)
        s.r = r
        s.trunc = trunc
        s.terms = terms
        return s

    @classmethod
    def zero(cls, r: int, trunc: Optional[int] = None) -> "FracSeries":
        return cls._raw({}, r, trunc)

    @classmethod
    def constant(cls, value: Scalar, r: int, trunc: Optional[int] = None) -> "FracSeries":
        return cls({(0,) * r: value}, r, trunc)

    @classmethod
    def monomial(cls, exp: Sequence[int], coef: Scalar = 1, trunc: Optional[int] = None) -> "FracSeries":
        return cls({tuple(exp): coef}, len(exp), trunc)

    @classmethod
    def variable(cls, i: int, r: int) -> "FracSeries":
        return cls.monomial(unit_vector(i, r))

    # -- inspection -------------------------------------------------------

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def support(self) -> List[Exponent]:
        """Exponents with nonzero coefficient in graded-lex order."""
        return sorted(self.terms, key=graded_lex_key)

    def items(self) -> List[Tuple[Exponent, Fraction]]:
        return [(e, self.terms[e]) for e in self.support()]

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> Optional[int]:
        """Smallest total degree in the support, None for zero."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def degree(self) -> Optional[int]:
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FracSeries):
            return NotImplemented
        return self.r == other.r and self.trunc == other.trunc and self.terms == other.terms

    def agrees_with(self, other: "FracSeries", degree: Optional[int] = None) -> bool:
        """
        Compare coefficients up to a total degree.

        Args:
            other: Series to compare against
            degree: Bound; defaults to the smaller of the two truncations

        Returns:
            True if every coefficient of degree <= bound matches
        """
        bound = degree if degree is not None else _min_trunc(self.trunc, other.trunc)
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(k) == other.coefficient(k)
                   for k in keys if bound is None or sum(k) <= bound)

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"{c}*t^{list(e)}" for e, c in self.items())
        return f"FracSeries({body}; trunc={self.trunc})"

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "FracSeries"):
        if self.r != other.r:
            raise DimensionError(f"series in {self.r} and {other.r} variables")

    def truncate(self, degree: Optional[int]) -> "FracSeries":
        """Drop everything above a total degree (never raises the truncation)."""
        new_trunc = _min_trunc(self.trunc, degree)
        if new_trunc is None:
            return self.copy()
        return FracSeries._raw({e: c for e, c in self.terms.items() if sum(e) <= new_trunc},
                               self.r, new_trunc)

    def copy(self) -> "FracSeries":
        return FracSeries._raw(dict(self.terms), self.r, self.trunc)

    def __add__(self, other) -> "FracSeries":
        if not isinstance(other, FracSeries):
            other = FracSeries.constant(other, self.r)
        self._check(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        terms = {e: c for e, c in self.terms.items() if trunc is None or sum(e) <= trunc}
        for e, c in other.terms.items():
            if trunc is not None and sum(e) > trunc:
                continue
            value = terms.get(e, Fraction(0)) + c
            if value:
                terms[e] = value
            else:
                terms.pop(e, None)
        return FracSeries._raw(terms, self.r, trunc)

    __radd__ = __add__

    def __neg__(self) -> "FracSeries":
        return FracSeries._raw({e: -c for e, c in self.terms.items()}, self.r, self.trunc)

    def __sub__(self, other) -> "FracSeries":
        if not isinstance(other, FracSeries):
            other = FracSeries.constant(other, self.r)
        return self + (-other)

    def __rsub__(self, other) -> "FracSeries":
        return (-self) + other

    def scale(self, factor: Scalar) -> "FracSeries":
        factor = Fraction(factor)
        if not factor:
            return FracSeries.zero(self.r, self.trunc)
        return FracSeries._raw({e: c * factor for e, c in self.terms.items()}, self.r, self.trunc)

    def __mul__(self, other) -> "FracSeries":
        if not isinstance(other, FracSeries):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other) -> "FracSeries":
        return self.scale(other)

    def shift(self, exp: Sequence[int]) -> "FracSeries":
        """
        Multiply by the monomial t^exp; exp may be negative where the result
        stays a power series. The truncation moves by total(exp).

        Raises:
            ValueError: if a resulting exponent would be negative
        """
        exp = tuple(exp)
        terms = {}
        for e, c in self.terms.items():
            shifted = add(e, exp)
            if any(x < 0 for x in shifted):
                raise ValueError(f"t^{list(e)} * t^{list(exp)} is not a monomial")
            terms[shifted] = c
        trunc = None if self.trunc is None else self.trunc + total(exp)
        return FracSeries._raw(terms, self.r, trunc)

    def divisible_by(self, exp: Sequence[int]) -> bool:
        return all(all(x >= y for x, y in zip(e, exp)) for e in self.terms)

    def power(self, k: int, trunc: Optional[int] = None) -> "FracSeries":
        """Nonnegative integer power by repeated squaring."""
        if k < 0:
            raise ValueError("use rational_power for negative exponents")
        result = FracSeries.constant(1, self.r, _min_trunc(self.trunc, trunc))
        base = self.truncate(trunc)
        while k:
            if k & 1:
                result = mul(result, base, trunc)
            k >>= 1
            if k:
                base = mul(base, base, trunc)
        return result


def _graded(s: FracSeries) -> List[Tuple[int, Exponent, Fraction]]:
    return sorted(((sum(e), e, c) for e, c in s.terms.items()), key=lambda item: item[0])


def mul(a: FracSeries, b: FracSeries, trunc: Optional[int] = None) -> FracSeries:
    """
    Product of two series.

    Args:
        a: First factor
        b: Second factor
        trunc: Optional further truncation of the result

    Returns:
        The product, truncated to the smallest of the operand truncations
    """
    a._check(b)
    bound = _min_trunc(a.trunc, b.trunc, trunc)
    terms: Dict[Exponent, Fraction] = {}
    right = _graded(b)
    for da, ea, ca in _graded(a):
        if bound is not None and da > bound:
            break
        for db, eb, cb in right:
            if bound is not None and da + db > bound:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            terms[e] = terms.get(e, 0) + ca * cb
    return FracSeries._raw({e: c for e, c in terms.items() if c}, a.r, bound)


def rational_power(base: FracSeries, p: int, q: int = 1, trunc: Optional[int] = None) -> FracSeries:
    """
    Binomial expansion of base^(p/q) for a unit base.

    Args:
        base: Series c*(1 + z) with c a nonzero rational and z without constant term
        p: Integer numerator of the exponent
        q: Positive denominator of the exponent
        trunc: Truncation order, required when base is an exact polynomial and
            the exponent is not a nonnegative integer

    Returns:
        The truncated expansion

    Raises:
        NotAUnitError: if base has zero constant term
        FieldError: if c has no rational q-th root
    """
    if q < 1:
        raise ValueError("denominator of a rational power must be positive")
    c = base.constant_term()
    if not c:
        raise NotAUnitError(f"constant term of {base!r} is zero")
    alpha = Fraction(p, q)
    bound = _min_trunc(base.trunc, trunc)
    if bound is None:
        if alpha.denominator == 1 and alpha >= 0:
            return base.power(int(alpha))
        raise ValueError("a truncation order is required for this power of a polynomial")

    if alpha.denominator == 1:
        leading = c ** int(alpha)
    else:
        leading = rational_root(c ** alpha.numerator, alpha.denominator)
    z = base.scale(1 / c) - 1
    z = z.truncate(bound)
    result = FracSeries.constant(1, base.r, bound)
    term = FracSeries.constant(1, base.r, bound)
    binom = Fraction(1)
    k = 0
    # z has no constant term, so z^k vanishes below degree k
    while not term.is_zero() and k < bound:
        k += 1
        binom = binom * (alpha - k + 1) / k
        if not binom:
            break
        term = mul(term, z, bound)
        result = result + term.scale(binom)
        if alpha.denominator == 1 and alpha >= 0 and k >= alpha:
            break
    return result.scale(leading)


def reciprocal(s: FracSeries, trunc: Optional[int] = None) -> FracSeries:
    return rational_power(s, -1, 1, trunc)


def partial_derivative(s: FracSeries, i: int) -> FracSeries:
    """
    Derivative with respect to t_i (0-based); the truncation drops by one.
    """
    if not 0 <= i < s.r:
        raise DimensionError(f"coordinate {i} out of range for {s.r} variables")
    terms = {}
    for e, c in s.terms.items():
        if e[i]:
            terms[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
    trunc = None if s.trunc is None else s.trunc - 1
    return FracSeries._raw(terms, s.r, trunc)


def euler_derivative(s: FracSeries, i: int) -> FracSeries:
    """t_i * d/dt_i, which keeps the truncation order."""
    if not 0 <= i < s.r:
        raise DimensionError(f"coordinate {i} out of range for {s.r} variables")
    return FracSeries._raw({e: c * e[i] for e, c in s.terms.items() if e[i]}, s.r, s.trunc)


def _split_diagonal(maps: Sequence[FracSeries]) -> List[FracSeries]:
    """Units u_i with map_i = t_i * u_i."""
    r = len(maps)
    units = []
    for i, m in enumerate(maps):
        if m.r != r:
            raise DimensionError(f"map {i} is a series in {m.r} variables, expected {r}")
        theta = unit_vector(i, r)
        if not m.divisible_by(theta) or not m.coefficient(theta):
            raise CompositionError(f"map {i} is not of the form t_{i + 1} * unit")
        units.append(m.shift(tuple(-x for x in theta)))
    return units


def substitute_diagonal(s: FracSeries, maps: Sequence[FracSeries],
                        trunc: Optional[int] = None) -> FracSeries:
    """
    Compose s with a diagonal change t_i -> t_i * u_i(t).

    Args:
        s: Series in r variables
        maps: The r image series, each t_i times a unit
        trunc: Optional cap on the result truncation

    Returns:
        s(map_1, ..., map_r). A term t^mu contributes exactly up to
        total(mu) plus the validity of the units it involves, so the result
        truncation is the smallest such bound over the support (capped by
        s's own truncation).

    Raises:
        CompositionError: if a map is not diagonal
    """
    if len(maps) != s.r:
        raise DimensionError(f"{len(maps)} maps for a series in {s.r} variables")
    units = _split_diagonal(maps)
    bound = _min_trunc(s.trunc, trunc)
    for e in s.terms:
        involved = [units[i].trunc for i in range(s.r) if e[i] and units[i].trunc is not None]
        if involved:
            bound = _min_trunc(bound, sum(e) + min(involved))
    powers: List[Dict[int, FracSeries]] = [{0: FracSeries.constant(1, s.r, bound)} for _ in range(s.r)]

    def unit_power(i: int, k: int, cap: Optional[int]) -> FracSeries:
        cache = powers[i]
        if k not in cache:
            previous = unit_power(i, k - 1, cap)
            cache[k] = mul(previous, units[i], bound)
        return cache[k].truncate(cap)

    result = FracSeries.zero(s.r, bound)
    for e, c in s.items():
        if bound is not None and sum(e) > bound:
            break
        cap = None if bound is None else bound - sum(e)
        factor = FracSeries.constant(c, s.r, cap)
        for i in range(s.r):
            if e[i]:
                factor = mul(factor, unit_power(i, e[i], cap), cap)
        result = result + factor.shift(e).truncate(bound)
    result.trunc = bound
    return result


def invert_diagonal(maps: Sequence[FracSeries], trunc: Optional[int] = None) -> List[FracSeries]:
    """
    Compositional inverse of a diagonal map t_i -> t_i * u_i(t).

    The inverse has the form t_i * w_i with w_i = 1 / u_i(t * w); the fixed
    point iteration gains one degree per pass, so the k-th pass only works to
    degree k.

    Args:
        maps: The r image series
        trunc: Optional cap on the precision

    Returns:
        The r inverse maps, valid to the precision of the units plus one

    Raises:
        InversionError: if some unit has zero constant term
    """
    r = len(maps)
    try:
        units = _split_diagonal(maps)
    except CompositionError as e:
        raise InversionError(str(e))
    for i, u in enumerate(units):
        if not u.constant_term():
            raise InversionError(f"map {i} has a non-invertible linear part")
    bound = _min_trunc(*(u.trunc for u in units), trunc)
    if bound is None:
        if all(u.degree() == 0 for u in units):
            return [FracSeries.monomial(unit_vector(i, r), 1 / units[i].constant_term())
                    for i in range(r)]
        raise InversionError("an exact inverse of a nonlinear polynomial map needs a truncation order")

    w = [FracSeries.constant(1 / u.constant_term(), r, 0) for u in units]
    for k in range(1, bound + 1):
        current = [w[i].shift(unit_vector(i, r)) for i in range(r)]
        w = [reciprocal(substitute_diagonal(units[i].truncate(k), current, k), k)
             for i in range(r)]
    inverse = [w[i].shift(unit_vector(i, r)) for i in range(r)]
    logger.debug(f"inverted diagonal map in {r} variables to degree {bound + 1}")
    return inverse
