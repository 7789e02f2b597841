"""
Admissible coordinate changes and the elimination of terms.

A change is sigma_i = a_i X_i + P_i on the target (i <= r + 1) together with
the source change rho determined by sigma_i(H) = rho_i^n. Applying it to H
gives (t_1^n, ..., t_r^n, sigma_{r+1}(H) o rho^{-1}).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, Rational

from .branch import Parameterization, dominant_exponent, h_star, validate
from .errors import (CompositionError, ConstraintError, ConvergenceError,
                     FieldError, InadmissibleChangeError, IndependenceError,
                     InputError, NormalizationRequiredError,
                     NotEliminableError, UnsupportedError)
from .lattice import (Exponent, add, graded_lex_key, hermite_reduce,
                      product_le, product_lt, scale, sub, total, unit_vector)
from .semigroup import (gamma_member, quasi_short_violations, shift_vector,
                        shifted_sources, standard_representation)
from .series import (FracSeries, invert_diagonal, mul, rational_power,
                     rational_roots, substitute_diagonal)

logger = logging.getLogger(__name__)
transcript = logging.getLogger("qord.transcript")


def ceiling_vector(n: int, lambda1: Sequence[int]) -> Exponent:
    """(ceil(lambda_11 / n), ..., ceil(lambda_1r / n))."""
    return tuple(-(-x // n) for x in lambda1)


@dataclass
class CoordinateChange:
    """
    Target change sigma_i = a_i X_i + P_i, i = 1..r+1.

    The P_i are polynomials in X_1..X_{r+1} stored as FracSeries in r + 1
    variables. roots holds c_i with c_i^n = a_i when known.
    """
    a: List[Fraction]
    P: List[FracSeries]
    alpha: Exponent
    roots: Optional[List[Fraction]] = None
    kind: str = "general"
    target: Optional[Exponent] = None

    @property
    def r(self) -> int:
        return len(self.a) - 1

    def is_homothety(self) -> bool:
        return all(p.is_zero() for p in self.P)

    def is_identity(self) -> bool:
        return self.is_homothety() and all(x == 1 for x in self.a)


def identity_change(P: Parameterization) -> CoordinateChange:
    r = P.r
    return CoordinateChange(
        a=[Fraction(1)] * (r + 1),
        P=[FracSeries.zero(r + 1) for _ in range(r + 1)],
        alpha=ceiling_vector(P.n, P.lambda1),
        roots=[Fraction(1)] * r,
        kind="identity",
    )


def homothety_change(P: Parameterization, roots: Sequence[Fraction], a_last: Fraction) -> CoordinateChange:
    """Homothety rho_i = c_i t_i, sigma_i = c_i^n X_i, sigma_{r+1} = a_last X_{r+1}."""
    roots = [Fraction(c) for c in roots]
    if len(roots) != P.r or any(c == 0 for c in roots) or Fraction(a_last) == 0:
        raise InputError("a homothety needs r nonzero roots and a nonzero last coefficient")
    return CoordinateChange(
        a=[c ** P.n for c in roots] + [Fraction(a_last)],
        P=[FracSeries.zero(P.r + 1) for _ in range(P.r + 1)],
        alpha=ceiling_vector(P.n, P.lambda1),
        roots=roots,
        kind="homothety",
    )


def inverse_homothety(C: CoordinateChange) -> CoordinateChange:
    if not C.is_homothety() or C.roots is None:
        raise UnsupportedError("only homotheties with known roots are inverted")
    return CoordinateChange(
        a=[1 / x for x in C.a],
        P=[p.copy() for p in C.P],
        alpha=C.alpha,
        roots=[1 / c for c in C.roots],
        kind="homothety",
    )


def decompose(C: CoordinateChange, n: int, lambda1: Sequence[int]) -> List[Tuple[FracSeries, FracSeries]]:
    """
    Split each P_i (i <= r) as X_i eps_i + X_{r+1} eta_i and check P_{r+1}.

    Returns:
        The (eps_i, eta_i) pairs for i <= r

    Raises:
        ConstraintError: if a term fits neither part, or eta_i is nonzero
            while lambda_1i < n
    """
    r = C.r
    width = r + 1
    last = unit_vector(r, width)
    parts = []
    for i, poly in enumerate(C.P[:r]):
        if poly.r != width:
            raise ConstraintError(f"P_{i + 1} is not a polynomial in {width} variables")
        theta = unit_vector(i, width)
        eps, eta = {}, {}
        for e, c in poly.terms.items():
            if e[i] >= 1 and total(e) > 1:
                eps[sub(e, theta)] = c
            elif e[r] >= 1:
                if lambda1[i] < n:
                    raise ConstraintError(f"P_{i + 1} has an X_{r + 1} term but lambda_1{i + 1} < n")
                eta[sub(e, last)] = c
            else:
                raise ConstraintError(f"term X^{list(e)} of P_{i + 1} is not admissible")
        parts.append((FracSeries(eps, width), FracSeries(eta, width)))

    poly = C.P[r]
    if poly.r != width:
        raise ConstraintError(f"P_{r + 1} is not a polynomial in {width} variables")
    for e in poly.terms:
        if e[r] >= 1 and total(e) > 1:
            continue
        if all(e[j] >= C.alpha[j] for j in range(r)) and any(e[:r]):
            continue
        raise ConstraintError(f"term X^{list(e)} of P_{r + 1} is not admissible")
    return parts


def apply_change(P: Parameterization, C: CoordinateChange, verify: bool = True) -> Parameterization:
    """
    Transform a parameterization by an admissible change.

    Args:
        P: Parameterization
        C: Change satisfying the admissibility constraints for (n, lambda_1)
        verify: Check that sigma_i(H) = rho_i^n for i <= r

    Returns:
        The transformed, revalidated parameterization

    Raises:
        ConstraintError: if C violates the constraints
        InadmissibleChangeError: if some unit would need negative exponents
        FieldError: if some a_i has no rational n-th root
        CompositionError: if the first r components do not come out as t_i^n
    """
    r, n = P.r, P.n
    if C.r != r:
        raise ConstraintError(f"change for r = {C.r} applied to r = {r}")
    if any(x == 0 for x in C.a):
        raise ConstraintError("linear coefficients must be nonzero")
    if C.is_identity():
        return P
    parts = decompose(C, n, P.lambda1)

    roots = list(C.roots) if C.roots is not None else []
    if not roots:
        for i in range(r):
            options = rational_roots(C.a[i], n)
            if not options:
                raise FieldError(f"a_{i + 1} = {C.a[i]} has no rational {n}-th root")
            roots.append(options[0])
    for i in range(r):
        if roots[i] ** n != C.a[i]:
            raise FieldError(f"root {roots[i]} does not satisfy c^{n} = {C.a[i]}")

    G = P.series.scale(C.a[r])
    if not C.P[r].is_zero():
        G = G + h_star(P, C.P[r])

    units: List[FracSeries] = []
    for i, (eps, eta) in enumerate(parts):
        if eps.is_zero() and eta.is_zero():
            units.append(FracSeries.constant(roots[i], r))
            continue
        if P.trunc is None:
            raise InputError("a truncation order is required for a nonlinear change")
        quotient = h_star(P, eps) if not eps.is_zero() else FracSeries.zero(r, P.trunc)
        if not eta.is_zero():
            try:
                reduced = P.series.shift(tuple(-x for x in P.semigroup.nus[i]))
            except ValueError:
                raise InadmissibleChangeError(f"S is not divisible by t_{i + 1}^{n}")
            quotient = quotient + mul(reduced, h_star(P, eta))
        base = quotient.scale(1 / C.a[i]) + 1
        unit = rational_power(base, 1, n).scale(roots[i])
        if verify and not unit.power(n).agrees_with(quotient + C.a[i], unit.trunc):
            raise CompositionError(f"rho_{i + 1}^{n} does not reproduce sigma_{i + 1}(H)")
        units.append(unit)

    if all(u.trunc is None and u.degree() == 0 for u in units):
        scaled = [FracSeries.monomial(unit_vector(i, r), 1 / roots[i]) for i in range(r)]
        S2 = G if all(c == 1 for c in roots) else substitute_diagonal(G, scaled)
    else:
        rho = [units[i].shift(unit_vector(i, r)) for i in range(r)]
        inverse = invert_diagonal(rho, trunc=P.trunc)
        S2 = substitute_diagonal(G, inverse, P.trunc)
    result = validate(r, n, S2)
    logger.debug(f"applied {C.kind} change, truncation {P.trunc} -> {result.trunc}")
    return result


def _first_change_below(P: Parameterization, P1: Parameterization, gamma: Exponent) -> Optional[Exponent]:
    key = graded_lex_key(gamma)
    bound = P1.trunc
    for e in sorted(set(P.series.terms) | set(P1.series.terms), key=graded_lex_key):
        if graded_lex_key(e) >= key or (bound is not None and total(e) > bound):
            break
        if P.series.coefficient(e) != P1.series.coefficient(e):
            return e
    return None


def _solve_scalar(P: Parameterization, build: Callable[[Fraction], CoordinateChange],
                  gamma: Exponent, c0: Fraction, residual_iterations: int) -> Tuple[Parameterization, CoordinateChange]:
    """
    Find c with coefficient zero at gamma after applying build(c).

    Starts from the first-order guess c0 and refines by secant steps through
    the residual, using c = 0 (no change) as the second point.
    """
    c_prev, res_prev = Fraction(0), P.series.coefficient(gamma)
    c = Fraction(c0)
    for step in range(residual_iterations + 1):
        change = build(c)
        P1 = apply_change(P, change)
        if P1.trunc is not None and total(gamma) > P1.trunc:
            raise NotEliminableError(f"{list(gamma)} lies beyond the valid degree {P1.trunc}")
        moved = _first_change_below(P, P1, gamma)
        if moved is not None:
            raise NotEliminableError(f"eliminating {list(gamma)} changes the coefficient at {list(moved)}",
                                     details={"moved": list(moved)})
        res = P1.series.coefficient(gamma)
        if res == 0:
            transcript.info(f"eliminated {list(gamma)} with {change.kind} change, c = {c}, steps = {step + 1}")
            return P1, change
        if res == res_prev:
            break
        c_next = c - res * (c - c_prev) / (res - res_prev)
        c_prev, res_prev, c = c, res, c_next
        logger.debug(f"residual {res} at {list(gamma)}, next c = {c}")
    raise ConvergenceError(f"residual at {list(gamma)} did not vanish after {residual_iterations} corrections")


def _monomial_exponent(rep: Sequence[int], r: int) -> Exponent:
    """X-exponent (a_1, ..., a_r, a_{r+1}) of a standard representation."""
    return tuple(rep[:r + 1])


def eliminate_term(P: Parameterization, gamma: Sequence[int],
                   residual_iterations: int = 8) -> Tuple[Parameterization, CoordinateChange]:
    """
    Remove the term t^gamma from S.

    A gamma in the semigroup is removed by sigma_{r+1} = X_{r+1} - c m(X)
    with m the monomial of value gamma. A gamma = delta + 2 lambda_1 - nu_i
    with delta in the semigroup is removed by sigma_i = X_i + c X_{r+1} m_delta(X).

    Args:
        P: Parameterization with g = 1
        gamma: Support exponent strictly above lambda_1 in the eliminable set
        residual_iterations: Bound on scalar corrections

    Returns:
        (new parameterization, change used)

    Raises:
        UnsupportedError: if g != 1
        NotEliminableError: if gamma is not eliminable
    """
    if P.g != 1:
        raise UnsupportedError("term elimination is only available for g = 1")
    gamma = tuple(gamma)
    G = P.semigroup
    r, n = P.r, P.n
    lam = P.lambda1
    if not product_lt(lam, gamma):
        raise NotEliminableError(f"{list(gamma)} does not lie strictly above lambda_1 = {list(lam)}")
    b_gamma = P.series.coefficient(gamma)
    if not b_gamma:
        raise NotEliminableError(f"{list(gamma)} is not in the support")
    b = P.series.coefficient(lam)
    alpha = ceiling_vector(n, lam)

    if gamma_member(G, gamma):
        exp = _monomial_exponent(standard_representation(G, gamma), r)

        def build(c: Fraction) -> CoordinateChange:
            P_list = [FracSeries.zero(r + 1) for _ in range(r)]
            P_list.append(FracSeries.monomial(exp, -c))
            return CoordinateChange(a=[Fraction(1)] * (r + 1), P=P_list, alpha=alpha,
                                    roots=[Fraction(1)] * r, kind="semigroup", target=gamma)

        return _solve_scalar(P, build, gamma, b_gamma / b ** exp[r], residual_iterations)

    for i in shifted_sources(G):
        delta = sub(gamma, shift_vector(G, i))
        if not gamma_member(G, delta):
            continue
        exp = _monomial_exponent(standard_representation(G, delta), r)
        term = add(exp, unit_vector(r, r + 1))
        e_delta = b ** exp[r]

        def build(c: Fraction, i=i, term=term) -> CoordinateChange:
            P_list = [FracSeries.zero(r + 1) for _ in range(r + 1)]
            P_list[i] = FracSeries.monomial(term, c)
            return CoordinateChange(a=[Fraction(1)] * (r + 1), P=P_list, alpha=alpha,
                                    roots=[Fraction(1)] * r, kind="shifted", target=gamma)

        c0 = n * b_gamma / (lam[i] * b * b * e_delta)
        return _solve_scalar(P, build, gamma, c0, residual_iterations)

    raise NotEliminableError(f"{list(gamma)} is outside the eliminable set")


def _to_fraction(x) -> Fraction:
    return Fraction(str(Rational(x)))


def _tail_weights(P: Parameterization, delta: Exponent, exponents: Sequence[Exponent]) -> List[Fraction]:
    """Weights w with w.(delta - lambda_1) = 1 and w.(d - lambda_1) = 0 for the other exponents."""
    lam = P.lambda1
    others = [d for d in exponents if d != delta]
    rows = [sub(delta, lam)] + [sub(d, lam) for d in others]
    rhs = [1] + [0] * len(others)
    A = Matrix(rows)
    try:
        solution, params = A.gauss_jordan_solve(Matrix(rhs))
        solution = solution.subs({p: 0 for p in params})
        return [_to_fraction(x) for x in solution]
    except ValueError:
        v = sub(delta, lam)
        norm = sum(x * x for x in v)
        return [Fraction(x, norm) for x in v]


def _tail_change(P: Parameterization, eps_exp: Exponent, weights: Sequence[Fraction],
                 c: Fraction, order: int, target: Exponent) -> CoordinateChange:
    r, n = P.r, P.n
    width = r + 1
    P_list = []
    for i in range(r):
        coef = c * weights[i]
        if coef:
            P_list.append(FracSeries.monomial(add(eps_exp, unit_vector(i, width)), coef))
        else:
            P_list.append(FracSeries.zero(width))
    # F(z) = prod_i (1 + c w_i z)^(lambda_1i / n), a series in one variable
    F = FracSeries.constant(1, 1, order)
    for i in range(r):
        factor = FracSeries({(0,): 1, (1,): c * weights[i]}, 1)
        F = mul(F, rational_power(factor, P.lambda1[i], n, trunc=order), order)
    last = {}
    for (k,), f in F.terms.items():
        if k == 0:
            continue
        last[add(scale(k, eps_exp), unit_vector(r, width))] = f
    P_list.append(FracSeries(last, width))
    return CoordinateChange(a=[Fraction(1)] * (r + 1), P=P_list, alpha=ceiling_vector(n, P.lambda1),
                            roots=[Fraction(1)] * r, kind="zariski-tail", target=target)


def eliminate_zariski_tail(P: Parameterization, gamma: Sequence[int], exponents: Sequence[Exponent],
                           residual_iterations: int = 8) -> Tuple[Parameterization, CoordinateChange]:
    """
    Remove a term t^gamma with gamma = delta + beta, delta a Zariski exponent
    and beta a nonzero semigroup element.

    The source is rescaled by (1 + c w_i m_beta(H))^(1/n) with weights w
    that isolate delta among the Zariski exponents, and X_{r+1} is rescaled
    to keep the t^lambda_1 term.

    Args:
        P: Quasi-short parameterization with g = 1
        gamma: Support exponent to remove
        exponents: The Zariski exponents of P

    Returns:
        (new parameterization, change used)

    Raises:
        NotEliminableError: if no decomposition of gamma yields a change that
            keeps every smaller coefficient
    """
    if P.g != 1:
        raise UnsupportedError("tail elimination is only available for g = 1")
    gamma = tuple(gamma)
    G = P.semigroup
    n = P.n
    b_gamma = P.series.coefficient(gamma)
    if not b_gamma:
        raise NotEliminableError(f"{list(gamma)} is not in the support")
    b = P.series.coefficient(P.lambda1)
    last_error: Optional[NotEliminableError] = None
    for delta in sorted(exponents, key=graded_lex_key):
        if delta == gamma or not product_le(delta, gamma):
            continue
        beta = sub(gamma, delta)
        if not gamma_member(G, beta):
            continue
        eps_exp = _monomial_exponent(standard_representation(G, beta), P.r)
        weights = _tail_weights(P, delta, exponents)
        order = (P.trunc // total(beta) + 1) if P.trunc is not None else total(gamma)
        e0 = b ** eps_exp[P.r]
        c0 = n * b_gamma / (e0 * P.series.coefficient(delta))

        def build(c: Fraction, eps_exp=eps_exp, weights=weights, order=order) -> CoordinateChange:
            return _tail_change(P, eps_exp, weights, c, order, gamma)

        try:
            return _solve_scalar(P, build, gamma, c0, residual_iterations)
        except NotEliminableError as e:
            last_error = e
    if last_error is not None:
        raise last_error
    raise NotEliminableError(f"{list(gamma)} is not a Zariski exponent plus a semigroup element")


def quasi_short_reduce(P: Parameterization, max_iterations: int = 500,
                       residual_iterations: int = 8) -> Tuple[Parameterization, List[CoordinateChange]]:
    """
    Eliminate eliminable terms in graded-lex order until none is left.

    Returns:
        (quasi-short parameterization, changes applied in order)

    Raises:
        ConvergenceError: if the least offending exponent fails to increase
            or the iteration bound is hit
    """
    if P.g != 1:
        raise UnsupportedError("quasi-short reduction is only available for g = 1")
    if dominant_exponent(P.series) != P.lambda1:
        raise NormalizationRequiredError("lambda_1 must be the dominant exponent of S")
    changes: List[CoordinateChange] = []
    current = P
    last: Optional[Exponent] = None
    for _ in range(max_iterations):
        lam = current.lambda1
        above = [e for e in current.series.support() if product_lt(lam, e)]
        violations = quasi_short_violations(current.semigroup, above)
        if not violations:
            logger.info(f"quasi-short after {len(changes)} changes")
            return current, changes
        gamma = min(violations, key=graded_lex_key)
        if last is not None and graded_lex_key(gamma) <= graded_lex_key(last):
            raise ConvergenceError(f"no progress: {list(gamma)} after {list(last)}")
        current, change = eliminate_term(current, gamma, residual_iterations)
        changes.append(change)
        last = gamma
    raise ConvergenceError(f"still not quasi-short after {max_iterations} changes")


def _solve_monomial_system(hermite: np.ndarray, values: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """
    Solve prod_{m <= j} z_m^H[m][j] = values[j] for rational z, backtracking
    over the signs of even roots.
    """
    k = len(values)

    def search(j: int, z: List[Fraction]) -> Optional[List[Fraction]]:
        if j == k:
            return z
        known = Fraction(1)
        for m in range(j):
            known *= z[m] ** int(hermite[m, j])
        for root in rational_roots(values[j] / known, int(hermite[j, j])):
            if root == 0:
                continue
            found = search(j + 1, z + [root])
            if found is not None:
                return found
        return None

    return search(0, [])


def normalize_coefficients(P: Parameterization, targets: Sequence[Sequence[int]] = ()
                           ) -> Tuple[Parameterization, Optional[Dict[str, Any]]]:
    """
    Rescale by a homothety so that lambda_1 and each target have coefficient 1.

    Args:
        P: Parameterization
        targets: Support exponents with linearly independent shifts d - lambda_1

    Returns:
        (rescaled parameterization, None) when rational scalars exist, else
        (P unchanged, certificate listing the equations c^(d - lambda_1) = value)

    Raises:
        IndependenceError: if the shifts are linearly dependent
    """
    r = P.r
    lam = P.lambda1
    targets = [tuple(t) for t in targets]
    b = P.series.coefficient(lam)
    shifts = [sub(t, lam) for t in targets]
    values = []
    for t in targets:
        coef = P.series.coefficient(t)
        if not coef:
            raise InputError(f"{list(t)} is not in the support")
        values.append(coef / b)
    if shifts and Matrix(shifts).rank() != len(shifts):
        raise IndependenceError(f"shifts {[list(v) for v in shifts]} are linearly dependent")

    if shifts:
        H, U, pivots = hermite_reduce([[v[i] for v in shifts] for i in range(r)], len(shifts))
        z = _solve_monomial_system(H, values)
        if z is None:
            certificate = {
                "independent_shifts": [list(v) for v in shifts],
                "equations": [{"shift": list(v), "value": str(x)} for v, x in zip(shifts, values)],
                "hermite": [[int(x) for x in H[m]] for m in range(len(shifts))],
                "reason": "the homothety scalars are not rational",
            }
            logger.info(f"coefficients at {targets} are not rationally normalizable")
            return P, certificate
        z = z + [Fraction(1)] * (r - len(z))
        roots = []
        for i in range(r):
            c = Fraction(1)
            for m in range(r):
                c *= z[m] ** int(U[m, i])
            roots.append(c)
    else:
        roots = [Fraction(1)] * r

    a_last = Fraction(1)
    for c, x in zip(roots, lam):
        a_last *= c ** x
    a_last /= b
    change = homothety_change(P, roots, a_last)
    transcript.info(f"normalized coefficients at {[list(t) for t in targets]} with roots {roots}")
    return apply_change(P, change), None


_SMALL_ROOTS = [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(-2, 3)]
_SMALL_COEFS = [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3), Fraction(-3, 2)]


def random_admissible_change(P: Parameterization, seed: Optional[int] = None, max_terms: int = 4) -> CoordinateChange:
    """
    Draw an admissible change preserving the normalized t^lambda_1 term.

    The homothety part keeps the lambda_1 coefficient; up to max_terms
    low-degree terms are added to the P_i.
    """
    rng = np.random.default_rng(seed)
    r, n = P.r, P.n
    width = r + 1
    lam = P.lambda1
    alpha = ceiling_vector(n, lam)
    roots = [_SMALL_ROOTS[int(rng.integers(len(_SMALL_ROOTS)))] for _ in range(r)]
    a_last = Fraction(1)
    for c, x in zip(roots, lam):
        a_last *= c ** x

    choices: List[Tuple[int, Exponent]] = []
    last = unit_vector(r, width)
    for i in range(r):
        theta = unit_vector(i, width)
        for j in range(width):
            choices.append((i, add(theta, unit_vector(j, width))))
        if lam[i] >= n:
            choices.append((i, last))
    for j in range(width):
        choices.append((r, add(last, unit_vector(j, width))))
    choices.append((r, tuple(alpha) + (0,)))

    polys: List[Dict[Exponent, Fraction]] = [{} for _ in range(width)]
    count = int(rng.integers(0, max_terms + 1))
    for k in rng.choice(len(choices), size=min(count, len(choices)), replace=False):
        i, exp = choices[int(k)]
        polys[i][exp] = _SMALL_COEFS[int(rng.integers(len(_SMALL_COEFS)))]
    return CoordinateChange(
        a=[c ** n for c in roots] + [a_last],
        P=[FracSeries(p, width) for p in polys],
        alpha=alpha,
        roots=roots,
        kind="random",
    )
