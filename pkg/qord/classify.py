"""
Quasi-simple classification of plane (r = 2) monomial (g = 1) classes.

A class is given by (n, lambda_1) with semigroup <(n,0), (0,n), lambda_1>.
The decision follows the case list a, b, c1-c3, d1-d4, e, f; normal forms
are written as lambda_1 plus exponents k*lambda_1 + n*(p, q) from a small
set of families per case.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from tqdm import tqdm

from .branch import Parameterization, is_normalized, validate
from .errors import (IndependenceError, InconsistentMultiplicityError,
                     NormalizationRequiredError, NotEliminableError,
                     TemplateMismatchError, UnsupportedClassError,
                     ConvergenceError)
from .lattice import (Exponent, add, graded_lex_key, graded_lex_sorted,
                      minimal_antichain, product_lt, scale, total)
from .reduce import (CoordinateChange, eliminate_term, eliminate_zariski_tail,
                     normalize_coefficients, quasi_short_reduce)
from .semigroup import (SemigroupData, build_semigroup, eliminable_set_member,
                        standard_representation)
from .series import FracSeries
from .zariski import (can_admit_three, candidate_zariski_search,
                      find_three_antichain)

logger = logging.getLogger(__name__)

Slot = Union[int, Tuple[str, int]]


@dataclass(init=False)
class TopClass:
    """A topological class (n, lambda_1), column-normalized."""
    n: int
    lambda1: Exponent
    swapped: bool = False

    def __init__(self, n: int, lambda1: Sequence[int]):
        lam = tuple(int(x) for x in lambda1)
        if len(lam) != 2:
            raise UnsupportedClassError(f"only plane classes are supported, got {list(lam)}")
        self.swapped = lam[1] > lam[0]
        self.n = int(n)
        self.lambda1 = (lam[1], lam[0]) if self.swapped else lam
        if self.n < 2 or sum(self.lambda1) < 1:
            raise UnsupportedClassError(f"invalid class n = {n}, lambda_1 = {list(lam)}")
        if gcd(gcd(self.n, self.lambda1[0]), self.lambda1[1]) != 1:
            raise UnsupportedClassError(
                f"<({n},0),(0,{n}),{list(self.lambda1)}> is not the semigroup of a degree {n} branch")
        if self.lambda1[1] == 0 and self.lambda1[0] <= self.n:
            raise NormalizationRequiredError(f"axis condition fails: {self.lambda1[0]} <= n = {self.n}")

    @property
    def normalized(self) -> bool:
        return not self.swapped

    @property
    def semigroup(self) -> SemigroupData:
        try:
            return build_semigroup(2, self.n, [self.lambda1])
        except InconsistentMultiplicityError as e:
            raise UnsupportedClassError(e.message)


def consistent_class(n: int, lambda1: Sequence[int]) -> bool:
    """True when (n, lambda_1) is a normalized class with n_1 = n."""
    l1, l2 = lambda1
    if n < 2 or l1 < l2 or l1 + l2 < 1:
        return False
    if gcd(gcd(n, l1), l2) != 1:
        return False
    return not (l2 == 0 and l1 <= n)


def case_label(n: int, lambda1: Sequence[int]) -> Optional[str]:
    """Case of the quasi-simple list containing a normalized class, or None."""
    l1, l2 = lambda1
    if n == 2:
        return "a"
    if (l1, l2) == (1, 1):
        return "b"
    if n == 3:
        if 1 <= l2 <= l1 <= 5 and l1 >= 2 and (l1, l2) != (3, 3):
            return "c1"
        if 1 <= l2 <= 5 < l1 <= 8 and (l1, l2) != (6, 3):
            return "c2"
        if 0 <= l2 <= 2 and 9 <= l1 <= 11 and (l1, l2) != (9, 0):
            return "c3"
    if n == 4:
        if (l1, l2) in ((2, 1), (3, 1)):
            return "d1"
        if 2 <= l2 <= l1 <= 3 and (l1, l2) != (2, 2):
            return "d2"
        if l2 in (1, 2, 3) and l1 in (4, 5) and (l1, l2) != (4, 2):
            return "d3"
        if l2 in (0, 1) and l1 in (6, 7) and (l1, l2) != (6, 0):
            return "d4"
    if n == 5 and (l1, l2) in ((2, 1), (3, 1), (2, 2)):
        return "e"
    if n in (6, 7) and (l1, l2) == (2, 1):
        return "f"
    return None


@dataclass(frozen=True)
class Family:
    """Exponents k*lambda_1 + n*(p, q); a slot is fixed or (parameter, lower bound)."""
    flag: str
    k: int
    p: Slot
    q: Slot

    def match(self, rep: Sequence[int]) -> Optional[Dict[str, int]]:
        a1, a2, k = rep
        if k != self.k:
            return None
        found = {}
        for slot, value in ((self.p, a1), (self.q, a2)):
            if isinstance(slot, tuple):
                name, low = slot
                if value < low:
                    return None
                found[name] = value
            elif slot != value:
                return None
        return found

    def exponent(self, n: int, lambda1: Exponent, params: Dict[str, int]) -> Exponent:
        p = params[self.p[0]] if isinstance(self.p, tuple) else self.p
        q = params[self.q[0]] if isinstance(self.q, tuple) else self.q
        return add(scale(self.k, lambda1), (n * p, n * q))


def families(n: int, lambda1: Sequence[int], case: str) -> List[Family]:
    """The normal form families of a case."""
    l1, l2 = lambda1
    if case in ("a", "b"):
        return []
    if case == "c1":
        return [] if l2 <= 2 else [Family("a", 2, -1, -1)]
    if case == "c2":
        if l2 <= 2:
            return [Family("a", 2, -2, ("i", 0))]
        return [Family("a", 2, -1, -1), Family("b", 2, -2, ("i", -1))]
    if case == "c3":
        return [Family("a", 2, -2, ("i", 0)), Family("b", 2, -3, ("j", 0))]
    if case == "d1":
        return [Family("a", 3, -1, ("i", 0))]
    if case == "d2":
        return [Family("a", 3, -1, -1), Family("b", 3, ("i", 0), -1), Family("c", 3, -1, ("j", 0))]
    if case == "d3":
        if l2 == 1:
            return [Family("a", 3, -2, ("i", 0))]
        return [Family("a", 3, -2, ("i", -1)), Family("b", 3, ("j", -1), -1)]
    if case == "d4":
        return [Family("a", 3, -2, ("i", 0)), Family("b", 3, -3, ("j", 0))]
    if case == "e":
        if (l1, l2) == (2, 1):
            return [Family("a", 4, -1, ("i", 0))]
        if (l1, l2) == (3, 1):
            return [Family("a", 4, -1, ("i", 0)), Family("b", 3, -1, ("j", 0))]
        return [Family("a", 4, -1, -1), Family("b", 4, ("i", 0), -1), Family("c", 4, -1, ("j", 0))]
    if case == "f":
        return [Family("a", n - 1, -1, ("i", 0)), Family("b", n - 2, -1, ("j", 0))]
    raise UnsupportedClassError(f"unknown case {case!r}")


def side_conditions_hold(case: str, lambda1: Sequence[int], params: Dict[str, int]) -> bool:
    """
    Side conditions between flags and parameters. Each one says two present
    exponents must be incomparable.
    """
    a, b, c = params.get("a", 0), params.get("b", 0), params.get("c", 0)
    i, j = params.get("i"), params.get("j")
    if case in ("c3", "d4") and a and b:
        return i < j
    if case == "f" or (case == "e" and tuple(lambda1) == (3, 1)):
        if a and b:
            return j > i
    if case == "d2" or (case == "e" and tuple(lambda1) == (2, 2)):
        if a and (b or c):
            return False
    if case in ("c2", "d3") and a and b:
        return params.get("i") != -1
    return True


@dataclass
class Verdict:
    """Quasi-simplicity decision for a class."""
    n: int
    lambda1: Exponent
    quasi_simple: bool
    case: Optional[str] = None
    reason: Optional[str] = None
    witness: Optional[List[Exponent]] = None
    audit: bool = False

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "n": self.n,
            "lambda1": list(self.lambda1),
            "quasi_simple": self.quasi_simple,
            "case": self.case,
            "reason": self.reason,
        }
        if self.witness:
            result["witness"] = [list(w) for w in self.witness]
        if self.audit:
            result["audit"] = True
        return result


def is_quasi_simple(T: TopClass, box: Optional[int] = None) -> Verdict:
    """
    Decide quasi-simplicity of a class.

    Args:
        T: Topological class
        box: Degree bound for the witness search when no closed-form
            witness applies

    Returns:
        Verdict with the case label, or the rejection reason
    """
    G = T.semigroup
    label = case_label(T.n, T.lambda1)
    if label is not None:
        return Verdict(T.n, T.lambda1, True, case=label)
    if (T.n, T.lambda1) == (5, (5, 1)):
        return Verdict(T.n, T.lambda1, False, reason="two_exponent_moduli")
    admits, witness = can_admit_three(G)
    if admits:
        return Verdict(T.n, T.lambda1, False, reason="three_zariski_witness", witness=witness)
    triple = find_three_antichain(candidate_zariski_search(G, box))
    if triple is not None:
        return Verdict(T.n, T.lambda1, False, reason="three_zariski_witness", witness=triple)
    logger.info(f"class n={T.n} lambda1={list(T.lambda1)} is outside the case list without a witness")
    return Verdict(T.n, T.lambda1, False, reason="not_in_case_list", audit=True)


@dataclass
class NormalForm:
    """Result of reducing a parameterization to its normal form."""
    verdict: Verdict
    case_label: Optional[str] = None
    parameters: Dict[str, int] = field(default_factory=dict)
    series: Optional[Parameterization] = None
    certificate: Optional[Dict[str, Any]] = None
    changes: List[CoordinateChange] = field(default_factory=list)
    valid_degree: Optional[int] = None


def match_template(P: Parameterization, case: str, exponents: Sequence[Exponent]) -> Dict[str, int]:
    """
    Read flags and parameters from the Zariski exponents.

    Raises:
        TemplateMismatchError: if an exponent fits no family or the side
            conditions fail
    """
    G = P.semigroup
    fams = families(P.n, P.lambda1, case)
    params: Dict[str, int] = {f.flag: 0 for f in fams}
    used = set()
    for delta in graded_lex_sorted(exponents):
        rep = standard_representation(G, delta)
        for fam in fams:
            if fam.flag in used:
                continue
            found = fam.match(rep)
            if found is not None:
                used.add(fam.flag)
                params[fam.flag] = 1
                params.update(found)
                break
        else:
            raise TemplateMismatchError(f"Zariski exponent {list(delta)} fits no family of case {case}",
                                        details={"exponent": list(delta), "case": case})
    if not side_conditions_hold(case, P.lambda1, params):
        raise TemplateMismatchError(f"parameters {params} violate the side conditions of case {case}")
    return params


def _zariski_set(P: Parameterization) -> List[Exponent]:
    G = P.semigroup
    return minimal_antichain(e for e in P.series.support()
                             if e != P.lambda1 and not eliminable_set_member(G, e))


def normal_form(P: Parameterization, margin: int = 5, max_iterations: int = 500,
                residual_iterations: int = 8) -> NormalForm:
    """
    Reduce a normalized plane parameterization with g = 1 to its normal form.

    Args:
        P: Normalized parameterization
        margin: Degrees below the truncation left out of the result
        max_iterations: Bound on elimination steps
        residual_iterations: Bound on scalar corrections per step

    Returns:
        NormalForm; for a class that is not quasi-simple only the verdict is set

    Raises:
        UnsupportedClassError: unless r = 2 and g = 1
        NormalizationRequiredError: if P is not normalized
        TemplateMismatchError: if the reduction gets stuck or the result fits
            no template of the case
    """
    if P.r != 2 or P.g != 1:
        raise UnsupportedClassError(f"normal forms need r = 2 and g = 1 (r = {P.r}, g = {P.g})")
    ok, reasons = is_normalized(P)
    if not ok:
        raise NormalizationRequiredError(f"parameterization is not normalized: {', '.join(reasons)}",
                                         details={"reasons": reasons})
    verdict = is_quasi_simple(TopClass(P.n, P.lambda1))
    if not verdict.quasi_simple:
        return NormalForm(verdict=verdict, series=P, valid_degree=P.trunc)

    current, changes = quasi_short_reduce(P, max_iterations=max_iterations,
                                          residual_iterations=residual_iterations)
    bound = None if current.trunc is None else current.trunc - margin
    last: Optional[Exponent] = None
    for _ in range(max_iterations):
        exponents = _zariski_set(current)
        lam = current.lambda1
        pending = [e for e in current.series.support()
                   if product_lt(lam, e) and e not in exponents
                   and (bound is None or total(e) <= bound)]
        if not pending:
            break
        gamma = min(pending, key=graded_lex_key)
        if last is not None and graded_lex_key(gamma) <= graded_lex_key(last):
            raise TemplateMismatchError(f"no progress eliminating {list(gamma)}")
        try:
            if eliminable_set_member(current.semigroup, gamma):
                current, change = eliminate_term(current, gamma, residual_iterations)
            else:
                current, change = eliminate_zariski_tail(current, gamma, exponents, residual_iterations)
        except (NotEliminableError, ConvergenceError) as e:
            raise TemplateMismatchError(f"tail term {list(gamma)} could not be eliminated: {e.message}",
                                        details={"stuck": [list(gamma)], "case": verdict.case})
        changes.append(change)
        last = gamma
    else:
        raise TemplateMismatchError(f"tail not cleared after {max_iterations} changes")

    exponents = [e for e in _zariski_set(current) if bound is None or total(e) <= bound]
    certificate = None
    try:
        current, certificate = normalize_coefficients(current, exponents)
    except IndependenceError as e:
        certificate = {"reason": e.message}
    params = match_template(current, verdict.case, exponents)

    S = current.series.truncate(bound) if bound is not None else current.series
    result = validate(current.r, current.n, S)
    logger.info(f"normal form case {verdict.case} with {params} after {len(changes)} changes")
    return NormalForm(verdict=verdict, case_label=verdict.case, parameters=params, series=result,
                      certificate=certificate, changes=changes, valid_degree=bound)


def instantiate(case: str, n: int, lambda1: Sequence[int], params: Dict[str, int],
                trunc: Optional[int] = None) -> Parameterization:
    """
    Build the normal form parameterization of a case.

    Args:
        case: Case label
        n: Multiplicity
        lambda1: Normalized first characteristic exponent
        params: Flags a, b, c and parameters i, j
        trunc: Truncation order

    Raises:
        UnsupportedClassError: if (n, lambda1) is not in that case or the
            parameters violate its side conditions
    """
    T = TopClass(n, lambda1)
    if T.swapped or case_label(T.n, T.lambda1) != case:
        raise UnsupportedClassError(f"class n={n} lambda1={list(lambda1)} is not in case {case}")
    if not side_conditions_hold(case, T.lambda1, params):
        raise UnsupportedClassError(f"parameters {params} violate the side conditions of case {case}")
    terms: Dict[Exponent, Fraction] = {T.lambda1: Fraction(1)}
    for fam in families(T.n, T.lambda1, case):
        if params.get(fam.flag):
            exp = fam.exponent(T.n, T.lambda1, params)
            if not product_lt(T.lambda1, exp):
                raise UnsupportedClassError(f"exponent {list(exp)} does not lie above lambda_1")
            terms[exp] = Fraction(1)
    return validate(2, T.n, FracSeries(terms, 2), trunc)


@dataclass
class CensusRow:
    n: int
    lambda1: Exponent
    quasi_simple: bool
    case: Optional[str]
    reason: Optional[str]
    lemma_three: bool
    audit: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "lambda1": list(self.lambda1),
            "quasi_simple": self.quasi_simple,
            "case": self.case,
            "reason": self.reason,
            "lemma_three": self.lemma_three,
            "audit": self.audit,
        }


def census(n_max: int, lambda_box: int, box: Optional[int] = None, progress: bool = False) -> List[CensusRow]:
    """
    Classify every consistent normalized class with 2 <= n <= n_max and
    lambda_1 coordinates at most lambda_box.

    Raises:
        TemplateMismatchError: if a quasi-simple class admits three Zariski
            exponents
    """
    if n_max < 2 or lambda_box < 1:
        raise UnsupportedClassError("census bounds must be n_max >= 2 and lambda_box >= 1")
    classes = [(n, (l1, l2))
               for n in range(2, n_max + 1)
               for l1 in range(1, lambda_box + 1)
               for l2 in range(0, l1 + 1)
               if consistent_class(n, (l1, l2))]
    rows: List[CensusRow] = []
    for n, lam in tqdm(classes, desc="census", disable=not progress):
        T = TopClass(n, lam)
        verdict = is_quasi_simple(T, box)
        lemma_three = can_admit_three(T.semigroup)[0]
        if verdict.quasi_simple and lemma_three:
            raise TemplateMismatchError(f"quasi-simple class n={n} lambda1={list(lam)} admits three exponents")
        rows.append(CensusRow(n, lam, verdict.quasi_simple, verdict.case, verdict.reason,
                              lemma_three, verdict.audit))
    logger.info(f"census of {len(rows)} classes, {sum(r.quasi_simple for r in rows)} quasi-simple")
    return rows
