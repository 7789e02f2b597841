import unittest
from fractions import Fraction

from qord.branch import validate
from qord.errors import (ConstraintError, FieldError, IndependenceError,
                         NormalizationRequiredError, NotEliminableError,
                         UnsupportedError)
from qord.lattice import product_lt
from qord.reduce import (CoordinateChange, apply_change, ceiling_vector,
                         decompose, eliminate_term, homothety_change,
                         identity_change, inverse_homothety,
                         normalize_coefficients, quasi_short_reduce,
                         random_admissible_change)
from qord.semigroup import quasi_short_violations
from qord.series import FracSeries
from tests.helpers import hc_parameterization, series


class TestCoordinateChanges(unittest.TestCase):
    """Test cases for admissible changes and their action."""

    def setUp(self):
        self.P = hc_parameterization()

    def test_ceiling_vector(self):
        self.assertEqual(ceiling_vector(5, (5, 1)), (1, 1))
        self.assertEqual(ceiling_vector(3, (4, 0)), (2, 0))

    def test_identity(self):
        self.assertIs(apply_change(self.P, identity_change(self.P)), self.P)

    def test_homothety(self):
        change = homothety_change(self.P, [Fraction(2), Fraction(3)], Fraction(96))
        result = apply_change(self.P, change)
        self.assertEqual(result.series.coefficient((5, 1)), 1)
        self.assertEqual(result.series.coefficient((5, 8)), Fraction(1, 2187))
        self.assertEqual(result.series.coefficient((10, 4)), Fraction(1, 864))
        self.assertEqual(result.series.coefficient((5, 9)), Fraction(7, 19683))
        self.assertEqual(result.trunc, 24)

    def test_inverse_homothety(self):
        change = homothety_change(self.P, [Fraction(2), Fraction(-3)], Fraction(5))
        there = apply_change(self.P, change)
        back = apply_change(there, inverse_homothety(change))
        self.assertEqual(back.series, self.P.series)

    def test_missing_rational_root(self):
        change = CoordinateChange(a=[Fraction(2), Fraction(1), Fraction(1)],
                                  P=[FracSeries.zero(3) for _ in range(3)],
                                  alpha=(1, 1))
        with self.assertRaises(FieldError):
            apply_change(self.P, change)

    def test_decompose(self):
        P_list = [FracSeries({(1, 1, 0): 2, (0, 0, 1): 3}, 3), FracSeries.zero(3),
                  FracSeries({(1, 1, 0): 1, (0, 0, 2): 1}, 3)]
        change = CoordinateChange(a=[Fraction(1)] * 3, P=P_list, alpha=(1, 1))
        parts = decompose(change, 5, (5, 1))
        eps, eta = parts[0]
        self.assertEqual(eps.terms, {(0, 1, 0): Fraction(2)})
        self.assertEqual(eta.terms, {(0, 0, 0): Fraction(3)})

    def test_decompose_rejects_inadmissible_terms(self):
        G = validate(2, 3, series({(2, 1): 1})).semigroup
        shifted = CoordinateChange(a=[Fraction(1)] * 3,
                                   P=[FracSeries.monomial((0, 0, 1)), FracSeries.zero(3), FracSeries.zero(3)],
                                   alpha=ceiling_vector(3, G.lambda1))
        with self.assertRaises(ConstraintError):
            decompose(shifted, 3, G.lambda1)
        linear = CoordinateChange(a=[Fraction(1)] * 3,
                                  P=[FracSeries.zero(3), FracSeries.zero(3), FracSeries.monomial((1, 0, 0))],
                                  alpha=ceiling_vector(3, G.lambda1))
        with self.assertRaises(ConstraintError):
            decompose(linear, 3, G.lambda1)

    def test_random_change_keeps_class(self):
        P = hc_parameterization(trunc=16)
        for seed in (1, 2, 3):
            change = random_admissible_change(P, seed=seed)
            result = apply_change(P, change)
            self.assertEqual(result.lambda1, (5, 1))
            self.assertEqual(result.series.coefficient((5, 1)), 1)

    def test_random_change_is_reproducible(self):
        a = random_admissible_change(self.P, seed=11)
        b = random_admissible_change(self.P, seed=11)
        self.assertEqual(a.a, b.a)
        self.assertEqual([p.terms for p in a.P], [p.terms for p in b.P])


class TestElimination(unittest.TestCase):
    """Test cases for removing single terms."""

    def test_semigroup_term(self):
        P = validate(2, 3, series({(2, 1): 1, (3, 3): 1}), 12)
        result, change = eliminate_term(P, (3, 3))
        self.assertEqual(result.series.terms, {(2, 1): Fraction(1)})
        self.assertEqual(change.kind, "semigroup")
        self.assertEqual(change.P[2].terms, {(1, 1, 0): Fraction(-1)})

    def test_shifted_term(self):
        P = validate(2, 3, series({(4, 1): 1, (5, 5): 1}), 14)
        result, change = eliminate_term(P, (5, 5))
        self.assertEqual(change.kind, "shifted")
        self.assertEqual(change.P[0].terms, {(0, 1, 1): Fraction(3, 4)})
        self.assertEqual(result.series.coefficient((5, 5)), 0)
        self.assertEqual(result.series.coefficient((4, 1)), 1)

    def test_not_eliminable(self):
        P = hc_parameterization()
        with self.assertRaises(NotEliminableError):
            eliminate_term(P, (5, 8))
        with self.assertRaises(NotEliminableError):
            eliminate_term(P, (5, 1))
        with self.assertRaises(NotEliminableError):
            eliminate_term(P, (10, 3))

    def test_requires_one_exponent(self):
        P = validate(2, 4, series({(2, 2): 1, (3, 3): 1, (5, 5): 1}), 20)
        with self.assertRaises(UnsupportedError):
            eliminate_term(P, (5, 5))

    def test_quasi_short_reduce(self):
        P = validate(2, 5, series({(5, 1): 1, (5, 6): 1, (5, 8): 1}), 20)
        reduced, changes = quasi_short_reduce(P)
        self.assertEqual(changes[0].target, (5, 6))
        above = [e for e in reduced.series.support() if product_lt(reduced.lambda1, e)]
        self.assertEqual(quasi_short_violations(reduced.semigroup, above), set())
        self.assertEqual(reduced.series.coefficient((5, 8)), 1)
        self.assertEqual(reduced.series.coefficient((5, 13)), -1)

    def test_quasi_short_reduce_already_short(self):
        P = hc_parameterization()
        reduced, changes = quasi_short_reduce(P)
        self.assertIs(reduced, P)
        self.assertEqual(changes, [])

    def test_quasi_short_reduce_needs_dominant(self):
        P = validate(2, 5, series({(5, 1): 1, (0, 5): 1}))
        with self.assertRaises(NormalizationRequiredError):
            quasi_short_reduce(P)

    def test_reduction_is_idempotent(self):
        P = validate(2, 5, series({(5, 1): 1, (5, 6): 1, (5, 8): 1}), 20)
        perturbed = hc_parameterization(trunc=20)
        perturbed = apply_change(perturbed, random_admissible_change(perturbed, seed=4))
        for start in (P, perturbed):
            reduced, _ = quasi_short_reduce(start)
            again, more = quasi_short_reduce(reduced)
            self.assertEqual(again.series, reduced.series)
            self.assertEqual(more, [])


class TestNormalizeCoefficients(unittest.TestCase):
    """Test cases for rescaling coefficients to one."""

    def setUp(self):
        self.P = hc_parameterization()
        change = homothety_change(self.P, [Fraction(2), Fraction(3)], Fraction(96))
        self.scaled = apply_change(self.P, change)

    def test_recovers_monic_form(self):
        result, certificate = normalize_coefficients(self.scaled, [(5, 8), (10, 4)])
        self.assertIsNone(certificate)
        self.assertEqual(result.series, self.P.series)

    def test_leading_coefficient_only(self):
        P = validate(2, 5, series({(5, 1): 3, (5, 8): 1}))
        result, certificate = normalize_coefficients(P)
        self.assertIsNone(certificate)
        self.assertEqual(result.series.coefficient((5, 1)), 1)

    def test_certificate_for_irrational_scalars(self):
        result, certificate = normalize_coefficients(self.P, [(5, 9)])
        self.assertIs(result, self.P)
        self.assertEqual(certificate["independent_shifts"], [[0, 8]])
        self.assertEqual(certificate["equations"][0]["value"], "7/3")

    def test_dependent_shifts(self):
        with self.assertRaises(IndependenceError):
            normalize_coefficients(self.P, [(5, 8), (5, 9)])


if __name__ == '__main__':
    unittest.main()
