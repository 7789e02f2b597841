import unittest

from qord.branch import validate
from qord.errors import NormalizationRequiredError, UnsupportedClassError
from qord.semigroup import build_semigroup
from qord.zariski import (can_admit_three, candidate_zariski_search,
                          find_three_antichain, zariski_exponents)
from tests.helpers import hc_parameterization, series


class TestZariskiExponents(unittest.TestCase):
    """Test cases for generalized Zariski exponents."""

    def test_hc_example(self):
        result = zariski_exponents(hc_parameterization())
        self.assertEqual(result.exponents, [(5, 8), (10, 4)])
        self.assertFalse(result.empty)
        self.assertTrue(result.is_quasi_short)
        self.assertEqual(result.method, "direct")
        self.assertEqual(result.valid_degree, 24)

    def test_result_document(self):
        data = zariski_exponents(hc_parameterization()).to_dict()
        self.assertEqual(data["zariski"], [[5, 8], [10, 4]])
        self.assertEqual(data["violations"], [])
        self.assertEqual(data["discrepancy"], [])

    def test_monomial_branch_has_none(self):
        P = validate(2, 3, series({(2, 1): 1}))
        result = zariski_exponents(P)
        self.assertTrue(result.empty)
        self.assertTrue(result.is_quasi_short)

    def test_semigroup_terms_are_not_zariski(self):
        P = validate(2, 5, series({(5, 1): 1, (5, 6): 1, (5, 8): 1}), 20)
        result = zariski_exponents(P)
        self.assertEqual(result.exponents, [(5, 8)])
        self.assertEqual(result.method, "reduction")
        self.assertEqual(result.violations, [(5, 6)])
        self.assertFalse(result.is_quasi_short)

    def test_reduction_matches_direct(self):
        P = validate(2, 3, series({(4, 1): 1, (5, 5): 1}), 14)
        result = zariski_exponents(P)
        self.assertEqual(result.method, "reduction")
        self.assertEqual(result.violations, [(5, 5)])
        self.assertEqual(result.exponents, [])
        self.assertEqual(result.discrepancy, [])

    def test_two_exponents_use_support_formula(self):
        P = validate(2, 4, series({(2, 2): 1, (3, 3): 1, (5, 5): 1}), 20)
        result = zariski_exponents(P)
        self.assertEqual(result.method, "direct")

    def test_requires_normalized(self):
        P = validate(2, 5, series({(5, 1): 2, (5, 8): 1}))
        with self.assertRaises(NormalizationRequiredError) as ctx:
            zariski_exponents(P)
        self.assertEqual(ctx.exception.details["reasons"], ["leading-coefficient"])


class TestThreeExponents(unittest.TestCase):
    """Test cases for the three-exponent criterion and witness search."""

    def test_closed_form_witness(self):
        admits, witness = can_admit_three(build_semigroup(2, 3, [(12, 1)]))
        self.assertTrue(admits)
        self.assertEqual(witness, [(12, 8), (15, 5), (18, 2)])

    def test_swapped_coordinates(self):
        admits, witness = can_admit_three(build_semigroup(2, 3, [(1, 12)]))
        self.assertTrue(admits)
        self.assertEqual(witness, [(2, 18), (5, 15), (8, 12)])

    def test_second_family(self):
        admits, witness = can_admit_three(build_semigroup(2, 4, [(5, 4)]))
        self.assertTrue(admits)
        self.assertEqual(len(witness), 3)

    def test_small_classes_do_not_admit(self):
        for n, lam in [(2, (7, 3)), (3, (5, 5)), (3, (11, 2)), (4, (7, 1)), (5, (3, 1)), (7, (2, 1))]:
            self.assertEqual(can_admit_three(build_semigroup(2, n, [lam])), (False, None), (n, lam))

    def test_unsupported(self):
        with self.assertRaises(UnsupportedClassError):
            can_admit_three(build_semigroup(2, 4, [(2, 2), (3, 3)]))
        with self.assertRaises(UnsupportedClassError):
            can_admit_three(build_semigroup(3, 2, [(1, 1, 1)]))

    def test_candidate_pool(self):
        pool = candidate_zariski_search(build_semigroup(2, 3, [(12, 1)]), 20)
        self.assertIn((12, 8), pool)
        self.assertNotIn((15, 3), pool)
        self.assertNotIn((12, 1), pool)
        self.assertTrue(all(x >= 12 and y >= 1 and x + y <= 20 for x, y in pool))

    def test_find_three_antichain(self):
        self.assertEqual(find_three_antichain({(1, 3), (2, 2), (3, 1), (4, 4)}),
                         [(1, 3), (2, 2), (3, 1)])
        self.assertIsNone(find_three_antichain({(1, 1), (2, 2), (3, 3), (1, 4)}))
        self.assertIsNone(find_three_antichain(set()))


if __name__ == '__main__':
    unittest.main()
