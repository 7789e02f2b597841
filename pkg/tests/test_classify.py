import itertools
import os
import unittest
from fractions import Fraction

import yaml

from qord.branch import validate
from qord.classify import (Family, TopClass, case_label, census,
                           consistent_class, families, instantiate,
                           is_quasi_simple, match_template, normal_form,
                           side_conditions_hold)
from qord.errors import (NormalizationRequiredError, TemplateMismatchError,
                         UnsupportedClassError)
from qord.lattice import total
from qord.reduce import apply_change, random_admissible_change
from qord.semigroup import build_semigroup, standard_representation
from tests.helpers import FULL, GOLDEN, hc_parameterization, series


class TestTopClass(unittest.TestCase):
    """Test cases for class construction and case labels."""

    def test_swap(self):
        T = TopClass(3, (1, 2))
        self.assertEqual(T.lambda1, (2, 1))
        self.assertTrue(T.swapped)
        self.assertFalse(T.normalized)

    def test_inconsistent(self):
        with self.assertRaises(UnsupportedClassError):
            TopClass(4, (2, 2))
        with self.assertRaises(UnsupportedClassError):
            TopClass(3, (1, 1, 1))

    def test_axis(self):
        with self.assertRaises(NormalizationRequiredError):
            TopClass(3, (2, 0))

    def test_consistent_class(self):
        self.assertTrue(consistent_class(3, (4, 0)))
        self.assertFalse(consistent_class(3, (3, 0)))
        self.assertFalse(consistent_class(3, (3, 3)))
        self.assertFalse(consistent_class(3, (1, 2)))

    def test_case_labels(self):
        self.assertEqual(case_label(2, (9, 4)), "a")
        self.assertEqual(case_label(5, (1, 1)), "b")
        self.assertEqual(case_label(3, (5, 5)), "c1")
        self.assertEqual(case_label(3, (8, 5)), "c2")
        self.assertEqual(case_label(3, (10, 0)), "c3")
        self.assertEqual(case_label(4, (7, 0)), "d4")
        self.assertEqual(case_label(5, (2, 2)), "e")
        self.assertEqual(case_label(7, (2, 1)), "f")
        self.assertIsNone(case_label(3, (12, 1)))
        self.assertIsNone(case_label(8, (2, 1)))


class TestQuasiSimple(unittest.TestCase):
    """Test cases for the quasi-simplicity decision."""

    def test_case_list(self):
        verdict = is_quasi_simple(TopClass(6, (2, 1)))
        self.assertTrue(verdict.quasi_simple)
        self.assertEqual(verdict.case, "f")

    def test_two_exponent_moduli(self):
        verdict = is_quasi_simple(TopClass(5, (5, 1)))
        self.assertFalse(verdict.quasi_simple)
        self.assertEqual(verdict.reason, "two_exponent_moduli")

    def test_three_exponent_witness(self):
        verdict = is_quasi_simple(TopClass(3, (12, 1)))
        self.assertFalse(verdict.quasi_simple)
        self.assertEqual(verdict.reason, "three_zariski_witness")
        self.assertEqual(verdict.witness, [(12, 8), (15, 5), (18, 2)])
        self.assertEqual(verdict.to_dict()["witness"], [[12, 8], [15, 5], [18, 2]])

    def test_searched_witness_is_an_antichain(self):
        verdict = is_quasi_simple(TopClass(8, (2, 1)))
        self.assertFalse(verdict.quasi_simple)
        if verdict.witness:
            G = build_semigroup(2, 8, [(2, 1)])
            for gamma in verdict.witness:
                self.assertIsNotNone(standard_representation(G, gamma))
        else:
            self.assertTrue(verdict.audit)


class TestTemplates(unittest.TestCase):
    """Test cases for families, side conditions and instantiation."""

    def test_family_match(self):
        fam = Family("a", 5, -1, ("i", 0))
        self.assertEqual(fam.match([-1, 2, 5]), {"i": 2})
        self.assertIsNone(fam.match([-1, -1, 5]))
        self.assertIsNone(fam.match([-1, 2, 4]))
        self.assertEqual(fam.exponent(6, (2, 1), {"i": 0}), (4, 5))

    def test_families(self):
        self.assertEqual(families(3, (4, 2), "c1"), [])
        self.assertEqual(len(families(3, (4, 3), "c1")), 1)
        self.assertEqual([f.flag for f in families(4, (3, 2), "d2")], ["a", "b", "c"])
        with self.assertRaises(UnsupportedClassError):
            families(3, (2, 1), "z")

    def test_side_conditions(self):
        self.assertTrue(side_conditions_hold("f", (2, 1), {"a": 1, "b": 1, "i": 0, "j": 1}))
        self.assertFalse(side_conditions_hold("f", (2, 1), {"a": 1, "b": 1, "i": 1, "j": 1}))
        self.assertTrue(side_conditions_hold("f", (2, 1), {"a": 0, "b": 1, "j": 0}))
        self.assertFalse(side_conditions_hold("c3", (10, 1), {"a": 1, "b": 1, "i": 2, "j": 2}))
        self.assertFalse(side_conditions_hold("d2", (3, 2), {"a": 1, "b": 1, "i": 0}))
        self.assertFalse(side_conditions_hold("d3", (5, 2), {"a": 1, "b": 1, "i": -1, "j": 0}))
        self.assertTrue(side_conditions_hold("d3", (5, 2), {"a": 1, "b": 1, "i": 0, "j": -1}))

    def test_instantiate(self):
        P = instantiate("f", 6, (2, 1), {"a": 1, "b": 1, "i": 0, "j": 1}, trunc=20)
        self.assertEqual(P.series.support(), [(2, 1), (4, 5), (2, 10)])
        self.assertEqual(P.lambda1, (2, 1))

    def test_instantiate_errors(self):
        with self.assertRaises(UnsupportedClassError):
            instantiate("f", 6, (2, 1), {"a": 1, "b": 1, "i": 1, "j": 1})
        with self.assertRaises(UnsupportedClassError):
            instantiate("e", 6, (2, 1), {})

    def test_match_template(self):
        P = instantiate("f", 6, (2, 1), {"a": 1, "b": 1, "i": 0, "j": 1})
        params = match_template(P, "f", [(4, 5), (2, 10)])
        self.assertEqual(params, {"a": 1, "b": 1, "i": 0, "j": 1})

    def test_match_template_mismatch(self):
        P = instantiate("f", 6, (2, 1), {"a": 1, "b": 1, "i": 0, "j": 1})
        with self.assertRaises(TemplateMismatchError):
            match_template(P, "f", [(4, 5), (4, 11)])


class TestNormalForm(unittest.TestCase):
    """Test cases for the normal form reduction."""

    def test_instantiated_form_is_fixed(self):
        P = instantiate("f", 6, (2, 1), {"a": 1, "b": 1, "i": 0, "j": 1}, trunc=20)
        form = normal_form(P)
        self.assertEqual(form.case_label, "f")
        self.assertEqual(form.parameters, {"a": 1, "b": 1, "i": 0, "j": 1})
        self.assertIsNone(form.certificate)
        self.assertEqual(form.changes, [])
        self.assertEqual(form.valid_degree, 15)

    def test_coefficients_normalized(self):
        P = validate(2, 6, series({(2, 1): 1, (4, 5): 4, (2, 10): 512}), 20)
        form = normal_form(P)
        self.assertEqual(form.parameters, {"a": 1, "b": 1, "i": 0, "j": 1})
        self.assertIsNone(form.certificate)
        self.assertEqual(form.series.series.coefficient((4, 5)), 1)
        self.assertEqual(form.series.series.coefficient((2, 10)), 1)

    def test_irrational_coefficients_certificate(self):
        P = validate(2, 6, series({(2, 1): 1, (4, 5): 3, (2, 10): 2}), 20)
        form = normal_form(P)
        self.assertEqual(form.case_label, "f")
        self.assertIsNotNone(form.certificate)
        self.assertEqual(form.series.series.coefficient((4, 5)), 3)

    def test_semigroup_term_removed(self):
        P = validate(2, 3, series({(2, 1): 1, (3, 3): Fraction(5, 2)}), 12)
        form = normal_form(P)
        self.assertEqual(form.case_label, "c1")
        self.assertEqual(form.series.series.support(), [(2, 1)])
        self.assertEqual(len(form.changes), 1)

    def test_not_quasi_simple(self):
        form = normal_form(hc_parameterization())
        self.assertIsNone(form.case_label)
        self.assertEqual(form.verdict.reason, "two_exponent_moduli")

    def test_requires_plane_monomial(self):
        P = validate(2, 4, series({(2, 2): 1, (3, 3): 1}))
        with self.assertRaises(UnsupportedClassError):
            normal_form(P)

    def test_requires_normalized(self):
        P = validate(2, 6, series({(2, 1): 2}))
        with self.assertRaises(NormalizationRequiredError):
            normal_form(P)


class TestNormalFormRoundTrip(unittest.TestCase):
    """Test cases for recovering template parameters after random changes."""

    CLASSES = [("f", 6, (2, 1)), ("e", 5, (3, 1)), ("d1", 4, (3, 1)), ("c3", 3, (10, 0)),
               ("d2", 4, (3, 2)), ("c2", 3, (8, 5)), ("d4", 4, (7, 0)), ("c1", 3, (5, 5))]

    def _parameter_sets(self, case, n, lambda1):
        """Every flag combination with small i, j that meets the side conditions."""
        fams = families(n, lambda1, case)
        pairs = [(i, j) for i in range(4) for j in range(4)] if FULL else [(0, 1), (1, 2)]
        seen = []
        for present in itertools.product((0, 1), repeat=len(fams)):
            for i, j in pairs:
                params = {fam.flag: flag for fam, flag in zip(fams, present)}
                for fam, flag in zip(fams, present):
                    for slot in (fam.p, fam.q):
                        if flag and isinstance(slot, tuple):
                            params[slot[0]] = i if slot[0] == "i" else j
                if params not in seen and side_conditions_hold(case, lambda1, params):
                    seen.append(params)
        return seen

    def test_random_changes_recover_parameters(self):
        seeds = range(1, 6) if FULL else (1, 2)
        checked = 0
        for case, n, lambda1 in self.CLASSES:
            self.assertEqual(case_label(n, lambda1), case)
            for params in self._parameter_sets(case, n, lambda1):
                try:
                    exact = instantiate(case, n, lambda1, params)
                except UnsupportedClassError:
                    continue
                top = max(total(e) for e in exact.series.support())
                P = instantiate(case, n, lambda1, params, trunc=top + 8)
                for seed in seeds:
                    changed = apply_change(P, random_admissible_change(P, seed=seed))
                    form = normal_form(changed)
                    label = f"{case} {params} seed {seed}"
                    self.assertEqual(form.case_label, case, label)
                    self.assertEqual(form.parameters, params, label)
                    checked += 1
        self.assertGreater(checked, 50)


class TestCensus(unittest.TestCase):
    """Test cases for the census against the golden table."""

    @classmethod
    def setUpClass(cls):
        with open(os.path.join(GOLDEN, "census_quasi_simple.yaml")) as f:
            cls.golden = yaml.safe_load(f)
        cls.rows = census(cls.golden["n_max"], cls.golden["lambda_box"])

    def test_quasi_simple_rows(self):
        expected = set()
        for n, cases in self.golden["classes"].items():
            for case, lambdas in cases.items():
                expected.update((int(n), tuple(l), case) for l in lambdas)
        found = {(row.n, row.lambda1, row.case) for row in self.rows
                 if row.quasi_simple and row.n >= 3}
        self.assertEqual(found, expected)

    def test_multiplicity_two(self):
        rows = [row for row in self.rows if row.n == 2]
        self.assertTrue(rows)
        self.assertTrue(all(row.quasi_simple and row.case == "a" for row in rows))

    def test_rejections_have_reasons(self):
        reasons = {"two_exponent_moduli", "three_zariski_witness", "not_in_case_list"}
        for row in self.rows:
            if row.quasi_simple:
                self.assertFalse(row.lemma_three)
            else:
                self.assertIn(row.reason, reasons)
                self.assertEqual(row.audit, row.reason == "not_in_case_list")

    def test_rows_are_consistent(self):
        for row in self.rows:
            self.assertTrue(consistent_class(row.n, row.lambda1))
            self.assertEqual(row.to_dict()["lambda1"], list(row.lambda1))

    def test_bounds(self):
        with self.assertRaises(UnsupportedClassError):
            census(1, 5)


if __name__ == '__main__':
    unittest.main()
