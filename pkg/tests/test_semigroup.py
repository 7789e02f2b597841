import unittest

from qord.errors import (InconsistentMultiplicityError, InputError,
                         InvalidCharacteristicError)
from qord.lattice import Lattice
from qord.semigroup import (build_semigroup, eliminable_set_member,
                            gamma_member, multiplicity,
                            quasi_short_violations, recompose, shift_vector,
                            shifted_sources, standard_representation)


class TestBuildSemigroup(unittest.TestCase):
    """Test cases for generators, indices and the lattice chain."""

    def test_single_exponent(self):
        G = build_semigroup(2, 5, [(5, 1)])
        self.assertEqual(G.g, 1)
        self.assertEqual(G.nus, ((5, 0), (0, 5), (5, 1)))
        self.assertEqual(G.indices, (5,))
        self.assertEqual(G.lattices[1], Lattice([(5, 0), (0, 1)]))

    def test_two_exponents(self):
        G = build_semigroup(2, 4, [(2, 2), (3, 3)])
        self.assertEqual(G.nus, ((4, 0), (0, 4), (2, 2), (5, 5)))
        self.assertEqual(G.indices, (2, 2))
        self.assertEqual(G.to_dict()["indices"], [2, 2])

    def test_not_strictly_increasing(self):
        with self.assertRaises(InvalidCharacteristicError):
            build_semigroup(2, 4, [(2, 2), (2, 2)])
        with self.assertRaises(InvalidCharacteristicError):
            build_semigroup(2, 4, [(2, 2), (1, 3)])

    def test_exponent_in_previous_lattice(self):
        with self.assertRaises(InvalidCharacteristicError):
            build_semigroup(2, 5, [(5, 0)])

    def test_inconsistent_multiplicity(self):
        with self.assertRaises(InconsistentMultiplicityError) as ctx:
            build_semigroup(2, 4, [(2, 0)])
        self.assertEqual(ctx.exception.details["indices"], [2])

    def test_invalid_multiplicity(self):
        with self.assertRaises(InputError):
            build_semigroup(2, 1, [(1, 1)])

    def test_multiplicity(self):
        self.assertEqual(multiplicity(build_semigroup(2, 5, [(5, 1)])), 5)
        self.assertEqual(multiplicity(build_semigroup(2, 3, [(1, 1)])), 2)


class TestMembership(unittest.TestCase):
    """Test cases for standard representations and the eliminable set."""

    def setUp(self):
        self.G = build_semigroup(2, 5, [(5, 1)])

    def test_standard_representation(self):
        self.assertEqual(standard_representation(self.G, (10, 4)), [-2, 0, 4])
        self.assertEqual(standard_representation(self.G, (5, 6)), [0, 1, 1])
        self.assertIsNone(standard_representation(self.G, (1, 0)))

    def test_levels(self):
        self.assertEqual(standard_representation(self.G, (10, 5), 0), [2, 1])
        self.assertIsNone(standard_representation(self.G, (5, 1), 0))
        with self.assertRaises(ValueError):
            standard_representation(self.G, (5, 1), 2)

    def test_recompose(self):
        for gamma in [(10, 4), (5, 6), (15, 3), (0, 0)]:
            rep = standard_representation(self.G, gamma)
            self.assertEqual(recompose(self.G, rep), gamma)
            self.assertTrue(0 <= rep[2] < 5)

    def test_two_level_representation(self):
        G = build_semigroup(2, 4, [(2, 2), (3, 3)])
        self.assertEqual(standard_representation(G, (7, 7)), [0, 0, 1, 1])
        self.assertTrue(gamma_member(G, (7, 7)))
        self.assertFalse(gamma_member(G, (3, 3)))
        self.assertIsNone(standard_representation(G, (1, 2)))

    def test_gamma_member(self):
        self.assertTrue(gamma_member(self.G, (5, 6)))
        self.assertTrue(gamma_member(self.G, (15, 3)))
        self.assertTrue(gamma_member(self.G, (0, 0)))
        self.assertFalse(gamma_member(self.G, (10, 4)))
        self.assertFalse(gamma_member(self.G, (5, 8)))

    def test_shifted_copies(self):
        self.assertEqual(shifted_sources(self.G), [0])
        self.assertEqual(shift_vector(self.G, 0), (5, 2))
        self.assertTrue(eliminable_set_member(self.G, (10, 3)))
        self.assertFalse(gamma_member(self.G, (10, 3)))
        self.assertFalse(eliminable_set_member(self.G, (10, 4)))
        self.assertFalse(eliminable_set_member(self.G, (5, 8)))

    def test_no_shifted_copies_below_multiplicity(self):
        G = build_semigroup(2, 3, [(2, 1)])
        self.assertEqual(shifted_sources(G), [])

    def test_quasi_short_violations(self):
        found = quasi_short_violations(self.G, [(10, 3), (10, 4), (5, 6)])
        self.assertEqual(found, {(10, 3), (5, 6)})


if __name__ == '__main__':
    unittest.main()
