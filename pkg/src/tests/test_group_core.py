import unittest
from math import gcd

from hypothesis import given, settings, strategies as st

from latnoether import Caps, build_group, from_table, set_caps, standard_group, subgroup_reps
from latnoether.errors import (
    CapExceeded,
    ClosureExceedsCap,
    NonAssociative,
    NotNormal,
    ParseError,
    RelationViolated,
    UnknownName,
    ValidationError,
)
from latnoether.group_core import (
    all_subgroups,
    case1_group,
    center,
    cyclic_group,
    heisenberg_group,
    quotient_group,
    subgroup_as_group,
    sylow_all_cyclic,
)

LOOP_OF_ORDER_FIVE = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestGroupConstruction(unittest.TestCase):
    """Test cases for building groups from images and tables."""

    def tearDown(self):
        """Restore default caps."""
        set_caps(None)

    def test_named_groups(self):
        """Orders of the named groups."""
        expected = {"C1": 1, "C6": 6, "C2xC2": 4, "C3xC4": 12, "S3": 6, "S4": 24, "A4": 12,
                    "D4": 8, "Q8": 8, "heis:3": 27, "case1:5": 10}
        for name, order in expected.items():
            self.assertEqual(standard_group(name).order, order, name)
        with self.assertRaises(UnknownName):
            standard_group("M11")
        with self.assertRaises(UnknownName):
            standard_group("case1:x")

    def test_case1_group(self):
        """The case 1 group is cyclic of order 2p with generators sigma3 and tau."""
        G = case1_group(7)
        self.assertEqual(G.generator_names, ("sigma3", "tau"))
        self.assertTrue(G.is_cyclic)
        self.assertEqual(G.evaluate("sigma3^7"), 0)
        self.assertEqual(G.evaluate("tau^2"), 0)
        self.assertEqual(standard_group("case1:7"), G)

    def test_heisenberg_relations(self):
        """sigma1 is central and the group is not abelian."""
        G = heisenberg_group(3)
        self.assertFalse(G.is_abelian)
        self.assertEqual(center(G).order, 3)
        self.assertIn(G.generators[0], center(G))

    def test_build_group_errors(self):
        """Bad images, violated relations and oversized closures are reported."""
        with self.assertRaises(ValidationError):
            build_group([(0, 0, 1)])
        with self.assertRaises(RelationViolated):
            build_group([(1, 2, 0)], ["r"], [("r^2", "1")])
        with self.assertRaises(ClosureExceedsCap):
            build_group([(1, 0, 2, 3), (1, 2, 3, 0)], cap=10)

    def test_from_table(self):
        """A valid table round-trips; a loop that is not a group is rejected."""
        G = standard_group("S3")
        H = from_table(G.mul, G.generators, G.generator_names)
        self.assertEqual(H, G)
        with self.assertRaises(NonAssociative):
            from_table(LOOP_OF_ORDER_FIVE, [1])
        with self.assertRaises(ValidationError):
            from_table([[0, 1], [1, 1]], [1])
        with self.assertRaises(ValidationError):
            from_table(cyclic_group(4).mul, [2])

    def test_words(self):
        """Words parse left to right and evaluate by the table."""
        G = standard_group("S3")
        s, r = G.generators
        self.assertEqual(G.evaluate("s r"), G.multiply(s, r))
        self.assertEqual(G.evaluate("r^-1"), G.inverse(r))
        self.assertEqual(G.evaluate("1"), 0)
        with self.assertRaises(ParseError):
            G.parse_word("t")
        with self.assertRaises(ParseError):
            G.parse_word("r^x")
        for element, word in enumerate(G.words):
            self.assertEqual(G.evaluate([(position, 1) for position in word]), element)

    @given(st.integers(1, 16))
    @settings(max_examples=16, deadline=None)
    def test_cyclic_orders(self, n):
        """Element a of C_n has order n / gcd(a, n)."""
        G = cyclic_group(n)
        for a in range(n):
            self.assertEqual(G.element_order(a), n // gcd(a, n))
        self.assertEqual(G.exponent, n)

    @given(st.lists(st.sampled_from(["s", "r", "s^-1", "r^2"]), max_size=6),
           st.lists(st.sampled_from(["s", "r", "r^-1"]), max_size=6))
    @settings(max_examples=40, deadline=None)
    def test_evaluate_is_multiplicative(self, left, right):
        """Evaluating a concatenation multiplies the evaluations."""
        G = standard_group("S4")
        joined = " ".join(left + right)
        self.assertEqual(G.evaluate(joined), G.multiply(G.evaluate(" ".join(left)), G.evaluate(" ".join(right))))


class TestSubgroups(unittest.TestCase):
    """Test cases for subgroup enumeration and quotients."""

    def tearDown(self):
        """Restore default caps."""
        set_caps(None)

    def test_class_counts(self):
        """Known numbers of subgroups and conjugacy classes of subgroups."""
        expected = {"S3": (6, 4), "C2xC2": (5, 5), "Q8": (6, 6), "A4": (10, 5), "D4": (10, 8), "S4": (30, 11)}
        for name, (count, classes) in expected.items():
            G = standard_group(name)
            self.assertEqual(len(all_subgroups(G)), count, name)
            self.assertEqual(len(subgroup_reps(G)), classes, name)

    def test_reps_sorted(self):
        """Representatives come sorted by order, trivial first and whole group last."""
        reps = subgroup_reps(standard_group("D4"))
        orders = [H.order for H in reps]
        self.assertEqual(orders, sorted(orders))
        self.assertEqual(reps[0].elements, (0,))
        self.assertEqual(reps[-1].order, 8)

    def test_cap(self):
        """Subgroup enumeration refuses groups above the order cap."""
        set_caps(Caps(group_order=4))
        with self.assertRaises(CapExceeded):
            subgroup_reps(standard_group("S3"))

    def test_quotient(self):
        """Quotients by normal subgroups keep one generator per generator."""
        G = case1_group(3)
        N = G.subgroup([G.generators[1]])
        q = quotient_group(G, N)
        self.assertEqual(q.group.order, 3)
        self.assertEqual(q.group.generator_names, ("sigma3", "tau"))
        self.assertEqual(q.projection[G.generators[1]], 0)
        S3 = standard_group("S3")
        with self.assertRaises(NotNormal):
            quotient_group(S3, S3.subgroup([S3.generators[0]]))

    def test_sylow(self):
        """Sylow-cyclic detection."""
        self.assertTrue(sylow_all_cyclic(standard_group("S3")))
        self.assertTrue(sylow_all_cyclic(case1_group(5)))
        self.assertFalse(sylow_all_cyclic(standard_group("C2xC2")))
        self.assertFalse(sylow_all_cyclic(standard_group("Q8")))

    def test_subgroup_as_group(self):
        """A subgroup becomes a standalone group with an embedding."""
        G = standard_group("S4")
        H = subgroup_reps(G)[-2]
        sub, embedding = subgroup_as_group(G, H)
        self.assertEqual(sub.order, H.order)
        for a in range(sub.order):
            for b in range(sub.order):
                self.assertEqual(embedding[sub.multiply(a, b)], G.multiply(embedding[a], embedding[b]))


if __name__ == "__main__":
    unittest.main()
