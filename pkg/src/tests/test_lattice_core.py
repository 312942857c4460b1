import unittest

from hypothesis import given, settings, strategies as st

from latnoether import IntMatrix, Lattice, LatticeMap, dual_lattice, induced_lattice, iso_search, standard_group
from latnoether.errors import ActionNotTrivialOnKernel, GroupMismatch, KernelNotStable, NotUnimodular, RelationViolated
from latnoether.exact_linalg import saturation_index
from latnoether.group_core import cyclic_group, quotient_group, subgroup_reps
from latnoether.lattice_core import (
    Isomorphic,
    NotIsomorphic,
    character_kernel_sublattice,
    conjugate,
    deflate,
    direct_sum,
    fixed_sublattice,
    inflate,
    regular_lattice,
    restrict,
    restrict_or_inflate,
    sublattice,
    tensor_outer,
    tensor_product,
    trivial_kernel,
    trivial_lattice,
)
from latnoether.paper_models import case1_lattice, lambda_lattice, lambda_tensor


def sign_lattice(G):
    return Lattice.from_generators(G, [IntMatrix.from_rows([[-1]])], label="Z-")


class TestLatticeBasics(unittest.TestCase):
    """Test cases for lattice construction and the basic calculus."""

    def setUp(self):
        """Set up the order two lattices."""
        self.C2 = cyclic_group(2, "tau")
        self.Z = trivial_lattice(self.C2)
        self.sign = sign_lattice(self.C2)
        self.regular = regular_lattice(self.C2)

    def test_validation(self):
        """Generator matrices must be unimodular and satisfy the group law."""
        with self.assertRaises(NotUnimodular):
            Lattice.from_generators(self.C2, [IntMatrix.from_rows([[2]])])
        with self.assertRaises(RelationViolated):
            Lattice.from_generators(self.C2, [IntMatrix.from_rows([[0, 1], [1, 1]])])

    def test_regular_is_swap(self):
        """Z[C2] is the swap of two basis vectors."""
        self.assertEqual(self.regular.matrices[0].to_list(), [[0, 1], [1, 0]])
        self.assertTrue(self.regular.is_permutation())

    def test_duality(self):
        """Double duals are exact and permutation lattices are self-dual."""
        self.assertEqual(dual_lattice(self.regular), self.regular)
        self.assertEqual(dual_lattice(self.Z), self.Z)
        M = case1_lattice(3)
        self.assertEqual(M.rank, 4)
        self.assertEqual(dual_lattice(dual_lattice(M)), M)

    def test_direct_sum(self):
        """Block-diagonal action and group checks."""
        total = direct_sum(self.Z, self.sign)
        self.assertEqual(total.matrices[0].to_list(), [[1, 0], [0, -1]])
        with self.assertRaises(GroupMismatch):
            direct_sum(self.Z, trivial_lattice(cyclic_group(3)))

    def test_induced_lattices_are_permutation(self):
        """Every Z[G/H] acts by permutation matrices."""
        for name in ("S3", "D4", "A4"):
            G = standard_group(name)
            for H in subgroup_reps(G):
                L = induced_lattice(G, H)
                self.assertTrue(L.is_permutation())
                self.assertEqual(L.rank, G.order // H.order)

    def test_fixed_sublattice(self):
        """Fixed sublattices are pure and additive."""
        whole = self.C2.whole()
        fixed, inclusion = fixed_sublattice(self.regular, whole)
        self.assertEqual(fixed.rank, 1)
        self.assertEqual(inclusion.matrix.to_list(), [[1], [1]])
        self.assertEqual(fixed_sublattice(self.sign, whole)[0].rank, 0)
        M = case1_lattice(3)
        G = M.group
        tau = G.subgroup([G.generators[1]])
        fixed_M, inclusion_M = fixed_sublattice(M, tau)
        self.assertEqual(fixed_M.rank, 2)
        self.assertEqual(saturation_index(inclusion_M.matrix), 1)
        both = direct_sum(M, dual_lattice(M))
        self.assertEqual(fixed_sublattice(both, tau)[0].rank,
                         fixed_M.rank + fixed_sublattice(dual_lattice(M), tau)[0].rank)

    def test_restrict_and_inflate(self):
        """Restriction keeps the module, inflation pulls back along the projection."""
        C6 = cyclic_group(6)
        order_two = C6.subgroup([3])
        restricted = restrict(regular_lattice(C6), order_two)
        self.assertEqual(restricted.rank, 6)
        self.assertEqual(restricted.group.order, 2)
        self.assertTrue(restricted.is_permutation())
        q = quotient_group(C6, C6.subgroup([2]))
        sign = sign_lattice(q.group)
        inflated = restrict_or_inflate(sign, q)
        self.assertEqual(inflated.group, C6)
        self.assertEqual(inflated.act(1).to_list(), [[-1]])
        self.assertEqual(inflated.act(2).to_list(), [[1]])
        self.assertEqual(trivial_kernel(inflated).elements, (0, 2, 4))
        low, q2 = deflate(inflated, trivial_kernel(inflated))
        self.assertEqual(inflate(low, q2), inflated)
        with self.assertRaises(ActionNotTrivialOnKernel):
            deflate(inflated, C6.subgroup([3]))

    def test_tensor_product(self):
        """Diagonal tensor products over one group."""
        self.assertEqual(tensor_product(self.sign, self.sign).matrices[0].to_list(), [[1]])
        twisted = tensor_product(self.regular, self.sign)
        self.assertEqual(twisted.rank, 2)
        self.assertIsInstance(iso_search(twisted, self.regular), Isomorphic)
        with self.assertRaises(GroupMismatch):
            tensor_product(self.Z, trivial_lattice(cyclic_group(3)))

    def test_character_kernel(self):
        """The index of the kernel is the order of the character image."""
        P = trivial_lattice(self.C2, rank=2)
        M, inclusion = character_kernel_sublattice(P, [(3, [1, 1])])
        self.assertEqual(M.rank, 2)
        self.assertEqual(abs(inclusion.matrix.det()), 3)
        M, inclusion = character_kernel_sublattice(self.regular, [(2, [1, 1])])
        self.assertEqual(abs(inclusion.matrix.det()), 2)
        self.assertTrue(inclusion.is_intertwiner())
        with self.assertRaises(KernelNotStable):
            character_kernel_sublattice(self.regular, [(2, [1, 0])])

    def test_sublattice_stability(self):
        """A span moved off itself is rejected."""
        with self.assertRaises(KernelNotStable):
            sublattice(self.regular, IntMatrix.from_rows([[1], [0]]))

    def test_tensor_outer(self):
        """Outer tensor products live over the direct product."""
        C3 = cyclic_group(3, "sigma3")
        product = tensor_outer(regular_lattice(C3), self.regular)
        self.assertEqual(product.rank, 6)
        self.assertEqual(product.group.order, 6)
        self.assertTrue(product.is_permutation())


class TestIsoSearch(unittest.TestCase):
    """Test cases for lattice isomorphism decisions."""

    def setUp(self):
        """Set up the order two lattices."""
        self.C2 = cyclic_group(2, "tau")
        self.regular = regular_lattice(self.C2)

    def test_identity(self):
        """Equal lattices are isomorphic through the identity."""
        verdict = iso_search(self.regular, self.regular)
        self.assertIsInstance(verdict, Isomorphic)
        self.assertTrue(verdict.matrix.is_identity())

    def test_invariant_witnesses(self):
        """Characteristic polynomials and Tate groups separate lattices."""
        verdict = iso_search(trivial_lattice(self.C2), sign_lattice(self.C2))
        self.assertIsInstance(verdict, NotIsomorphic)
        self.assertIn("characteristic polynomial", verdict.witness)
        mixed = direct_sum(trivial_lattice(self.C2), sign_lattice(self.C2))
        verdict = iso_search(mixed, self.regular)
        self.assertIsInstance(verdict, NotIsomorphic)

    def test_group_mismatch(self):
        """Both lattices must live over one group."""
        with self.assertRaises(GroupMismatch):
            iso_search(self.regular, regular_lattice(cyclic_group(3)))

    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(-2, 2)), max_size=4))
    @settings(max_examples=20, deadline=None)
    def test_conjugates_are_found(self, moves):
        """Z[C2] in a scrambled basis is recognised with a verified intertwiner."""
        T = IntMatrix.identity(2)
        for i, k in moves:
            rows = T.to_list()
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[1 - i])]
            T = IntMatrix.from_rows(rows)
        scrambled = conjugate(self.regular, T)
        verdict = iso_search(self.regular, scrambled)
        self.assertIsInstance(verdict, Isomorphic)
        self.assertTrue(LatticeMap(self.regular, scrambled, verdict.matrix).is_intertwiner())
        self.assertEqual(abs(verdict.matrix.det()), 1)

    def test_lambda_and_case1(self):
        """The cyclic lattice and the case 1 lattice are isomorphic at p = 3."""
        A, B = lambda_lattice(3), case1_lattice(3)
        verdict = iso_search(A, B)
        self.assertIsInstance(verdict, Isomorphic)
        self.assertTrue(LatticeMap(A, B, verdict.matrix).is_intertwiner())

    def test_lambda_tensor(self):
        """The tensor description of the cyclic lattice agrees with it."""
        verdict = iso_search(lambda_tensor(3), lambda_lattice(3))
        self.assertIsInstance(verdict, Isomorphic)


if __name__ == "__main__":
    unittest.main()
