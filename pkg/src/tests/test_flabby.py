import os
import unittest
from unittest.mock import patch

from hypothesis import assume, given, settings, strategies as st

from latnoether import Caps, IntMatrix, Lattice, flabby_resolution, induced_lattice, permutation_certificate
from latnoether import rho_invertible, set_caps, standard_group, subgroup_reps
from latnoether.cohomology import classify, is_flabby
from latnoether.exact_linalg import is_pure, kernel
from latnoether.flabby import (
    Basis,
    No,
    NotPermutation,
    Yes,
    deflation_consistency,
    invertible_verdict,
    permutation_projective_witnesses,
    split_section,
)
from latnoether.group_core import case1_group, cyclic_group
from latnoether.lattice_core import conjugate, direct_sum, is_permutation_matrix, regular_lattice, sublattice
from latnoether.lattice_core import trivial_lattice
from latnoether.paper_models import case1_lattice, reiner_lattice

from lattices import lattices, unimodular_matrices

SLOW = os.environ.get("LATNOETHER_SLOW_TESTS") == "1"


def augmentation_ideal(G):
    P = regular_lattice(G)
    ideal, _ = sublattice(P, kernel(IntMatrix.from_rows([[1] * P.rank])))
    return ideal


class TestResolution(unittest.TestCase):
    """Test cases for flabby resolutions."""

    def setUp(self):
        """Set up the order two lattices."""
        self.C2 = cyclic_group(2, "tau")
        self.sign = Lattice.from_generators(self.C2, [IntMatrix.from_rows([[-1]])])

    def test_trivial_lattice(self):
        """Z over C2 resolves through Z + Z[C2] with E of rank two."""
        resolution = flabby_resolution(trivial_lattice(self.C2))
        self.assertEqual(resolution.P.rank, 3)
        self.assertEqual(resolution.E.rank, 2)
        self.assertEqual([H.order for H in resolution.cover], [2, 1])
        compact = flabby_resolution(trivial_lattice(self.C2), compact=True)
        self.assertEqual(compact.P.rank, 1)
        self.assertEqual(compact.E.rank, 0)

    def test_sign_lattice(self):
        """The sign lattice resolves through Z[C2] with E trivial."""
        resolution = flabby_resolution(self.sign)
        self.assertEqual(resolution.P.rank, 2)
        self.assertEqual(resolution.E.matrices[0].to_list(), [[1]])

    @given(lattices(max_rank=3))
    @settings(max_examples=25, deadline=None)
    def test_exactness(self, M):
        """Ranks add up, the image of M is pure, the maps compose to zero and E is flabby."""
        for compact in (False, True):
            resolution = flabby_resolution(M, compact=compact)
            self.assertEqual(M.rank + resolution.E.rank, resolution.P.rank)
            self.assertTrue(resolution.P.is_permutation())
            self.assertTrue((resolution.project.matrix @ resolution.inject.matrix).is_zero())
            self.assertTrue(resolution.inject.is_intertwiner())
            self.assertTrue(resolution.project.is_intertwiner())
            if M.rank:
                self.assertTrue(is_pure(resolution.inject.matrix))
            self.assertTrue(is_flabby(resolution.E))

    def test_h1_is_similarity_invariant(self):
        """Adding a permutation summand to M leaves H^1 of E unchanged."""
        G = standard_group("C2xC2")
        M = augmentation_ideal(G)
        extra = induced_lattice(G, subgroup_reps(G)[1])
        E1 = flabby_resolution(M).E
        E2 = flabby_resolution(direct_sum(M, extra)).E
        h1 = [entry.h1 for entry in classify(E1).entries]
        self.assertEqual(h1, [entry.h1 for entry in classify(E2).entries])


class TestInvertibility(unittest.TestCase):
    """Test cases for the invertibility decisions."""

    def tearDown(self):
        """Restore default caps."""
        set_caps(None)

    def test_case1_is_endo_miyata(self):
        """M(3) lives over a cyclic group."""
        verdict = rho_invertible(case1_lattice(3))
        self.assertIsInstance(verdict.invertible, Yes)
        self.assertEqual(verdict.invertible.reason, "endo-miyata")
        self.assertEqual(verdict.acting_group.order, 6)
        self.assertIn("retract rational", verdict.conclusion)
        self.assertIn("Saltman", verdict.conclusion)

    def test_conclusion_names_criterion_when_not_invertible(self):
        """A negative verdict names the retract rationality criterion too."""
        with patch("latnoether.flabby.invertible_verdict", return_value=No("forced")):
            verdict = rho_invertible(regular_lattice(standard_group("C2xC2")))
        self.assertIsInstance(verdict.invertible, No)
        self.assertIn("not retract rational", verdict.conclusion)
        self.assertIn("Saltman", verdict.conclusion)

    @given(lattices(groups=("C2", "C3", "C4"), max_rank=3))
    @settings(max_examples=15, deadline=None)
    def test_cyclic_groups(self, M):
        """Every lattice over a cyclic group has invertible flabby class."""
        self.assertEqual(rho_invertible(M).invertible.reason, "endo-miyata")

    def test_trivial_kernel_is_divided_out(self):
        """A trivial action reduces the acting group to the trivial group."""
        verdict = rho_invertible(trivial_lattice(standard_group("C2xC2")))
        self.assertEqual(verdict.acting_group.order, 1)
        self.assertIsInstance(verdict.invertible, Yes)

    def test_permutation_over_klein_four(self):
        """A permutation lattice over C2 x C2 has invertible flabby class by certificate."""
        verdict = rho_invertible(regular_lattice(standard_group("C2xC2")))
        self.assertIsInstance(verdict.invertible, Yes)
        self.assertEqual(verdict.invertible.reason, "certificate")

    def test_split_section(self):
        """Permutation lattices split their cover, the sign lattice does not."""
        E = regular_lattice(standard_group("C2xC2"))
        self.assertIsNotNone(split_section(E))
        sign = Lattice.from_generators(cyclic_group(2, "tau"), [IntMatrix.from_rows([[-1]])])
        self.assertIsNone(split_section(sign))
        self.assertIsInstance(invertible_verdict(sign), No)
        self.assertTrue(permutation_projective_witnesses(sign))
        self.assertEqual(permutation_projective_witnesses(E), [])

    def test_cap_falls_back_to_search(self):
        """Over the rank cap a permutation basis still certifies invertibility."""
        set_caps(Caps(rank=1))
        verdict = invertible_verdict(regular_lattice(standard_group("C2xC2")))
        self.assertIsInstance(verdict, Yes)
        self.assertIsNotNone(verdict.certificate)

    def test_deflation_consistency(self):
        """Properties agree over the group and over its quotient by the trivially acting part."""
        G = case1_group(3)
        M = Lattice.from_generators(G, [IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[-1]])])
        N = G.subgroup([G.generators[0]])
        result = deflation_consistency(M, N)
        self.assertEqual(set(result), {"permutation", "flabby", "coflabby", "invertible", "resolution", "rho"})
        self.assertTrue(all(result.values()), result)

    @given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1), st.data())
    @settings(max_examples=20 if SLOW else 6, deadline=None)
    def test_deflation_consistency_sweep(self, a, b, c, data):
        """Scrambled tau actions with sigma3 acting trivially agree over both groups."""
        assume(0 < a + b + 2 * c <= 4)
        tau = reiner_lattice(a, b, c).matrices[0]
        T = data.draw(unimodular_matrices(tau.rows))
        G = case1_group(3)
        M = Lattice.from_generators(G, [IntMatrix.identity(tau.rows), T.inverse() @ tau @ T])
        result = deflation_consistency(M, G.subgroup([G.generators[0]]))
        for key in ("flabby", "coflabby", "invertible", "resolution", "rho"):
            self.assertTrue(result[key], key)
        if a:
            self.assertTrue(result["permutation"])


class TestPermutationCertificate(unittest.TestCase):
    """Test cases for the permutation basis search."""

    def test_trivial(self):
        """Z has the basis e1."""
        found = permutation_certificate(trivial_lattice(cyclic_group(2)))
        self.assertIsInstance(found, Basis)
        self.assertEqual(found.matrix.to_list(), [[1]])

    def test_scrambled_regular(self):
        """Z[C2] in another basis is recognised and the basis verifies."""
        M = conjugate(regular_lattice(cyclic_group(2)), IntMatrix.from_rows([[2, 1], [1, 1]]))
        found = permutation_certificate(M)
        self.assertIsInstance(found, Basis)
        B = found.matrix
        for m in M.matrices:
            self.assertTrue(is_permutation_matrix(B.inverse() @ m @ B))

    def test_obstructions(self):
        """Lattices with a sign summand are not permutation lattices."""
        sign = Lattice.from_generators(cyclic_group(2, "tau"), [IntMatrix.from_rows([[-1]])])
        self.assertIsInstance(permutation_certificate(sign), NotPermutation)
        self.assertIsInstance(permutation_certificate(reiner_lattice(1, 1, 1)), NotPermutation)


if __name__ == "__main__":
    unittest.main()
