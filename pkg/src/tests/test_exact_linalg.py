import unittest

from hypothesis import given, settings, strategies as st

from latnoether import FinAbGroup, IntMatrix, hermite_normal_form, smith_normal_form
from latnoether.errors import NotUnimodular, ValidationError
from latnoether.exact_linalg import (
    block_diag,
    cokernel,
    evaluate_polynomial,
    is_pure,
    kernel,
    kernel_image_cokernel,
    left_inverse,
    right_inverse,
    saturate,
    saturation_index,
    small_vectors,
    smith_form,
    solve,
    solve_matrix,
)


@st.composite
def matrices(draw, max_rows=4, max_cols=4, bound=6):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    entries = st.lists(st.integers(-bound, bound), min_size=cols, max_size=cols)
    return IntMatrix.from_rows(draw(st.lists(entries, min_size=rows, max_size=rows)), cols=cols)


@st.composite
def unimodular(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    m = IntMatrix.identity(n)
    for _ in range(draw(st.integers(0, 8))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            continue
        k = draw(st.integers(-3, 3))
        rows = [list(row) for row in m.data]
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
        m = IntMatrix.from_rows(rows)
    return m


class TestIntMatrix(unittest.TestCase):
    """Test cases for the integer matrix type."""

    def setUp(self):
        """Set up an order three rotation."""
        self.rotation = IntMatrix.from_rows([[0, -1], [1, -1]])

    def test_shape_validation(self):
        """Entries must match the declared shape."""
        with self.assertRaises(ValidationError):
            IntMatrix(2, 2, ((1, 0),))
        with self.assertRaises(ValidationError):
            IntMatrix.identity(2) @ IntMatrix.identity(3)

    def test_power_and_inverse(self):
        """Powers follow the group law, negative powers use the exact inverse."""
        self.assertTrue(self.rotation.power(3).is_identity())
        self.assertEqual(self.rotation.power(-1), self.rotation.power(2))
        self.assertEqual(IntMatrix.from_rows([[2, 1], [1, 1]]).inverse(), IntMatrix.from_rows([[1, -1], [-1, 2]]))
        with self.assertRaises(NotUnimodular):
            IntMatrix.diagonal([2, 1]).inverse()

    def test_det_and_charpoly(self):
        """Determinant and characteristic polynomial agree with hand values."""
        self.assertEqual(self.rotation.det(), 1)
        self.assertEqual(self.rotation.charpoly(), (1, 1, 1))
        self.assertEqual(IntMatrix.zeros(0, 0).det(), 1)
        self.assertEqual(self.rotation.trace(), -1)

    def test_evaluate_polynomial(self):
        """The rotation is a root of its minimal polynomial."""
        self.assertTrue(evaluate_polynomial([1, 1, 1], self.rotation).is_zero())

    def test_block_diag_and_kron(self):
        """Block diagonal and Kronecker products have the expected shapes."""
        m = block_diag([IntMatrix.diagonal([-1]), self.rotation])
        self.assertEqual(m.to_list(), [[-1, 0, 0], [0, 0, -1], [0, 1, -1]])
        self.assertEqual(self.rotation.kron(IntMatrix.identity(2)).rows, 4)


class TestNormalForms(unittest.TestCase):
    """Test cases for Smith and Hermite normal forms."""

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_smith_transforms(self, A):
        """U A V equals D, transforms are unimodular and the diagonal is a divisibility chain."""
        form = smith_form(A)
        self.assertEqual(form.U @ A @ form.V, form.D)
        self.assertTrue((form.U @ form.U_inv).is_identity())
        self.assertTrue((form.V @ form.V_inv).is_identity())
        self.assertTrue(all(d > 0 for d in form.diagonal))
        for a, b in zip(form.diagonal, form.diagonal[1:]):
            self.assertEqual(b % a, 0)
        U, D, V = smith_normal_form(A)
        self.assertEqual(D, form.D)

    @given(unimodular())
    @settings(max_examples=40, deadline=None)
    def test_hermite_of_unimodular_is_identity(self, U):
        """A unimodular matrix spans everything, so its Hermite form is the identity."""
        self.assertTrue(hermite_normal_form(U).is_identity())
        self.assertTrue((U @ U.inverse()).is_identity())

    def test_hermite_example(self):
        """Hand-reduced Hermite form."""
        H = hermite_normal_form(IntMatrix.from_rows([[4, 0], [6, 2]]))
        self.assertEqual(H.to_list(), [[2, 2], [0, 4]])

    def test_hermite_drops_zero_rows(self):
        """Dependent rows collapse."""
        H = hermite_normal_form(IntMatrix.from_rows([[1, 2], [2, 4], [0, 0]]))
        self.assertEqual(H.to_list(), [[1, 2]])

    def test_hermite_missing_pivot_columns(self):
        """Columns without a pivot and fewer rows than columns are handled."""
        H = hermite_normal_form(IntMatrix.from_rows([[0, 2, 3, 0], [0, 4, 1, 0]]))
        self.assertEqual(H.to_list(), [[0, 2, 3, 0], [0, 0, 5, 0]])
        self.assertEqual(hermite_normal_form(IntMatrix.zeros(2, 3)).rows, 0)

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_hermite_is_canonical_basis_of_row_lattice(self, A):
        """Echelon shape with reduced entries, spanning exactly the rows of A."""
        H = hermite_normal_form(A)
        self.assertEqual(H.rows, smith_form(A).rank)
        pivots = []
        for row in H.data:
            pivot = next(j for j, x in enumerate(row) if x)
            self.assertGreater(row[pivot], 0)
            pivots.append(pivot)
        self.assertEqual(pivots, sorted(set(pivots)))
        for k, pivot in enumerate(pivots):
            for i in range(k):
                self.assertTrue(0 <= H[i, pivot] < H[k, pivot])
        for row in A.data:
            self.assertIsNotNone(solve(H.T, row))
        for row in H.data:
            self.assertIsNotNone(solve(A.T, row))

    def test_smith_examples(self):
        """Invariant factors of small matrices."""
        self.assertEqual(smith_form(IntMatrix.diagonal([2, 3])).diagonal, (1, 6))
        self.assertEqual(smith_form(IntMatrix.from_rows([[1, 2], [3, 4]])).diagonal, (1, 2))
        self.assertEqual(smith_form(IntMatrix.zeros(2, 3)).rank, 0)


class TestSubmodules(unittest.TestCase):
    """Test cases for kernels, cokernels and saturation."""

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_kernel_is_pure(self, A):
        """The kernel basis is annihilated by A and saturated."""
        K = kernel(A)
        self.assertTrue((A @ K).is_zero())
        if K.cols:
            self.assertTrue(is_pure(K))

    def test_kernel_image_cokernel(self):
        """All three pieces of a rank one map."""
        A = IntMatrix.from_rows([[1, 2], [2, 4]])
        K, image, C = kernel_image_cokernel(A)
        self.assertEqual(K.cols, 1)
        self.assertTrue((A @ K).is_zero())
        self.assertEqual(hermite_normal_form(image.T).to_list(), [[1, 2]])
        self.assertEqual(C, FinAbGroup((), 1))

    @given(matrices())
    @settings(max_examples=40, deadline=None)
    def test_kernel_image_cokernel_agree(self, A):
        """The combined call matches the separate kernel and cokernel."""
        K, image, C = kernel_image_cokernel(A)
        self.assertEqual(C, cokernel(A))
        self.assertEqual(K.cols, kernel(A).cols)
        self.assertEqual(image.cols + K.cols, A.cols)

    def test_cokernel(self):
        """Cokernels of diagonal maps."""
        self.assertEqual(cokernel(IntMatrix.diagonal([2, 3])), FinAbGroup((6,)))
        self.assertEqual(cokernel(IntMatrix.diagonal([2, 4])), FinAbGroup((2, 4)))
        self.assertEqual(cokernel(IntMatrix.zeros(2, 1)), FinAbGroup((), 2))

    def test_saturation(self):
        """A non-primitive vector saturates to its primitive multiple."""
        S = IntMatrix.from_rows([[2], [4]])
        self.assertEqual(saturation_index(S), 2)
        self.assertEqual(saturate(S).to_list(), [[1], [2]])
        self.assertFalse(is_pure(S))

    def test_inverses(self):
        """One-sided inverses exist exactly for pure or surjective maps."""
        B = IntMatrix.from_rows([[1], [2]])
        self.assertTrue((left_inverse(B) @ B).is_identity())
        self.assertTrue((B.T @ right_inverse(B.T)).is_identity())
        with self.assertRaises(ValidationError):
            left_inverse(IntMatrix.from_rows([[2], [0]]))

    def test_solve(self):
        """Integer solutions exist only when the divisibility allows."""
        A = IntMatrix.diagonal([2, 3])
        self.assertEqual(solve(A, (4, 9)), (2, 3))
        self.assertIsNone(solve(A, (1, 0)))
        X = solve_matrix(A, IntMatrix.diagonal([2, 3]))
        self.assertTrue(X.is_identity())

    def test_small_vectors_order(self):
        """Support one comes first, then larger supports."""
        vectors = list(small_vectors(2, 1))
        self.assertEqual(vectors[:4], [(1, 0), (-1, 0), (0, 1), (0, -1)])
        self.assertEqual(len(vectors), 8)


class TestFinAbGroup(unittest.TestCase):
    """Test cases for finitely generated abelian groups."""

    def test_normalisation(self):
        """Arbitrary cyclic orders normalise to invariant factors."""
        self.assertEqual(FinAbGroup.from_diagonal([6, 4]), FinAbGroup((2, 12)))
        self.assertEqual(FinAbGroup.from_diagonal([1, 0, 3]), FinAbGroup((3,), 1))
        self.assertTrue(FinAbGroup.from_diagonal([1, 1]).is_trivial)

    def test_validation(self):
        """Invariant factors must divide each other."""
        with self.assertRaises(ValidationError):
            FinAbGroup((4, 2))
        with self.assertRaises(ValidationError):
            FinAbGroup((1,))

    def test_rank_mod_and_str(self):
        """p-rank and printing."""
        group = FinAbGroup((2, 6), 1)
        self.assertEqual(group.rank_mod(2), 3)
        self.assertEqual(group.rank_mod(3), 2)
        self.assertEqual(str(group), "Z/2 + Z/6 + Z")
        self.assertEqual(str(FinAbGroup()), "0")
        self.assertEqual(FinAbGroup((3,)).order, 3)


if __name__ == "__main__":
    unittest.main()
