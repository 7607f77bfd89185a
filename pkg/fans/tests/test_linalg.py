from fractions import Fraction

from django.test import SimpleTestCase

from fans.linalg import (
    compound, determinant, hermite_transform, is_feasible, kernel, leading_minors_positive,
    mat_mul, rank, rref, solve, wedge,
)


class EliminationTests(SimpleTestCase):
    def test_rref_returns_nonzero_rows_and_pivots(self):
        rows, pivots = rref([[2, 4, 0], [1, 2, 1], [3, 6, 1]], 3)
        self.assertEqual(pivots, (0, 2))
        self.assertEqual(rows, [[1, 2, 0], [0, 0, 1]])

    def test_rank_of_empty_matrix_is_zero(self):
        self.assertEqual(rank([], 4), 0)
        self.assertEqual(rref([], 3), ([], ()))

    def test_kernel_vectors_are_annihilated(self):
        matrix = [[1, 1, 1], [0, 1, -1]]
        basis = kernel(matrix, 3)
        self.assertEqual(len(basis), 1)
        for row in matrix:
            self.assertEqual(sum(a * b for a, b in zip(row, basis[0])), 0)

    def test_kernel_of_no_rows_is_everything(self):
        self.assertEqual(len(kernel([], 3)), 3)

    def test_solve(self):
        self.assertEqual(solve([[1, 1], [1, -1]], 2, [3, 1]), [2, 1])
        self.assertIsNone(solve([[1, 1], [2, 2]], 2, [1, 3]))

    def test_exact_rationals(self):
        self.assertEqual(solve([[3]], 1, [1]), [Fraction(1, 3)])


class DeterminantTests(SimpleTestCase):
    def test_integer_and_rational_determinants(self):
        self.assertEqual(determinant([[1, 2], [3, 4]]), -2)
        self.assertEqual(determinant([[Fraction(1, 2), 0], [0, 4]]), 2)
        self.assertEqual(determinant([]), 1)

    def test_wedge_of_two_vectors_is_the_minor_list(self):
        self.assertEqual(wedge([(1, 0, 0), (0, 1, 0)], 3), [1, 0, 0])
        self.assertEqual(wedge([(0, 1, 0), (1, 0, 0)], 3), [-1, 0, 0])

    def test_compound_of_identity(self):
        identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        self.assertEqual(compound(identity, 3, 3, 2), identity)

    def test_sylvester(self):
        self.assertTrue(leading_minors_positive([[2, 1], [1, 2]]))
        self.assertFalse(leading_minors_positive([[1, 2], [2, 1]]))
        self.assertTrue(leading_minors_positive([]))


class HermiteTests(SimpleTestCase):
    def check(self, columns, n):
        t, t_inv, h, pivots = hermite_transform(columns, n)
        g = [[columns[j][i] for j in range(len(columns))] for i in range(n)]
        self.assertEqual(mat_mul(t, g, n, len(columns)), h)
        identity = [[int(i == j) for j in range(n)] for i in range(n)]
        self.assertEqual(mat_mul(t_inv, t, n, n), identity)
        return h, pivots

    def test_unimodular_pair(self):
        h, pivots = self.check([(2, 1, 0), (1, 1, 0)], 3)
        self.assertEqual(pivots, 2)
        self.assertEqual((h[0][0], h[1][1]), (1, 1))

    def test_index_two_pair(self):
        h, pivots = self.check([(1, 0), (1, 2)], 2)
        self.assertEqual(pivots, 2)
        self.assertEqual(h[0][0] * h[1][1], 2)

    def test_no_columns(self):
        _, pivots = self.check([], 2)
        self.assertEqual(pivots, 0)


class FeasibilityTests(SimpleTestCase):
    def test_strict_inequalities(self):
        # x > 0, y > 0, x + y < 1
        system = [([1, 0], 0, True), ([0, 1], 0, True), ([-1, -1], -1, True)]
        self.assertTrue(is_feasible(2, inequalities=system))
        # x > 0, x < 0
        self.assertFalse(is_feasible(1, inequalities=[([1], 0, True), ([-1], 0, True)]))

    def test_weak_against_strict(self):
        self.assertTrue(is_feasible(1, inequalities=[([1], 0, False), ([-1], 0, False)]))
        self.assertFalse(is_feasible(1, inequalities=[([1], 0, True), ([-1], 0, False)]))

    def test_equalities_are_eliminated_first(self):
        equalities = [([1, 1], 2)]
        self.assertTrue(is_feasible(2, equalities, [([1, -1], 0, True)]))
        self.assertFalse(is_feasible(2, equalities, [([1, 0], 2, True), ([0, 1], 0, True)]))
        self.assertFalse(is_feasible(2, [([1, 1], 1), ([1, 1], 2)]))
