import random

from django.test import SimpleTestCase

from core.exceptions import LatticeError
from core.util.lattice import (
    LatticeMatrix,
    annihilator,
    dual_basis,
    extend_to_basis,
    is_saturated,
    normalize_sign,
    pairing,
    primitive,
    quotient,
    rank,
    saturate,
    smith_decomposition,
    smith_normal_form,
    solve_integer,
    unimodular_inverse,
)


def random_matrix(rand: random.Random, rows: int, cols: int, bound: int = 6) -> LatticeMatrix:
    return LatticeMatrix.from_rows(
        [[rand.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


class VectorHelpersTest(SimpleTestCase):
    def test_pairing(self):
        self.assertEqual(pairing((1, -2, 3), (4, 5, 6)), 12)
        with self.assertRaises(LatticeError):
            pairing((1, 2), (1, 2, 3))

    def test_primitive(self):
        expect = {(4, -6): (2, -3), (0, 5): (0, 1), (-3, 0, 9): (-1, 0, 3), (1, 1): (1, 1)}
        for w, prim in expect.items():
            with self.subTest(w=w):
                self.assertEqual(primitive(w), prim)
        with self.assertRaises(LatticeError):
            primitive((0, 0))

    def test_normalize_sign(self):
        self.assertEqual(normalize_sign((0, -1, 2)), (0, 1, -2))
        self.assertEqual(normalize_sign((3, -1)), (3, -1))
        self.assertEqual(normalize_sign((0, 0)), (0, 0))


class LatticeMatrixTest(SimpleTestCase):
    def test_rows_and_columns_agree(self):
        A = LatticeMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        self.assertEqual((A.rows, A.cols), (2, 3))
        self.assertEqual(A.column(1), (2, 5))
        self.assertEqual(LatticeMatrix.from_columns(A.column_vectors), A)
        self.assertEqual(A.transpose().row(2), (3, 6))

    def test_ragged_rows_rejected(self):
        with self.assertRaises(LatticeError):
            LatticeMatrix.from_rows([[1, 2], [3]])

    def test_apply_and_matmul(self):
        A = LatticeMatrix.from_rows([[2, 1], [1, 1]])
        B = LatticeMatrix.from_rows([[1, -1], [-1, 2]])
        self.assertEqual(A @ B, LatticeMatrix.identity(2))
        self.assertEqual(A.apply((1, -1)), (1, 0))
        with self.assertRaises(LatticeError):
            A.apply((1, 2, 3))

    def test_det(self):
        self.assertEqual(LatticeMatrix.from_rows([[2, 1], [1, 1]]).det(), 1)
        self.assertEqual(LatticeMatrix.from_rows([[2, 0], [0, 3]]).det(), 6)
        self.assertTrue(LatticeMatrix.identity(3).is_unimodular())
        self.assertFalse(LatticeMatrix.from_rows([[2, 0], [0, 1]]).is_unimodular())


class SmithNormalFormTest(SimpleTestCase):
    def assertSmith(self, A: LatticeMatrix):
        S, U, V = smith_normal_form(A)
        self.assertEqual(U @ A @ V, S)
        self.assertTrue(U.is_unimodular())
        self.assertTrue(V.is_unimodular())
        for i in range(S.rows):
            for j in range(S.cols):
                if i != j:
                    self.assertEqual(S[i, j], 0)
        d = list(S.diagonal())
        self.assertTrue(all(x >= 0 for x in d))
        nonzero = [x for x in d if x]
        self.assertEqual(nonzero, d[: len(nonzero)])
        for a, b in zip(nonzero, nonzero[1:]):
            self.assertEqual(b % a, 0)

    def test_known_forms(self):
        expect = {
            ((2, 4, 4), (-6, 6, 12), (10, -4, -16)): (2, 6, 12),
            ((2, 0), (0, 3)): (1, 6),
            ((1, 2), (2, 4)): (1, 0),
        }
        for rows, diagonal in expect.items():
            with self.subTest(rows=rows):
                A = LatticeMatrix.from_rows(rows)
                S, _, _ = smith_normal_form(A)
                self.assertEqual(S.diagonal(), diagonal)
                self.assertSmith(A)

    def test_random_matrices(self):
        rand = random.Random(42)
        for k in range(40):
            shape = (rand.randint(1, 4), rand.randint(1, 4))
            A = random_matrix(rand, *shape)
            with self.subTest(k=k, shape=shape):
                self.assertSmith(A)

    def test_empty_shapes(self):
        A = LatticeMatrix.from_columns([], rows=3)
        S, U, V = smith_normal_form(A)
        self.assertEqual((S.rows, S.cols), (3, 0))
        self.assertTrue(U.is_unimodular())

    def test_decomposition_carries_inverses(self):
        rand = random.Random(5)
        for k in range(20):
            shape = (rand.randint(1, 4), rand.randint(1, 4))
            form = smith_decomposition(random_matrix(rand, *shape))
            with self.subTest(k=k, shape=shape):
                self.assertEqual(form.U @ form.U_inv, LatticeMatrix.identity(shape[0]))
                self.assertEqual(form.V_inv @ form.V, LatticeMatrix.identity(shape[1]))
                self.assertEqual(form.rank, sum(1 for d in form.S.diagonal() if d))

    def test_negative_pivots_flipped(self):
        S, _, _ = smith_normal_form(LatticeMatrix.from_rows([[-2, 0], [0, -3]]))
        self.assertEqual(S.diagonal(), (1, 6))


class SublatticeTest(SimpleTestCase):
    def test_rank(self):
        self.assertEqual(rank([(1, 2), (2, 4)]), 1)
        self.assertEqual(rank([(1, 0, 0), (0, 1, 1), (1, 1, 1)]), 2)
        self.assertEqual(rank([], 3), 0)

    def test_saturate(self):
        (column,) = saturate([(2, 4)]).column_vectors
        self.assertEqual(column, (1, 2))
        self.assertTrue(saturate([(2, 0), (0, 2)]).is_unimodular())

    def test_is_saturated(self):
        expect = {
            ((1, 2),): True,
            ((2, 0),): False,
            ((1, 0), (1, 2)): False,
            ((1, 0), (1, 1)): True,
            ((1, 1), (2, 2)): False,
        }
        for vectors, saturated in expect.items():
            with self.subTest(vectors=vectors):
                self.assertEqual(is_saturated(vectors, 2), saturated)

    def test_quotient_kills_sub_and_splits(self):
        q = quotient(3, [(1, 1, 0), (0, 1, 1)])
        self.assertEqual(q.rank, 1)
        self.assertEqual(q.project((1, 1, 0)), (0,))
        self.assertEqual(q.project((0, 2, 2)), (0,))
        for y in [(1,), (-3,), (5,)]:
            with self.subTest(y=y):
                self.assertEqual(q.project(q.lift(y)), y)

    def test_quotient_by_nothing(self):
        q = quotient(2, [])
        self.assertEqual(q.rank, 2)
        self.assertEqual(q.project(q.lift((3, -1))), (3, -1))

    def test_extend_to_basis(self):
        for vectors in ([(1, 2)], [(3, 5, 7)], [(1, 0, 1), (0, 1, 1)], [(1, -4), (0, 1)]):
            with self.subTest(vectors=vectors):
                W, W_inv = extend_to_basis(vectors, len(vectors[0]))
                n = W.rows
                self.assertEqual(W.column_vectors[: len(vectors)], tuple(vectors))
                self.assertEqual(W @ W_inv, LatticeMatrix.identity(n))
                self.assertEqual(W_inv @ W, LatticeMatrix.identity(n))

    def test_extend_non_saturated_rejected(self):
        with self.assertRaises(LatticeError):
            extend_to_basis([(2, 0)])
        with self.assertRaises(LatticeError):
            extend_to_basis([(1, 1), (2, 2)])

    def test_unimodular_inverse(self):
        B = LatticeMatrix.from_rows([[1, 4], [0, 1]])
        self.assertEqual(unimodular_inverse(B), LatticeMatrix.from_rows([[1, -4], [0, 1]]))
        with self.assertRaises(LatticeError):
            unimodular_inverse(LatticeMatrix.from_rows([[2, 0], [0, 1]]))


class DualityTest(SimpleTestCase):
    def test_dual_basis(self):
        B = LatticeMatrix.from_columns([(1, 0), (4, 1)])
        U = dual_basis(B)
        self.assertEqual(U.column_vectors, ((1, -4), (0, 1)))
        for j, u in enumerate(U.column_vectors):
            for r, b in enumerate(B.column_vectors):
                with self.subTest(j=j, r=r):
                    self.assertEqual(pairing(u, b), int(j == r))

    def test_dual_basis_rejects_non_basis(self):
        with self.assertRaises(LatticeError):
            dual_basis(LatticeMatrix.from_columns([(1, 0), (1, 2)]))
        with self.assertRaises(LatticeError):
            dual_basis(LatticeMatrix.from_columns([(1, 0, 0), (0, 1, 0)]))

    def test_annihilator(self):
        cases = [
            ([(1, 1, 0)], 3, 2),
            ([(0, 0, 1), (0, 1, 1)], 3, 1),
            ([(2, 1)], 2, 1),
            ([(1, 0), (0, 1)], 2, 0),
        ]
        for vectors, n, dim in cases:
            with self.subTest(vectors=vectors):
                columns = annihilator(vectors, n).column_vectors
                self.assertEqual(len(columns), dim)
                for u in columns:
                    self.assertEqual(normalize_sign(u), u)
                    for w in vectors:
                        self.assertEqual(pairing(u, w), 0)
                if columns:
                    self.assertTrue(is_saturated(columns, n))

    def test_annihilator_of_a_wall(self):
        (chi,) = annihilator([(4, 1)], 2).column_vectors
        self.assertEqual(chi, (1, -4))


class SolveIntegerTest(SimpleTestCase):
    def test_solvable(self):
        A = LatticeMatrix.from_rows([[2, 0], [0, 3]])
        self.assertEqual(solve_integer(A, (4, 9)), (2, 3))

    def test_no_integer_solution(self):
        A = LatticeMatrix.from_rows([[2, 0], [0, 3]])
        self.assertIsNone(solve_integer(A, (1, 0)))

    def test_inconsistent(self):
        A = LatticeMatrix.from_rows([[1, 1], [2, 2]])
        self.assertIsNone(solve_integer(A, (1, 3)))

    def test_underdetermined_random(self):
        rand = random.Random(7)
        for k in range(25):
            A = random_matrix(rand, 2, 4)
            x = tuple(rand.randint(-5, 5) for _ in range(4))
            b = A.apply(x)
            with self.subTest(k=k):
                solution = solve_integer(A, b)
                self.assertIsNotNone(solution)
                self.assertEqual(A.apply(solution), b)
