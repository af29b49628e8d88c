import random

from django.test import SimpleTestCase

from core.exceptions import LaurentError, NotDivisibleError
from core.util.lattice import LatticeMatrix, primitive
from core.util.laurent import (
    QUOTIENT_CACHE_SIZE,
    LaurentPoly,
    QuotientRingElem,
    _character_quotient,
    _ideal_quotient,
    div_exact_euler,
    divides_euler,
    euler,
    reduce_mod_character,
    reduce_mod_ideal,
)


def random_poly(rand: random.Random, rank: int, bound: int = 4, max_terms: int = 4) -> LaurentPoly:
    terms = [
        (tuple(rand.randint(-bound, bound) for _ in range(rank)), rand.randint(-5, 5))
        for _ in range(rand.randint(0, max_terms))
    ]
    return LaurentPoly.from_terms(rank, terms)


def random_character(rand: random.Random, rank: int, bound: int = 4) -> tuple[int, ...]:
    while True:
        chi = tuple(rand.randint(-bound, bound) for _ in range(rank))
        if any(chi):
            return primitive(chi)


class LaurentPolyTest(SimpleTestCase):
    X = LaurentPoly.monomial((1, 0))
    Y = LaurentPoly.monomial((0, 1))

    def test_from_terms_merges_and_drops_zeros(self):
        f = LaurentPoly.from_terms(2, [((1, 0), 2), ((0, 1), 1), ((1, 0), -2)])
        self.assertEqual(f.terms, (((0, 1), 1),))
        self.assertTrue(LaurentPoly.from_terms(2, [((1, 1), 3), ((1, 1), -3)]).is_zero)

    def test_rank_mismatch(self):
        with self.assertRaises(LaurentError):
            LaurentPoly.from_terms(2, [((1, 0, 0), 1)])
        with self.assertRaises(LaurentError):
            LaurentPoly.one(2) + LaurentPoly.one(3)

    def test_ring_operations(self):
        f = 1 - self.X
        g = 1 + self.X
        self.assertEqual(f * g, 1 - self.X**2)
        self.assertEqual(f + g, LaurentPoly.constant(2, 2))
        self.assertEqual(f - f, LaurentPoly.zero(2))
        self.assertEqual(3 * f, f.scalar_mul(3))
        self.assertEqual(f.scalar_mul(0), LaurentPoly.zero(2))
        self.assertEqual(self.X ** 0, LaurentPoly.one(2))

    def test_negative_exponents(self):
        x_inv = LaurentPoly.monomial((-1, 0))
        self.assertEqual(self.X * x_inv, LaurentPoly.one(2))

    def test_negative_power_rejected(self):
        with self.assertRaises(LaurentError):
            self.X ** -1

    def test_coefficient_and_evaluation(self):
        f = LaurentPoly.from_terms(2, [((1, -4), -1), ((0, 0), 1), ((0, 1), -1), ((1, -3), 1)])
        self.assertEqual(f.coefficient((1, -4)), -1)
        self.assertEqual(f.coefficient((5, 5)), 0)
        self.assertEqual(f.evaluate_at_one(), 0)
        self.assertEqual(f.exponent_radius(), 4)

    def test_transform(self):
        f = self.X + 2 * self.Y
        swap = LatticeMatrix.from_rows([[0, 1], [1, 0]])
        self.assertEqual(f.transform(swap), self.Y + 2 * self.X)

    def test_str(self):
        self.assertEqual(str(LaurentPoly.zero(2)), "0")
        self.assertEqual(str(euler((1, -2))), "1 - e^(1,-2)")

    def test_context(self):
        f = 1 - 3 * self.Y
        self.assertEqual(
            f.context(),
            [
                {"exponent": [0, 0], "coefficient": 1},
                {"exponent": [0, 1], "coefficient": -3},
            ],
        )


class EulerDivisionTest(SimpleTestCase):
    def test_known_quotient(self):
        # 1 - e^(2u) = (1 - e^u)(1 + e^u)
        u = (1, -2)
        f = 1 - LaurentPoly.monomial((2, -4))
        self.assertEqual(div_exact_euler(f, u), 1 + LaurentPoly.monomial(u))

    def test_nonzero_remainder(self):
        with self.assertRaises(NotDivisibleError):
            div_exact_euler(LaurentPoly.monomial((0, 1)), (1, 0))
        self.assertFalse(divides_euler(LaurentPoly.one(2), (1, 0)))

    def test_zero_is_divisible(self):
        self.assertEqual(div_exact_euler(LaurentPoly.zero(3), (0, 1, 1)), LaurentPoly.zero(3))

    def test_character_checks(self):
        with self.assertRaises(LaurentError):
            divides_euler(LaurentPoly.one(2), (0, 0))
        with self.assertRaises(LaurentError):
            divides_euler(LaurentPoly.one(2), (2, 4))

    def test_random_division(self):
        rand = random.Random(1234)
        for k in range(1000):
            rank = rand.randint(1, 3)
            chi = random_character(rand, rank)
            g = random_poly(rand, rank)
            f = g * euler(chi)
            with self.subTest(k=k, chi=chi):
                self.assertTrue(divides_euler(f, chi))
                self.assertEqual(div_exact_euler(f, chi), g)
                if not g.is_zero:
                    self.assertEqual(f.evaluate_at_one(), 0)

    def test_random_sign_invariance(self):
        # 1 - e^(-u) = -e^(-u)(1 - e^u)
        rand = random.Random(99)
        for k in range(1000):
            rank = rand.randint(1, 3)
            chi = random_character(rand, rank)
            neg_chi = tuple(-x for x in chi)
            f = random_poly(rand, rank) * euler(chi) + random_poly(rand, rank, max_terms=1)
            with self.subTest(k=k, chi=chi):
                self.assertEqual(divides_euler(f, chi), divides_euler(f, neg_chi))
                if divides_euler(f, chi):
                    self.assertEqual(
                        div_exact_euler(f, neg_chi),
                        -LaurentPoly.monomial(chi) * div_exact_euler(f, chi),
                    )

    def test_random_division_keeps_other_factor(self):
        rand = random.Random(4321)
        for k in range(1000):
            rank = rand.randint(2, 3)
            chi = random_character(rand, rank)
            chi2 = random_character(rand, rank)
            if chi2 in (chi, tuple(-x for x in chi)):
                continue
            h = random_poly(rand, rank)
            g = euler(chi) * euler(chi2) * h
            with self.subTest(k=k, chi=chi, chi2=chi2):
                q = div_exact_euler(g, chi)
                self.assertTrue(divides_euler(q, chi2))
                self.assertEqual(q, euler(chi2) * h)
                self.assertEqual(div_exact_euler(q, chi2), h)

    def test_random_reduction_is_a_homomorphism(self):
        rand = random.Random(2024)
        for k in range(1000):
            rank = rand.randint(1, 3)
            chi = random_character(rand, rank)
            f, g = random_poly(rand, rank), random_poly(rand, rank)
            rf, rg = reduce_mod_character(f, chi), reduce_mod_character(g, chi)
            with self.subTest(k=k, chi=chi):
                self.assertEqual(reduce_mod_character(f * g, chi), rf * rg)
                self.assertEqual(reduce_mod_character(f + g, chi), rf + rg)
                self.assertEqual(reduce_mod_character(f - g, chi), rf - rg)


class QuotientRingTest(SimpleTestCase):
    def test_reduce_mod_ideal(self):
        f = LaurentPoly.monomial((1, 0, 0)) - LaurentPoly.monomial((0, 1, 0))
        # e^(1,0,0) == e^(0,1,0) once e^(1,-1,0) = 1
        self.assertTrue(reduce_mod_ideal(f, [(1, -1, 0)]).is_zero)
        self.assertFalse(reduce_mod_ideal(f, [(0, 0, 1)]).is_zero)

    def test_empty_ideal_is_identity(self):
        f = 1 - LaurentPoly.monomial((2, 3))
        x = reduce_mod_ideal(f, [])
        self.assertEqual(x.quotient.rank, 2)
        self.assertEqual(len(x.terms), 2)

    def test_non_saturated_basis_rejected(self):
        with self.assertRaises(LaurentError):
            reduce_mod_ideal(LaurentPoly.one(2), [(2, 0)])

    def test_elements_of_different_rings_do_not_mix(self):
        a = reduce_mod_ideal(LaurentPoly.one(2), [(1, 0)])
        b = reduce_mod_ideal(LaurentPoly.one(2), [(0, 1)])
        with self.assertRaises(LaurentError):
            a + b

    def test_rank_checked(self):
        x = reduce_mod_character(LaurentPoly.one(2), (1, 0))
        with self.assertRaises(LaurentError):
            QuotientRingElem(x.quotient, LaurentPoly.one(2))

    def test_quotient_caches_are_bounded(self):
        for cached in (_character_quotient, _ideal_quotient):
            with self.subTest(cache=cached.__name__):
                self.assertEqual(cached.cache_info().maxsize, QUOTIENT_CACHE_SIZE)
