import random

from django.test import SimpleTestCase

from core.exceptions import GKMError, MembershipError, PLPError
from core.fan.cellular import certify_cellular
from core.fan.cone import dual_description
from core.kring.gkm import (
    KClass,
    build_gkm,
    is_member,
    kclass,
    kclass_add,
    kclass_from_rep,
    kclass_mul,
    kclass_scale,
    kclass_sub,
    kclass_zero,
    restrict,
)
from core.kring.plp import (
    PLPFunction,
    constant_plp,
    from_kclass,
    plp_add,
    plp_mul,
    reduce_to_cone,
    restriction_map,
    to_kclass,
    validate_plp,
)
from core.tests.facts import Surface, ThreeCones, load_components, load_fan
from core.util.laurent import LaurentPoly


def random_poly(rand: random.Random, rank: int = 2, bound: int = 3) -> LaurentPoly:
    terms = [
        (tuple(rand.randint(-bound, bound) for _ in range(rank)), rand.randint(-5, 5))
        for _ in range(rand.randint(0, 3))
    ]
    return LaurentPoly.from_terms(rank, terms)


class SurfaceMixin:
    """The complete surface with its certificate, graph and reference basis."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.fan = load_fan(Surface.FIXTURE)
        cls.cert = certify_cellular(cls.fan, Surface.V)
        cls.g = build_gkm(cls.fan, cls.cert)
        cls.reference = [KClass(tuple(load_components(name))) for name in Surface.REFERENCE_CLASSES]

    def random_member(self, rand: random.Random) -> KClass:
        total = kclass_from_rep(random_poly(rand), self.g.m)
        for f_i in self.reference:
            total = kclass_add(total, kclass_scale(f_i, random_poly(rand)))
        return total


### GKM tests ###


class GKMGraphTest(SurfaceMixin, SimpleTestCase):
    def test_edges(self):
        self.assertEqual(self.g.edges, Surface.EDGES)
        self.assertEqual(self.g.order, Surface.ORDER)

    def test_neighbors(self):
        self.assertEqual(self.g.neighbors(0), [(1, (1, -4)), (3, (0, 1))])
        self.assertEqual(self.g.neighbors(4), [(2, (1, 0)), (3, (1, -1))])

    def test_context_is_one_based(self):
        context = self.g.context()
        self.assertEqual(context["m"], 5)
        self.assertEqual(context["edges"][0], {"i": 1, "j": 2, "chi": [1, -4]})
        self.assertEqual(context["order"], [1, 2, 3, 4, 5])

    def test_incomplete_fan_rejected(self):
        fan = load_fan(ThreeCones.FIXTURE)
        with self.assertRaises(GKMError):
            build_gkm(fan, certify_cellular(fan, ThreeCones.V))

    def test_certificate_of_another_fan_rejected(self):
        other = load_fan(ThreeCones.FIXTURE)
        with self.assertRaises(GKMError):
            build_gkm(self.fan, certify_cellular(other, ThreeCones.V))


class MembershipTest(SurfaceMixin, SimpleTestCase):
    def test_reference_classes_are_members(self):
        for name, f_i in zip(Surface.REFERENCE_CLASSES, self.reference):
            with self.subTest(name=name):
                self.assertEqual(is_member(self.g, f_i.components), (True, []))

    def test_non_member(self):
        one = LaurentPoly.one(2)
        zero = LaurentPoly.zero(2)
        t = [one, zero, zero, zero, zero]
        self.assertEqual(is_member(self.g, t), (False, [(0, 1), (0, 3)]))
        with self.assertRaises(MembershipError) as ctx:
            kclass(self.g, t)
        self.assertEqual(ctx.exception.violations, [(0, 1), (0, 3)])
        self.assertIn("(1,2), (1,4)", str(ctx.exception))

    def test_wrong_shape(self):
        with self.assertRaises(GKMError):
            is_member(self.g, [LaurentPoly.one(2)] * 4)
        with self.assertRaises(GKMError):
            kclass(self.g, [LaurentPoly.one(3)] * 5)

    def test_constants_are_members(self):
        for k in range(-2, 3):
            a = kclass_from_rep(LaurentPoly.constant(2, k) + LaurentPoly.monomial((3, -1)), 5)
            with self.subTest(k=k):
                self.assertTrue(is_member(self.g, a.components).ok)

    def test_ring_operations_stay_members(self):
        rand = random.Random(11)
        members = [self.random_member(rand) for _ in range(50)]
        for k, a in enumerate(members):
            with self.subTest(member=k):
                self.assertTrue(is_member(self.g, a.components).ok)
        for k in range(25):
            a, b = rand.sample(members, 2)
            with self.subTest(pair=k):
                for c in (kclass_add(a, b), kclass_sub(a, b), kclass_mul(a, b)):
                    self.assertTrue(is_member(self.g, c.components).ok)

    def test_restrict(self):
        f2 = self.reference[1]
        self.assertEqual(restrict(f2, 1), f2.components[1])
        self.assertTrue(restrict(f2, 4).is_zero)
        with self.assertRaises(GKMError):
            restrict(f2, 5)

    def test_zero_class(self):
        zero = kclass_zero(5, 2)
        self.assertTrue(zero.is_zero)
        self.assertEqual(kclass_sub(self.reference[0], self.reference[0]), zero)

    def test_mismatched_lengths(self):
        with self.assertRaises(GKMError):
            kclass_add(self.reference[0], kclass_zero(4, 2))


### PLP tests ###


class PLPTest(SurfaceMixin, SimpleTestCase):
    def test_round_trip(self):
        rand = random.Random(3)
        for k in range(50):
            a = self.random_member(rand)
            if k % 2:
                a = kclass_mul(a, self.random_member(rand))
            with self.subTest(k=k):
                p = from_kclass(self.g, self.fan, a)
                self.assertTrue(validate_plp(self.fan, p).ok)
                self.assertEqual(to_kclass(p), a)

    def test_reference_basis_pieces(self):
        for name, f_i in zip(Surface.REFERENCE_CLASSES, self.reference):
            with self.subTest(name=name):
                p = from_kclass(self.g, self.fan, f_i)
                self.assertEqual(validate_plp(self.fan, p), (True, []))
                self.assertEqual(len(p.components), len(self.fan.all_cones))

    def test_operations_match_tuples(self):
        rand = random.Random(8)
        for k in range(25):
            a, b = self.random_member(rand), self.random_member(rand)
            pa = from_kclass(self.g, self.fan, a)
            pb = from_kclass(self.g, self.fan, b)
            with self.subTest(k=k):
                self.assertEqual(plp_add(pa, pb), from_kclass(self.g, self.fan, kclass_add(a, b)))
                self.assertEqual(plp_mul(pa, pb), from_kclass(self.g, self.fan, kclass_mul(a, b)))

    def test_constant_function(self):
        x = 1 - LaurentPoly.monomial((1, 2))
        self.assertEqual(
            constant_plp(self.fan, x), from_kclass(self.g, self.fan, kclass_from_rep(x, 5))
        )

    def test_value_at_origin_is_the_augmentation(self):
        p = from_kclass(self.g, self.fan, self.reference[0])
        origin = self.fan.all_cones[0]
        self.assertTrue(origin.is_zero)
        self.assertEqual(p.at(origin).poly, LaurentPoly.zero(0))
        one = from_kclass(self.g, self.fan, kclass_from_rep(LaurentPoly.one(2), 5))
        self.assertEqual(one.at(origin).poly, LaurentPoly.one(0))

    def test_restriction_map(self):
        p = from_kclass(self.g, self.fan, self.reference[1])
        sigma = self.fan.max_cones[1]
        ray = dual_description([(4, 1)])
        self.assertEqual(restriction_map(ray, sigma, p.at(sigma)), p.at(ray))
        with self.assertRaises(PLPError):
            restriction_map(dual_description([(0, 1)]), sigma, p.at(sigma))

    def test_tampered_component_detected(self):
        p = from_kclass(self.g, self.fan, self.reference[0])
        sigma = self.fan.max_cones[0]
        k = self.fan.all_cones.index(sigma)
        bumped = p.components[k] + reduce_to_cone(LaurentPoly.one(2), sigma)
        tampered = PLPFunction(self.fan, p.components[:k] + (bumped,) + p.components[k + 1 :])
        check = validate_plp(self.fan, tampered)
        self.assertFalse(check.ok)
        self.assertTrue(check.violations)
        with self.assertRaises(MembershipError):
            to_kclass(tampered)

    def test_wrong_length(self):
        p = from_kclass(self.g, self.fan, self.reference[0])
        with self.assertRaises(PLPError):
            PLPFunction(self.fan, p.components[1:])

    def test_incomplete_fan_rejected(self):
        fan = load_fan(ThreeCones.FIXTURE)
        constant = constant_plp(fan, LaurentPoly.one(2))
        with self.assertRaises(PLPError):
            to_kclass(constant)
        with self.assertRaises(PLPError):
            from_kclass(self.g, fan, kclass_from_rep(LaurentPoly.one(2), fan.m))

    def test_context(self):
        p = from_kclass(self.g, self.fan, self.reference[0])
        pieces = p.context()
        self.assertEqual([piece["cone"] for piece in pieces], list(range(1, 12)))
        self.assertEqual(pieces[0]["rays"], [])
        self.assertEqual(pieces[0]["terms"], [])
