import random

from django.test import SimpleTestCase

from core.exceptions import CellularError
from core.fan.cellular import (
    INVALID_FAN,
    NON_SMOOTH,
    NOT_GENERIC,
    NOT_PURE,
    CellularCertificate,
    RejectionReport,
    bb_order,
    cell_characters,
    certify_cellular,
    distinguished_face,
    is_generic,
    verify_certificate,
)
from core.fan.cone import dual_description, zero_cone
from core.fan.fan import Fan
from core.tests.facts import NonSmoothThreeCones, Surface, ThreeCones, Threefold, load_fan
from core.util.lattice import pairing


class GenericityTest(SimpleTestCase):
    def test_generic_vectors(self):
        fan = load_fan(Surface.FIXTURE)
        expect = {(5, 1): True, (1, 0): False, (4, 1): False, (-2, -2): False, (-3, 1): True}
        for v, generic in expect.items():
            with self.subTest(v=v):
                self.assertEqual(is_generic(fan, v), generic)

    def test_outside_the_support(self):
        self.assertFalse(is_generic(load_fan(ThreeCones.FIXTURE), (-1, -1)))

    def test_rank_mismatch(self):
        with self.assertRaises(CellularError):
            is_generic(load_fan(ThreeCones.FIXTURE), (1, 2, 3))


class DistinguishedFaceTest(SimpleTestCase):
    def test_v_inside(self):
        sigma = dual_description([(1, 0), (4, 1)])
        self.assertEqual(distinguished_face(sigma, (5, 1)), zero_cone(2))

    def test_v_outside(self):
        sigma = dual_description([(4, 1), (2, 1)])
        self.assertEqual(distinguished_face(sigma, (5, 1)).rays, ((2, 1),))

    def test_whole_cone(self):
        sigma = dual_description([(0, 1), (-1, -1)])
        self.assertEqual(distinguished_face(sigma, (5, 1)), sigma)


class OrderTest(SimpleTestCase):
    def test_cycle_reported(self):
        fan = load_fan(ThreeCones.FIXTURE)
        shared = dual_description([(4, 1)])
        ordering = bb_order(fan, (5, 1), [shared, shared, zero_cone(2)])
        self.assertFalse(ordering.ok)
        self.assertIsNone(ordering.order)
        self.assertEqual(set(ordering.cycle), {0, 1})

    def test_lowest_index_first(self):
        fan = load_fan(Surface.FIXTURE)
        # No maximal cone lies inside another, so nothing is constrained
        ordering = bb_order(fan, (5, 1), fan.max_cones)
        self.assertEqual(ordering.order, (0, 1, 2, 3, 4))


class CellCharactersTest(SimpleTestCase):
    def test_dual_to_the_rays(self):
        sigma = dual_description([(1, 0), (4, 1)])
        self.assertEqual(set(cell_characters(sigma, zero_cone(2))), {(1, -4), (0, 1)})

    def test_orthogonal_to_tau(self):
        sigma = dual_description([(4, 1), (2, 1)])
        tau = dual_description([(2, 1)])
        (u,) = cell_characters(sigma, tau)
        self.assertEqual(pairing(u, (2, 1)), 0)
        self.assertEqual(pairing(u, (4, 1)), 2)

    def test_point_cell(self):
        sigma = dual_description([(0, 1), (-1, -1)])
        self.assertEqual(cell_characters(sigma, sigma), ())

    def test_non_smooth_quotient(self):
        sigma = dual_description([(4, 1), (2, 1)])
        with self.assertRaises(CellularError):
            cell_characters(sigma, zero_cone(2))


class CertifyCellularTest(SimpleTestCase):
    def certify(self, fixture: str, v) -> CellularCertificate:
        cert = certify_cellular(load_fan(fixture), v)
        self.assertIsInstance(cert, CellularCertificate)
        self.assertEqual(verify_certificate(cert), [])
        return cert

    def test_three_cone_fan(self):
        cert = self.certify(ThreeCones.FIXTURE, ThreeCones.V)
        self.assertEqual(tuple(t.rays for t in cert.tau), ThreeCones.TAU_RAYS)
        self.assertEqual(cert.order, ThreeCones.ORDER)
        self.assertEqual(cert.cell_dims, ThreeCones.CELL_DIMS)

    def test_complete_surface(self):
        cert = self.certify(Surface.FIXTURE, Surface.V)
        self.assertEqual(cert.order, Surface.ORDER)
        for i, expected in enumerate(Surface.CELL_CHARACTERS):
            with self.subTest(cone=i + 1):
                self.assertEqual(set(cert.cell_characters[i]), expected)

    def test_threefold_with_non_simplicial_cone(self):
        cert = self.certify(Threefold.FIXTURE, Threefold.V)
        self.assertEqual(cert.order, Threefold.ORDER)
        self.assertFalse(cert.fan.max_cones[Threefold.NON_SIMPLICIAL].is_simplicial)
        for i, rays in enumerate(Threefold.TAU_RAYS):
            with self.subTest(cone=i + 1):
                self.assertEqual(cert.tau[i].rays, rays)
                self.assertEqual(cert.cell_dims[i], 3 - len(rays))

    def test_first_cell_is_a_top_cell(self):
        for facts in (ThreeCones, Surface, Threefold):
            with self.subTest(fixture=facts.FIXTURE):
                cert = self.certify(facts.FIXTURE, facts.V)
                self.assertTrue(cert.tau[cert.order[0]].is_zero)

    def test_non_smooth_quotient_rejected(self):
        report = certify_cellular(load_fan(NonSmoothThreeCones.FIXTURE), NonSmoothThreeCones.V)
        self.assertIsInstance(report, RejectionReport)
        self.assertEqual(report.reason, NON_SMOOTH)
        self.assertEqual(report.cone, NonSmoothThreeCones.REJECTED_CONE)
        rejected = NonSmoothThreeCones.REJECTED_CONE
        self.assertEqual(report.tau[rejected].rays, NonSmoothThreeCones.TAU_REJECTED)
        self.assertEqual(report.context()["cone"], NonSmoothThreeCones.REJECTED_CONE + 1)

    def test_not_generic_rejected(self):
        for v in ((1, 0), (4, 1), (-1, -1)):
            with self.subTest(v=v):
                report = certify_cellular(load_fan(ThreeCones.FIXTURE), v)
                self.assertIsInstance(report, RejectionReport)
                self.assertEqual(report.reason, NOT_GENERIC)

    def test_invalid_fan_rejected(self):
        fan = Fan.from_rays(2, [(1, 0), (-1, 0)], [[0, 1]])
        report = certify_cellular(fan, (1, 1))
        self.assertEqual(report.reason, INVALID_FAN)
        self.assertIn("cone 1: not strongly convex", report.violations)

    def test_not_pure_rejected(self):
        fan = Fan.from_rays(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [2]])
        report = certify_cellular(fan, (2, 1))
        self.assertEqual(report.reason, NOT_PURE)
        self.assertEqual(report.cone, 1)

    def test_context_is_one_based(self):
        cert = self.certify(ThreeCones.FIXTURE, ThreeCones.V)
        context = cert.context()
        self.assertEqual(context["order"], [1, 2, 3])
        self.assertEqual([c["cone"] for c in context["cells"]], [1, 2, 3])
        self.assertEqual(context["cells"][0]["tau"], {"rays": [], "dim": 0})
        self.assertEqual(context["v"], [5, 1])


class ChamberInvarianceTest(SimpleTestCase):
    def test_same_chamber_same_certificate(self):
        # Every v = (x, y) with 0 < 4y < x lies strictly between the rays (1,0) and (4,1)
        fan = load_fan(Surface.FIXTURE)
        base = certify_cellular(fan, Surface.V)
        rand = random.Random(5)
        for k in range(20):
            x = rand.randint(5, 80)
            y = rand.randint(1, (x - 1) // 4)
            with self.subTest(v=(x, y)):
                cert = certify_cellular(fan, (x, y))
                self.assertIsInstance(cert, CellularCertificate)
                self.assertEqual(cert.order, base.order)
                self.assertEqual(cert.tau, base.tau)
                self.assertEqual(cert.cell_characters, base.cell_characters)

    def test_generic_directions_pass_the_genericity_check(self):
        fan = load_fan(Surface.FIXTURE)
        for v in ((5, 1), (3, 1), (2, 3), (-3, 1), (1, -3), (-1, -3), (3, -1)):
            with self.subTest(v=v):
                result = certify_cellular(fan, v)
                if isinstance(result, CellularCertificate):
                    self.assertEqual(verify_certificate(result), [])
                else:
                    self.assertNotEqual(result.reason, NOT_GENERIC)
