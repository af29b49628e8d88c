import random

from django.test import SimpleTestCase

from core.exceptions import ConeError, FanError
from core.fan.cone import (
    dual_description,
    intersect,
    is_smooth,
    quotient_cone,
    zero_cone,
)
from core.fan.fan import (
    Fan,
    disconnected_stars,
    is_complete,
    is_pure,
    star,
    stars_strongly_connected,
    validate,
    walls,
)
from core.tests.facts import NonSmoothThreeCones, Surface, ThreeCones, Threefold, load_fan
from core.util.lattice import pairing, quotient

FIXTURES = (ThreeCones, NonSmoothThreeCones, Threefold, Surface)


def sample_cones(seed: int = 17, count: int = 30):
    """Maximal cones of the fixtures, then random pointed cones in rank 3."""
    cones = [c for facts in FIXTURES for c in load_fan(facts.FIXTURE).max_cones]
    rand = random.Random(seed)
    for _ in range(count):
        rays = [
            (rand.randint(-2, 2), rand.randint(-2, 2), rand.randint(1, 3))
            for _ in range(rand.randint(3, 5))
        ]
        cones.append(dual_description(rays))
    return cones


### Cone tests ###


class DualDescriptionTest(SimpleTestCase):
    def test_non_extreme_generators_dropped(self):
        c = dual_description([(1, 0), (0, 1), (1, 1), (2, 0)])
        self.assertEqual(c.rays, ((0, 1), (1, 0)))
        self.assertEqual(c.facets, ((0, 1), (1, 0)))
        self.assertEqual(c.dim, 2)
        self.assertEqual(c.perp, ())

    def test_rays_made_primitive(self):
        c = dual_description([(2, 0), (4, 2)])
        self.assertEqual(c.rays, ((1, 0), (2, 1)))

    def test_facets_are_inward(self):
        c = dual_description([(1, 0), (4, 1)])
        for u in c.facets:
            with self.subTest(facet=u):
                self.assertTrue(all(pairing(u, r) >= 0 for r in c.rays))
                self.assertEqual(sum(pairing(u, r) == 0 for r in c.rays), 1)

    def test_lower_dimensional(self):
        ray = dual_description([(0, 1, 1)])
        self.assertEqual(ray.dim, 1)
        self.assertEqual(len(ray.perp), 2)
        self.assertTrue(ray.contains((0, 3, 3)))
        self.assertFalse(ray.contains((0, -1, -1)))
        self.assertFalse(ray.contains((0, 1, 2)))

    def test_not_strongly_convex(self):
        cases = (
            [(1, 0), (-1, 0)],
            [(1, 0), (0, 1), (-1, -1)],
            [(1, 0, 0), (-1, 0, 0), (0, 1, 0)],
        )
        for rays in cases:
            with self.subTest(rays=rays):
                with self.assertRaises(ConeError):
                    dual_description(rays)

    def test_zero_cone(self):
        c = dual_description([(0, 0)], 2)
        self.assertTrue(c.is_zero)
        self.assertEqual(c, zero_cone(2))
        self.assertEqual(c.dim, 0)
        self.assertTrue(c.contains((0, 0)))
        self.assertFalse(c.contains((1, 0)))
        with self.assertRaises(ConeError):
            dual_description([])


class ConeFacesTest(SimpleTestCase):
    def test_faces_of_a_simplicial_cone(self):
        c = dual_description([(1, 0), (4, 1)])
        self.assertEqual(
            [f.rays for f in c.faces], [(), ((1, 0),), ((4, 1),), ((1, 0), (4, 1))]
        )
        self.assertTrue(c.faces[1].is_face_of(c))
        self.assertFalse(dual_description([(1, 1)]).is_face_of(c))

    def test_faces_of_a_square_cone(self):
        c = dual_description([(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        self.assertFalse(c.is_simplicial)
        self.assertFalse(is_smooth(c))
        counts = {}
        for f in c.faces:
            counts[f.dim] = counts.get(f.dim, 0) + 1
        self.assertEqual(counts, {0: 1, 1: 4, 2: 4, 3: 1})
        diagonal = dual_description([(0, 0, 1), (1, 1, 1)])
        self.assertFalse(diagonal.is_face_of(c))

    def test_interior(self):
        c = dual_description([(1, 0), (4, 1)])
        self.assertTrue(c.rel_interior_contains((5, 1)))
        self.assertTrue(c.contains((4, 1)))
        self.assertFalse(c.rel_interior_contains((4, 1)))
        self.assertFalse(c.contains((3, 1)))
        with self.assertRaises(ConeError):
            c.contains((1, 2, 3))

    def test_smoothness(self):
        expect = {
            ((1, 0), (4, 1)): True,
            ((4, 1), (2, 1)): False,
            ((1, 0), (1, 2)): False,
            ((0, 1, 1),): True,
        }
        for rays, smooth in expect.items():
            with self.subTest(rays=rays):
                self.assertEqual(is_smooth(dual_description(rays)), smooth)


class ConeQuotientTest(SimpleTestCase):
    def test_quotient_by_a_ray(self):
        sigma = dual_description([(1, 0), (4, 1)])
        face = dual_description([(4, 1)])
        image = quotient_cone(sigma, face)
        self.assertEqual(image.ambient_rank, 1)
        self.assertEqual(image.dim, 1)

    def test_quotient_by_itself_is_a_point(self):
        sigma = dual_description([(1, 0), (4, 1)])
        self.assertTrue(quotient_cone(sigma, sigma).is_zero)

    def test_quotient_by_non_face(self):
        sigma = dual_description([(1, 0), (4, 1)])
        with self.assertRaises(ConeError):
            quotient_cone(sigma, dual_description([(2, 1)]))

    def test_square_cone_modulo_apex_ray(self):
        sigma = dual_description([(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        image = quotient_cone(sigma, dual_description([(0, 0, 1)]))
        self.assertEqual(image.dim, 2)
        self.assertEqual(len(image.rays), 2)
        self.assertTrue(is_smooth(image))


class IntersectTest(SimpleTestCase):
    def test_common_ray(self):
        c = intersect(dual_description([(1, 0), (4, 1)]), dual_description([(4, 1), (2, 1)]))
        self.assertEqual(c.rays, ((4, 1),))

    def test_overlapping(self):
        c = intersect(dual_description([(1, 0), (0, 1)]), dual_description([(1, 1), (-1, 1)]))
        self.assertEqual(c.rays, ((0, 1), (1, 1)))

    def test_only_the_origin(self):
        c = intersect(dual_description([(1, 0), (0, 1)]), dual_description([(-1, 0), (0, -1)]))
        self.assertTrue(c.is_zero)

    def test_transversal_planes(self):
        c = intersect(
            dual_description([(1, 0, 0), (0, 1, 0)]), dual_description([(1, 1, 1), (1, 1, -1)])
        )
        self.assertEqual(c.rays, ((1, 1, 0),))


class ConeInvariantsTest(SimpleTestCase):
    def test_faces_closed_under_intersection(self):
        for c in sample_cones():
            with self.subTest(cone=str(c)):
                faces = set(c.faces)
                for f1 in c.faces:
                    for f2 in c.faces:
                        self.assertIn(intersect(f1, f2), faces)

    def test_faces_of_smooth_cones_are_smooth(self):
        smooth = [c for c in sample_cones() if is_smooth(c)]
        self.assertTrue(smooth)
        for c in smooth:
            with self.subTest(cone=str(c)):
                self.assertTrue(all(is_smooth(f) for f in c.faces))

    def test_dual_of_dual(self):
        full = [c for c in sample_cones() if c.dim == c.ambient_rank]
        self.assertTrue(full)
        for c in full:
            with self.subTest(cone=str(c)):
                dual = dual_description(c.facets)
                self.assertEqual(dual.rays, c.facets)
                self.assertEqual(dual.facets, c.rays)

    def test_quotients_are_cached(self):
        for c in sample_cones(count=5):
            with self.subTest(cone=str(c)):
                self.assertIs(c.span_quotient, c.span_quotient)
                self.assertIs(c.function_lattice, c.function_lattice)
                self.assertEqual(c.function_lattice, quotient(c.ambient_rank, c.perp))


### Fan tests ###


class FanValidateTest(SimpleTestCase):
    def test_fixtures_are_valid(self):
        for fixture in (ThreeCones.FIXTURE, Surface.FIXTURE, Threefold.FIXTURE):
            with self.subTest(fixture=fixture):
                self.assertEqual(validate(load_fan(fixture)), [])

    def test_violations(self):
        cases = [
            (Fan(2, (), ()), "empty fan"),
            (Fan.from_rays(2, [(1, 0), (0, 0)], [[0, 1]]), "ray 1 is zero"),
            (Fan.from_rays(2, [(1, 0), (2, 0)], [[0], [1]]), "rays 0 and 1 coincide"),
            (Fan.from_rays(2, [(1, 0), (0, 1), (1, 1)], [[0, 1]]), "ray 2 belongs to no cone"),
            (Fan.from_rays(2, [(1, 0)], [[0, 3]]), "cone 1: ray index 3 out of range"),
            (Fan.from_rays(2, [(1, 0)], [[0], []]), "cone 2: no rays"),
            (Fan.from_rays(2, [(1, 0), (-1, 0)], [[0, 1]]), "cone 1: not strongly convex"),
            (
                Fan.from_rays(2, [(1, 0), (0, 1), (1, 1)], [[0, 1, 2]]),
                "cone 1: ray 2 is not extreme",
            ),
            (Fan.from_rays(2, [(1, 0), (0, 1)], [[0, 1], [1, 0]]), "cones 1 and 2 coincide"),
            (Fan.from_rays(2, [(1, 0), (0, 1)], [[0, 1], [0]]), "cone 2 is a face of cone 1"),
            (
                Fan.from_rays(2, [(1, 0), (0, 1), (1, 1)], [[0, 1], [1, 2]]),
                "intersection of cones 1 and 2 is not a face of both",
            ),
        ]
        for fan, message in cases:
            with self.subTest(message=message):
                self.assertIn(message, validate(fan))

    def test_from_rays_normalizes(self):
        fan = Fan.from_rays(2, [(2, 0), (0, 3)], [[1, 0]])
        self.assertEqual(fan.rays, ((1, 0), (0, 1)))
        self.assertEqual(fan.cone_indices, ((0, 1),))
        with self.assertRaises(FanError):
            Fan.from_rays(2, [(1, 0, 0)], [[0]])


class FanStructureTest(SimpleTestCase):
    def test_walls(self):
        found = [(i, j) for i, j, _ in walls(load_fan(ThreeCones.FIXTURE))]
        self.assertEqual(found, list(ThreeCones.WALLS))
        self.assertEqual(
            [(i, j) for i, j, _ in load_fan(Surface.FIXTURE).walls],
            [(i, j) for i, j, _ in Surface.EDGES],
        )

    def test_completeness(self):
        expect = {ThreeCones.FIXTURE: False, Surface.FIXTURE: True, Threefold.FIXTURE: True}
        for fixture, complete in expect.items():
            with self.subTest(fixture=fixture):
                self.assertEqual(is_complete(load_fan(fixture)), complete)

    def test_purity(self):
        self.assertTrue(is_pure(load_fan(Threefold.FIXTURE)))
        mixed = Fan.from_rays(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [2]])
        self.assertEqual(validate(mixed), [])
        self.assertFalse(is_pure(mixed))
        self.assertFalse(is_complete(mixed))

    def test_all_cones(self):
        fan = load_fan(Surface.FIXTURE)
        dims = [c.dim for c in fan.all_cones]
        self.assertEqual(dims, sorted(dims))
        self.assertEqual((dims.count(0), dims.count(1), dims.count(2)), (1, 5, 5))

    def test_containing(self):
        fan = load_fan(Surface.FIXTURE)
        ray = dual_description([(0, 1)])
        self.assertEqual(fan.containing(ray), (2, 4))
        self.assertEqual(fan.containing(zero_cone(2)), (0, 1, 2, 3, 4))


class FanInvariantsTest(SimpleTestCase):
    QUADRANTS = [(1, 0), (0, 1), (-1, 0), (0, -1)]

    def test_quadrants(self):
        fan = Fan.from_rays(2, self.QUADRANTS, [[0, 1], [1, 2], [2, 3], [3, 0]])
        self.assertEqual(validate(fan), [])
        self.assertTrue(is_complete(fan))
        missing = Fan.from_rays(2, self.QUADRANTS, [[0, 1], [1, 2], [2, 3]])
        self.assertEqual(validate(missing), [])
        self.assertFalse(is_complete(missing))

    def test_walls_separate_two_cones(self):
        for facts in (Threefold, Surface):
            fan = load_fan(facts.FIXTURE)
            for i, j, wall in fan.walls:
                with self.subTest(fixture=facts.FIXTURE, wall=str(wall)):
                    self.assertEqual(wall.dim, fan.ambient_rank - 1)
                    self.assertEqual(fan.containing(wall), (i, j))


class StarTest(SimpleTestCase):
    def test_star_of_a_ray(self):
        fan = load_fan(Surface.FIXTURE)
        s = star(fan, dual_description([(0, 1)]))
        self.assertEqual(len(s.max_cones), 2)
        quotient_fan = s.as_fan()
        self.assertEqual(quotient_fan.ambient_rank, 1)
        self.assertTrue(is_complete(quotient_fan))

    def test_star_of_origin_is_the_fan(self):
        fan = load_fan(Surface.FIXTURE)
        s = star(fan, zero_cone(2))
        self.assertEqual(len(s.cones), len(fan.all_cones))

    def test_star_of_unknown_cone(self):
        with self.assertRaises(FanError):
            star(load_fan(Surface.FIXTURE), dual_description([(1, 1)]))

    def test_strong_connectivity(self):
        self.assertTrue(stars_strongly_connected(load_fan(Surface.FIXTURE)))
        self.assertTrue(stars_strongly_connected(load_fan(Threefold.FIXTURE)))
        bowtie = Fan.from_rays(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [2, 3]])
        self.assertFalse(stars_strongly_connected(bowtie))
        self.assertEqual(disconnected_stars(bowtie), [zero_cone(2)])
