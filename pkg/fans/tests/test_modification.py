from fractions import Fraction

from django.test import SimpleTestCase

from fans.catalog import load_fixture
from fans.exceptions import InvalidFunctionError, UnbalancedFanError
from fans.fan_core import is_balanced, make_fan
from fans.kahler import ConewiseLinearFunction
from fans.modification import DOWN, UP, DivisorCone, divisor, tropical_modification
from fans.tests.test_fan_core import sample_points


def cone_vectors(fan):
    return {frozenset(fan.rays[i] for i in cone) for cone in fan.maximal_cones}


class ModificationTests(SimpleTestCase):
    def test_max_of_zero_and_x_on_the_line(self):
        fan, _ = load_fixture('line1')
        result = tropical_modification(fan, ConewiseLinearFunction(fan, (1, 0)))
        graph = result.graph_fan
        self.assertEqual(graph.rays, ((1, 1), (-1, 0), (0, -1)))
        self.assertEqual(graph.labels, ('0', '1', 'down'))
        self.assertEqual(result.divisor.cones, (DivisorCone((), 1, DOWN),))
        self.assertEqual(result.added_rays, ('down',))
        self.assertTrue(is_balanced(graph).passed)

    def test_linear_function_has_no_divisor(self):
        fan, _ = load_fixture('line2')
        result = tropical_modification(fan, ConewiseLinearFunction(fan, (1, 2, -3)))
        self.assertFalse(result.divisor)
        self.assertEqual(result.added_rays, ())
        self.assertEqual(len(result.graph_fan.rays), 3)

    def test_refined_bergman_fan_gives_the_non_matroidal_fan(self):
        fan, f = load_fixture('u34-refined')
        nm, _ = load_fixture('nm')
        result = tropical_modification(fan, f)
        self.assertEqual(result.divisor.labelled(), {('a',): 1, ('b',): 1, ('c',): 1})
        self.assertTrue(all(item.direction == UP for item in result.divisor.cones))
        self.assertEqual(result.added_rays, ('up',))
        graph = result.graph_fan
        self.assertEqual(set(graph.rays), set(nm.rays))
        self.assertEqual(cone_vectors(graph), cone_vectors(nm))
        for point in sample_points(nm):
            self.assertEqual(graph.contains_point(point), nm.contains_point(point), point)
        self.assertTrue(is_balanced(graph).passed)

    def test_divisor_ignores_linear_functions(self):
        fan, f = load_fixture('u34-refined')
        shifted = f.plus_linear((1, -1, 2))
        self.assertEqual(divisor(fan, shifted).cones, divisor(fan, f).cones)

    def test_divisor_as_a_fan(self):
        fan, f = load_fixture('u34-refined')
        found = divisor(fan, f).to_fan()
        self.assertEqual(found.labels, ('a', 'b', 'c'))
        self.assertEqual(found.dim, 1)


class ModificationErrorTests(SimpleTestCase):
    def test_unbalanced_fan(self):
        fan = make_fan(2, [(1, 0), (0, 1)], [(0,), (1,)], [1, 1])
        with self.assertRaises(UnbalancedFanError):
            divisor(fan, ConewiseLinearFunction(fan, (0, 0)))

    def test_non_integral_values(self):
        fan, _ = load_fixture('line1')
        with self.assertRaisesMessage(InvalidFunctionError, 'integer'):
            tropical_modification(fan, ConewiseLinearFunction(fan, (Fraction(1, 2), 0)))

    def test_function_on_another_fan(self):
        fan, _ = load_fixture('line1')
        other, _ = load_fixture('line1')
        with self.assertRaisesMessage(InvalidFunctionError, 'another fan'):
            divisor(fan, ConewiseLinearFunction(other, (1, 0)))
