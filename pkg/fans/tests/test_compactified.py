from django.test import SimpleTestCase

from fans.catalog import load_fixture
from fans.compactified import CompactFace, build_complex, coefficient_map, multi_tangent
from fans.exceptions import NotUnimodularError
from fans.fan_core import make_fan
from fans.linalg import mat_mul

FIXTURES = ('cross', 'elliptic', 'line1', 'line2', 'p2', 'conic', 'u34-coarse', 'u34-fine', 'nm')


def complex_of(name):
    return build_complex(load_fixture(name)[0])


class FaceTests(SimpleTestCase):
    def test_f_vectors(self):
        self.assertEqual(complex_of('line1').f_vector(), [3, 2])
        self.assertEqual(complex_of('cross').f_vector(), [5, 4])
        self.assertEqual(complex_of('line2').f_vector(), [4, 3])

    def test_faces_are_pairs_of_nested_cones(self):
        complex_ = complex_of('p2')
        # 1 + 3*2 + 3*4 pairs (σ, γ) with σ ⊆ γ
        self.assertEqual(len(complex_.faces), 19)
        self.assertEqual(complex_.f_vector(), [7, 9, 3])

    def test_boundary_of_an_edge(self):
        complex_ = complex_of('line1')
        edge = CompactFace((), (0,))
        self.assertEqual(
            sorted(complex_.boundary(edge)),
            [(-1, CompactFace((), ())), (1, CompactFace((0,), (0,)))],
        )
        self.assertEqual(complex_.incidence(CompactFace((0,), (0,)), edge), 1)
        self.assertEqual(complex_.incidence(CompactFace((1,), (1,)), edge), 0)

    def test_signed_incidence_squares_to_zero(self):
        complex_ = complex_of('nm')
        for beta in complex_.faces_by_dim[2]:
            total = {}
            for sign, alpha in complex_.boundary(beta):
                for inner, face in complex_.boundary(alpha):
                    total[face] = total.get(face, 0) + sign * inner
            self.assertFalse(any(total.values()), beta)

    def test_requires_unimodular_fan(self):
        with self.assertRaises(NotUnimodularError):
            build_complex(make_fan(2, [(1, 0), (1, 2)], [(0, 1)]))


class MultiTangentTests(SimpleTestCase):
    def test_degree_zero_is_the_rationals(self):
        complex_ = complex_of('nm')
        for face in complex_.faces:
            self.assertEqual(multi_tangent(complex_, face, 0).dim, 1)

    def test_centre_of_the_cross(self):
        space = multi_tangent(complex_of('cross'), CompactFace((), ()), 1)
        self.assertEqual(space.dim, 2)

    def test_endpoint_of_the_cross(self):
        space = multi_tangent(complex_of('cross'), CompactFace((0,), (0,)), 1)
        self.assertEqual(space.dim, 0)

    def test_edge_of_line2(self):
        space = multi_tangent(complex_of('line2'), CompactFace((), (0,)), 1)
        self.assertEqual(space.basis, ((1, 0),))

    def test_p_out_of_range(self):
        complex_ = complex_of('cross')
        with self.assertRaises(ValueError):
            multi_tangent(complex_, CompactFace((0,), (0,)), 2)

    def test_spaces_shrink_as_the_mother_grows(self):
        complex_ = complex_of('u34-fine')
        fan = complex_.fan
        for gamma in fan.cones:
            for smaller in fan.cones:
                if set(smaller) < set(gamma):
                    for p in range(3):
                        big = complex_.tangent_space(CompactFace((), gamma), p)
                        small = complex_.tangent_space(CompactFace((), smaller), p)
                        for vector in big.basis:
                            small.coordinates(vector)


class CoefficientMapTests(SimpleTestCase):
    def test_degree_zero_maps_are_identities(self):
        complex_ = complex_of('p2')
        for beta in complex_.faces:
            for _, alpha in complex_.boundary(beta):
                self.assertEqual(coefficient_map(complex_, beta, alpha, 0), [[1]])

    def test_inclusion_into_the_centre(self):
        complex_ = complex_of('line2')
        matrix = coefficient_map(complex_, CompactFace((), (0,)), CompactFace((), ()), 1)
        self.assertEqual(matrix, [[1], [0]])

    def test_map_to_an_endpoint_is_zero(self):
        complex_ = complex_of('cross')
        matrix = coefficient_map(complex_, CompactFace((), (0,)), CompactFace((0,), (0,)), 1)
        self.assertEqual(matrix, [])

    def test_not_a_face(self):
        complex_ = complex_of('cross')
        with self.assertRaises(ValueError):
            coefficient_map(complex_, CompactFace((), (0,)), CompactFace((1,), (1,)), 0)

    def test_functoriality(self):
        for name in ('p2', 'u34-fine', 'nm'):
            complex_ = complex_of(name)
            for beta in complex_.faces_by_dim.get(2, []):
                for _, alpha in complex_.boundary(beta):
                    for _, inner in complex_.boundary(alpha):
                        for p in range(3):
                            direct = coefficient_map(complex_, beta, inner, p)
                            first = coefficient_map(complex_, beta, alpha, p)
                            second = coefficient_map(complex_, alpha, inner, p)
                            middle = complex_.tangent_space(alpha, p).dim
                            width = complex_.tangent_space(beta, p).dim
                            self.assertEqual(mat_mul(second, first, middle, width), direct,
                                             (name, beta, alpha, inner, p))
