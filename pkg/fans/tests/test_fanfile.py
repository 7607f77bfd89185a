import json
from fractions import Fraction

from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from fans.catalog import fixture_names, fixture_text, load_fixture
from fans.exceptions import MalformedFileError
from fans.fanfile import format_errors, parse_fan, read_fan, read_function, read_matroid, write_fan
from fans.reports import FAIL, Report, ReportFile, digest_inputs, render

LINE = """\
# the complete fan of P^1
LATTICE_RANK
1

RAYS
1
-1

MAXIMAL_CONES
{0}
{1}
"""


class ParseTests(SimpleTestCase):
    def test_comments_and_defaults(self):
        fan, function = read_fan(LINE)
        self.assertEqual(fan.rays, ((1,), (-1,)))
        self.assertEqual(fan.labels, ('0', '1'))
        self.assertEqual(fan.weights, {(0,): 1, (1,): 1})
        self.assertIsNone(function)

    def test_data_before_a_section(self):
        with self.assertRaisesMessage(MalformedFileError, 'line 1: data before the first section'):
            parse_fan('2\nLATTICE_RANK\n2\n')

    def test_duplicate_section(self):
        with self.assertRaisesMessage(MalformedFileError, 'appears twice'):
            parse_fan(LINE + 'RAYS\n1\n')

    def test_missing_cones(self):
        with self.assertRaisesMessage(MalformedFileError, 'MAXIMAL_CONES is missing'):
            parse_fan('LATTICE_RANK\n1\nRAYS\n1\n')

    def test_unbraced_cone(self):
        with self.assertRaisesMessage(MalformedFileError, 'expected a set'):
            parse_fan('LATTICE_RANK\n1\nRAYS\n1\nMAXIMAL_CONES\n0\n')

    def test_rank_is_a_single_number(self):
        with self.assertRaisesMessage(MalformedFileError, 'single number'):
            parse_fan('LATTICE_RANK\n1 2\nMAXIMAL_CONES\n{}\n')


class ValidationTests(SimpleTestCase):
    def test_non_integer_ray(self):
        with self.assertRaises(ValidationError) as caught:
            read_fan(LINE.replace('-1\n', '-1.5\n', 1))
        self.assertIn('rays', caught.exception.detail)

    def test_non_primitive_ray(self):
        with self.assertRaises(ValidationError) as caught:
            read_fan(LINE.replace('-1\n', '-2\n', 1))
        self.assertIn('fan', caught.exception.detail)
        self.assertIn('not primitive', format_errors(caught.exception))

    def test_wrong_number_of_values(self):
        with self.assertRaises(ValidationError) as caught:
            read_fan(LINE + '\nVALUES\n1\n')
        self.assertIn('values', caught.exception.detail)

    def test_format_errors(self):
        self.assertEqual(format_errors(ValidationError({'fan': 'bad cone'})), 'fan: bad cone')
        self.assertEqual(format_errors(MalformedFileError('oops')), 'oops')


class RoundTripTests(SimpleTestCase):
    def test_fixtures_are_canonical(self):
        for name in fixture_names():
            with self.subTest(name):
                text = fixture_text(name)
                self.assertEqual(write_fan(*read_fan(text)), text)

    def test_values_are_written(self):
        fan, f = load_fixture('u34-refined')
        self.assertIn('VALUES\n-2\n0\n', write_fan(fan, f))


class OtherFileTests(SimpleTestCase):
    def test_function_file(self):
        fan, _ = load_fixture('line1')
        f = read_function('VALUES\n1\n-1/2\n', fan)
        self.assertEqual(f.values, (1, Fraction(-1, 2)))
        self.assertIs(f.fan, fan)

    def test_function_file_for_the_wrong_fan(self):
        fan, _ = load_fixture('line1')
        with self.assertRaises(ValidationError):
            read_function('VALUES\n1 2 3\n', fan)

    def test_matroid_file(self):
        matroid = read_matroid('GROUND_SET_SIZE\n3\n\nBASES\n{0 1}\n{0 2}\n{1 2}\n')
        self.assertEqual(matroid.rank, 2)
        self.assertTrue(matroid.is_uniform)

    def test_invalid_matroid_file(self):
        with self.assertRaises(ValidationError) as caught:
            read_matroid('GROUND_SET_SIZE\n4\nBASES\n{0 1}\n{2 3}\n')
        self.assertIn('basis exchange', format_errors(caught.exception))


class RenderTests(SimpleTestCase):
    def test_rationals_and_children(self):
        report = Report('outer')
        report.add(Report('inner', witnesses={'value': Fraction(1, 2), 'cones': {'b', 'a'}}))
        report.add(Report('failing').fail('broken', cones=['0']))
        data = json.loads(render(ReportFile('betti', digest_inputs('x'), report)))
        self.assertEqual(data['status'], FAIL)
        self.assertEqual(data['report']['children'][0]['witnesses'],
                         {'value': '1/2', 'cones': ['a', 'b']})
        self.assertEqual(data['report']['children'][1]['notes'], ['broken'])
        self.assertEqual(len(data['digest']), 64)
