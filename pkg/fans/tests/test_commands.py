import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, TestCase

from fans.catalog import fixture_text
from fans.fanfile import read_fan
from fans.models import VerificationRun


def run(*args, stdin=None):
    out = StringIO()
    options = {'stdout': out}
    if stdin is not None:
        options['stdin'] = StringIO(stdin)
    call_command('tropfan', *args, **options)
    return out.getvalue()


def run_failing(test, returncode, *args, stdin=None):
    out = StringIO()
    options = {'stdout': out}
    if stdin is not None:
        options['stdin'] = StringIO(stdin)
    with test.assertRaises(CommandError) as caught:
        call_command('tropfan', *args, **options)
    test.assertEqual(caught.exception.returncode, returncode)
    return out.getvalue()


class CheckCommandTests(SimpleTestCase):
    def test_validate(self):
        data = json.loads(run('validate', '--fixture', 'p2'))
        self.assertEqual(data['command'], 'validate')
        self.assertEqual(data['status'], 'pass')
        self.assertEqual(data['report']['witnesses']['f_vector'], [1, 3, 3])

    def test_thm_on_the_cross_fails(self):
        data = json.loads(run_failing(self, 1, 'thm', '--fixture', 'cross'))
        self.assertEqual(data['status'], 'fail')
        self.assertIn('0', data['report']['witnesses']['cones'])

    def test_betti(self):
        data = json.loads(run('betti', '--fixture', 'nm'))
        self.assertEqual(data['report']['witnesses']['diagonal'], [1, 6, 1])

    def test_file_from_standard_input(self):
        data = json.loads(run('balanced', '-', stdin=fixture_text('elliptic')))
        self.assertEqual(data['status'], 'pass')

    def test_keel_at_a_cone(self):
        data = json.loads(run('keel', '--fixture', 'nm', '--cone', '4,a'))
        self.assertEqual(data['status'], 'pass')

    def test_non_convex_function_is_not_certified(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'zero.values'
            path.write_text('VALUES\n' + '0\n' * 10)
            data = json.loads(run_failing(self, 3, 'kahler', '--fixture', 'nm', '--function', str(path)))
        self.assertEqual(data['status'], 'not_certified')

    def test_report_file_matches_standard_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'report.json'
            out = run('chow', '--fixture', 'p2', '--report', str(path))
            self.assertEqual(path.read_text(), out)

    def test_same_input_same_digest(self):
        first = json.loads(run('unimodular', '--fixture', 'line2'))
        second = json.loads(run('unimodular', '-', stdin=fixture_text('line2')))
        self.assertEqual(first['digest'], second['digest'])


class InputErrorTests(SimpleTestCase):
    def test_malformed_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'broken.fan'
            path.write_text('1 0\nRAYS\n')
            run_failing(self, 2, 'validate', str(path))

    def test_missing_file(self):
        run_failing(self, 2, 'validate', '/nonexistent/fan.fan')

    def test_unknown_fixture(self):
        run_failing(self, 2, 'betti', '--fixture', 'nonexistent')

    def test_ray_in_no_cone(self):
        text = 'LATTICE_RANK\n1\n\nRAYS\n1\n\nMAXIMAL_CONES\n'
        for command in ('validate', 'thm', 'kahler'):
            with self.subTest(command):
                run_failing(self, 2, command, '-', stdin=text)

    def test_unknown_cone(self):
        run_failing(self, 2, 'star', '--fixture', 'p2', '--cone', '7')

    def test_modify_needs_a_function(self):
        run_failing(self, 2, 'modify', '--fixture', 'nm')


class FanCommandTests(SimpleTestCase):
    def test_bergman_fan_piped_into_chow(self):
        fan_text = run('bergman', '--uniform', '3', '4', '--fine')
        self.assertEqual(fan_text, fixture_text('u34-fine'))
        data = json.loads(run('chow', '-', stdin=fan_text))
        self.assertEqual(data['report']['witnesses']['dims'], [1, 7, 1])

    def test_coarse_bergman_fan(self):
        self.assertEqual(run('bergman', '--uniform', '3', '4', '--coarse'), fixture_text('u34-coarse'))

    def test_star(self):
        fan, _ = read_fan(run('star', '--fixture', 'p2', '--cone', '0'))
        self.assertEqual(fan.labels, ('1', '2'))
        self.assertEqual(fan.rank, 1)

    def test_subdivide(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'report.json'
            fan, _ = read_fan(run('subdivide', '--fixture', 'p2', '--cone', '1,2',
                                  '--report', str(path)))
            report = json.loads(path.read_text())
        self.assertEqual(len(fan.rays), 4)
        self.assertEqual(report['report']['witnesses']['new_ray'], fan.labels[-1])

    def test_modify(self):
        fan, _ = read_fan(run('modify', '--fixture', 'u34-refined'))
        self.assertEqual(fan.rank, 4)
        self.assertEqual(len(fan.rays), 10)
        self.assertEqual(fan.labels[-1], 'up')

    def test_fixtures(self):
        data = json.loads(run('fixtures'))
        self.assertEqual(data['status'], 'pass')
        self.assertEqual(len(data['report']['children']), 10)

    def test_single_fixture(self):
        self.assertEqual(run('fixtures', 'conic'), fixture_text('conic'))


class HistoryTests(TestCase):
    def test_record_and_list(self):
        run('validate', '--fixture', 'line1', '--record')
        run_failing(self, 1, 'pd', '--fixture', 'cross', '--record')
        self.assertEqual(VerificationRun.objects.count(), 2)
        runs = json.loads(run('history'))
        self.assertEqual([item['command'] for item in runs], ['pd', 'validate'])
        self.assertEqual(runs[0]['status'], 'fail')
        self.assertEqual(runs[1]['report']['check'], 'valid fan')

    def test_limit(self):
        for _ in range(3):
            run('balanced', '--fixture', 'line2', '--record')
        self.assertEqual(len(json.loads(run('history', '--limit', '2'))), 2)
