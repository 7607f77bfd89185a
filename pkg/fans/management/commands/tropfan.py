import json
import logging
import random
import sys
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser
from rest_framework.exceptions import ValidationError
from rest_framework.renderers import JSONRenderer

from fans import catalog
from fans.chow import (
    QuotientRingOracle, chow_ring, deligne_resolution_check, hodge_iso_check, keel_check,
    oracle_check,
)
from fans.compactified import build_complex
from fans.exceptions import TropFanError
from fans.fan_core import (
    barycentric_star_subdivision, fan_f_vector, is_balanced, is_unimodular, star_fan,
    star_weight_notes,
)
from fans.fanfile import format_errors, read_fan, read_function, read_matroid, write_fan
from fans.homology import (
    betti_table, boundary_squares_zero, cohomology_table, euler_characteristic,
    is_tropical_homology_manifold, pd_battery,
)
from fans.kahler import is_kahler
from fans.matroid import COARSE, FINE, STRUCTURES, bergman_fan, uniform_matroid
from fans.models import VerificationRun
from fans.modification import tropical_modification
from fans.reports import FAIL, NOT_CERTIFIED, Report, ReportFile, digest_inputs, render
from fans.serializers import VerificationRunSerializer

logger = logging.getLogger(__name__)

EXIT_CODES = {FAIL: 1, NOT_CERTIFIED: 3}

CHECKS = {
    'validate': 'validate a fan file and print its f-vector',
    'unimodular': 'check that every cone is spanned by part of a lattice basis',
    'balanced': 'check the balancing condition',
    'betti': 'tropical homology and cohomology of the compactification',
    'pd': 'Poincaré duality battery on the compactification',
    'thm': 'tropical homology manifold check over all star fans',
    'chow': 'Chow ring dimensions, cross-checked against the quotient-ring oracle',
    'hodge-iso': 'compare dim A^k with dim H^{k,k}',
    'keel': 'Keel decomposition at a cone (--cone)',
    'deligne': 'exactness of the tropical Deligne resolution',
    'kahler': 'Kähler package with a given or searched ample function',
}

FAN_WRITERS = {
    'star': 'write the star fan at a cone (--cone)',
    'subdivide': 'write the barycentric star subdivision at a cone (--cone)',
    'bergman': 'write the Bergman fan of a matroid',
    'modify': 'write the tropical modification along a function',
}


def cone_labels(value):
    """Comma separated ray labels; the empty string is the zero cone."""
    return [label for label in value.split(',') if label]


class Command(BaseCommand):
    help = 'Exact computations on tropical fans: homology, Chow rings and verification checks.'
    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(
            dest='subcommand', required=True, parser_class=CommandParser,
        )
        for name, text in {**CHECKS, **FAN_WRITERS}.items():
            sub = subparsers.add_parser(
                name, help=text, called_from_command_line=parser.called_from_command_line,
            )
            if name != 'bergman':
                sub.add_argument('fan', nargs='?', help="fan file, or '-' for standard input")
                sub.add_argument('--fixture', help='use a shipped fixture instead of a file')
            sub.add_argument('--report', help='also write the report to this path')
            sub.add_argument('--record', action='store_true',
                             help='store the run in the verification history')
            if name in ('star', 'subdivide', 'keel'):
                sub.add_argument('--cone', type=cone_labels, required=True,
                                 help='comma separated ray labels')
            if name in ('kahler', 'modify'):
                sub.add_argument('--function', help='file with a VALUES section')
            if name == 'chow':
                sub.add_argument('--max-rays-oracle', type=int,
                                 help='largest number of rays on which the oracle runs')
            if name == 'deligne':
                sub.add_argument('--k', type=int, help='a single degree instead of all')
            if name == 'bergman':
                source = sub.add_mutually_exclusive_group(required=True)
                source.add_argument('--uniform', nargs=2, type=int, metavar=('R', 'N'))
                source.add_argument('--matroid', help='matroid file with GROUND_SET_SIZE and BASES')
                sub.add_argument('--structure', choices=STRUCTURES, default=FINE)
                sub.add_argument('--fine', dest='structure', action='store_const', const=FINE)
                sub.add_argument('--coarse', dest='structure', action='store_const', const=COARSE)

        fixtures = subparsers.add_parser(
            'fixtures', help='validate the shipped fixtures, or print one of them',
            called_from_command_line=parser.called_from_command_line,
        )
        fixtures.add_argument('name', nargs='?', choices=catalog.fixture_names())
        fixtures.add_argument('--report')
        fixtures.add_argument('--record', action='store_true')

        history = subparsers.add_parser(
            'history', help='list recorded verification runs',
            called_from_command_line=parser.called_from_command_line,
        )
        history.add_argument('--limit', type=int, default=20)

    def handle(self, *args, **options):
        command = options['subcommand']
        if command == 'history':
            return self.history(options['limit'])
        self.inputs = []
        try:
            report, fan_text = getattr(self, 'run_' + command.replace('-', '_'))(options)
        except ValidationError as exc:
            raise CommandError(format_errors(exc), returncode=2)
        except (TropFanError, OSError) as exc:
            raise CommandError(str(exc), returncode=2)

        report_file = ReportFile(command, digest_inputs(*self.inputs), report)
        logger.debug('%s finished with status %s', command, report.status)
        text = render(report_file)
        if fan_text is not None:
            self.stdout.write(fan_text, ending='')
        else:
            self.stdout.write(text, ending='')
        if options.get('report'):
            Path(options['report']).write_text(text)
        if options.get('record'):
            VerificationRun.objects.create(
                command=command, digest=report_file.digest, status=report_file.status,
                report=json.loads(text)['report'],
            )
        if report.status in EXIT_CODES:
            raise CommandError(f'{command}: {report.status}', returncode=EXIT_CODES[report.status])

    def read(self, path):
        if path == '-':
            text = (self.stdin_stream or sys.stdin).read()
        else:
            text = Path(path).read_text()
        self.inputs.append(text)
        return text

    def load(self, options):
        self.stdin_stream = options.get('stdin')
        if options.get('fixture'):
            text = catalog.fixture_text(options['fixture'])
            self.inputs.append(text)
        elif options.get('fan'):
            text = self.read(options['fan'])
        else:
            raise CommandError('give a fan file, - for standard input, or --fixture', returncode=2)
        fan, function = read_fan(text)
        if options.get('function'):
            function = read_function(self.read(options['function']), fan)
        return fan, function

    def cone(self, fan, options):
        return fan.cone_from_labels(options['cone'])

    def run_validate(self, options):
        fan, _ = self.load(options)
        report = Report('valid fan')
        report.witnesses.update(
            f_vector=fan_f_vector(fan), rays=len(fan.rays), pure=fan.is_pure,
            weighted=fan.weights is not None,
        )
        return report, None

    def run_unimodular(self, options):
        fan, _ = self.load(options)
        return is_unimodular(fan), None

    def run_balanced(self, options):
        fan, _ = self.load(options)
        return is_balanced(fan), None

    def run_star(self, options):
        fan, _ = self.load(options)
        cone = self.cone(fan, options)
        star = star_fan(fan, cone)
        report = Report('star fan')
        report.witnesses.update(cone=fan.describe(cone), f_vector=fan_f_vector(star))
        report.notes.extend(star_weight_notes(fan, cone))
        return report, write_fan(star)

    def run_subdivide(self, options):
        fan, _ = self.load(options)
        cone = self.cone(fan, options)
        subdivided = barycentric_star_subdivision(fan, cone)
        report = Report('barycentric star subdivision')
        report.witnesses.update(cone=fan.describe(cone), new_ray=subdivided.labels[-1],
                                f_vector=fan_f_vector(subdivided))
        report.add(is_unimodular(subdivided))
        return report, write_fan(subdivided)

    def run_betti(self, options):
        fan, _ = self.load(options)
        homology, cohomology = betti_table(fan), cohomology_table(fan)
        complex_ = build_complex(fan)
        report = Report('tropical Betti numbers')
        report.witnesses.update(
            faces=complex_.f_vector(),
            homology=homology.rows(),
            cohomology=cohomology.rows(),
            diagonal=cohomology.diagonal(),
            betti=cohomology.betti_numbers(),
            euler=[euler_characteristic(complex_, p) for p in range(complex_.dim + 1)],
        )
        report.add(boundary_squares_zero(fan))
        return report, None

    def run_pd(self, options):
        fan, _ = self.load(options)
        return pd_battery(fan), None

    def run_thm(self, options):
        fan, _ = self.load(options)
        return fan.memo('thm', lambda: is_tropical_homology_manifold(fan)), None

    def run_chow(self, options):
        fan, _ = self.load(options)
        ring = chow_ring(fan)
        report = Report('Chow ring')
        report.witnesses.update(
            dims=ring.dims(),
            basis=[[fan.describe(c) for c in ring.basis(k)] for k in range(ring.dim + 1)],
        )
        limit = options.get('max_rays_oracle')
        if limit is None:
            limit = settings.TROPFAN_MAX_RAYS_ORACLE
        if len(fan.rays) <= limit:
            report.add(oracle_check(ring, QuotientRingOracle(fan), random.Random(0)))
        else:
            report.notes.append(f'oracle skipped: {len(fan.rays)} rays exceed {limit}')
        return report, None

    def run_hodge_iso(self, options):
        fan, _ = self.load(options)
        return hodge_iso_check(fan), None

    def run_keel(self, options):
        fan, _ = self.load(options)
        return keel_check(fan, self.cone(fan, options)), None

    def run_deligne(self, options):
        fan, _ = self.load(options)
        return deligne_resolution_check(fan, options.get('k')), None

    def run_kahler(self, options):
        fan, function = self.load(options)
        return is_kahler(fan, function), None

    def run_bergman(self, options):
        self.stdin_stream = options.get('stdin')
        if options.get('matroid'):
            matroid = read_matroid(self.read(options['matroid']))
        else:
            r, n = options['uniform']
            self.inputs.append(f'U {r} {n}')
            matroid = uniform_matroid(r, n)
        self.inputs.append(options['structure'])
        fan = bergman_fan(matroid, options['structure'])
        report = Report('Bergman fan')
        report.witnesses.update(structure=options['structure'], rank=matroid.rank,
                                f_vector=fan_f_vector(fan))
        return report, write_fan(fan)

    def run_modify(self, options):
        fan, function = self.load(options)
        if function is None:
            raise CommandError('modify needs a VALUES section or --function', returncode=2)
        result = tropical_modification(fan, function)
        report = Report('tropical modification')
        report.witnesses.update(
            divisor={fan.describe(item.cone): item.weight for item in result.divisor.cones},
            added_rays=list(result.added_rays),
            f_vector=fan_f_vector(result.graph_fan),
        )
        report.add(is_balanced(result.graph_fan))
        return report, write_fan(result.graph_fan)

    def run_fixtures(self, options):
        name = options.get('name')
        if name:
            text = catalog.fixture_text(name)
            self.inputs.append(text)
            read_fan(text)
            return Report(f'fixture {name}'), text
        report = Report('fixtures')
        for name in catalog.fixture_names():
            text = catalog.fixture_text(name)
            self.inputs.append(text)
            child = Report(f'fixture {name}')
            try:
                fan, _ = read_fan(text)
            except (ValidationError, TropFanError) as exc:
                child.fail(format_errors(exc))
            else:
                child.witnesses['f_vector'] = fan_f_vector(fan)
                if write_fan(fan, read_fan(text)[1]) != text:
                    child.fail('file is not in canonical form')
            report.add(child)
        return report, None

    def history(self, limit):
        runs = VerificationRun.objects.all()[:limit]
        data = VerificationRunSerializer(runs, many=True).data
        self.stdout.write(JSONRenderer().render(data, renderer_context={'indent': 2}).decode())
