from django.conf import settings

from .exceptions import UnknownFixtureError
from .fanfile import read_fan

FIXTURES = {
    'cross': 'four rays ±e1, ±e2 in Z^2; balanced but not a homology manifold',
    'elliptic': 'unimodular tropical line with rays (2,1), (-1,1), (-1,-2)',
    'line1': 'complete fan in Z^1',
    'line2': 'standard tropical line, Bergman fan of U_{2,3}',
    'p2': 'complete fan of the projective plane',
    'conic': 'standard tropical line with weight 2 on every ray',
    'u34-coarse': 'coarse Bergman fan of U_{3,4}',
    'u34-fine': 'fine Bergman fan of U_{3,4}, flags of flats',
    'u34-refined': 'coarse U_{3,4} refined along the curve C, with the modifying function',
    'nm': 'non-matroidal homology manifold in R^4 with 10 rays and 14 facets',
}


def fixture_names():
    return sorted(FIXTURES)


def fixture_path(name):
    if name not in FIXTURES:
        raise UnknownFixtureError(f'unknown fixture {name!r}; known: {", ".join(fixture_names())}')
    return settings.TROPFAN_FIXTURE_DIR / f'{name}.fan'


def fixture_text(name):
    return fixture_path(name).read_text()


def load_fixture(name):
    """The fan of a shipped fixture and its function, if the file carries one."""
    return read_fan(fixture_text(name))
