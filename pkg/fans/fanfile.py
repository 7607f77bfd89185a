"""Section-based text format for fans, functions and matroids.

A file is a sequence of sections. A section starts with its name on a line of
its own and holds data lines until the next section; blank lines and lines
starting with ``#`` are ignored::

    LATTICE_RANK
    2

    RAYS
    1 0
    0 1
    -1 -1

    RAY_LABELS
    0 1 2

    MAXIMAL_CONES
    {0 1}
    {0 2}
    {1 2}

    WEIGHTS
    1
    1
    1

``VALUES`` (one rational per ray) may follow, or stand alone in a function
file. Matroid files use ``GROUND_SET_SIZE`` and ``BASES``.
"""
from rest_framework.exceptions import ValidationError

from .exceptions import MalformedFileError
from .serializers import FanFileSerializer, FunctionFileSerializer, MatroidFileSerializer

FAN_SECTIONS = ('LATTICE_RANK', 'RAYS', 'RAY_LABELS', 'MAXIMAL_CONES', 'WEIGHTS', 'VALUES')
MATROID_SECTIONS = ('GROUND_SET_SIZE', 'BASES')


def parse_sections(text, known):
    sections, current = {}, None
    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        if stripped in known:
            if stripped in sections:
                raise MalformedFileError(f'line {number}: section {stripped} appears twice')
            current = sections[stripped] = []
        elif current is None:
            raise MalformedFileError(f'line {number}: data before the first section')
        else:
            current.append((number, stripped))
    return sections


def _single(sections, name):
    lines = sections.get(name)
    if not lines:
        raise MalformedFileError(f'section {name} is missing or empty')
    if len(lines) != 1 or len(lines[0][1].split()) != 1:
        raise MalformedFileError(f'line {lines[0][0]}: {name} holds a single number')
    return lines[0][1]


def _tokens(sections, name):
    return [token for _, line in sections.get(name, []) for token in line.split()]


def _braced(sections, name):
    sets = []
    for number, line in sections.get(name, []):
        if not (line.startswith('{') and line.endswith('}')):
            raise MalformedFileError(f'line {number}: expected a set such as {{0 1}}')
        sets.append(line[1:-1].split())
    return sets


def parse_fan(text):
    """The raw description of a fan file, ready for :class:`FanFileSerializer`."""
    sections = parse_sections(text, FAN_SECTIONS)
    if 'MAXIMAL_CONES' not in sections:
        raise MalformedFileError('section MAXIMAL_CONES is missing')
    data = {
        'lattice_rank': _single(sections, 'LATTICE_RANK'),
        'rays': [line.split() for _, line in sections.get('RAYS', [])],
        'maximal_cones': _braced(sections, 'MAXIMAL_CONES'),
    }
    if 'RAY_LABELS' in sections:
        data['ray_labels'] = _tokens(sections, 'RAY_LABELS')
    if 'WEIGHTS' in sections:
        data['weights'] = _tokens(sections, 'WEIGHTS')
    if 'VALUES' in sections:
        data['values'] = _tokens(sections, 'VALUES')
    return data


def parse_function(text):
    sections = parse_sections(text, ('VALUES',))
    if 'VALUES' not in sections:
        raise MalformedFileError('section VALUES is missing')
    return {'values': _tokens(sections, 'VALUES')}


def parse_matroid(text):
    sections = parse_sections(text, MATROID_SECTIONS)
    return {
        'ground_set_size': _single(sections, 'GROUND_SET_SIZE'),
        'bases': _braced(sections, 'BASES'),
    }


def read_fan(text):
    """Parse and validate a fan file; returns the fan and its function, if any."""
    serializer = FanFileSerializer(data=parse_fan(text))
    serializer.is_valid(raise_exception=True)
    return serializer.save(), serializer.validated_data.get('function')


def read_function(text, fan):
    serializer = FunctionFileSerializer(data=parse_function(text), context={'fan': fan})
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def read_matroid(text):
    serializer = MatroidFileSerializer(data=parse_matroid(text))
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def format_errors(exc):
    """Flatten a DRF validation error into one line per message."""
    if isinstance(exc, ValidationError):
        return '; '.join(_messages(exc.detail))
    return str(exc)


def _messages(detail, prefix=''):
    if isinstance(detail, dict):
        for key, value in detail.items():
            yield from _messages(value, f'{prefix}{key}: ' if key != 'non_field_errors' else prefix)
    elif isinstance(detail, list):
        for value in detail:
            yield from _messages(value, prefix)
    else:
        yield f'{prefix}{detail}'


def write_fan(fan, function=None):
    """Canonical text of a fan; parsing the output gives back the same fan."""
    lines = ['LATTICE_RANK', str(fan.rank), '', 'RAYS']
    lines += [' '.join(str(x) for x in ray) for ray in fan.rays]
    lines += ['', 'RAY_LABELS', ' '.join(fan.labels), '', 'MAXIMAL_CONES']
    lines += ['{' + ' '.join(str(i) for i in cone) + '}' for cone in fan.maximal_cones]
    if fan.weights is not None:
        lines += ['', 'WEIGHTS']
        lines += [str(fan.weights[cone]) for cone in fan.maximal_cones]
    if function is not None:
        lines += ['', 'VALUES']
        lines += [str(value) for value in function.values]
    return '\n'.join(lines) + '\n'
