"""Rational polyhedral fans, their lattices and structural operations.

A cone is a sorted tuple of indices into the fan's ray table; the zero cone is
the empty tuple. Fans are immutable once validated and memoise derived data
(quotient lattices, star fans, Chow rings) on the instance.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .exceptions import (
    ConeNotInFanError, InvalidConeError, InvalidFanError, MissingWeightsError,
    NotUnimodularError,
)
from .linalg import hermite_transform, is_feasible, rank, solve
from .reports import Report

logger = logging.getLogger(__name__)

Cone = tuple


def primitive(vector):
    g = gcd(*vector) if vector else 0
    if g == 0:
        return tuple(vector)
    return tuple(x // g for x in vector)


@dataclass(frozen=True)
class QuotientLattice:
    """The lattice N^σ = N / Sat(N_σ) with an explicit integer basis.

    ``projection`` holds integer functionals whose values are the coordinates
    of π^σ(v); they also form a basis of the annihilator of σ. ``lift`` holds
    lattice vectors projecting to the chosen basis of N^σ, and ``duals`` holds
    functionals dual to the generators of σ (empty unless σ is unimodular).
    """
    cone: Cone
    rank: int
    projection: tuple
    lift: tuple
    duals: tuple
    unimodular: bool

    def project(self, vector):
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.projection)

    def project_primitive(self, vector):
        return primitive(self.project(vector))


@dataclass(frozen=True, eq=False)
class Fan:
    rank: int
    rays: tuple
    labels: tuple
    cones: frozenset
    weights: dict = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __hash__(self):
        return id(self)

    def memo(self, key, build):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = build()
            return value

    @property
    def dim(self):
        return max(len(cone) for cone in self.cones)

    def cones_of_dim(self, k):
        return self.memo(('dim', k), lambda: sorted(c for c in self.cones if len(c) == k))

    @property
    def maximal_cones(self):
        return self.memo('maximal', lambda: sorted(
            c for c in self.cones
            if not any(len(other) > len(c) and set(c) <= set(other) for other in self.cones)
        ))

    @property
    def is_pure(self):
        return len({len(c) for c in self.maximal_cones}) == 1

    @property
    def facets(self):
        return self.cones_of_dim(self.dim)

    def weight(self, facet):
        if self.weights is None:
            raise MissingWeightsError('the fan carries no weights')
        return self.weights[facet]

    def generators(self, cone):
        return [self.rays[i] for i in cone]

    def require(self, cone):
        cone = tuple(sorted(cone))
        if cone not in self.cones:
            raise ConeNotInFanError(f'{self.describe(cone)} is not a cone of the fan')
        return cone

    def link(self, cone):
        """Rays ξ outside ``cone`` for which cone + ξ is again a cone, in ray order."""
        def build():
            members = set(cone)
            return [
                i for i in range(len(self.rays))
                if i not in members and tuple(sorted(cone + (i,))) in self.cones
            ]
        return self.memo(('link', cone), build)

    def containing(self, cone):
        members = set(cone)
        return sorted(c for c in self.cones if members <= set(c))

    def quotient(self, cone):
        return self.memo(('quotient', cone), lambda: _quotient_lattice(self, cone))

    def ray_index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise ConeNotInFanError(f'no ray labelled {label!r}') from None

    def cone_from_labels(self, labels):
        return self.require(self.ray_index(label) for label in labels)

    def labels_of(self, cone):
        return tuple(self.labels[i] for i in cone)

    def describe(self, cone):
        return '{' + ' '.join(self.labels[i] for i in cone) + '}' if cone else '0'

    def contains_point(self, point):
        """Exact membership of a rational point in the support of the fan."""
        return self.locate(point) is not None

    def locate(self, point):
        """A maximal cone containing ``point`` and its coordinates there, or ``None``."""
        point = [Fraction(x) for x in point]
        for cone in self.maximal_cones:
            if not cone:
                if not any(point):
                    return cone, []
                continue
            matrix = [[self.rays[j][i] for j in cone] for i in range(self.rank)]
            coefficients = solve(matrix, len(cone), point)
            if coefficients is not None and all(c >= 0 for c in coefficients):
                return cone, coefficients
        return None


def _quotient_lattice(fan, cone):
    t, t_inv, h, pivots = hermite_transform(fan.generators(cone), fan.rank)
    k = len(cone)
    unimodular = pivots == k and all(h[i][i] == 1 for i in range(k))
    return QuotientLattice(
        cone=cone,
        rank=fan.rank - pivots,
        projection=tuple(tuple(row) for row in t[pivots:]),
        lift=tuple(tuple(t_inv[i][j] for i in range(fan.rank)) for j in range(pivots, fan.rank)),
        duals=tuple(tuple(row) for row in t[:k]) if unimodular else (),
        unimodular=unimodular,
    )


def make_fan(rank, rays, maximal_cones, weights=None, labels=None):
    """Assemble a fan from trusted data, completing face closure."""
    rays = tuple(tuple(int(x) for x in ray) for ray in rays)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(rays)))
    maximal = [tuple(sorted(c)) for c in maximal_cones]
    if not maximal:
        maximal = [()]
        weights = None if weights is None else [1]
    cones = {()}
    for cone in maximal:
        for size in range(len(cone) + 1):
            cones.update(combinations(cone, size))
    if weights is not None:
        weights = {cone: int(w) for cone, w in zip(maximal, weights)}
    return Fan(rank=rank, rays=rays, labels=labels, cones=frozenset(cones), weights=weights)


def validate_fan(raw):
    """Build a :class:`Fan` from a parsed description, checking every invariant.

    ``raw`` is a mapping with ``lattice_rank``, ``rays``, ``maximal_cones`` and
    optionally ``ray_labels`` and ``weights`` (parallel to ``maximal_cones``).
    """
    n = raw['lattice_rank']
    if n < 0:
        raise InvalidFanError('lattice rank must be nonnegative')
    rays = [tuple(ray) for ray in raw['rays']]
    for i, ray in enumerate(rays):
        if len(ray) != n:
            raise InvalidFanError(f'ray {i} has {len(ray)} coordinates, expected {n}')
        if not any(ray):
            raise InvalidFanError(f'ray {i} is zero')
        if gcd(*ray) != 1:
            raise InvalidFanError(f'ray {i} {ray} is not primitive')
    if len(set(rays)) != len(rays):
        raise InvalidFanError('rays must be distinct')

    labels = raw.get('ray_labels') or [str(i) for i in range(len(rays))]
    if len(labels) != len(rays):
        raise InvalidFanError(f'{len(labels)} labels given for {len(rays)} rays')
    if len(set(labels)) != len(labels):
        raise InvalidFanError('ray labels must be unique')
    for label in labels:
        if not label or any(ch.isspace() or ch in ',{}' for ch in label):
            raise InvalidFanError(f'invalid ray label {label!r}')

    listed = []
    for cone in raw['maximal_cones']:
        if any(not 0 <= i < len(rays) for i in cone):
            raise InvalidFanError(f'cone {list(cone)} refers to a missing ray')
        if len(set(cone)) != len(cone):
            raise InvalidFanError(f'cone {list(cone)} repeats a ray')
        cone = tuple(sorted(cone))
        if rank([list(rays[i]) for i in cone], n) != len(cone):
            raise InvalidFanError(f'cone {list(cone)} has dependent generators')
        listed.append(cone)
    if not listed:
        listed = [()]
    used = {i for cone in listed for i in cone}
    stray = [labels[i] for i in range(len(rays)) if i not in used]
    if stray:
        raise InvalidFanError(f'rays {", ".join(stray)} lie in no maximal cone')

    weights = raw.get('weights')
    if weights is not None:
        if len(weights) != len(listed):
            raise InvalidFanError(f'{len(weights)} weights given for {len(listed)} cones')
        if any(w == 0 for w in weights):
            raise InvalidFanError('weights must be nonzero')
    maximal, kept_weights = [], []
    for index, cone in enumerate(listed):
        if any(len(other) > len(cone) and set(cone) <= set(other) for other in listed):
            if weights is not None:
                raise InvalidFanError(f'weight on non-maximal cone {list(cone)}')
            continue
        if cone in maximal:
            raise InvalidFanError(f'cone {list(cone)} is listed twice')
        maximal.append(cone)
        if weights is not None:
            kept_weights.append(weights[index])

    for first, second in combinations(maximal, 2):
        if not _meet_in_common_face(rays, n, first, second):
            raise InvalidFanError(
                f'cones {list(first)} and {list(second)} do not intersect in a common face'
            )

    pure = len({len(c) for c in maximal}) <= 1
    if weights is not None and not pure:
        raise InvalidFanError('weights require a pure-dimensional fan')
    if weights is None and pure:
        kept_weights = [1] * len(maximal)
    elif weights is None:
        kept_weights = None
    fan = make_fan(n, rays, maximal, kept_weights, labels)
    logger.debug('validated fan with f-vector %s', fan_f_vector(fan))
    return fan


def _meet_in_common_face(rays, n, first, second):
    """Whether cone(first) ∩ cone(second) is the cone on their shared rays.

    The intersection is improper exactly when some point has a representation
    using a ray of ``first`` that ``second`` lacks; simpliciality makes the
    representation unique, so one normalised feasibility problem decides it.
    """
    only_first = [i for i in first if i not in second]
    if not only_first:
        return True
    variables = len(first) + len(second)
    equalities = [
        ([rays[i][coord] for i in first] + [-rays[j][coord] for j in second], 0)
        for coord in range(n)
    ]
    inequalities = [
        ([int(v == k) for v in range(variables)], 0, False) for k in range(variables)
    ]
    inequalities.append(([int(i in only_first) for i in first] + [0] * len(second), 1, False))
    return not is_feasible(variables, equalities, inequalities)


def fan_f_vector(fan):
    return [len(fan.cones_of_dim(k)) for k in range(fan.dim + 1)]


def is_unimodular(fan):
    report = Report('unimodular')
    failing = [c for c in fan.maximal_cones if not fan.quotient(c).unimodular]
    if failing:
        report.fail('generators do not extend to a lattice basis',
                    cones=[fan.describe(c) for c in failing])
    return report


def require_unimodular(fan):
    failing = [c for c in fan.maximal_cones if not fan.quotient(c).unimodular]
    if failing:
        raise NotUnimodularError(
            'the fan is not unimodular at ' + ', '.join(fan.describe(c) for c in failing),
            cones=failing,
        )


def balancing_defects(fan):
    """Weighted sums of primitive normal vectors at each codimension-one cone."""
    if fan.weights is None:
        raise MissingWeightsError('balancing needs facet weights')
    if not fan.is_pure:
        raise MissingWeightsError('balancing needs a pure-dimensional fan')
    d = fan.dim
    defects = {}
    for tau in fan.cones_of_dim(d - 1) if d else []:
        quotient = fan.quotient(tau)
        total = [0] * quotient.rank
        for ray in fan.link(tau):
            facet = tuple(sorted(tau + (ray,)))
            normal = quotient.project_primitive(fan.rays[ray])
            total = [a + fan.weight(facet) * b for a, b in zip(total, normal)]
        defects[tau] = tuple(total)
    return defects


def is_balanced(fan):
    report = Report('balanced')
    failing = [tau for tau, total in balancing_defects(fan).items() if any(total)]
    if failing:
        report.fail('weighted normal vectors do not sum to zero',
                    cones=[fan.describe(c) for c in failing])
    return report


def star_fan(fan, delta):
    """The star Σ^δ in N^δ. Rays keep the labels of the link rays they come from."""
    delta = fan.require(delta)
    return fan.memo(('star', delta), lambda: _build_star(fan, delta))


def _build_star(fan, delta):
    quotient = fan.quotient(delta)
    link = fan.link(delta)
    rays, labels, position = [], [], {}
    for ray in link:
        image = quotient.project_primitive(fan.rays[ray])
        if image in rays:
            position[ray] = rays.index(image)
            continue
        position[ray] = len(rays)
        rays.append(image)
        labels.append(fan.labels[ray])

    members = set(delta)
    around = fan.containing(delta)
    maximal, weights, summed = [], [], []
    for cone in around:
        if any(len(other) > len(cone) and set(cone) <= set(other) for other in around):
            continue
        image = tuple(sorted({position[i] for i in cone if i not in members}))
        weight = fan.weights[cone] if fan.weights is not None else None
        if image in maximal:
            logger.warning('star at %s: several facets map to %s, summing weights',
                           fan.describe(delta), image)
            if weight is not None:
                weights[maximal.index(image)] += weight
            summed.append(image)
            continue
        maximal.append(image)
        weights.append(weight)
    if fan.weights is None:
        weights = None
    star = make_fan(quotient.rank, rays, maximal, weights, labels)
    star._cache['summed_weights'] = tuple(star.describe(image) for image in dict.fromkeys(summed))
    return star


def star_weight_notes(fan, delta):
    """Report notes for star facets whose weight is a sum over several parent facets."""
    delta = fan.require(delta)
    summed = star_fan(fan, delta).memo('summed_weights', tuple)
    if not summed:
        return []
    return [f'star at {fan.describe(delta)}: weights summed on {", ".join(summed)}']


def barycentric_star_subdivision(fan, sigma):
    sigma = fan.require(sigma)
    if len(sigma) < 2:
        raise InvalidConeError(f'cannot star subdivide {fan.describe(sigma)}: dimension below 2')
    failing = [c for c in fan.containing(sigma) if not fan.quotient(c).unimodular]
    if failing:
        raise NotUnimodularError('star subdivision needs unimodular cones around the centre',
                                 cones=failing)

    new_ray = tuple(sum(coords) for coords in zip(*fan.generators(sigma)))
    label = '+'.join(fan.labels_of(sigma))
    while label in fan.labels:
        label += "'"
    rho = len(fan.rays)
    members = set(sigma)
    maximal, weights = [], []
    for cone in fan.maximal_cones:
        weight = fan.weights[cone] if fan.weights is not None else None
        if not members <= set(cone):
            maximal.append(cone)
            weights.append(weight)
            continue
        for zeta in sigma:
            maximal.append(tuple(sorted(set(cone) - {zeta})) + (rho,))
            weights.append(weight)
    subdivided = make_fan(
        fan.rank, fan.rays + (new_ray,), maximal,
        weights if fan.weights is not None else None, fan.labels + (label,),
    )
    logger.debug('subdivided %s: %d rays, %d maximal cones',
                 fan.describe(sigma), len(subdivided.rays), len(subdivided.maximal_cones))
    return subdivided


def product_fan(first, second):
    """The product fan in N1 × N2 with cones σ1 × σ2 and multiplied weights."""
    rays = [ray + (0,) * second.rank for ray in first.rays]
    rays += [(0,) * first.rank + ray for ray in second.rays]
    if set(first.labels) & set(second.labels):
        labels = [f'1.{l}' for l in first.labels] + [f'2.{l}' for l in second.labels]
    else:
        labels = list(first.labels) + list(second.labels)
    offset = len(first.rays)
    maximal, weights = [], []
    for a in first.maximal_cones:
        for b in second.maximal_cones:
            maximal.append(a + tuple(offset + i for i in b))
            if first.weights is not None and second.weights is not None:
                weights.append(first.weights[a] * second.weights[b])
    both = first.weights is not None and second.weights is not None
    return make_fan(first.rank + second.rank, rays, maximal, weights if both else None, labels)
