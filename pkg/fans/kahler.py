"""Ample classes and the Kähler package of Chow rings."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice, product

from django.conf import settings

from .chow import star_ring
from .exceptions import ChowDegreeError, InvalidFunctionError
from .fan_core import star_fan, star_weight_notes
from .homology import is_tropical_homology_manifold
from .linalg import dot, is_feasible, kernel, leading_minors_positive, rank, solve
from .reports import NOT_CERTIFIED, Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ConewiseLinearFunction:
    """A function on |Σ| linear on each cone, given by its values on the ray generators."""
    fan: object
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.fan.rays):
            raise InvalidFunctionError(
                f'{len(self.values)} values given for {len(self.fan.rays)} rays'
            )
        object.__setattr__(self, 'values', tuple(Fraction(v) for v in self.values))

    def __call__(self, point):
        located = self.fan.locate(point)
        if located is None:
            raise InvalidFunctionError(f'{tuple(point)} is outside the support')
        cone, coefficients = located
        return sum((c * self.values[i] for c, i in zip(coefficients, cone)), Fraction(0))

    @property
    def is_integral(self):
        return all(v.denominator == 1 for v in self.values)

    def linear_part(self, cone):
        """The functional m with <m, e_ζ> = f(e_ζ) for every ray ζ of ``cone``."""
        quotient = self.fan.quotient(cone)
        if quotient.unimodular:
            m = [Fraction(0)] * self.fan.rank
            for dual, ray in zip(quotient.duals, cone):
                m = [a + self.values[ray] * b for a, b in zip(m, dual)]
            return m
        return solve([list(self.fan.rays[i]) for i in cone], self.fan.rank,
                     [self.values[i] for i in cone])

    def plus_linear(self, functional):
        return ConewiseLinearFunction(
            self.fan, tuple(v + dot(functional, ray) for v, ray in zip(self.values, self.fan.rays))
        )

    def scaled(self, factor):
        return ConewiseLinearFunction(self.fan, tuple(factor * v for v in self.values))


def is_strictly_convex(f):
    """For every cone σ, look for m with f - m zero on σ and positive on the link of σ."""
    fan = f.fan
    report = Report('strictly convex')
    report.notes.append('neighbourhoods are taken within the support of the fan')
    failing = []
    for sigma in sorted(fan.cones, key=lambda c: (len(c), c)):
        equalities = [(fan.rays[z], f.values[z]) for z in sigma]
        inequalities = [
            ([-x for x in fan.rays[xi]], -f.values[xi], True) for xi in fan.link(sigma)
        ]
        if not is_feasible(fan.rank, equalities, inequalities):
            failing.append(fan.describe(sigma))
    if failing:
        report.fail('no separating linear function', cones=failing)
    return report


def restrict_function(fan, f, sigma):
    """The function induced on Σ^σ by f - m_σ, where m_σ agrees with f on σ."""
    sigma = fan.require(sigma)
    star = star_fan(fan, sigma)
    m = f.linear_part(sigma)
    values = []
    for label in star.labels:
        ray = fan.ray_index(label)
        values.append(f.values[ray] - dot(m, fan.rays[ray]))
    return ConewiseLinearFunction(star, tuple(values))


def ample_class(ring, f):
    """L = Σ f(e_ζ) x_ζ."""
    return ring.linear_class(f.values)


def _multiplication_matrix(ring, c, k):
    """Columns are the products c * b for the basis b of A^k."""
    images = [(c * ring.basis_class(k, i)).coords for i in range(ring.dimension(k))]
    target = ring.dimension(c.degree + k)
    return [[image[r] for image in images] for r in range(target)]


def hard_lefschetz_check(ring, L, k, verified=True):
    d = ring.dim
    if not 0 <= 2 * k <= d:
        raise ChowDegreeError(f'hard Lefschetz needs 0 <= k <= {d}/2, got {k}')
    report = Report(f'hard Lefschetz k={k}')
    if not verified:
        logger.warning('hard Lefschetz computed for a class not verified to be ample')
        report.notes.append('L not verified ample')
    source, target = ring.dimension(k), ring.dimension(d - k)
    matrix = _multiplication_matrix(ring, ring.power(L, d - 2 * k), k)
    found = rank(matrix, source) if matrix and source else 0
    report.witnesses.update(source=source, target=target, rank=found)
    if not source == target == found:
        report.fail('multiplication by L^{d-2k} is not an isomorphism')
    return report


def hodge_riemann_check(ring, L, k, verified=True):
    d = ring.dim
    if not 0 <= 2 * k <= d:
        raise ChowDegreeError(f'Hodge-Riemann needs 0 <= k <= {d}/2, got {k}')
    report = Report(f'Hodge-Riemann k={k}')
    if not verified:
        logger.warning('Hodge-Riemann computed for a class not verified to be ample')
        report.notes.append('L not verified ample')
    lefschetz = ring.power(L, d - 2 * k)
    if k == 0:
        primitive = kernel([], ring.dimension(0))
    else:
        primitive = kernel(_multiplication_matrix(ring, lefschetz * L, k), ring.dimension(k))
    classes = [
        sum((c * ring.basis_class(k, i) for i, c in enumerate(vector) if c), ring.zero(k))
        for vector in primitive
    ]
    sign = -1 if k % 2 else 1
    form = [[sign * ring.degree(lefschetz * a * b) for b in classes] for a in classes]
    report.witnesses['primitive_dim'] = len(classes)
    if not leading_minors_positive(form):
        report.fail('the Hodge-Riemann form is not positive definite on primitive classes',
                    form=form)
    return report


def poincare_pairing_check(ring):
    report = Report('Poincaré pairing')
    d = ring.dim
    degenerate = []
    for k in range(d + 1):
        rows = [
            [ring.degree(ring.basis_class(k, i) * ring.basis_class(d - k, j))
             for j in range(ring.dimension(d - k))]
            for i in range(ring.dimension(k))
        ]
        size = ring.dimension(k)
        if size != ring.dimension(d - k) or (size and rank(rows, size) != size):
            degenerate.append(k)
    if degenerate:
        report.fail('the pairing A^k x A^{d-k} -> Q is degenerate', degrees=degenerate)
    return report


def _candidates(fan, budget):
    valence = [sum(1 for facet in fan.facets if ray in facet) for ray in range(len(fan.rays))]
    yield valence
    yield [1] * len(fan.rays)
    yield [sum(abs(x) for x in ray) for ray in fan.rays]
    yield from islice(product(range(1, 4), repeat=len(fan.rays)), budget)


def find_ample_function(fan, budget=None):
    """The first strictly convex function among a deterministic list of candidates."""
    if budget is None:
        budget = settings.TROPFAN_AMPLE_SEARCH_BUDGET
    for values in _candidates(fan, budget):
        f = ConewiseLinearFunction(fan, tuple(values))
        if is_strictly_convex(f).passed:
            logger.info('ample function found: %s', values)
            return f
    logger.info('no strictly convex function among %d grid candidates', budget)
    return None


def kahler_package(fan, f, sigma):
    report = Report(f'Kähler package at {fan.describe(sigma)}')
    ring = star_ring(fan, sigma)
    L = ample_class(ring, restrict_function(fan, f, sigma))
    report.notes.extend(star_weight_notes(fan, sigma))
    if not ring.degree_relations_hold():
        report.notes.append('degree relations fail on this star')
    report.add(poincare_pairing_check(ring))
    for k in range(ring.dim // 2 + 1):
        report.add(hard_lefschetz_check(ring, L, k))
        report.add(hodge_riemann_check(ring, L, k))
    return report


def is_kahler(fan, f=None):
    report = Report('Kähler')
    report.add(fan.memo('thm', lambda: is_tropical_homology_manifold(fan)))
    if not report.passed:
        return report
    if f is None:
        f = find_ample_function(fan)
        if f is None:
            report.status = NOT_CERTIFIED
            report.notes.append('quasi-projectivity not certified: no strictly convex function found')
            return report
    else:
        convexity = is_strictly_convex(f)
        if not convexity.passed:
            convexity.status = NOT_CERTIFIED
            report.add(convexity)
            report.notes.append('quasi-projectivity not certified: the given function is not strictly convex')
            return report
    report.witnesses['function'] = [str(v) for v in f.values]
    cones = sorted(fan.cones, key=lambda c: (len(c), c))
    with ThreadPoolExecutor(max_workers=settings.TROPFAN_THREADS) as pool:
        for child in pool.map(lambda sigma: kahler_package(fan, f, sigma), cones):
            report.add(child)
    return report
