"""Chow rings of unimodular fans.

A^k(Σ) is presented by the squarefree classes x_σ, σ ∈ Σ_k, modulo the
relations Σ_ζ <m, e_ζ> x_{τ+ζ} for τ ∈ Σ_{k-1} and m in the annihilator of τ.
Products are computed on monomials and rewritten into squarefree form with a
functional dual to a repeated ray. :class:`QuotientRingOracle` recomputes the
same ring from the full polynomial quotient and serves as an independent check.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .compactified import CompactFace, build_complex
from .exceptions import ChowDegreeError, InvalidConeError, UnbalancedFanError
from .fan_core import (
    barycentric_star_subdivision, is_balanced, require_unimodular, star_fan,
)
from .homology import betti_table, canonical_multivector, is_tropical_homology_manifold
from .linalg import dot, rank, rref
from .reports import Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChowClass:
    ring: object
    degree: int
    coords: tuple

    def is_zero(self):
        return not any(self.coords)

    def __add__(self, other):
        if other.degree != self.degree or other.ring is not self.ring:
            raise ChowDegreeError('classes of different degrees or rings cannot be added')
        return ChowClass(self.ring, self.degree,
                         tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return ChowClass(self.ring, self.degree, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return self.ring.multiply(self, other)
        return ChowClass(self.ring, self.degree, tuple(Fraction(other) * a for a in self.coords))

    __rmul__ = __mul__


@dataclass(frozen=True)
class _Graded:
    cones: tuple
    index: dict
    relations: tuple
    pivots: tuple
    basis: tuple


class ChowRing:
    def __init__(self, fan):
        require_unimodular(fan)
        self.fan = fan
        self.dim = fan.dim
        self._graded = {k: self._build_degree(k) for k in range(self.dim + 1)}
        self._reductions = {}
        logger.debug('Chow ring dimensions %s', self.dims())

    def _build_degree(self, k):
        fan = self.fan
        cones = tuple(fan.cones_of_dim(k))
        index = {cone: i for i, cone in enumerate(cones)}
        rows = []
        for tau in fan.cones_of_dim(k - 1) if k else []:
            for functional in fan.quotient(tau).projection:
                row = [Fraction(0)] * len(cones)
                for zeta in fan.link(tau):
                    value = dot(functional, fan.rays[zeta])
                    if value:
                        row[index[tuple(sorted(tau + (zeta,)))]] += value
                if any(row):
                    rows.append(row)
        relations, pivots = rref(rows, len(cones))
        basis = tuple(cone for i, cone in enumerate(cones) if i not in pivots)
        return _Graded(cones, index, tuple(tuple(r) for r in relations), pivots, basis)

    def dimension(self, k):
        graded = self._graded.get(k)
        return len(graded.basis) if graded else 0

    def dims(self):
        return [self.dimension(k) for k in range(self.dim + 1)]

    def basis(self, k):
        graded = self._graded.get(k)
        return graded.basis if graded else ()

    def relations(self, k):
        graded = self._graded.get(k)
        return graded.relations if graded else ()

    def zero(self, k):
        return ChowClass(self, k, (Fraction(0),) * self.dimension(k))

    def one(self):
        return self.from_cones(0, {(): 1})

    def basis_class(self, k, i):
        coords = [Fraction(0)] * self.dimension(k)
        coords[i] = Fraction(1)
        return ChowClass(self, k, tuple(coords))

    def from_cones(self, k, combination):
        """Normal form of Σ c_σ x_σ over cones of dimension k."""
        graded = self._graded.get(k)
        if graded is None:
            return self.zero(k)
        vector = [Fraction(0)] * len(graded.cones)
        for cone, coeff in combination.items():
            vector[graded.index[tuple(cone)]] += Fraction(coeff)
        for row, pivot in zip(graded.relations, graded.pivots):
            c = vector[pivot]
            if c:
                vector = [a - c * b for a, b in zip(vector, row)]
        return ChowClass(self, k, tuple(vector[graded.index[cone]] for cone in graded.basis))

    def cone_class(self, cone):
        cone = self.fan.require(cone)
        return self.from_cones(len(cone), {cone: 1})

    def ray_class(self, ray):
        return self.from_cones(1, {(ray,): 1})

    def linear_class(self, values):
        """Σ_ζ values[ζ] x_ζ in A^1."""
        return self.from_cones(1, {(ray,): v for ray, v in enumerate(values) if v})

    def monomial(self, rays):
        rays = tuple(sorted(rays))
        if len(rays) > self.dim:
            return self.zero(len(rays))
        return self.from_cones(len(rays), self.reduce_monomial(rays))

    def reduce_monomial(self, monomial, functional=None):
        """Squarefree expansion {cone: coefficient} of the monomial Π x_ζ.

        With ``functional`` given, the first rewriting step uses it in place of
        the dual functional of the repeated ray; it must take the value 1 on
        that ray and 0 on the other rays of the support.
        """
        monomial = tuple(sorted(monomial))
        if functional is not None:
            return self._rewrite(monomial, functional)
        if monomial not in self._reductions:
            self._reductions[monomial] = self._rewrite(monomial, None)
        return self._reductions[monomial]

    def _rewrite(self, monomial, functional):
        fan = self.fan
        support = tuple(sorted(set(monomial)))
        if support not in fan.cones:
            return {}
        if len(support) == len(monomial):
            return {support: Fraction(1)}
        zeta = next(r for r in support if monomial.count(r) > 1)
        if functional is None:
            functional = fan.quotient(support).duals[support.index(zeta)]
        elif any(dot(functional, fan.rays[r]) != int(r == zeta) for r in support):
            raise ValueError('functional is not dual to the repeated ray on the support')
        rest = list(monomial)
        rest.remove(zeta)
        result = defaultdict(Fraction)
        for xi in fan.link(support):
            value = dot(functional, fan.rays[xi])
            if not value:
                continue
            for cone, coeff in self.reduce_monomial(rest + [xi]).items():
                result[cone] -= value * coeff
        return {cone: c for cone, c in result.items() if c}

    def multiply(self, a, b):
        if a.ring is not self or b.ring is not self:
            raise ValueError('classes belong to another ring')
        k = a.degree + b.degree
        if k > self.dim:
            logger.warning('product of degree %d exceeds dimension %d; returning zero', k, self.dim)
            return self.zero(k)
        total = defaultdict(Fraction)
        left, right = self.basis(a.degree), self.basis(b.degree)
        for ca, cone_a in zip(a.coords, left):
            if not ca:
                continue
            for cb, cone_b in zip(b.coords, right):
                if not cb:
                    continue
                for cone, coeff in self.reduce_monomial(cone_a + cone_b).items():
                    total[cone] += ca * cb * coeff
        return self.from_cones(k, total)

    def power(self, c, exponent):
        result = self.one()
        for _ in range(exponent):
            result = self.multiply(result, c)
        return result

    def degree(self, c):
        if c.degree != self.dim:
            raise ChowDegreeError(f'degree map needs a class of degree {self.dim}, got {c.degree}')
        self.require_balanced()
        return sum((coeff * self.fan.weight(cone) for coeff, cone in zip(c.coords, self.basis(self.dim))),
                   Fraction(0))

    def require_balanced(self):
        if not self.fan.memo('balanced', lambda: is_balanced(self.fan)).passed:
            raise UnbalancedFanError('the degree map needs a balanced fan')

    def degree_relations_hold(self):
        """Whether every top-degree relation evaluates to zero under the facet weights."""
        graded = self._graded[self.dim]
        return all(
            not sum((c * self.fan.weight(cone) for c, cone in zip(row, graded.cones)), Fraction(0))
            for row in graded.relations
        )


def chow_ring(fan):
    return fan.memo('chow', lambda: ChowRing(fan))


def star_ring(fan, cone):
    cone = fan.require(cone)
    return fan.memo(('chow', cone), lambda: ChowRing(star_fan(fan, cone)))


def multiply(ring, a, b):
    return ring.multiply(a, b)


def degree(ring, c):
    return ring.degree(c)


def gysin(fan, delta, sigma, c):
    """Gys: A(Σ^σ) -> A(Σ^δ), x_η' ↦ x_η' Π_{ζ ∈ σ - δ} x_ζ, for δ ⊆ σ.

    ``c`` must be a class of ``star_ring(fan, sigma)``; the result lives in
    ``star_ring(fan, delta)``. Cones are matched across the two stars by label.
    """
    delta, sigma = fan.require(delta), fan.require(sigma)
    if not set(delta) <= set(sigma):
        raise InvalidConeError(f'{fan.describe(delta)} is not a face of {fan.describe(sigma)}')
    source, target = star_ring(fan, sigma), star_ring(fan, delta)
    if c.ring is not source:
        raise ValueError('the class does not belong to the Chow ring of the star of sigma')
    extra = tuple(fan.labels[i] for i in sigma if i not in delta)
    total = defaultdict(Fraction)
    for coeff, cone in zip(c.coords, source.basis(c.degree)):
        if coeff:
            image = target.fan.cone_from_labels(source.fan.labels_of(cone) + extra)
            total[image] += coeff
    return target.from_cones(c.degree + len(extra), total)


def hodge_iso_check(fan):
    report = Report('Hodge isomorphism')
    chow_dims = chow_ring(fan).dims()
    hodge_dims = betti_table(fan).diagonal()
    report.witnesses.update(chow=chow_dims, hodge=hodge_dims)
    mismatched = [k for k, (a, h) in enumerate(zip(chow_dims, hodge_dims)) if a != h]
    if mismatched:
        report.fail('dim A^k differs from dim H^{k,k}', degrees=mismatched)
    return report


class QuotientRingOracle:
    """Q[x_ζ]/(I + J) computed degreewise over all monomials of degree at most d."""

    def __init__(self, fan):
        self.fan = fan
        self.dim = fan.dim
        self._graded = {k: self._build_degree(k) for k in range(self.dim + 1)}

    def _build_degree(self, k):
        fan = self.fan
        variables = range(len(fan.rays))
        monomials = tuple(combinations_with_replacement(variables, k))
        index = {mono: i for i, mono in enumerate(monomials)}
        rows = []
        for mono in monomials:
            if tuple(sorted(set(mono))) not in fan.cones:
                row = [0] * len(monomials)
                row[index[mono]] = 1
                rows.append(row)
        for mono in combinations_with_replacement(variables, k - 1) if k else []:
            for coord in range(fan.rank):
                row = [0] * len(monomials)
                for zeta in variables:
                    value = fan.rays[zeta][coord]
                    if value:
                        row[index[tuple(sorted(mono + (zeta,)))]] += value
                if any(row):
                    rows.append(row)
        relations, pivots = rref(rows, len(monomials))
        standard = tuple(m for i, m in enumerate(monomials) if i not in pivots)
        return _Graded(monomials, index, tuple(tuple(r) for r in relations), pivots, standard)

    def dimension(self, k):
        graded = self._graded.get(k)
        return len(graded.basis) if graded else 0

    def dims(self):
        return [self.dimension(k) for k in range(self.dim + 1)]

    def normal_form(self, k, combination):
        graded = self._graded[k]
        vector = [Fraction(0)] * len(graded.cones)
        for mono, coeff in combination.items():
            vector[graded.index[tuple(sorted(mono))]] += Fraction(coeff)
        for row, pivot in zip(graded.relations, graded.pivots):
            c = vector[pivot]
            if c:
                vector = [a - c * b for a, b in zip(vector, row)]
        return tuple(vector[graded.index[m]] for m in graded.basis)

    def image(self, c):
        """Coordinates of a structured Chow class in the oracle's standard monomials."""
        basis = c.ring.basis(c.degree)
        return self.normal_form(c.degree, {cone: coeff for coeff, cone in zip(c.coords, basis) if coeff})


def oracle_check(ring, oracle, rng, products=10):
    """Compare dimensions and random products of a structured ring against the oracle."""
    report = Report('Chow oracle equivalence')
    report.witnesses.update(structured=ring.dims(), oracle=oracle.dims())
    if ring.dims() != oracle.dims():
        return report.fail('graded dimensions differ')
    for k in range(ring.dim + 1):
        images = [oracle.image(ring.basis_class(k, i)) for i in range(ring.dimension(k))]
        if rank(images, oracle.dimension(k)) != ring.dimension(k):
            return report.fail('structured basis is not a basis of the quotient', degree=k)
    pairs = [
        (a, b) for a in range(ring.dim + 1) for b in range(ring.dim + 1 - a)
        if ring.dimension(a) and ring.dimension(b)
    ]
    mismatches = []
    for _ in range(products if pairs else 0):
        a, b = rng.choice(pairs)
        i, j = rng.randrange(ring.dimension(a)), rng.randrange(ring.dimension(b))
        product = ring.multiply(ring.basis_class(a, i), ring.basis_class(b, j))
        monomial = ring.basis(a)[i] + ring.basis(b)[j]
        if oracle.image(product) != oracle.normal_form(a + b, {monomial: 1}):
            mismatches.append([ring.fan.describe(ring.basis(a)[i]), ring.fan.describe(ring.basis(b)[j])])
    if mismatches:
        report.fail('products disagree with the oracle', products=mismatches)
    return report


@dataclass(frozen=True)
class KeelDecomposition:
    sigma: tuple
    summand_dims: tuple
    subdivided_dims: tuple
    T: str
    P: str

    @property
    def expected_dims(self):
        return [sum(column) for column in zip(*self.summand_dims)]


def keel_decomposition(fan, sigma):
    sigma = fan.require(sigma)
    if len(sigma) < 2:
        raise InvalidConeError(f'Keel decomposition needs dim σ >= 2, got {fan.describe(sigma)}')
    subdivided = barycentric_star_subdivision(fan, sigma)
    base, star = chow_ring(fan), star_ring(fan, sigma)
    d = fan.dim
    summands = [tuple(base.dims())]
    for shift in range(1, len(sigma)):
        summands.append(tuple(star.dimension(k - shift) for k in range(d + 1)))
    rho = subdivided.labels[-1]
    return subdivided, KeelDecomposition(
        sigma=fan.labels_of(sigma),
        summand_dims=tuple(summands),
        subdivided_dims=tuple(chow_ring(subdivided).dims()),
        T=f'-x_{rho}',
        P=' '.join(f'(x_{label} + T)' for label in fan.labels_of(sigma)),
    )


def keel_check(fan, sigma):
    subdivided, decomposition = keel_decomposition(fan, sigma)
    sigma = fan.require(sigma)
    report = Report(f'Keel decomposition at {fan.describe(sigma)}')
    report.witnesses.update(
        summands=[list(dims) for dims in decomposition.summand_dims],
        subdivided=list(decomposition.subdivided_dims),
        T=decomposition.T,
        P=decomposition.P,
    )
    if list(decomposition.subdivided_dims) != decomposition.expected_dims:
        report.fail('dimension identity fails', expected=decomposition.expected_dims)

    ring = chow_ring(subdivided)
    rho = len(fan.rays)
    x_rho = ring.ray_class(rho)

    def chi(ray):
        image = ring.ray_class(ray)
        return image + x_rho if ray in sigma else image

    broken = []
    product = ring.one()
    for ray in sigma:
        product = product * (chi(ray) - x_rho)
    if not product.is_zero():
        broken.append('P(T)')
    for ray in range(len(fan.rays)):
        if ray not in sigma and tuple(sorted(sigma + (ray,))) not in fan.cones:
            if not (chi(ray) * x_rho).is_zero():
                broken.append(f'x_{fan.labels[ray]} T')
    for coord in range(fan.rank):
        relation = ring.zero(1)
        for ray in range(len(fan.rays)):
            if fan.rays[ray][coord]:
                relation = relation + fan.rays[ray][coord] * chi(ray)
        if not relation.is_zero():
            broken.append(f'linear relation {coord}')
    for size in range(2, fan.dim + 1):
        for subset in combinations(range(len(fan.rays)), size):
            if subset in fan.cones or any(face not in fan.cones for face in combinations(subset, size - 1)):
                continue
            image = ring.one()
            for ray in subset:
                image = image * chi(ray)
            if not image.is_zero():
                broken.append('monomial ' + fan.describe(subset))
    if broken:
        report.fail('χ does not kill the Keel relations', relations=broken)
    return report


def deligne_resolution_check(fan, k=None):
    if k is None:
        report = Report('tropical Deligne resolution')
        for degree_ in range(fan.dim + 1):
            report.add(deligne_resolution_check(fan, degree_))
        return report

    report = Report(f'tropical Deligne resolution k={k}')
    if not 0 <= k <= fan.dim:
        raise ChowDegreeError(f'k={k} is outside 0..{fan.dim}')
    hypothesis = fan.memo('thm', lambda: is_tropical_homology_manifold(fan))
    if not hypothesis.passed:
        return report.fail('hypothesis failed: the fan is not a tropical homology manifold')

    matrices, dims = _deligne_maps(fan, k)
    report.witnesses['dims'] = dims
    for i in range(len(matrices) - 1):
        composite = [
            [sum((a * b for a, b in zip(row, column)), Fraction(0)) for column in zip(*matrices[i])]
            for row in matrices[i + 1]
        ]
        if any(x for row in composite for x in row):
            report.fail('consecutive maps do not compose to zero', position=i + 1)
    ranks = [rank(m, dims[i]) if m and dims[i] else 0 for i, m in enumerate(matrices)]
    report.witnesses['ranks'] = ranks
    inexact = [
        i for i in range(len(dims))
        if dims[i] != (ranks[i - 1] if i else 0) + (ranks[i] if i < len(ranks) else 0)
    ]
    if inexact:
        report.fail('the sequence is not exact', positions=inexact)
    return report


def _deligne_maps(fan, k):
    """Matrices of 0 -> H^k(X) -> ⊕_{Σ_k} A^0 -> ... -> ⊕_{Σ_0} A^k -> 0."""
    space = build_complex(fan).tangent_space(CompactFace((), ()), k)
    terms = []
    for j in range(k, -1, -1):
        blocks, offset = {}, 0
        for cone in fan.cones_of_dim(j):
            blocks[cone] = offset
            offset += star_ring(fan, cone).dimension(k - j)
        terms.append((j, blocks, offset))
    dims = [space.dim] + [size for _, _, size in terms]

    first = [[Fraction(0)] * space.dim for _ in range(terms[0][2])]
    for cone, offset in terms[0][1].items():
        first[offset] = list(space.coordinates(canonical_multivector(fan, cone)))
    matrices = [first]

    for (j, sources, width), (_, targets, height) in zip(terms, terms[1:]):
        matrix = [[Fraction(0)] * width for _ in range(height)]
        for sigma, column in sources.items():
            ring = star_ring(fan, sigma)
            for position, ray in enumerate(sigma):
                tau = sigma[:position] + sigma[position + 1:]
                sign = -1 if position % 2 else 1
                for i in range(ring.dimension(k - j)):
                    image = gysin(fan, tau, sigma, ring.basis_class(k - j, i))
                    for r, x in enumerate(image.coords):
                        if x:
                            matrix[targets[tau] + r][column + i] += sign * x
        matrices.append(matrix)
    return matrices, dims
