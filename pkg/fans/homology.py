"""Tropical homology and cohomology of canonical compactifications."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from django.conf import settings

from .compactified import CompactFace, build_complex
from .exceptions import MissingWeightsError
from .fan_core import balancing_defects, star_fan, star_weight_notes
from .linalg import kernel, mat_mul, rank, transpose, wedge
from .reports import Report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainComplex:
    """C_{p,•}: ``dims[q]`` is dim C_{p,q}; ``boundaries[q]`` maps C_{p,q} to C_{p,q-1}."""
    p: int
    dims: tuple
    offsets: dict
    boundaries: dict

    def boundary_rank(self, q):
        matrix = self.boundaries.get(q)
        if not matrix:
            return 0
        return rank(matrix, self.dims[q])


@dataclass
class BettiTable:
    dim: int
    entries: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def diagonal(self):
        return [self[k, k] for k in range(self.dim + 1)]

    def betti_numbers(self):
        return [
            sum(self[p, k - p] for p in range(self.dim + 1))
            for k in range(2 * self.dim + 1)
        ]

    def rows(self):
        return [[self[p, q] for q in range(self.dim + 1)] for p in range(self.dim + 1)]


@dataclass(frozen=True)
class FundamentalCycle:
    coefficients: dict
    chain: tuple
    boundary: tuple

    @property
    def is_cycle(self):
        return not any(self.boundary)


@dataclass(frozen=True)
class OpenCohomology:
    """H^{p,0}(X) = F^p(0). The basis consists of coordinate functionals at the pivots."""
    p: int
    dim: int
    basis: tuple


def chain_complex(complex_, p):
    return complex_.fan.memo(('chains', p), lambda: _build_chains(complex_, p))


def _build_chains(complex_, p):
    dims, offsets = [], {}
    for q in range(complex_.dim + 1):
        position = 0
        for face in complex_.faces_by_dim.get(q, []):
            offsets[face] = position
            position += complex_.tangent_space(face, p).dim
        dims.append(position)
    boundaries = {}
    for q in range(1, complex_.dim + 1):
        matrix = [[Fraction(0)] * dims[q] for _ in range(dims[q - 1])]
        for beta in complex_.faces_by_dim.get(q, []):
            width = complex_.tangent_space(beta, p).dim
            if not width:
                continue
            for sign, alpha in complex_.boundary(beta):
                block = complex_.coefficient_map(beta, alpha, p)
                for i, row in enumerate(block):
                    for j, x in enumerate(row):
                        if x:
                            matrix[offsets[alpha] + i][offsets[beta] + j] += sign * x
        boundaries[q] = matrix
    logger.debug('C_{%d,*} has dimensions %s', p, dims)
    return ChainComplex(p, tuple(dims), offsets, boundaries)


def _tables(fan):
    complex_ = build_complex(fan)
    d = complex_.dim
    homology, cohomology = BettiTable(d), BettiTable(d)
    for p in range(d + 1):
        chains = chain_complex(complex_, p)
        ranks = {q: chains.boundary_rank(q) for q in range(1, d + 1)}
        coranks = {
            q: rank(transpose(chains.boundaries[q], chains.dims[q]), chains.dims[q - 1])
            if chains.boundaries[q] else 0
            for q in range(1, d + 1)
        }
        for q in range(d + 1):
            homology.entries[p, q] = chains.dims[q] - ranks.get(q, 0) - ranks.get(q + 1, 0)
            cohomology.entries[p, q] = chains.dims[q] - coranks.get(q + 1, 0) - coranks.get(q, 0)
    return homology, cohomology


def betti_table(fan):
    return fan.memo('homology', lambda: _tables(fan))[0]


def cohomology_table(fan):
    return fan.memo('homology', lambda: _tables(fan))[1]


def boundary_squares_zero(fan):
    report = Report('boundary squares to zero')
    complex_ = build_complex(fan)
    failing = []
    for p in range(complex_.dim + 1):
        chains = chain_complex(complex_, p)
        for q in range(2, complex_.dim + 1):
            product = mat_mul(chains.boundaries[q - 1], chains.boundaries[q],
                              chains.dims[q - 1], chains.dims[q])
            if any(x for row in product for x in row):
                failing.append((p, q))
    if failing:
        report.fail('nonzero composite of boundary maps', degrees=failing)
    return report


def euler_characteristic(complex_, p):
    chains = chain_complex(complex_, p)
    return sum((-1) ** q * dim for q, dim in enumerate(chains.dims))


def homology_basis(complex_, p, q):
    """Cycle representatives of a basis of H_{p,q}, chosen greedily against the boundaries."""
    chains = chain_complex(complex_, p)
    dim = chains.dims[q]
    cycles = kernel(chains.boundaries[q], dim) if q in chains.boundaries else [
        [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)
    ]
    incoming = chains.boundaries.get(q + 1)
    spanned = transpose(incoming, chains.dims[q + 1]) if incoming else []
    current = rank(spanned, dim)
    representatives = []
    for cycle in cycles:
        trial = spanned + [cycle]
        if rank(trial, dim) > current:
            spanned, current = trial, current + 1
            representatives.append(cycle)
    return representatives


def fan_open_cohomology(fan, p):
    complex_ = build_complex(fan)
    space = complex_.tangent_space(CompactFace((), ()), p)
    basis = tuple(
        tuple(int(i == pivot) for i in range(space.ambient)) for pivot in space.pivots
    )
    return OpenCohomology(p, space.dim, basis)


def canonical_multivector(fan, cone):
    """ω_σ: the wedge of the generators of σ in global ray order."""
    return wedge(fan.generators(cone), fan.rank)


def fundamental_class(fan):
    if fan.weights is None or not fan.is_pure:
        raise MissingWeightsError('the fundamental class needs a weighted pure fan')
    complex_ = build_complex(fan)
    d = complex_.dim
    chains = chain_complex(complex_, d)
    chain = [Fraction(0)] * chains.dims[d]
    coefficients = {}
    for facet in fan.facets:
        face = CompactFace((), facet)
        omega = canonical_multivector(fan, facet)
        coords = complex_.tangent_space(face, d).coordinates(omega)
        coefficients[facet] = (fan.weight(facet), tuple(omega))
        for i, x in enumerate(coords):
            chain[chains.offsets[face] + i] += fan.weight(facet) * x
    if d:
        boundary = [sum((a * b for a, b in zip(row, chain) if a and b), Fraction(0))
                    for row in chains.boundaries[d]]
    else:
        boundary = []
    return FundamentalCycle(coefficients, tuple(chain), tuple(boundary))


def pd_battery(fan):
    report = Report('PD battery')
    report.notes.append(
        'necessary conditions only: dimension symmetry, dim H^{d,d} = 1 '
        'and vanishing off the diagonal'
    )
    homology, cohomology = betti_table(fan), cohomology_table(fan)
    d = homology.dim
    asymmetric = [
        (p, q) for p in range(d + 1) for q in range(d + 1)
        if cohomology[p, q] != homology[d - p, d - q]
    ]
    off_diagonal = [
        (p, q) for p in range(d + 1) for q in range(d + 1)
        if p != q and cohomology[p, q]
    ]
    report.witnesses['cohomology'] = cohomology.rows()
    if asymmetric:
        report.fail('dim H^{p,q} differs from dim H_{d-p,d-q}', asymmetric=asymmetric)
    if cohomology[d, d] != 1:
        report.fail('top cohomology is not one-dimensional', top=cohomology[d, d])
    if off_diagonal:
        report.fail('cohomology off the diagonal', off_diagonal=off_diagonal)
    return report


def is_tropical_homology_manifold(fan):
    report = Report('tropical homology manifold')
    report.notes.append('PD battery applied to the star of every cone')
    cones = sorted(fan.cones, key=lambda c: (len(c), c))

    def check(cone):
        child = pd_battery(star_fan(fan, cone))
        child.check = f'PD battery at {fan.describe(cone)}'
        child.notes.extend(star_weight_notes(fan, cone))
        return child

    with ThreadPoolExecutor(max_workers=settings.TROPFAN_THREADS) as pool:
        children = list(pool.map(check, cones))
    failing = []
    for cone, child in zip(cones, children):
        report.add(child)
        if not child.passed:
            failing.append(fan.describe(cone))
    if failing:
        report.witnesses['cones'] = failing
    return report


def balancing_matches_cycle(fan):
    """Whether the fundamental chain is a cycle exactly when the fan is balanced."""
    balanced = not any(any(total) for total in balancing_defects(fan).values())
    return balanced == fundamental_class(fan).is_cycle
