"""Matroids given by their bases, lattices of flats and Bergman fans."""
import logging
from dataclasses import dataclass
from itertools import combinations

from .exceptions import MatroidError
from .fan_core import make_fan

logger = logging.getLogger(__name__)

FINE = 'fine'
COARSE = 'coarse'
STRUCTURES = (FINE, COARSE)


@dataclass(frozen=True)
class Matroid:
    size: int
    bases: frozenset

    @property
    def rank(self):
        return len(next(iter(self.bases)))

    @property
    def ground_set(self):
        return frozenset(range(self.size))

    def rank_of(self, subset):
        subset = set(subset)
        return max(len(subset & basis) for basis in self.bases)

    def closure(self, subset):
        r = self.rank_of(subset)
        return frozenset(i for i in range(self.size) if self.rank_of(set(subset) | {i}) == r)

    def loops(self):
        return sorted(i for i in range(self.size) if self.rank_of({i}) == 0)

    @property
    def is_uniform(self):
        return self.bases == frozenset(
            frozenset(c) for c in combinations(range(self.size), self.rank)
        )


def validate_matroid(size, bases):
    if size < 0:
        raise MatroidError('ground set size must be nonnegative')
    bases = frozenset(frozenset(b) for b in bases)
    if not bases:
        raise MatroidError('a matroid needs at least one basis')
    if any(i < 0 or i >= size for basis in bases for i in basis):
        raise MatroidError('basis element outside the ground set')
    if len({len(b) for b in bases}) != 1:
        raise MatroidError('bases must be equicardinal')
    for first in bases:
        for second in bases:
            for x in first - second:
                if not any((first - {x}) | {y} in bases for y in second - first):
                    raise MatroidError(
                        f'basis exchange fails for {sorted(first)}, {sorted(second)} at {x}'
                    )
    return Matroid(size, bases)


def uniform_matroid(r, n):
    if not 1 <= r <= n:
        raise MatroidError(f'U_{{{r},{n}}} needs 1 <= r <= n')
    return Matroid(n, frozenset(frozenset(c) for c in combinations(range(n), r)))


@dataclass(frozen=True)
class FlatLattice:
    by_rank: dict

    def proper(self):
        top = max(self.by_rank)
        return [flat for r in range(1, top) for flat in self.by_rank.get(r, [])]

    def covers(self):
        """Pairs (F, G) with F ⊂ G and rank G = rank F + 1."""
        return [
            (low, high)
            for r in sorted(self.by_rank)
            for low in self.by_rank[r]
            for high in self.by_rank.get(r + 1, [])
            if low < high
        ]


def flats(matroid):
    layer = {matroid.closure(set())}
    by_rank = {0: sorted(layer, key=sorted)}
    for r in range(1, matroid.rank + 1):
        layer = {
            matroid.closure(flat | {i})
            for flat in layer for i in range(matroid.size) if i not in flat
        }
        by_rank[r] = sorted(layer, key=sorted)
    return FlatLattice(by_rank)


def _flat_ray(flat, size):
    last = size - 1
    shift = 1 if last in flat else 0
    return tuple(int(i in flat) - shift for i in range(last))


def bergman_fan(matroid, structure=FINE):
    if structure not in STRUCTURES:
        raise MatroidError(f'unknown structure {structure!r}')
    if matroid.loops():
        raise MatroidError(f'matroid has loops {matroid.loops()}')
    n, r = matroid.size, matroid.rank
    if structure == COARSE:
        if not matroid.is_uniform:
            raise MatroidError('the coarse structure is only available for uniform matroids')
        rays = [_flat_ray({i}, n) for i in range(n)]
        labels = [str(i) for i in range(n)]
        maximal = list(combinations(range(n), r - 1))
    else:
        proper = sorted(flats(matroid).proper(), key=lambda f: (matroid.rank_of(f), sorted(f)))
        rays = [_flat_ray(flat, n) for flat in proper]
        labels = ['_'.join(str(i) for i in sorted(flat)) for flat in proper]
        maximal = list(_maximal_chains(proper, matroid)) or [()]
    logger.debug('%s Bergman fan: %d rays, %d maximal cones', structure, len(rays), len(maximal))
    return make_fan(n - 1, rays, maximal, [1] * len(maximal), labels)


def _maximal_chains(proper, matroid):
    """Index tuples of chains F_1 ⊂ ... ⊂ F_{r-1} of proper flats of consecutive ranks."""
    by_rank = {}
    for i, flat in enumerate(proper):
        by_rank.setdefault(matroid.rank_of(flat), []).append(i)
    chains = [(i,) for i in by_rank.get(1, [])]
    for rank in range(2, matroid.rank):
        chains = [
            chain + (j,) for chain in chains for j in by_rank.get(rank, [])
            if proper[chain[-1]] < proper[j]
        ]
    return chains
