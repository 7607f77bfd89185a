"""The canonical compactification of a unimodular fan as a cubical cell complex.

Faces are pairs (σ, γ) of cones with σ ⊆ γ. The face C_γ^σ is a cube whose free
coordinates are the rays of γ not in σ, in global ray order; the coordinate of
a ray r runs from the face (σ, γ - r) to the face (σ + r, γ) at infinity.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .fan_core import require_unimodular
from .linalg import compound, coordinates, exterior_basis, mat_vec, rref, wedge

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class CompactFace:
    sedentarity: tuple
    mother: tuple

    @property
    def dim(self):
        return len(self.mother) - len(self.sedentarity)

    @property
    def free_rays(self):
        return tuple(r for r in self.mother if r not in self.sedentarity)

    def is_face_of(self, other):
        return (set(other.sedentarity) <= set(self.sedentarity)
                and set(self.mother) <= set(other.mother))


@dataclass(frozen=True)
class MultiTangentSpace:
    """A subspace of the p-th exterior power of N^σ ⊗ Q in reduced echelon form."""
    face: CompactFace
    p: int
    ambient: int
    basis: tuple
    pivots: tuple

    @property
    def dim(self):
        return len(self.basis)

    def coordinates(self, vector):
        return coordinates(self.basis, self.pivots, vector)


class CompactifiedComplex:
    def __init__(self, fan):
        require_unimodular(fan)
        self.fan = fan
        self.faces = sorted(
            CompactFace(tuple(sedentarity), gamma)
            for gamma in fan.cones
            for size in range(len(gamma) + 1)
            for sedentarity in combinations(gamma, size)
        )
        self.faces_by_dim = {}
        for face in sorted(self.faces, key=lambda f: (f.dim, f)):
            self.faces_by_dim.setdefault(face.dim, []).append(face)
        self._tangent = {}
        self._transition = {}
        logger.debug('compactified complex with f-vector %s', self.f_vector())

    @property
    def dim(self):
        return self.fan.dim

    def f_vector(self):
        return [len(self.faces_by_dim.get(q, [])) for q in range(self.dim + 1)]

    def boundary(self, face):
        """Codimension-one faces of ``face`` with their incidence signs."""
        pieces = []
        for j, ray in enumerate(face.free_rays):
            sign = 1 if j % 2 == 0 else -1
            inner = tuple(r for r in face.mother if r != ray)
            outer = tuple(sorted(face.sedentarity + (ray,)))
            pieces.append((-sign, CompactFace(face.sedentarity, inner)))
            pieces.append((sign, CompactFace(outer, face.mother)))
        return pieces

    def incidence(self, alpha, beta):
        for sign, face in self.boundary(beta):
            if face == alpha:
                return sign
        return 0

    def tangent_space(self, face, p):
        """F_p of ``face``; the zero space when p exceeds the rank of N^σ."""
        key = (face, p)
        if key not in self._tangent:
            self._tangent[key] = self._build_tangent(face, p)
        return self._tangent[key]

    def _build_tangent(self, face, p):
        fan = self.fan
        quotient = fan.quotient(face.sedentarity)
        r = quotient.rank
        if p < 0 or p > r:
            return MultiTangentSpace(face, p, 0, (), ())
        vectors = []
        for eta in fan.containing(face.mother):
            if eta not in fan.maximal_cones:
                continue
            images = [quotient.project(fan.rays[i]) for i in eta if i not in face.sedentarity]
            for subset in combinations(images, p):
                vectors.append(wedge(list(subset), r))
        basis, pivots = rref(vectors, len(exterior_basis(r, p)))
        return MultiTangentSpace(face, p, len(exterior_basis(r, p)),
                                 tuple(tuple(row) for row in basis), pivots)

    def transition(self, source, target, p):
        """The p-th exterior power of N^source -> N^target for sedentarities source ⊆ target."""
        key = (source, target, p)
        if key not in self._transition:
            fan = self.fan
            lift = fan.quotient(source).lift
            projection = fan.quotient(target).projection
            matrix = [[sum(a * b for a, b in zip(row, vector)) for vector in lift]
                      for row in projection]
            self._transition[key] = compound(matrix, len(projection), len(lift), p)
        return self._transition[key]

    def coefficient_map(self, beta, alpha, p):
        """Matrix of ι: F_p(beta) -> F_p(alpha) in the echelon bases (rows index alpha)."""
        if not alpha.is_face_of(beta):
            raise ValueError(f'{alpha} is not a face of {beta}')
        source = self.tangent_space(beta, p)
        target = self.tangent_space(alpha, p)
        if not source.dim or not target.dim:
            return [[Fraction(0)] * source.dim for _ in range(target.dim)]
        if alpha.sedentarity == beta.sedentarity:
            images = source.basis
        else:
            matrix = self.transition(beta.sedentarity, alpha.sedentarity, p)
            images = [mat_vec(matrix, vector) for vector in source.basis]
        columns = [target.coordinates(image) for image in images]
        return [[column[i] for column in columns] for i in range(target.dim)]


def build_complex(fan):
    return fan.memo('compactified', lambda: CompactifiedComplex(fan))


def multi_tangent(complex_, face, p):
    rank = complex_.fan.quotient(face.sedentarity).rank
    if not 0 <= p <= rank:
        raise ValueError(f'p={p} is outside 0..{rank} for {face}')
    return complex_.tangent_space(face, p)


def coefficient_map(complex_, beta, alpha, p):
    return complex_.coefficient_map(beta, alpha, p)
