"""Tropical modifications of fans along conewise integer-linear functions."""
import logging
from dataclasses import dataclass

from .exceptions import InvalidFunctionError, NotUnimodularError, UnbalancedFanError
from .fan_core import balancing_defects, is_unimodular, make_fan, require_unimodular

logger = logging.getLogger(__name__)

UP = 1
DOWN = -1


@dataclass(frozen=True)
class DivisorCone:
    cone: tuple
    weight: int
    direction: int


@dataclass(frozen=True)
class Divisor:
    """A weighted subfan of codimension one; ``direction`` orients its vertical ray."""
    fan: object
    cones: tuple

    def __bool__(self):
        return bool(self.cones)

    def labelled(self):
        return {self.fan.labels_of(item.cone): item.weight for item in self.cones}

    def to_fan(self):
        rays = sorted({ray for item in self.cones for ray in item.cone})
        position = {ray: i for i, ray in enumerate(rays)}
        return make_fan(
            self.fan.rank,
            [self.fan.rays[r] for r in rays],
            [tuple(position[r] for r in item.cone) for item in self.cones],
            [item.weight for item in self.cones],
            [self.fan.labels[r] for r in rays],
        )


@dataclass(frozen=True)
class ModificationResult:
    graph_fan: object
    divisor: Divisor
    added_rays: tuple


def _check_input(fan, f):
    if f.fan is not fan:
        raise InvalidFunctionError('the function is defined on another fan')
    require_unimodular(fan)
    if not f.is_integral:
        raise InvalidFunctionError('modification needs integer values on the rays')
    if any(any(total) for total in balancing_defects(fan).values()):
        raise UnbalancedFanError('modification needs a balanced fan')


def divisor(fan, f):
    """Codimension-one cones where the graph of f fails to balance.

    At τ the lifted normal vectors sum to (S, s). Balancing of the fan writes S
    as Σ c_i e_{τ_i}; the defect s - Σ c_i f(e_{τ_i}) is the last coordinate the
    graph is missing. Its absolute value is the weight, its sign the direction
    of the vertical ray that restores balancing.
    """
    _check_input(fan, f)
    d = fan.dim
    cones = []
    for tau in fan.cones_of_dim(d - 1) if d else []:
        total = [0] * fan.rank
        height = 0
        for ray in fan.link(tau):
            weight = fan.weight(tuple(sorted(tau + (ray,))))
            total = [a + weight * b for a, b in zip(total, fan.rays[ray])]
            height += weight * f.values[ray]
        duals = fan.quotient(tau).duals
        coefficients = [sum(a * b for a, b in zip(dual, total)) for dual in duals]
        defect = height - sum(c * f.values[ray] for c, ray in zip(coefficients, tau))
        if defect:
            cones.append(DivisorCone(tau, abs(int(defect)), DOWN if defect > 0 else UP))
    return Divisor(fan, tuple(cones))


def tropical_modification(fan, f):
    found = divisor(fan, f)
    rays = [ray + (int(value),) for ray, value in zip(fan.rays, f.values)]
    labels = list(fan.labels)
    vertical = {}
    for direction, name in ((UP, 'up'), (DOWN, 'down')):
        if any(item.direction == direction for item in found.cones):
            while name in labels:
                name += "'"
            vertical[direction] = len(rays)
            rays.append((0,) * fan.rank + (direction,))
            labels.append(name)
    maximal = list(fan.facets)
    weights = [fan.weight(facet) for facet in maximal]
    for item in found.cones:
        maximal.append(item.cone + (vertical[item.direction],))
        weights.append(item.weight)
    graph = make_fan(fan.rank + 1, rays, maximal, weights, labels)

    report = is_unimodular(graph)
    if not report.passed:
        raise NotUnimodularError('the modification is not unimodular; refine the input first',
                                 cones=report.witnesses['cones'])
    added = tuple(labels[i] for i in sorted(vertical.values()))
    logger.debug('modification adds %s along %d divisor cones', added, len(found.cones))
    return ModificationResult(graph, found, added)
