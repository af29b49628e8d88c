"""
The GKM graph of a complete cellular fan and its ring of congruence tuples.

A K-class is stored by its restrictions to the fixed points, one Laurent
polynomial per maximal cone. A tuple is a member when its components agree
modulo 1 - e^χ across every wall, χ being the primitive character
orthogonal to the wall.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence, TypedDict

from core.exceptions import GKMError, MembershipError
from core.fan.cellular import CellularCertificate
from core.fan.fan import Fan, is_complete
from core.util.lattice import LatticeVector, annihilator
from core.util.laurent import LaurentPoly, TermContext, divides_euler

logger = logging.getLogger(__name__)

Edge = tuple[int, int, LatticeVector]


class EdgeContext(TypedDict):
    i: int
    j: int
    chi: list[int]


class GKMContext(TypedDict):
    m: int
    order: list[int]
    edges: list[EdgeContext]


@dataclass(frozen=True)
class GKMGraph:
    m: int
    rank: int
    edges: tuple[Edge, ...]
    order: tuple[int, ...]

    @cached_property
    def adjacency(self) -> dict[int, list[tuple[int, LatticeVector]]]:
        adjacent: dict[int, list[tuple[int, LatticeVector]]] = {i: [] for i in range(self.m)}
        for i, j, chi in self.edges:
            adjacent[i].append((j, chi))
            adjacent[j].append((i, chi))
        return adjacent

    def neighbors(self, i: int) -> list[tuple[int, LatticeVector]]:
        return sorted(self.adjacency[i])

    def context(self) -> GKMContext:
        return {
            "m": self.m,
            "order": [i + 1 for i in self.order],
            "edges": [{"i": i + 1, "j": j + 1, "chi": list(chi)} for i, j, chi in self.edges],
        }


@dataclass(frozen=True)
class KClass:
    components: tuple[LaurentPoly, ...]

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def rank(self) -> int:
        return self.components[0].rank

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def context(self) -> list[list[TermContext]]:
        return [c.context() for c in self.components]


class Membership(NamedTuple):
    ok: bool
    violations: list[tuple[int, int]]


def wall_edges(f: Fan) -> tuple[Edge, ...]:
    """One (i, j, χ) per wall, χ primitive with first nonzero entry positive."""
    edges = []
    for i, j, wall in f.walls:
        (chi,) = annihilator(list(wall.rays), f.ambient_rank).column_vectors
        edges.append((i, j, chi))
    return tuple(edges)


def build_gkm(f: Fan, cert: CellularCertificate) -> GKMGraph:
    """
    The GKM graph: one vertex per maximal cone, one edge per wall.

    Raises:
        GKMError: When f is not complete or cert belongs to another fan.
    """
    if not is_complete(f):
        raise GKMError("GKM description requires a complete fan")
    if cert.fan != f:
        raise GKMError("Certificate belongs to a different fan")
    edges = wall_edges(f)
    logger.debug("GKM graph with %d vertices and %d edges", f.m, len(edges))
    return GKMGraph(f.m, f.ambient_rank, edges, cert.order)


def edge_violations(edges: Sequence[Edge], t: Sequence[LaurentPoly]) -> list[tuple[int, int]]:
    return [(i, j) for i, j, chi in edges if not divides_euler(t[i] - t[j], chi)]


def is_member(g: GKMGraph, t: Sequence[LaurentPoly]) -> Membership:
    """Check every edge condition, t_i == t_j mod (1 - e^χ)."""
    if len(t) != g.m:
        raise GKMError(f"Expected {g.m} components, got {len(t)}")
    violations = edge_violations(g.edges, t)
    return Membership(not violations, violations)


def kclass(g: GKMGraph, components: Sequence[LaurentPoly]) -> KClass:
    """Wrap a tuple as a K-class, raising MembershipError when it is not one."""
    if any(c.rank != g.rank for c in components):
        raise GKMError(f"Components must have rank {g.rank}")
    ok, violations = is_member(g, components)
    if not ok:
        raise MembershipError(violations)
    return KClass(tuple(components))


def _same_shape(a: KClass, b: KClass):
    if a.m != b.m:
        raise GKMError(f"Cannot combine classes with {a.m} and {b.m} components")


def kclass_add(a: KClass, b: KClass) -> KClass:
    _same_shape(a, b)
    return KClass(tuple(x + y for x, y in zip(a.components, b.components)))


def kclass_sub(a: KClass, b: KClass) -> KClass:
    _same_shape(a, b)
    return KClass(tuple(x - y for x, y in zip(a.components, b.components)))


def kclass_mul(a: KClass, b: KClass) -> KClass:
    _same_shape(a, b)
    return KClass(tuple(x * y for x, y in zip(a.components, b.components)))


def kclass_scale(a: KClass, x: LaurentPoly) -> KClass:
    """The R(T)-module action: multiply every component by x."""
    return KClass(tuple(x * c for c in a.components))


def kclass_from_rep(a: LaurentPoly, m: int) -> KClass:
    """Diagonal embedding of R(T)."""
    return KClass((a,) * m)


def kclass_zero(m: int, rank: int) -> KClass:
    return kclass_from_rep(LaurentPoly.zero(rank), m)


def restrict(a: KClass, i: int) -> LaurentPoly:
    """The restriction of a to the fixed point of maximal cone i."""
    if not 0 <= i < a.m:
        raise GKMError(f"Cone index {i} out of range for {a.m} components")
    return a.components[i]
