"""
Rational polyhedral cones in N_R with both descriptions.

A Cone keeps its primitive extreme rays (sorted lexicographically) together
with inward facet normals in M and a basis of its orthogonal sublattice.
Both descriptions come from ppl's double description in dual_description,
which is the only supported constructor.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, TypedDict

import ppl

from core.exceptions import ConeError
from core.util.lattice import (
    LatticeVector,
    QuotientLattice,
    annihilator,
    is_saturated,
    pairing,
    primitive,
    quotient,
)

logger = logging.getLogger(__name__)


class ConeContext(TypedDict):
    rays: list[list[int]]
    dim: int


@dataclass(frozen=True)
class Cone:
    ambient_rank: int
    rays: tuple[LatticeVector, ...]
    facets: tuple[LatticeVector, ...] = field(compare=False, repr=False)
    dim: int = field(compare=False)
    perp: tuple[LatticeVector, ...] = field(compare=False, repr=False)

    @property
    def is_zero(self) -> bool:
        return not self.rays

    @property
    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @cached_property
    def span_quotient(self) -> QuotientLattice:
        return quotient(self.ambient_rank, self.rays)

    @cached_property
    def function_lattice(self) -> QuotientLattice:
        """M -> M / (c^⊥ ∩ M), the exponent lattice of functions on the cone."""
        return quotient(self.ambient_rank, self.perp)

    @cached_property
    def faces(self) -> tuple["Cone", ...]:
        """
        Every face, from {0} up to the cone itself, sorted by (dim, rays).

        A face is the set of rays tight on some subset of facets, so the
        faces are the closure of the full ray set under "keep the rays
        tight on one more facet".
        """
        start = frozenset(range(len(self.rays)))
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for u in self.facets:
                tight = frozenset(k for k in current if pairing(u, self.rays[k]) == 0)
                if tight not in seen:
                    seen.add(tight)
                    queue.append(tight)
        cones = [
            dual_description([self.rays[k] for k in sorted(s)], self.ambient_rank) for s in seen
        ]
        return tuple(sorted(cones, key=lambda c: (c.dim, c.rays)))

    def is_face_of(self, other: "Cone") -> bool:
        return self.ambient_rank == other.ambient_rank and self in other.faces

    def _check(self, x: Sequence[int]):
        if len(x) != self.ambient_rank:
            raise ConeError(f"Vector {tuple(x)} does not have rank {self.ambient_rank}")

    def in_span(self, x: Sequence[int]) -> bool:
        self._check(x)
        return all(pairing(u, x) == 0 for u in self.perp)

    def contains(self, x: Sequence[int]) -> bool:
        return self.in_span(x) and all(pairing(u, x) >= 0 for u in self.facets)

    def rel_interior_contains(self, x: Sequence[int]) -> bool:
        return self.in_span(x) and all(pairing(u, x) > 0 for u in self.facets)

    def context(self) -> ConeContext:
        return {"rays": [list(r) for r in self.rays], "dim": self.dim}

    def __str__(self) -> str:
        if self.is_zero:
            return "{0}"
        return "<" + ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.rays) + ">"


def zero_cone(n: int) -> Cone:
    identity = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return Cone(n, (), (), 0, identity)


def _polyhedron(rays: Sequence[Sequence[int]], n: int) -> ppl.C_Polyhedron:
    """The closed cone spanned by rays as a ppl polyhedron in Q^n."""
    vrs = [ppl.Variable(i) for i in range(n)]
    cone = ppl.C_Polyhedron(n, "empty")
    cone.add_generator(ppl.point())
    for r in rays:
        cone.add_generator(ppl.ray(sum(r[i] * vrs[i] for i in range(n))))
    return cone


def _padded(coefficients: Sequence, n: int) -> LatticeVector:
    # ppl drops trailing zero coefficients
    values = tuple(int(c) for c in coefficients)
    return values + (0,) * (n - len(values))


def dual_description(rays: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> Cone:
    """
    Build the cone generated by rays, computing its facet normals.

    Generators are made primitive and deduplicated, zero generators are
    ignored and generators that are not extreme are dropped.

    Args:
        rays: Generators in N, as integer sequences.
        ambient_rank: Rank of N. Required when rays is empty.

    Returns:
        The Cone with its extreme rays, inward facet normals (defined up
        to the orthogonal sublattice), dimension and a basis of c^⊥ ∩ M.

    Raises:
        ConeError: On rank mismatches or a cone that contains a line.
    """
    if ambient_rank is None:
        if not rays:
            raise ConeError("ambient_rank is required for a cone without rays")
        ambient_rank = len(rays[0])
    n = ambient_rank
    generators = set()
    for r in rays:
        if len(r) != n:
            raise ConeError(f"Ray {tuple(r)} does not have rank {n}")
        if any(r):
            generators.add(primitive(r))
    if not generators:
        return zero_cone(n)
    ordered = sorted(generators)

    cone = _polyhedron(ordered, n)
    minimized = cone.minimized_generators()
    if any(g.is_line() for g in minimized):
        raise ConeError("not strongly convex")
    extreme = tuple(
        sorted(primitive(_padded(g.coefficients(), n)) for g in minimized if g.is_ray())
    )
    if len(extreme) < len(ordered):
        logger.debug("Dropped %d non-extreme generators", len(ordered) - len(extreme))

    facets = tuple(
        sorted(
            _padded(c.coefficients(), n)
            for c in cone.minimized_constraints()
            if c.is_inequality() and any(c.coefficients())
        )
    )
    perp = annihilator(list(extreme), n).column_vectors
    return Cone(n, extreme, facets, cone.affine_dimension(), perp)


def faces(c: Cone) -> list[Cone]:
    return list(c.faces)


def contains(c: Cone, x: Sequence[int]) -> bool:
    return c.contains(x)


def rel_interior_contains(c: Cone, x: Sequence[int]) -> bool:
    return c.rel_interior_contains(x)


def span_quotient(c: Cone) -> QuotientLattice:
    """N -> N / (span(c) ∩ N)."""
    return c.span_quotient

def quotient_cone(c: Cone, f: Cone, q: Optional[QuotientLattice] = None) -> Cone:
    """The image of c in N / N_f, for a face f of c."""
    if not f.is_face_of(c):
        raise ConeError(f"{f} is not a face of {c}")
    if q is None:
        q = span_quotient(f)
    if q.ambient_rank != c.ambient_rank or any(q.project(r) != (0,) * q.rank for r in f.rays):
        raise ConeError(f"Quotient lattice does not divide out {f}")
    images = [q.project(r) for r in c.rays]
    return dual_description([y for y in images if any(y)], q.rank)


def is_smooth(c: Cone) -> bool:
    """Simplicial with rays extending to a lattice basis."""
    if c.is_zero:
        return True
    return c.is_simplicial and is_saturated(c.rays, c.ambient_rank)


def intersect(c1: Cone, c2: Cone) -> Cone:
    """The intersection of two cones, from ppl's combined constraint system."""
    if c1.ambient_rank != c2.ambient_rank:
        raise ConeError("Cannot intersect cones of different rank")
    n = c1.ambient_rank
    cone = _polyhedron(c1.rays, n)
    cone.intersection_assign(_polyhedron(c2.rays, n))
    rays = [_padded(g.coefficients(), n) for g in cone.minimized_generators() if g.is_ray()]
    return dual_description(rays, n)
