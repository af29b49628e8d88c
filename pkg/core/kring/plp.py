"""
Piecewise Laurent polynomial functions on a fan.

A PLPFunction holds one element of Z[M / (σ^⊥ ∩ M)] for every cone σ of the
fan, maximal or not. The components must agree under restriction along
every face relation; validate_plp checks the covering relations and the
rest follows by transitivity.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence, TypedDict

from core.exceptions import MembershipError, PLPError
from core.fan.cone import Cone
from core.fan.fan import Fan, is_complete, stars_strongly_connected
from core.kring.gkm import GKMGraph, KClass, edge_violations, wall_edges
from core.util.lattice import QuotientLattice
from core.util.laurent import LaurentPoly, QuotientRingElem, TermContext, reduce_mod_ideal

logger = logging.getLogger(__name__)


class PieceContext(TypedDict):
    cone: int
    rays: list[list[int]]
    quotient_basis: list[list[int]]
    terms: list[TermContext]


class PLPCheck(NamedTuple):
    ok: bool
    violations: list[str]


def cone_quotient(c: Cone) -> QuotientLattice:
    """M -> M / (c^⊥ ∩ M), the exponent lattice of functions on c."""
    return c.function_lattice


def reduce_to_cone(f: LaurentPoly, c: Cone) -> QuotientRingElem:
    return reduce_mod_ideal(f, c.perp)


@dataclass(frozen=True)
class PLPFunction:
    fan: Fan
    components: tuple[QuotientRingElem, ...]

    def __post_init__(self):
        if len(self.components) != len(self.fan.all_cones):
            raise PLPError(
                f"Expected {len(self.fan.all_cones)} components, got {len(self.components)}"
            )

    def at(self, c: Cone) -> QuotientRingElem:
        try:
            return self.components[self.fan.all_cones.index(c)]
        except ValueError:
            raise PLPError(f"{c} is not a cone of the fan") from None

    def context(self) -> list[PieceContext]:
        return [
            {
                "cone": k + 1,
                "rays": [list(r) for r in c.rays],
                "quotient_basis": [list(u) for u in c.perp],
                "terms": x.poly.context(),
            }
            for k, (c, x) in enumerate(zip(self.fan.all_cones, self.components))
        ]


def restriction_map(sigma: Cone, sigma_prime: Cone, x: QuotientRingElem) -> QuotientRingElem:
    """Restrict a function on sigma_prime to its face sigma."""
    if not sigma.is_face_of(sigma_prime):
        raise PLPError(f"{sigma} is not a face of {sigma_prime}")
    source, target = cone_quotient(sigma_prime), cone_quotient(sigma)
    if x.quotient != source:
        raise PLPError(f"Element does not live on {sigma_prime}")
    poly = x.poly.map_exponents(lambda y: target.project(source.lift(y)), target.rank)
    return QuotientRingElem(target, poly)


def validate_plp(f: Fan, p: PLPFunction) -> PLPCheck:
    if p.fan != f:
        return PLPCheck(False, ["function belongs to a different fan"])
    violations = []
    for k, c in enumerate(f.all_cones):
        if p.components[k].quotient != cone_quotient(c):
            violations.append(f"component {k + 1} does not live on {c}")
    if violations:
        return PLPCheck(False, violations)
    for c, x in zip(f.all_cones, p.components):
        for face in c.faces:
            if face.dim != c.dim - 1:
                continue
            if restriction_map(face, c, x) != p.at(face):
                violations.append(f"restriction from {c} to {face} disagrees")
    return PLPCheck(not violations, violations)


def _require_complete(f: Fan):
    if not is_complete(f):
        raise PLPError("PLP description requires a complete fan")
    if not stars_strongly_connected(f):
        raise PLPError("star of a cone is not connected through walls")


def from_kclass(g: GKMGraph, f: Fan, a: KClass) -> PLPFunction:
    """
    Send a tuple to the family y_i mod J_γ, for any maximal σ_i containing γ.

    Every containing maximal cone is checked, not just one.

    Args:
        g: GKM graph of f.
        f: A complete fan with strongly connected stars.
        a: A member of the K-ring.

    Returns:
        The PLPFunction with one component per cone of f.

    Raises:
        PLPError: When f is not complete or two cones disagree on a face.
    """
    _require_complete(f)
    if a.m != f.m or g.m != f.m:
        raise PLPError(f"Expected {f.m} components, got {a.m}")
    pieces = []
    for gamma in f.all_cones:
        candidates = [(i, reduce_to_cone(a.components[i], gamma)) for i in f.containing(gamma)]
        first, image = candidates[0]
        for other, x in candidates[1:]:
            if x != image:
                raise PLPError(f"cones {first + 1} and {other + 1} disagree on {gamma}")
        pieces.append(image)
    return PLPFunction(f, tuple(pieces))


def to_kclass(p: PLPFunction) -> KClass:
    """
    Read off the components on the maximal cones, where J_σ = 0.

    Raises:
        MembershipError: When the resulting tuple violates an edge condition.
    """
    f = p.fan
    _require_complete(f)
    components = []
    for sigma in f.max_cones:
        x = p.at(sigma)
        q = x.quotient
        components.append(x.poly.map_exponents(q.lift, q.ambient_rank))
    violations = edge_violations(wall_edges(f), components)
    if violations:
        raise MembershipError(violations)
    return KClass(tuple(components))


def constant_plp(f: Fan, a: LaurentPoly) -> PLPFunction:
    return PLPFunction(f, tuple(reduce_to_cone(a, c) for c in f.all_cones))


def _pointwise(
    p: PLPFunction, r: PLPFunction
) -> Sequence[tuple[QuotientRingElem, QuotientRingElem]]:
    if p.fan != r.fan:
        raise PLPError("Functions live on different fans")
    return list(zip(p.components, r.components))


def plp_add(p: PLPFunction, r: PLPFunction) -> PLPFunction:
    return PLPFunction(p.fan, tuple(x + y for x, y in _pointwise(p, r)))


def plp_mul(p: PLPFunction, r: PLPFunction) -> PLPFunction:
    return PLPFunction(p.fan, tuple(x * y for x, y in _pointwise(p, r)))
