"""
Fans as coherent collections of cones.

A Fan is given by its rays and its maximal cones (as ray indices); every
face is generated from those. Fan-axiom violations are reported by
validate() as data, never raised.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, TypedDict

from core.exceptions import ConeError, FanError
from core.fan.cone import Cone, dual_description, intersect, quotient_cone, span_quotient
from core.util.lattice import LatticeVector, QuotientLattice, primitive

logger = logging.getLogger(__name__)


class FanContext(TypedDict):
    rank: int
    rays: list[list[int]]
    max_cones: list[list[int]]


@dataclass(frozen=True)
class Fan:
    ambient_rank: int
    rays: tuple[LatticeVector, ...]
    cone_indices: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rays(
        cls, rank: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]
    ) -> "Fan":
        """Build a fan from its maximal cones; nonzero rays are made primitive."""
        normalized = []
        for r in rays:
            if len(r) != rank:
                raise FanError(f"Ray {tuple(r)} does not have rank {rank}")
            normalized.append(primitive(r) if any(r) else tuple(r))
        indices = tuple(tuple(sorted(int(k) for k in cone)) for cone in max_cones)
        return cls(rank, tuple(normalized), indices)

    @property
    def m(self) -> int:
        return len(self.cone_indices)

    @cached_property
    def max_cones(self) -> tuple[Cone, ...]:
        return tuple(
            dual_description([self.rays[k] for k in idx], self.ambient_rank)
            for idx in self.cone_indices
        )

    @cached_property
    def all_cones(self) -> tuple[Cone, ...]:
        cones = {face for sigma in self.max_cones for face in sigma.faces}
        return tuple(sorted(cones, key=lambda c: (c.dim, c.rays)))

    @cached_property
    def walls(self) -> tuple[tuple[int, int, Cone], ...]:
        """(i, j, wall) for maximal cones meeting in an (n-1)-dimensional cone, i < j."""
        found = []
        for i in range(self.m):
            for j in range(i + 1, self.m):
                common = set(self.max_cones[i].rays) & set(self.max_cones[j].rays)
                if len(common) < self.ambient_rank - 1:
                    continue
                wall = dual_description(sorted(common), self.ambient_rank)
                if wall.dim == self.ambient_rank - 1:
                    found.append((i, j, wall))
        return tuple(found)

    def containing(self, tau: Cone) -> tuple[int, ...]:
        """Indices of the maximal cones having tau as a face."""
        return tuple(i for i, sigma in enumerate(self.max_cones) if tau.is_face_of(sigma))

    def context(self) -> FanContext:
        return {
            "rank": self.ambient_rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(idx) for idx in self.cone_indices],
        }


@dataclass(frozen=True)
class StarFan:
    base: Fan
    tau: Cone
    quotient: QuotientLattice
    cones: tuple[Cone, ...]

    @cached_property
    def max_cones(self) -> tuple[Cone, ...]:
        return tuple(
            quotient_cone(self.base.max_cones[i], self.tau, self.quotient)
            for i in self.base.containing(self.tau)
        )

    def as_fan(self) -> Fan:
        rays = sorted({r for c in self.max_cones for r in c.rays})
        position = {r: k for k, r in enumerate(rays)}
        indices = tuple(tuple(sorted(position[r] for r in c.rays)) for c in self.max_cones)
        return Fan(self.quotient.rank, tuple(rays), indices)


def validate(f: Fan) -> list[str]:
    """Every fan-axiom violation found, or an empty list for a valid fan."""
    violations: list[str] = []
    if not f.cone_indices:
        return ["empty fan"]

    seen: dict[LatticeVector, int] = {}
    for k, r in enumerate(f.rays):
        if not any(r):
            violations.append(f"ray {k} is zero")
        elif r in seen:
            violations.append(f"rays {seen[r]} and {k} coincide")
        else:
            seen[r] = k
    used = {k for idx in f.cone_indices for k in idx}
    for k in range(len(f.rays)):
        if k not in used:
            violations.append(f"ray {k} belongs to no cone")

    cones: dict[int, Cone] = {}
    for i, idx in enumerate(f.cone_indices):
        bad = [k for k in idx if not 0 <= k < len(f.rays)]
        if bad:
            violations.append(f"cone {i + 1}: ray index {bad[0]} out of range")
            continue
        if not idx:
            violations.append(f"cone {i + 1}: no rays")
            continue
        try:
            sigma = dual_description([f.rays[k] for k in idx], f.ambient_rank)
        except ConeError as e:
            violations.append(f"cone {i + 1}: {e}")
            continue
        for k in idx:
            if any(f.rays[k]) and f.rays[k] not in sigma.rays:
                violations.append(f"cone {i + 1}: ray {k} is not extreme")
        cones[i] = sigma

    keys = sorted(cones)
    for a, i in enumerate(keys):
        for j in keys[a + 1 :]:
            ci, cj = cones[i], cones[j]
            if ci == cj:
                violations.append(f"cones {i + 1} and {j + 1} coincide")
            elif ci.is_face_of(cj):
                violations.append(f"cone {i + 1} is a face of cone {j + 1}")
            elif cj.is_face_of(ci):
                violations.append(f"cone {j + 1} is a face of cone {i + 1}")
            else:
                common = intersect(ci, cj)
                if not (common.is_face_of(ci) and common.is_face_of(cj)):
                    violations.append(
                        f"intersection of cones {i + 1} and {j + 1} is not a face of both"
                    )
    if violations:
        logger.info("Fan has %d violations", len(violations))
    return violations


def is_pure(f: Fan) -> bool:
    return all(sigma.dim == f.ambient_rank for sigma in f.max_cones)


def walls(f: Fan) -> list[tuple[int, int, Cone]]:
    return list(f.walls)


def is_complete(f: Fan) -> bool:
    """Nonempty, pure, and every (n-1)-cone lies in exactly two maximal cones."""
    if not f.m or not is_pure(f):
        return False
    n = f.ambient_rank
    return all(len(f.containing(c)) == 2 for c in f.all_cones if c.dim == n - 1)


def star(f: Fan, tau: Cone) -> StarFan:
    if tau not in f.all_cones:
        raise FanError(f"{tau} is not a cone of the fan")
    q = span_quotient(tau)
    images = {quotient_cone(c, tau, q) for c in f.all_cones if tau.is_face_of(c)}
    return StarFan(f, tau, q, tuple(sorted(images, key=lambda c: (c.dim, c.rays))))


def _wall_connected(f: Fan, members: Sequence[int]) -> bool:
    if len(members) <= 1:
        return True
    inside = set(members)
    adjacent: dict[int, list[int]] = {i: [] for i in members}
    for i, j, _ in f.walls:
        if i in inside and j in inside:
            adjacent[i].append(j)
            adjacent[j].append(i)
    reached = {members[0]}
    queue = deque([members[0]])
    while queue:
        for j in adjacent[queue.popleft()]:
            if j not in reached:
                reached.add(j)
                queue.append(j)
    return reached == inside


def disconnected_stars(f: Fan) -> list[Cone]:
    """Cones whose containing maximal cones are not linked through walls."""
    return [tau for tau in f.all_cones if not _wall_connected(f, f.containing(tau))]


def stars_strongly_connected(f: Fan) -> bool:
    return not disconnected_stars(f)
