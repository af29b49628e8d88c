"""
Cellularity of a fan with respect to a generic lattice vector v.

For each maximal cone σ_i the distinguished face τ_i is the smallest face
whose quotient puts v in the relative interior of the image of σ_i. A fan
is cellular when the relation "τ_i ⊆ σ_j" admits a linear order and every
quotient cone σ_i / τ_i is smooth. The certificate carries the cell
characters: the dual basis of the quotient cone's rays, pulled back to M.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from heapq import heapify, heappop, heappush
from typing import Optional, Sequence, TypedDict, Union

from core.exceptions import CellularError
from core.fan.cone import (
    Cone,
    ConeContext,
    dual_description,
    is_smooth,
    quotient_cone,
    span_quotient,
)
from core.fan.fan import Fan, is_pure, validate
from core.util.lattice import LatticeMatrix, LatticeVector, dual_basis, pairing

logger = logging.getLogger(__name__)

INVALID_FAN = "invalid fan"
NOT_PURE = "not pure"
NOT_GENERIC = "v not generic"
ORDERING_CYCLE = "ordering cycle"
NON_SMOOTH = "non-smooth quotient cone"


class CellContext(TypedDict):
    cone: int
    tau: ConeContext
    cell_dim: int
    cell_characters: list[list[int]]


class CertificateContext(TypedDict):
    v: list[int]
    order: list[int]
    cells: list[CellContext]


class RejectionContext(TypedDict):
    reason: str
    cone: Optional[int]
    tau: list[Optional[ConeContext]]
    violations: list[str]
    cycle: list[int]


@dataclass(frozen=True)
class CellularCertificate:
    fan: Fan
    v: LatticeVector
    order: tuple[int, ...]
    tau: tuple[Cone, ...]
    cell_dims: tuple[int, ...]
    cell_characters: tuple[tuple[LatticeVector, ...], ...]

    @cached_property
    def position(self) -> dict[int, int]:
        """Cone index -> position in the cellular order."""
        return {i: p for p, i in enumerate(self.order)}

    def context(self) -> CertificateContext:
        return {
            "v": list(self.v),
            "order": [i + 1 for i in self.order],
            "cells": [
                {
                    "cone": i + 1,
                    "tau": self.tau[i].context(),
                    "cell_dim": self.cell_dims[i],
                    "cell_characters": [list(u) for u in self.cell_characters[i]],
                }
                for i in range(self.fan.m)
            ],
        }


@dataclass(frozen=True)
class RejectionReport:
    reason: str
    cone: Optional[int] = None
    tau: tuple[Optional[Cone], ...] = ()
    violations: tuple[str, ...] = ()
    cycle: tuple[int, ...] = ()

    def context(self) -> RejectionContext:
        return {
            "reason": self.reason,
            "cone": None if self.cone is None else self.cone + 1,
            "tau": [None if t is None else t.context() for t in self.tau],
            "violations": list(self.violations),
            "cycle": [i + 1 for i in self.cycle],
        }


@dataclass(frozen=True)
class BBOrder:
    order: Optional[tuple[int, ...]] = None
    cycle: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.order is not None


def is_generic(f: Fan, v: Sequence[int]) -> bool:
    """v lies in the support and off the span of every (n-1)-cone."""
    if len(v) != f.ambient_rank:
        raise CellularError(f"v has rank {len(v)}, the fan has rank {f.ambient_rank}")
    if not any(sigma.contains(v) for sigma in f.max_cones):
        return False
    n = f.ambient_rank
    return not any(c.in_span(v) for c in f.all_cones if c.dim == n - 1)


def distinguished_face(sigma: Cone, v: Sequence[int]) -> Cone:
    """
    The minimal face γ of sigma with v in the relative interior of sigma / Rγ.

    Faces passing the test are closed under intersection, so the answer is
    the intersection of all of them.
    """
    passing = []
    for gamma in sigma.faces:
        q = span_quotient(gamma)
        image = quotient_cone(sigma, gamma, q)
        if image.rel_interior_contains(q.project(v)):
            passing.append(gamma)
    if not passing:
        raise CellularError("v not generic for this cone")
    common = set.intersection(*(set(g.rays) for g in passing))
    tau = dual_description(sorted(common), sigma.ambient_rank)
    logger.debug("Distinguished face of %s is %s", sigma, tau)
    return tau


def _inside(tau: Cone, sigma: Cone) -> bool:
    return all(sigma.contains(r) for r in tau.rays)


def bb_order(f: Fan, v: Sequence[int], tau: Sequence[Cone]) -> BBOrder:
    """
    Topological order of "i before j when τ_i ⊆ σ_j", lowest index first.

    A cycle is reported as a cone-index witness instead of an order.
    """
    predecessors = {
        j: [i for i in range(f.m) if i != j and _inside(tau[i], f.max_cones[j])]
        for j in range(f.m)
    }
    sorter = TopologicalSorter(predecessors)
    try:
        sorter.prepare()
    except CycleError as e:
        cycle = tuple(e.args[1])
        logger.debug("No ordering for v=%s, cycle %s", tuple(v), cycle)
        return BBOrder(cycle=cycle)

    ready = list(sorter.get_ready())
    heapify(ready)
    order = []
    while ready:
        i = heappop(ready)
        order.append(i)
        sorter.done(i)
        for j in sorter.get_ready():
            heappush(ready, j)
    logger.debug("Ordering for v=%s: %s", tuple(v), order)
    return BBOrder(order=tuple(order))


def cell_characters(sigma: Cone, tau: Cone) -> tuple[LatticeVector, ...]:
    """
    Characters u_1..u_k in τ^⊥ dual to the rays of the smooth quotient σ/τ.

    With w_j the dual basis in M(τ) and P the projection N -> N(τ), the
    pullback u_j = Pᵀ w_j vanishes on τ and pairs to δ with lifted rays.
    """
    q = span_quotient(tau)
    image = quotient_cone(sigma, tau, q)
    if not is_smooth(image):
        raise CellularError(f"quotient of {sigma} by {tau} is not smooth")
    if image.is_zero:
        return ()
    duals = dual_basis(LatticeMatrix.from_columns(image.rays, rows=q.rank))
    pullback = q.projection.transpose()
    return tuple(pullback.apply(w) for w in duals.column_vectors)


def verify_certificate(cert: CellularCertificate) -> list[str]:
    """Re-check every certificate property; an empty list means it holds."""
    problems: list[str] = []
    f = cert.fan
    n = f.ambient_rank
    if sorted(cert.order) != list(range(f.m)):
        return [f"order {cert.order} is not a permutation of the cones"]
    if not cert.tau[cert.order[0]].is_zero:
        problems.append("the first cell's distinguished face is not {0}")
    for i, sigma in enumerate(f.max_cones):
        tau = cert.tau[i]
        if not tau.is_face_of(sigma):
            problems.append(f"cone {i + 1}: τ is not a face")
        for j, other in enumerate(f.max_cones):
            if i != j and _inside(tau, other) and cert.position[i] > cert.position[j]:
                problems.append(f"cone {i + 1}: τ lies in cone {j + 1} which comes earlier")
        chars = cert.cell_characters[i]
        if len(chars) != n - tau.dim or cert.cell_dims[i] != n - tau.dim:
            problems.append(f"cone {i + 1}: expected {n - tau.dim} cell characters")
            continue
        if any(pairing(u, r) != 0 for u in chars for r in tau.rays):
            problems.append(f"cone {i + 1}: cell character not orthogonal to τ")
        q = span_quotient(tau)
        image = quotient_cone(sigma, tau, q)
        lifted = [q.lift(r) for r in image.rays]
        gram = [[pairing(u, r) for r in lifted] for u in chars]
        if gram != [[int(a == b) for b in range(len(lifted))] for a in range(len(chars))]:
            problems.append(f"cone {i + 1}: cell characters are not dual to the quotient rays")
    return problems


def certify_cellular(f: Fan, v: Sequence[int]) -> Union[CellularCertificate, RejectionReport]:
    """
    Decide cellularity, reporting the first failed condition.

    Conditions are checked in the order validity, purity, genericity,
    ordering, smoothness (the latter along the cellular order).

    Args:
        f: The fan.
        v: Integer vector in N, generic for f.

    Returns:
        A CellularCertificate, or a RejectionReport naming the first failure.
    """
    v = tuple(v)
    violations = validate(f)
    if violations:
        return RejectionReport(INVALID_FAN, violations=tuple(violations))
    if not is_pure(f):
        low = next(i for i, s in enumerate(f.max_cones) if s.dim != f.ambient_rank)
        return RejectionReport(NOT_PURE, cone=low)
    if not is_generic(f, v):
        logger.info("Rejected: v=%s is not generic", v)
        return RejectionReport(NOT_GENERIC)

    taus: list[Optional[Cone]] = [None] * f.m
    for i, sigma in enumerate(f.max_cones):
        try:
            taus[i] = distinguished_face(sigma, v)
        except CellularError:
            return RejectionReport(NOT_GENERIC, cone=i, tau=tuple(taus))
    tau = tuple(t for t in taus if t is not None)

    ordering = bb_order(f, v, tau)
    if ordering.order is None:
        logger.info("Rejected: ordering cycle %s", ordering.cycle)
        return RejectionReport(ORDERING_CYCLE, tau=tau, cycle=ordering.cycle)

    characters: dict[int, tuple[LatticeVector, ...]] = {}
    for i in ordering.order:
        try:
            characters[i] = cell_characters(f.max_cones[i], tau[i])
        except CellularError:
            logger.info("Rejected: quotient cone at σ%d is not smooth", i + 1)
            return RejectionReport(NON_SMOOTH, cone=i, tau=tau)

    n = f.ambient_rank
    cert = CellularCertificate(
        fan=f,
        v=v,
        order=ordering.order,
        tau=tau,
        cell_dims=tuple(n - t.dim for t in tau),
        cell_characters=tuple(characters[i] for i in range(f.m)),
    )
    problems = verify_certificate(cert)
    if problems:
        raise CellularError("certificate self-check failed: " + "; ".join(problems))
    logger.info("Certified cellular: v=%s, order %s", v, [i + 1 for i in cert.order])
    return cert
