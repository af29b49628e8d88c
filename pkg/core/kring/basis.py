"""
The triangular R(T)-module basis {f_i} of the K-ring, coordinates in it and
its multiplicative structure constants.

f_i vanishes at every fixed point after σ_i in the cellular order and
restricts to the product of Euler classes of the cell characters at σ_i.
Values at earlier fixed points are filled in downward, each one chosen to
satisfy the congruences with the neighbors already assigned.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence, TypedDict

from core.conf import kring_setting
from core.exceptions import (
    BasisError,
    LatticeError,
    NotDivisibleError,
    NotInSpanError,
    SolverExhaustedError,
)
from core.fan.cellular import CellularCertificate
from core.kring.gkm import GKMGraph, KClass, is_member, kclass_mul, kclass_zero
from core.util.lattice import (
    LatticeMatrix,
    LatticeVector,
    extend_to_basis,
    normalize_sign,
    solve_integer,
)
from core.util.laurent import (
    LaurentPoly,
    TermContext,
    div_exact_euler,
    divides_euler,
    euler,
    reduce_mod_character,
)

logger = logging.getLogger(__name__)


class BasisClassContext(TypedDict):
    cone: int
    components: list[list[TermContext]]


class BasisContext(TypedDict):
    order: list[int]
    classes: list[BasisClassContext]


class ConstantContext(TypedDict):
    i: int
    j: int
    p: int
    terms: list[TermContext]


@dataclass(frozen=True)
class KBasis:
    """f_i is classes[i], the class attached to maximal cone i."""

    classes: tuple[KClass, ...]
    euler_diagonals: tuple[LaurentPoly, ...]
    order: tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.classes)

    def context(self) -> BasisContext:
        return {
            "order": [i + 1 for i in self.order],
            "classes": [
                {"cone": i + 1, "components": self.classes[i].context()} for i in self.order
            ],
        }


@dataclass(frozen=True)
class StructureConstants:
    m: int
    rank: int
    entries: dict[tuple[int, int, int], LaurentPoly] = field(hash=False)

    def get(self, i: int, j: int, p: int) -> LaurentPoly:
        if i > j:
            i, j = j, i
        return self.entries.get((i, j, p), LaurentPoly.zero(self.rank))

    def expand(self, i: int, j: int) -> list[LaurentPoly]:
        """The coordinates of f_i * f_j."""
        return [self.get(i, j, p) for p in range(self.m)]

    def context(self) -> list[ConstantContext]:
        return [
            {"i": i + 1, "j": j + 1, "p": p + 1, "terms": poly.context()}
            for (i, j, p), poly in sorted(self.entries.items())
        ]


def euler_class_at(cert: CellularCertificate, i: int) -> LaurentPoly:
    """Product of 1 - e^u over the cell characters of σ_i; 1 for a point cell."""
    result = LaurentPoly.one(cert.fan.ambient_rank)
    for u in cert.cell_characters[i]:
        result = result * euler(u)
    return result


def upward_neighbors(
    g: GKMGraph, cert: CellularCertificate, i: int
) -> list[tuple[int, LatticeVector]]:
    """GKM neighbors of i that come later in the cellular order."""
    position = cert.position
    later = [(j, chi) for j, chi in g.neighbors(i) if position[j] > position[i]]
    expected = sorted(normalize_sign(u) for u in cert.cell_characters[i])
    if sorted(chi for _, chi in later) != expected:
        raise BasisError(f"cellular/GKM inconsistency at cone {i + 1}")
    return later


def _at_one(f: LaurentPoly, k: int) -> LaurentPoly:
    """Substitute 1 for the k-th coordinate variable."""
    return f.map_exponents(lambda e: e[:k] + (0,) + e[k + 1 :], f.rank)


def _solve_greedy(targets: Sequence[tuple[LaurentPoly, LatticeVector]]) -> LaurentPoly:
    """
    x ≡ a_k mod (1 - e^χ_k) for all k, by successive correction.

    In a basis of M starting with the χ's, t_k = e^χ_k is a coordinate. With
    x solving the first k-1 congruences, the correction is
    Π_{j<k}(1 - t_j) * c, where c is (a_k - x) at t_k = 1 divided by that
    product.
    """
    a_first, _ = targets[0]
    rank = a_first.rank
    W, W_inv = extend_to_basis([chi for _, chi in targets], rank)
    values = [a.transform(W_inv) for a, _ in targets]
    unit = [tuple(int(r == k) for r in range(rank)) for k in range(len(targets))]

    x = values[0]
    for k in range(1, len(values)):
        c = _at_one(values[k] - x, k)
        for j in range(k):
            c = div_exact_euler(c, unit[j])
        correction = c
        for j in range(k):
            correction = correction * euler(unit[j])
        x = x + correction
    return x.transform(W)


def _solve_in_box(
    targets: Sequence[tuple[LaurentPoly, LatticeVector]], radius: int
) -> Optional[LaurentPoly]:
    """
    Look for x supported in [-radius, radius]^n with every congruence exact.

    Each congruence says that x - a_k maps to zero in Z[M / Z χ_k], which is
    one linear equation per class of exponents modulo χ_k.
    """
    rank = targets[0][0].rank
    box = list(product(range(-radius, radius + 1), repeat=rank))
    rows: list[list[int]] = []
    rhs: list[int] = []
    for a, chi in targets:
        reduced = reduce_mod_character(a, chi)
        classes: dict[LatticeVector, list[int]] = {}
        for col, e in enumerate(box):
            classes.setdefault(reduced.quotient.project(e), []).append(col)
        image = reduced.poly
        for y in sorted(set(classes) | {e for e, _ in image.terms}):
            row = [0] * len(box)
            for col in classes.get(y, []):
                row[col] = 1
            rows.append(row)
            rhs.append(image.coefficient(y))
    solution = solve_integer(LatticeMatrix.from_rows(rows, cols=len(box)), rhs)
    if solution is None:
        return None
    return LaurentPoly.from_terms(rank, zip(box, solution))


def _extend(
    targets: Sequence[tuple[LaurentPoly, LatticeVector]], rank: int, index: int
) -> LaurentPoly:
    if not targets:
        return LaurentPoly.zero(rank)
    if len(targets) == 1:
        return targets[0][0]
    try:
        x = _solve_greedy(targets)
        if all(divides_euler(x - a, chi) for a, chi in targets):
            return x
    except (NotDivisibleError, LatticeError):
        pass

    logger.warning("Greedy extension failed at cone %d, falling back to box search", index + 1)
    max_radius = kring_setting("SOLVER_MAX_RADIUS")
    radius = max(1, max(a.exponent_radius() for a, _ in targets))
    while radius <= max_radius:
        x = _solve_in_box(targets, radius)
        if x is not None:
            return x
        radius *= 2
    raise SolverExhaustedError(index, f"no solution with exponents up to {max_radius}")


def construct_basis(g: GKMGraph, cert: CellularCertificate) -> KBasis:
    """
    Build the triangular basis f_1, ..., f_m of the K-ring.

    f_i is the Euler class of cell i at σ_i, zero at cones after i in the
    cellular order, and is extended downward one cone at a time by solving
    the GKM edge conditions against the already fixed upward neighbors.

    Args:
        g: GKM graph of a complete fan.
        cert: Cellular certificate for the same fan.

    Returns:
        The verified KBasis, classes indexed by maximal cone.

    Raises:
        SolverExhaustedError: When no extension is found within the search bound.
        BasisError: When the constructed classes fail verification.
    """
    rank = cert.fan.ambient_rank
    zero = LaurentPoly.zero(rank)
    neighbors = {i: upward_neighbors(g, cert, i) for i in range(g.m)}
    classes = []
    for i in range(g.m):
        values = [zero] * g.m
        values[i] = euler_class_at(cert, i)
        for p in range(cert.position[i] - 1, -1, -1):
            lower = cert.order[p]
            targets = [(values[j], chi) for j, chi in neighbors[lower]]
            values[lower] = _extend(targets, rank, lower)
            logger.debug("f_%d at cone %d: %s", i + 1, lower + 1, values[lower])
        classes.append(KClass(tuple(values)))

    basis = KBasis(
        tuple(classes), tuple(euler_class_at(cert, i) for i in range(g.m)), cert.order
    )
    problems = verify_basis(g, cert, basis)
    if problems:
        raise BasisError("constructed basis failed its checks: " + "; ".join(problems))
    logger.info("Built a basis of %d classes", basis.m)
    return basis


def verify_basis(g: GKMGraph, cert: CellularCertificate, basis: KBasis) -> list[str]:
    """Membership, triangularity and diagonal of every class."""
    if basis.m != g.m:
        return [f"expected {g.m} classes, got {basis.m}"]
    problems = []
    position = cert.position
    for i, f_i in enumerate(basis.classes):
        if f_i.m != g.m:
            problems.append(f"class {i + 1}: expected {g.m} components")
            continue
        ok, violations = is_member(g, f_i.components)
        if not ok:
            edges = ", ".join(f"({a + 1},{b + 1})" for a, b in violations)
            problems.append(f"class {i + 1}: not a member, violated edges: {edges}")
        for l in range(g.m):
            if position[l] > position[i] and not f_i.components[l].is_zero:
                problems.append(f"class {i + 1}: nonzero at later cone {l + 1}")
        if f_i.components[i] != euler_class_at(cert, i):
            problems.append(f"class {i + 1}: diagonal is not the Euler class")
    return problems


def basis_from_classes(
    g: GKMGraph, cert: CellularCertificate, classes: Sequence[KClass]
) -> KBasis:
    basis = KBasis(
        tuple(classes), tuple(euler_class_at(cert, i) for i in range(g.m)), cert.order
    )
    problems = verify_basis(g, cert, basis)
    if problems:
        raise BasisError("; ".join(problems))
    return basis


def coordinates(
    g: GKMGraph, cert: CellularCertificate, basis: KBasis, f: KClass
) -> list[LaurentPoly]:
    """
    The a_i with Σ a_i f_i = f, from the last cell down.

    At cone i the residual vanishes at every later fixed point, so its value
    at σ_i is a_i times the Euler class; the factors are divided out one at
    a time.

    Args:
        f: A class of the K-ring, as a tuple over the maximal cones.

    Returns:
        The coefficients a_1, ..., a_m, indexed by maximal cone.

    Raises:
        NotInSpanError: When f is not a combination of the basis.
    """
    if f.m != g.m:
        raise BasisError(f"Expected {g.m} components, got {f.m}")
    residual = list(f.components)
    coeffs = [LaurentPoly.zero(f.rank)] * g.m
    for i in reversed(cert.order):
        value = residual[i]
        for u in cert.cell_characters[i]:
            try:
                value = div_exact_euler(value, u)
            except NotDivisibleError:
                raise NotInSpanError(i) from None
        coeffs[i] = value
        if not value.is_zero:
            residual = [r - value * b for r, b in zip(residual, basis.classes[i].components)]
    if any(not r.is_zero for r in residual):
        raise NotInSpanError()
    return coeffs


def combine(basis: KBasis, coefficients: Sequence[LaurentPoly]) -> KClass:
    """Σ a_i f_i."""
    if len(coefficients) != basis.m:
        raise BasisError(f"Expected {basis.m} coefficients, got {len(coefficients)}")
    total = kclass_zero(basis.m, basis.euler_diagonals[0].rank).components
    for a, f_i in zip(coefficients, basis.classes):
        if not a.is_zero:
            total = tuple(t + a * c for t, c in zip(total, f_i.components))
    return KClass(total)


def structure_constants(
    g: GKMGraph, cert: CellularCertificate, basis: KBasis
) -> StructureConstants:
    """
    Coordinates of f_i * f_j for every i <= j, zero constants omitted.

    Returns:
        StructureConstants keyed by (i, j, p) with 0-based indices.
    """
    entries: dict[tuple[int, int, int], LaurentPoly] = {}
    for i in range(g.m):
        for j in range(i, g.m):
            f_ij = kclass_mul(basis.classes[i], basis.classes[j])
            for p, a in enumerate(coordinates(g, cert, basis, f_ij)):
                if not a.is_zero:
                    entries[(i, j, p)] = a
    return StructureConstants(g.m, cert.fan.ambient_rank, entries)
