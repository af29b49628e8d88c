"""
The representation ring R(T_comp) = Z[M] as sparse Laurent polynomials.

A LaurentPoly maps exponent vectors of M (tuples of ints) to nonzero integer
coefficients. Terms are kept sorted lexicographically so that equality,
hashing and serialization are deterministic.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence, TypedDict, Union

from core.exceptions import LaurentError, NotDivisibleError
from core.util.lattice import (
    LatticeMatrix,
    LatticeVector,
    QuotientLattice,
    extend_to_basis,
    is_saturated,
    quotient,
)

logger = logging.getLogger(__name__)

Exponent = tuple[int, ...]

# Quotient lattices keyed by character or perp basis; one entry per distinct wall or cone
QUOTIENT_CACHE_SIZE = 1024


class TermContext(TypedDict):
    exponent: list[int]
    coefficient: int


@dataclass(frozen=True)
class LaurentPoly:
    rank: int
    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_terms(cls, rank: int, items: Iterable[tuple[Sequence[int], int]]) -> "LaurentPoly":
        acc: dict[Exponent, int] = defaultdict(int)
        for exp, coeff in items:
            exp = tuple(int(x) for x in exp)
            if len(exp) != rank:
                raise LaurentError(f"Exponent {exp} does not have rank {rank}")
            acc[exp] += int(coeff)
        return cls(rank, tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank)

    @classmethod
    def constant(cls, rank: int, c: int) -> "LaurentPoly":
        return cls.from_terms(rank, [((0,) * rank, c)])

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(rank, 1)

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls.from_terms(len(exponent), [(exponent, coeff)])

    @cached_property
    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Sequence[int]) -> int:
        return self.as_dict.get(tuple(exponent), 0)

    def _coerce(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"Cannot combine LaurentPoly with {type(other)}")
        if other.rank != self.rank:
            raise LaurentError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        other = self._coerce(other)
        return LaurentPoly.from_terms(self.rank, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.rank, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scalar_mul(other)
        other = self._coerce(other)
        products = (
            (tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
            for e1, c1 in self.terms
            for e2, c2 in other.terms
        )
        return LaurentPoly.from_terms(self.rank, products)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise LaurentError("Negative powers of a Laurent polynomial are not defined")
        result = LaurentPoly.one(self.rank)
        for _ in range(k):
            result = result * self
        return result

    def scalar_mul(self, k: int) -> "LaurentPoly":
        if k == 0:
            return LaurentPoly.zero(self.rank)
        return LaurentPoly(self.rank, tuple((e, c * k) for e, c in self.terms))

    def map_exponents(self, fn: Callable[[Exponent], Sequence[int]], rank: int) -> "LaurentPoly":
        return LaurentPoly.from_terms(rank, ((fn(e), c) for e, c in self.terms))

    def transform(self, matrix: LatticeMatrix) -> "LaurentPoly":
        """Change exponent coordinates: e -> matrix @ e."""
        if matrix.cols != self.rank:
            raise LaurentError(f"Cannot transform rank {self.rank} by {matrix.rows}x{matrix.cols}")
        return self.map_exponents(matrix.apply, matrix.rows)

    def exponent_radius(self) -> int:
        return max((abs(x) for e, _ in self.terms for x in e), default=0)

    def evaluate_at_one(self) -> int:
        """The augmentation Z[M] -> Z."""
        return sum(c for _, c in self.terms)

    def context(self) -> list[TermContext]:
        return [{"exponent": list(e), "coefficient": c} for e, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if not any(e):
                parts.append(str(c))
                continue
            mono = "e^(" + ",".join(str(x) for x in e) + ")"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def neg(f: LaurentPoly) -> LaurentPoly:
    return -f


def scalar_mul(f: LaurentPoly, k: int) -> LaurentPoly:
    return f.scalar_mul(k)


@dataclass(frozen=True)
class QuotientRingElem:
    """An element of Z[M/L] for a saturated sublattice L, in projected coordinates."""

    quotient: QuotientLattice
    poly: LaurentPoly

    def __post_init__(self):
        if self.poly.rank != self.quotient.rank:
            raise LaurentError(
                f"Quotient ring of rank {self.quotient.rank} cannot hold rank {self.poly.rank}"
            )

    @classmethod
    def reduce(cls, f: LaurentPoly, q: QuotientLattice) -> "QuotientRingElem":
        if f.rank != q.ambient_rank:
            raise LaurentError(f"rank mismatch: {f.rank} vs {q.ambient_rank}")
        return cls(q, f.map_exponents(q.project, q.rank))

    @property
    def terms(self) -> tuple[tuple[Exponent, int], ...]:
        return self.poly.terms

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def _same(self, other: "QuotientRingElem") -> "QuotientRingElem":
        if other.quotient != self.quotient:
            raise LaurentError("Elements live in different quotient rings")
        return other

    def __add__(self, other: "QuotientRingElem") -> "QuotientRingElem":
        return QuotientRingElem(self.quotient, self.poly + self._same(other).poly)

    def __sub__(self, other: "QuotientRingElem") -> "QuotientRingElem":
        return QuotientRingElem(self.quotient, self.poly - self._same(other).poly)

    def __mul__(self, other: "QuotientRingElem") -> "QuotientRingElem":
        return QuotientRingElem(self.quotient, self.poly * self._same(other).poly)

    def __neg__(self) -> "QuotientRingElem":
        return QuotientRingElem(self.quotient, -self.poly)


def euler(u: Sequence[int]) -> LaurentPoly:
    """The equivariant Euler class 1 - e^u."""
    return LaurentPoly.one(len(u)) - LaurentPoly.monomial(u)


def _check_character(chi: Sequence[int]):
    g = gcd(*chi)
    if g == 0:
        raise LaurentError("character must be nonzero")
    if g != 1:
        raise LaurentError(f"character {tuple(chi)} is not primitive")


@lru_cache(maxsize=QUOTIENT_CACHE_SIZE)
def _character_quotient(chi: LatticeVector) -> QuotientLattice:
    return quotient(len(chi), [chi])


@lru_cache(maxsize=QUOTIENT_CACHE_SIZE)
def _character_basis(chi: LatticeVector) -> tuple[LatticeMatrix, LatticeMatrix]:
    return extend_to_basis([chi])


def reduce_mod_character(f: LaurentPoly, chi: Sequence[int]) -> QuotientRingElem:
    """Image of f in Z[M]/(1 - e^chi) = Z[M/Z chi]."""
    _check_character(chi)
    return QuotientRingElem.reduce(f, _character_quotient(tuple(chi)))


def divides_euler(f: LaurentPoly, chi: Sequence[int]) -> bool:
    return reduce_mod_character(f, chi).is_zero


def div_exact_euler(f: LaurentPoly, chi: Sequence[int]) -> LaurentPoly:
    """
    Return g with g * (1 - e^chi) == f.

    In a basis of M whose first vector is chi, f splits into univariate
    Laurent polynomials in t = e^chi, each divided by (1 - t) by a running
    sum. A nonzero total on any line is a remainder.

    Raises:
        LaurentError: When chi is zero or not primitive.
        NotDivisibleError: When 1 - e^chi does not divide f.
    """
    _check_character(chi)
    W, W_inv = _character_basis(tuple(chi))
    lines: dict[Exponent, dict[int, int]] = defaultdict(dict)
    for e, c in f.transform(W_inv).terms:
        lines[e[1:]][e[0]] = c

    quotient_terms: list[tuple[Exponent, int]] = []
    for rest, line in lines.items():
        lo, hi = min(line), max(line)
        running = 0
        for a in range(lo, hi):
            running += line.get(a, 0)
            if running:
                quotient_terms.append(((a,) + rest, running))
        if running + line[hi] != 0:
            raise NotDivisibleError()
    return LaurentPoly.from_terms(f.rank, quotient_terms).transform(W)


@lru_cache(maxsize=QUOTIENT_CACHE_SIZE)
def _ideal_quotient(rank: int, basis: tuple[LatticeVector, ...]) -> QuotientLattice:
    return quotient(rank, basis)


def reduce_mod_ideal(f: LaurentPoly, perp_basis: Sequence[Sequence[int]]) -> QuotientRingElem:
    """
    Image of f in Z[M]/(1 - e^u : u in perp_basis) = Z[M/<perp_basis>].
    """
    basis = tuple(tuple(u) for u in perp_basis)
    if basis and not is_saturated(basis, f.rank):
        raise LaurentError("perp basis does not span a saturated sublattice")
    return QuotientRingElem.reduce(f, _ideal_quotient(f.rank, basis))
