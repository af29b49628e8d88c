"""
Exact integer linear algebra over free abelian groups.

Vectors of N = Z^n and M = Hom(N, Z) are plain tuples of ints. Matrices are
immutable, row-major LatticeMatrix values. Everything is exact: Python ints
are arbitrary precision and no floating point is ever used.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import NamedTuple, Optional, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp
from sympy.polys.domains import ZZ

from core.exceptions import LatticeError

logger = logging.getLogger(__name__)

LatticeVector = tuple[int, ...]


def pairing(u: Sequence[int], w: Sequence[int]) -> int:
    """The natural pairing <u, w> between M and N."""
    if len(u) != len(w):
        raise LatticeError(f"Rank mismatch in pairing: {len(u)} vs {len(w)}")
    return sum(a * b for a, b in zip(u, w))


def normalize_sign(v: Sequence[int]) -> LatticeVector:
    """Flip v so that its first nonzero entry is positive."""
    for x in v:
        if x != 0:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def primitive(w: Sequence[int]) -> LatticeVector:
    """Divide w by the gcd of its entries, keeping its direction."""
    g = gcd(*w)
    if g == 0:
        raise LatticeError("zero has no primitive direction")
    return tuple(x // g for x in w)


@dataclass(frozen=True)
class LatticeMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LatticeError(f"Invalid matrix shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise LatticeError(
                f"Expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None
    ) -> "LatticeMatrix":
        width = len(rows[0]) if rows else (cols or 0)
        if cols is not None and width != cols:
            raise LatticeError(f"Expected rows of length {cols}, got {width}")
        for row in rows:
            if len(row) != width:
                raise LatticeError("Ragged rows in LatticeMatrix.from_rows")
        return cls(len(rows), width, tuple(int(x) for row in rows for x in row))

    @classmethod
    def from_columns(
        cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None
    ) -> "LatticeMatrix":
        height = len(columns[0]) if columns else (rows or 0)
        if rows is not None and height != rows:
            raise LatticeError(f"Expected columns of length {rows}, got {height}")
        for col in columns:
            if len(col) != height:
                raise LatticeError("Ragged columns in LatticeMatrix.from_columns")
        entries = tuple(int(columns[j][i]) for i in range(height) for j in range(len(columns)))
        return cls(height, len(columns), entries)

    @classmethod
    def identity(cls, n: int) -> "LatticeMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> LatticeVector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> LatticeVector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    @property
    def row_vectors(self) -> tuple[LatticeVector, ...]:
        return tuple(self.row(i) for i in range(self.rows))

    @property
    def column_vectors(self) -> tuple[LatticeVector, ...]:
        return tuple(self.column(j) for j in range(self.cols))

    def as_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "LatticeMatrix":
        return LatticeMatrix.from_columns(self.row_vectors, rows=self.cols)

    def take_rows(self, start: int, stop: Optional[int] = None) -> "LatticeMatrix":
        return LatticeMatrix.from_rows(self.row_vectors[start:stop], cols=self.cols)

    def take_columns(self, start: int, stop: Optional[int] = None) -> "LatticeMatrix":
        return LatticeMatrix.from_columns(self.column_vectors[start:stop], rows=self.rows)

    def apply(self, v: Sequence[int]) -> LatticeVector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise LatticeError(f"Cannot apply {self.rows}x{self.cols} matrix to rank {len(v)}")
        return tuple(pairing(self.row(i), v) for i in range(self.rows))

    def __matmul__(self, other: "LatticeMatrix") -> "LatticeMatrix":
        if self.cols != other.rows:
            raise LatticeError(
                f"Shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        other_cols = other.column_vectors
        rows = [[pairing(self.row(i), c) for c in other_cols] for i in range(self.rows)]
        return LatticeMatrix.from_rows(rows, cols=other.cols)

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(self.rows, self.cols, list(self.entries))

    def det(self) -> int:
        if self.rows != self.cols:
            raise LatticeError("Determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        return int(self.to_sympy().det())

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def diagonal(self) -> LatticeVector:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))


class SmithForm(NamedTuple):
    S: LatticeMatrix
    U: LatticeMatrix
    V: LatticeMatrix
    U_inv: LatticeMatrix
    V_inv: LatticeMatrix
    rank: int


def _from_sympy(M: sympy.Matrix) -> LatticeMatrix:
    return LatticeMatrix(M.rows, M.cols, tuple(int(x) for x in M))


def smith_decomposition(A: LatticeMatrix) -> SmithForm:
    """
    Smith normal form with both transforms and their inverses.

    sympy returns (S, U, V) with S == U A V; rows of U are negated where
    needed so the diagonal is nonnegative.
    """
    m, n = A.rows, A.cols
    if m == 0 or n == 0:
        U, V = LatticeMatrix.identity(m), LatticeMatrix.identity(n)
        return SmithForm(A, U, V, U, V, 0)
    S, U, V = (sympy.Matrix(X) for X in smith_normal_decomp(A.to_sympy(), domain=ZZ))
    r = sum(1 for i in range(min(m, n)) if S[i, i] != 0)
    for i in range(r):
        if S[i, i] < 0:
            S[i, :] = -S[i, :]
            U[i, :] = -U[i, :]
    U_lat, V_lat = _from_sympy(U), _from_sympy(V)
    return SmithForm(
        S=_from_sympy(S),
        U=U_lat,
        V=V_lat,
        U_inv=unimodular_inverse(U_lat),
        V_inv=unimodular_inverse(V_lat),
        rank=r,
    )


def smith_normal_form(A: LatticeMatrix) -> tuple[LatticeMatrix, LatticeMatrix, LatticeMatrix]:
    """
    Return (S, U, V) with U @ A @ V == S.

    U and V are unimodular and S is diagonal with d_1 | d_2 | ... and
    nonnegative entries.
    """
    form = smith_decomposition(A)
    return form.S, form.U, form.V


def _as_columns(vectors: Sequence[Sequence[int]], ambient_rank: Optional[int]) -> LatticeMatrix:
    if not vectors and ambient_rank is None:
        raise LatticeError("ambient_rank is required for an empty vector list")
    return LatticeMatrix.from_columns([tuple(v) for v in vectors], rows=ambient_rank)


def _normalized_columns(M: LatticeMatrix) -> LatticeMatrix:
    return LatticeMatrix.from_columns(
        [normalize_sign(c) for c in M.column_vectors], rows=M.rows
    )


def rank(vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> int:
    return smith_decomposition(_as_columns(vectors, ambient_rank)).rank


def saturate(
    vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None
) -> LatticeMatrix:
    """
    Basis (as columns) of the saturation span_R(vectors) ∩ Z^n.

    With U @ A @ V = S, the first rank columns of U^-1 span the same real
    space as A and are part of a unimodular matrix, hence saturated.
    """
    form = smith_decomposition(_as_columns(vectors, ambient_rank))
    return _normalized_columns(form.U_inv.take_columns(0, form.rank))


def is_saturated(vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> bool:
    """True iff the vectors are independent and span a saturated sublattice."""
    form = smith_decomposition(_as_columns(vectors, ambient_rank))
    return form.rank == len(vectors) and all(d == 1 for d in form.S.diagonal()[: form.rank])


@dataclass(frozen=True)
class QuotientLattice:
    ambient_rank: int
    sub_basis: LatticeMatrix
    projection: LatticeMatrix
    section: LatticeMatrix

    @property
    def rank(self) -> int:
        return self.projection.rows

    def project(self, v: Sequence[int]) -> LatticeVector:
        return self.projection.apply(v)

    def lift(self, y: Sequence[int]) -> LatticeVector:
        return self.section.apply(y)


def quotient(ambient_rank: int, sub: Sequence[Sequence[int]]) -> QuotientLattice:
    """
    The quotient Z^n / saturate(sub) with a projection and a section.

    From U @ A @ V = S of rank r: rows r.. of U kill span(sub) and the
    matching columns of U^-1 are a right inverse.
    """
    form = smith_decomposition(_as_columns(sub, ambient_rank))
    r = form.rank
    return QuotientLattice(
        ambient_rank=ambient_rank,
        sub_basis=_normalized_columns(form.U_inv.take_columns(0, r)),
        projection=form.U.take_rows(r),
        section=form.U_inv.take_columns(r),
    )


def extend_to_basis(
    vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None
) -> tuple[LatticeMatrix, LatticeMatrix]:
    """
    Complete independent, saturated vectors to a lattice basis.

    Returns (W, W_inv) where W is unimodular and its first columns are
    exactly the given vectors.
    """
    A = _as_columns(vectors, ambient_rank)
    form = smith_decomposition(A)
    k = len(vectors)
    if form.rank != k or any(d != 1 for d in form.S.diagonal()[:k]):
        raise LatticeError("vectors do not extend to a lattice basis")
    n = A.rows
    # U_inv = [A V | C], so [A | C] = U_inv diag(V^-1, I) and its inverse is diag(V, I) U
    W = LatticeMatrix.from_columns(
        [tuple(v) for v in vectors] + list(form.U_inv.column_vectors[k:]), rows=n
    )
    V_block = [
        [form.V[i, j] if i < k and j < k else int(i == j) for j in range(n)] for i in range(n)
    ]
    W_inv = LatticeMatrix.from_rows(V_block, cols=n) @ form.U
    return W, W_inv


def unimodular_inverse(B: LatticeMatrix) -> LatticeMatrix:
    if not B.is_unimodular():
        raise LatticeError("not a lattice basis")
    if B.rows == 0:
        return B
    inv = B.to_sympy().inv()
    return LatticeMatrix.from_rows(
        [[int(inv[i, j]) for j in range(B.cols)] for i in range(B.rows)], cols=B.cols
    )


def dual_basis(B: LatticeMatrix) -> LatticeMatrix:
    """
    Columns U_j with <U_j, B_r> = δ_jr for a unimodular basis matrix B.
    """
    if B.rows != B.cols or abs(B.det()) != 1:
        raise LatticeError("not a lattice basis")
    return unimodular_inverse(B).transpose()


def annihilator(
    vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None
) -> LatticeMatrix:
    """
    Basis (as columns) of {u in M : <u, w> = 0 for every input w}.

    Kernel columns of V in U @ A @ V = S are primitive, and each is
    sign-normalized so the output is deterministic.
    """
    if not vectors and ambient_rank is None:
        raise LatticeError("ambient_rank is required for an empty vector list")
    n = ambient_rank if ambient_rank is not None else len(vectors[0])
    A = LatticeMatrix.from_rows([tuple(v) for v in vectors], cols=n)
    form = smith_decomposition(A)
    return _normalized_columns(form.V.take_columns(form.rank))


def solve_integer(A: LatticeMatrix, b: Sequence[int]) -> Optional[LatticeVector]:
    """One integer solution of A @ x = b, or None if there is none."""
    if len(b) != A.rows:
        raise LatticeError(f"Right-hand side has length {len(b)}, expected {A.rows}")
    form = smith_decomposition(A)
    c = form.U.apply(b)
    y = [0] * A.cols
    for i, ci in enumerate(c):
        if i < form.rank:
            d = form.S[i, i]
            if ci % d:
                return None
            y[i] = ci // d
        elif ci != 0:
            return None
    return form.V.apply(y)
