"""Exact dense linear algebra over the rationals.

Every object in this package ultimately reduces to matrices of
``fractions.Fraction``.  All identities verified downstream are exact
identities over Q, so there is no floating point anywhere: a tolerance
would mask sign errors.  Subspaces are kept in reduced row-echelon form,
which makes equality, inclusion and intersection tests canonical (two
equal subspaces have bit-identical basis matrices).

All values are immutable after construction and all operations are pure
functions, so everything here is safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

Q = Fraction

__all__ = [
    "Q",
    "Matrix",
    "Subspace",
    "DimensionMismatchError",
    "rref",
    "kernel",
    "intersect",
    "subspace_sum",
    "integer_eigenspaces",
]


class DimensionMismatchError(ValueError):
    """Raised when shapes or ambient dimensions are incompatible."""


def _q(x) -> Fraction:
    # Fraction(str) accepts "p/q"; Fraction(int) and Fraction(Fraction) are cheap.
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with exact rational entries.

    ``entries`` is a tuple of row tuples; ``rows == len(entries)`` and
    every row has length ``cols``.  Matrices act on column vectors:
    ``(A @ B)`` composes maps, ``A.apply(v)`` is ``A v``.
    """

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise DimensionMismatchError(
                f"expected {self.rows} rows, got {len(self.entries)}")
        for r in self.entries:
            if len(r) != self.cols:
                raise DimensionMismatchError(
                    f"expected {self.cols} columns, got row of length {len(r)}")

    # ---------------------------------------------------------------- builders
    @staticmethod
    def from_rows(rows: Iterable[Iterable], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(_q(x) for x in row) for row in rows)
        if data:
            ncols = len(data[0])
        elif cols is not None:
            ncols = cols
        else:
            ncols = 0
        return Matrix(len(data), ncols, data)

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        z = Q(0)
        return Matrix(rows, cols, tuple(tuple(z for _ in range(cols))
                                        for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, tuple(tuple(Q(1) if i == j else Q(0)
                                        for j in range(n)) for i in range(n)))

    # ---------------------------------------------------------------- algebra
    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return self.scale(Q(-1))

    def scale(self, c) -> "Matrix":
        c = _q(c)
        return Matrix(self.rows, self.cols, tuple(
            tuple(c * a for a in row) for row in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = Q(0)
        out = [[zero] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.entries[i]
            acc = out[i]
            for k in range(self.cols):
                a = row[k]
                if a == 0:
                    continue
                brow = other.entries[k]
                for j in range(other.cols):
                    b = brow[j]
                    if b != 0:
                        acc[j] += a * b
        return Matrix(self.rows, other.cols, tuple(tuple(r) for r in out))

    def pow(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatchError("pow requires a square matrix")
        result = Matrix.identity(self.rows)
        for _ in range(e):
            result = result @ self
        return result

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(zip(*self.entries)) if self.entries else
                      tuple(() for _ in range(self.cols)))

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise DimensionMismatchError(
                f"vector of length {len(vec)} against {self.rows}x{self.cols}")
        v = [_q(x) for x in vec]
        out = []
        for row in self.entries:
            s = Q(0)
            for a, x in zip(row, v):
                if a != 0 and x != 0:
                    s += a * x
            out.append(s)
        return tuple(out)

    # ---------------------------------------------------------------- queries
    def is_zero(self) -> bool:
        return all(a == 0 for row in self.entries for a in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatchError("hstack requires equal row counts")
        return Matrix(self.rows, self.cols + other.cols, tuple(
            ra + rb for ra, rb in zip(self.entries, other.entries)))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatchError("vstack requires equal column counts")
        return Matrix(self.rows + other.rows, self.cols,
                      self.entries + other.entries)

    def _same_shape(self, other: "Matrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __str__(self):
        return "\n".join("[" + "  ".join(str(a) for a in row) + "]"
                         for row in self.entries)


class RrefResult(NamedTuple):
    matrix: Matrix
    rank: int
    pivots: tuple[int, ...]


def _rref_rows(rows: list[list[Fraction]], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """In-place Gauss-Jordan elimination; returns (rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(m: Matrix) -> RrefResult:
    """Reduced row-echelon form of ``m`` with its rank and pivot columns.

    Exact arithmetic throughout; the zero rows are kept in place so the
    returned matrix has the same shape as the input.
    """
    work = [list(row) for row in m.entries]
    work, pivots = _rref_rows(work, m.cols)
    reduced = Matrix(m.rows, m.cols, tuple(tuple(row) for row in work))
    return RrefResult(reduced, len(pivots), tuple(pivots))


def rank(m: Matrix) -> int:
    return rref(m).rank


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of Q^n stored by its canonical RREF row basis.

    The basis matrix has one row per basis vector, no zero rows, and is in
    reduced row-echelon form, so two subspaces are equal as sets exactly
    when their ``basis`` fields compare equal.
    """

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_dim:
            raise DimensionMismatchError(
                f"basis width {self.basis.cols} != ambient {self.ambient_dim}")

    @staticmethod
    def from_spanning(vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        work = [[_q(x) for x in v] for v in vectors]
        for v in work:
            if len(v) != ambient_dim:
                raise DimensionMismatchError(
                    f"vector of length {len(v)} in ambient dim {ambient_dim}")
        work, pivots = _rref_rows(work, ambient_dim)
        basis = Matrix.from_rows(work[: len(pivots)], cols=ambient_dim)
        return Subspace(ambient_dim, basis)

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.from_rows((), cols=ambient_dim))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_zero(self) -> bool:
        return self.dim == 0

    def basis_vectors(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.basis.entries

    def coords_of(self, vec: Sequence) -> tuple[Fraction, ...] | None:
        """Coordinates of ``vec`` in the RREF basis, or None if not in the span."""
        v = [_q(x) for x in vec]
        if len(v) != self.ambient_dim:
            raise DimensionMismatchError("vector/ambient dimension mismatch")
        coords = []
        residual = list(v)
        for row in self.basis.entries:
            # each RREF row has a leading 1 in its pivot column
            p = next(j for j, a in enumerate(row) if a != 0)
            c = residual[p]
            coords.append(c)
            if c != 0:
                residual = [x - c * b for x, b in zip(residual, row)]
        if any(x != 0 for x in residual):
            return None
        return tuple(coords)

    def contains(self, vec: Sequence) -> bool:
        return self.coords_of(vec) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("ambient dimension mismatch")
        return all(self.contains(v) for v in other.basis.entries)


def kernel(m: Matrix) -> Subspace:
    """Null space of ``m`` (vectors v with m v = 0), canonical basis.

    dim kernel(m) + rank(m) = cols(m) always holds exactly.
    """
    red, _, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    vectors = []
    for f in free:
        v = [Q(0)] * m.cols
        v[f] = Q(1)
        for i, p in enumerate(pivots):
            v[p] = -red.entries[i][f]
        vectors.append(v)
    return Subspace.from_spanning(vectors, m.cols)


def image(m: Matrix) -> Subspace:
    """Column space of ``m`` as a subspace of Q^rows."""
    return Subspace.from_spanning(
        [m.column(j) for j in range(m.cols)], m.rows)


def _zassenhaus(s1: Subspace, s2: Subspace) -> tuple[Subspace, Subspace]:
    """One-pass computation of (sum, intersection) via the Zassenhaus block trick."""
    n = s1.ambient_dim
    rows = []
    for v in s1.basis.entries:
        rows.append(list(v) + list(v))
    for v in s2.basis.entries:
        rows.append(list(v) + [Q(0)] * n)
    rows, pivots = _rref_rows(rows, 2 * n)
    sum_vecs = []
    int_vecs = []
    for row in rows[: len(pivots)]:
        left, right = row[:n], row[n:]
        if any(a != 0 for a in left):
            sum_vecs.append(left)
        else:
            int_vecs.append(right)
    return (Subspace.from_spanning(sum_vecs, n),
            Subspace.from_spanning(int_vecs, n))


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Set-theoretic intersection of two subspaces of the same ambient space."""
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatchError(
            f"ambient mismatch: {s1.ambient_dim} vs {s2.ambient_dim}")
    return _zassenhaus(s1, s2)[1]


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    """Span of the union of two subspaces of the same ambient space."""
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatchError(
            f"ambient mismatch: {s1.ambient_dim} vs {s2.ambient_dim}")
    return Subspace.from_spanning(
        s1.basis.entries + s2.basis.entries, s1.ambient_dim)


def integer_eigenspaces(m: Matrix, candidates: Iterable[int]
                        ) -> tuple[list[tuple[int, Subspace]], bool]:
    """Eigenspaces of ``m`` for the given integer candidate eigenvalues.

    Returns ``(pairs, complete)`` where ``pairs`` lists ``(lam, eigenspace)``
    for every candidate with a nontrivial eigenspace, and ``complete`` is
    True when the eigenspace dimensions add up to the ambient dimension,
    i.e. ``m`` is diagonalizable over the candidate set.  No searching
    happens outside the supplied candidates: the spectra handled by this
    package are always known a priori.
    """
    if not m.is_square():
        raise DimensionMismatchError("eigenspaces require a square matrix")
    pairs = []
    total = 0
    seen = set()
    for lam in candidates:
        if lam in seen:
            continue
        seen.add(lam)
        shifted = m - Matrix.identity(m.rows).scale(Q(lam))
        eig = kernel(shifted)
        if eig.dim > 0:
            pairs.append((lam, eig))
            total += eig.dim
    pairs.sort(key=lambda p: p[0])
    return pairs, total == m.rows


def solve_right(a: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution x of ``a x = b``, or None when the system is inconsistent."""
    bv = [_q(x) for x in b]
    if len(bv) != a.rows:
        raise DimensionMismatchError("rhs length mismatch")
    aug = Matrix(a.rows, a.cols + 1,
                 tuple(row + (bv[i],) for i, row in enumerate(a.entries)))
    red, _, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [Q(0)] * a.cols
    for i, p in enumerate(pivots):
        x[p] = red.entries[i][a.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix; raises on singular input."""
    if not m.is_square():
        raise DimensionMismatchError("inverse requires a square matrix")
    n = m.rows
    aug = m.hstack(Matrix.identity(n))
    red, rk, _ = rref(aug)
    if rk < n:
        raise DimensionMismatchError("matrix is singular")
    return Matrix(n, n, tuple(row[n:] for row in red.entries))
