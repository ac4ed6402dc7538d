"""Dense, bit-packed linear algebra over the two-element field.

Matrices pack each row into little-endian ``uint64`` words (column ``j`` is
bit ``j % 64`` of word ``j // 64``). Vectors at the API boundary are plain
``numpy`` ``uint8`` arrays of zeros and ones.

Subspaces are always stored in reduced row echelon form, so two subspaces
with the same members compare equal structurally.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from sepchk._backend import kernels
from sepchk.errors import AmbientMismatchError, DimensionError


def _nwords(cols: int) -> int:
    return max(1, (cols + 63) // 64)


def _pack(dense: np.ndarray) -> np.ndarray:
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64).reshape(rows, nw)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols].copy()


def as_vector(v, length: Optional[int] = None) -> np.ndarray:
    """Coerce ``v`` to a 0/1 ``uint8`` vector, optionally checking its length."""
    out = np.asarray(v, dtype=np.int64).ravel() & 1
    if length is not None and out.size != length:
        raise DimensionError(f"vector has length {out.size}, expected {length}")
    return out.astype(np.uint8)


class Gf2Matrix:
    """Immutable dense GF(2) matrix."""

    __slots__ = ("rows", "cols", "_words")

    def __init__(self, rows: int, cols: int, words: Optional[np.ndarray] = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if words is None:
            words = np.zeros((self.rows, _nwords(self.cols)), dtype=np.uint64)
        words = np.array(words, dtype=np.uint64, copy=True).reshape(self.rows, _nwords(self.cols))
        # clear padding bits so structural equality is meaningful
        if self.cols % 64 and self.rows:
            words[:, -1] &= np.uint64((1 << (self.cols % 64)) - 1)
        words.setflags(write=False)
        self._words = words

    @classmethod
    def from_dense(cls, array) -> "Gf2Matrix":
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionError("from_dense expects a 2-d array")
        return cls(a.shape[0], a.shape[1], _pack(a & 1))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_columns(cls, columns: Iterable, nrows: int) -> "Gf2Matrix":
        cols = [as_vector(c, nrows) for c in columns]
        if not cols:
            return cls(nrows, 0)
        return cls.from_dense(np.stack(cols, axis=1))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return int((int(self._words[i, j >> 6]) >> (j & 63)) & 1)

    def to_dense(self) -> np.ndarray:
        return _unpack(self._words, self.cols)

    def row(self, i: int) -> np.ndarray:
        return self.to_dense()[i]

    def column(self, j: int) -> np.ndarray:
        return self.to_dense()[:, j]

    @property
    def T(self) -> "Gf2Matrix":
        return Gf2Matrix.from_dense(self.to_dense().T)

    def transpose(self) -> "Gf2Matrix":
        return self.T

    def __matmul__(self, other):
        if isinstance(other, Gf2Matrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            prod = self.to_dense().astype(np.int64) @ other.to_dense().astype(np.int64)
            return Gf2Matrix.from_dense(prod & 1)
        v = as_vector(other, self.cols)
        return ((self.to_dense().astype(np.int64) @ v.astype(np.int64)) & 1).astype(np.uint8)

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Gf2Matrix(self.rows, self.cols, self._words ^ other._words)

    def hstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return Gf2Matrix.from_dense(np.hstack([self.to_dense(), other.to_dense()]))

    def vstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.cols:
            raise DimensionError("vstack needs equal column counts")
        return Gf2Matrix(self.rows + other.rows, self.cols, np.vstack([self._words, other._words]))

    def is_zero(self) -> bool:
        return not self._words.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols})"


def _rref(m: Gf2Matrix, pivot_limit: int = -1) -> tuple[Gf2Matrix, list[int]]:
    if m.rows == 0 or m.cols == 0:
        return Gf2Matrix(m.rows, m.cols, m.words), []
    words, pivots = kernels.rref(m.words, m.cols, pivot_limit)
    return Gf2Matrix(m.rows, m.cols, words), list(pivots)


def rref(m: Gf2Matrix) -> tuple[Gf2Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (lexicographic pivot order)."""
    return _rref(m)


class Gf2Subspace:
    """A subspace of GF(2)^ambient_dim in canonical reduced echelon form."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Gf2Matrix, pivots: list[int]):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> "Gf2Subspace":
        """Canonical subspace spanned by the rows of ``vectors``."""
        if isinstance(vectors, Gf2Matrix):
            m = vectors
        else:
            rows = [as_vector(v, ambient_dim) for v in vectors]
            if not rows:
                return cls.zero(ambient_dim)
            m = Gf2Matrix.from_dense(np.stack(rows))
        if m.cols != ambient_dim:
            raise AmbientMismatchError(f"vectors of length {m.cols} in ambient {ambient_dim}")
        r, piv = _rref(m)
        basis = Gf2Matrix(len(piv), ambient_dim, r.words[: len(piv)])
        return cls(ambient_dim, basis, piv)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Gf2Subspace":
        return cls(ambient_dim, Gf2Matrix(0, ambient_dim), [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Gf2Subspace":
        return cls(ambient_dim, Gf2Matrix.identity(ambient_dim), list(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list[np.ndarray]:
        return list(self.basis.to_dense())

    def reduce(self, v) -> np.ndarray:
        """Residue of ``v`` after eliminating against the echelon basis."""
        v = as_vector(v, self.ambient_dim).copy()
        if self.dim == 0:
            return v
        dense = self.basis.to_dense()
        for row, p in zip(dense, self.pivots):
            if v[p]:
                v ^= row
        return v

    def contains_vector(self, v) -> bool:
        return not self.reduce(v).any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gf2Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Gf2Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def rank(m: Gf2Matrix) -> int:
    return len(_rref(m)[1])


def kernel_basis(m: Gf2Matrix) -> Gf2Subspace:
    """The null space ``{x : m x = 0}`` in canonical form."""
    r, piv = _rref(m)
    free = [j for j in range(m.cols) if j not in set(piv)]
    if not free:
        return Gf2Subspace.zero(m.cols)
    x = np.zeros((len(free), m.cols), dtype=np.uint8)
    x[np.arange(len(free)), free] = 1
    if piv:
        dense = r.to_dense()[: len(piv)]
        x[:, piv] = dense[:, free].T
    return Gf2Subspace.span(Gf2Matrix.from_dense(x), m.cols)


def image_basis(m: Gf2Matrix) -> Gf2Subspace:
    """Column span of ``m`` in canonical form."""
    return Gf2Subspace.span(m.T, m.rows)


def contains(a: Gf2Subspace, b: Gf2Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(f"ambient dims {a.ambient_dim} and {b.ambient_dim} differ")
    return all(a.contains_vector(v) for v in b.vectors())


def solve_many(m: Gf2Matrix, rhs: Gf2Matrix) -> list[Optional[np.ndarray]]:
    """Solve ``m x = b`` for every column ``b`` of ``rhs`` with one elimination.

    Free variables are set to zero; ``None`` marks an inconsistent column.
    """
    if rhs.rows != m.rows:
        raise DimensionError(f"right-hand sides have {rhs.rows} rows, matrix has {m.rows}")
    if rhs.cols == 0:
        return []
    r, piv = _rref(m.hstack(rhs), pivot_limit=m.cols)
    dense = r.to_dense()
    residue = dense[len(piv):, m.cols:]
    out: list[Optional[np.ndarray]] = []
    for j in range(rhs.cols):
        if residue[:, j].any():
            out.append(None)
            continue
        x = np.zeros(m.cols, dtype=np.uint8)
        x[piv] = dense[: len(piv), m.cols + j]
        out.append(x)
    return out


def solve(m: Gf2Matrix, b) -> Optional[np.ndarray]:
    """Some ``x`` with ``m x = b`` (free variables zero), or ``None``."""
    b = as_vector(b, m.rows)
    return solve_many(m, Gf2Matrix.from_columns([b], m.rows))[0]
