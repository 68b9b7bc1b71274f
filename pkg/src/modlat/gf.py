"""Dense matrices over a prime field F_q."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kernels import rref_kernel
from .rng import SeededRng


class ShapeError(ValueError):
    """Operands have incompatible shapes."""


class FieldMismatchError(ValueError):
    """Operands live over different fields."""


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not (2 <= self.q < 1 << 31):
            raise ValueError(f"field size must be an integer in [2, 2^31), got {self.q!r}")
        if not is_prime(int(self.q)):
            raise ValueError(f"field size must be prime, got {self.q}")
        object.__setattr__(self, "q", int(self.q))

    def inv(self, a: int) -> int:
        return pow(int(a) % self.q, -1, self.q)


class Matrix:
    """Immutable m x n matrix with entries in [0, q)."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data, *, _trusted: bool = False):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ShapeError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        if not _trusted:
            arr = arr % field.q
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int) -> "Matrix":
        return cls(field, np.zeros((m, n), dtype=np.int64), _trusted=True)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64), _trusted=True)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.data.shape == other.data.shape
                and np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.field.q, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"Matrix(q={self.q}, {self.tolist()})"


@dataclass(frozen=True)
class RREF:
    R: Matrix
    rank: int
    pivots: tuple[int, ...]


def rref(M: Matrix) -> RREF:
    R, rank, piv = rref_kernel(np.ascontiguousarray(M.data), M.q)
    return RREF(Matrix(M.field, R, _trusted=True), rank, tuple(int(p) for p in piv))


def rank(M: Matrix) -> int:
    return rref(M).rank


def kernel(M: Matrix) -> Matrix:
    """RREF basis of the right null space ``{v : M v^T = 0}``."""
    q, n = M.q, M.cols
    red = rref(M)
    free = [c for c in range(n) if c not in set(red.pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    R = red.R.data
    for row, f in enumerate(free):
        K[row, f] = 1
        for i, p in enumerate(red.pivots):
            K[row, p] = (-R[i, f]) % q
    return rref(Matrix(M.field, K, _trusted=True)).R


def random_matrix(m: int, n: int, field: FieldSpec, rng: SeededRng) -> Matrix:
    """Uniform m x n matrix, row-major draw order from ``rng``."""
    data = rng.field_elements(m * n, field.q).reshape(m, n)
    return Matrix(field, data, _trusted=True)


def _same_field(*ms: Matrix) -> FieldSpec:
    f = ms[0].field
    for other in ms[1:]:
        if other.field != f:
            raise FieldMismatchError(f"matrices over F_{f.q} and F_{other.field.q}")
    return f


def add(A: Matrix, B: Matrix) -> Matrix:
    f = _same_field(A, B)
    if A.shape != B.shape:
        raise ShapeError(f"cannot add {A.shape} and {B.shape}")
    return Matrix(f, (A.data + B.data) % f.q, _trusted=True)


def scale(A: Matrix, c: int) -> Matrix:
    return Matrix(A.field, (A.data * (int(c) % A.q)) % A.q, _trusted=True)


def multiply(A: Matrix, B: Matrix) -> Matrix:
    f = _same_field(A, B)
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    q = f.q
    out = np.zeros((A.rows, B.cols), dtype=np.int64)
    # accumulate one rank-1 update at a time so products stay below 2^62
    for k in range(A.cols):
        out = (out + np.outer(A.data[:, k], B.data[k, :])) % q
    return Matrix(f, out, _trusted=True)


def stack(*ms: Matrix) -> Matrix:
    """Concatenate rows."""
    f = _same_field(*ms)
    if any(m.cols != ms[0].cols for m in ms):
        raise ShapeError(f"cannot stack matrices with column counts {[m.cols for m in ms]}")
    return Matrix(f, np.vstack([m.data for m in ms]), _trusted=True)


def from_rows(field: FieldSpec, rows: Sequence[Sequence[int]], n: int | None = None) -> Matrix:
    if len(rows) == 0:
        return Matrix.zeros(field, 0, n or 0)
    return Matrix(field, rows)
