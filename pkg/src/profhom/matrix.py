"""Immutable dense integer matrices with arbitrary-precision entries."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

_INT64_SAFE = 1 << 62


def _max_abs(rows: Sequence[Sequence[int]]) -> int:
    return max((abs(a) for r in rows for a in r), default=0)


class IntMatrix:
    """A rows x cols matrix over the integers.

    Entries are Python ints (no overflow). Indexing outside the shape raises
    ``IndexError`` instead of zero-extending.
    """

    __slots__ = ("rows", "cols", "_data", "_bound", "_np")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        body = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(body)
        if cols is None:
            cols = len(body[0]) if body else 0
        if len(body) != rows:
            if body or rows < 0:
                raise ValueError(f"expected {rows} rows, got {len(body)}")
            body = tuple(() for _ in range(rows))
            if cols:
                body = tuple((0,) * cols for _ in range(rows))
        for row in body:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: row of length {len(row)}, expected {cols}")
        self.rows = rows
        self.cols = cols
        self._data = body
        self._bound = self._np = None

    @classmethod
    def _trusted(cls, body: tuple, rows: int, cols: int) -> IntMatrix:
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, body
        m._bound = m._np = None
        return m

    def _max_abs(self) -> int:
        if self._bound is None:
            self._bound = _max_abs(self._data)
        return self._bound

    def _int64(self) -> np.ndarray:
        if self._np is None:
            self._np = np.array(self._data, dtype=np.int64).reshape(self.rows, self.cols)
        return self._np

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(((0,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def diag(cls, entries: Sequence[int], rows: int | None = None,
             cols: int | None = None) -> IntMatrix:
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(entries):
            data[i][i] = d
        return cls(data, rows, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        cols = len(columns)
        return cls(([columns[j][i] for j in range(cols)] for i in range(rows)), rows, cols)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict[tuple[int, int], int]) -> IntMatrix:
        data = [[0] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            data[i][j] += v
        return cls(data, rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.rows:
            raise IndexError(i)
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.rows and other.cols and self.cols and \
                self._max_abs() * other._max_abs() * self.cols < _INT64_SAFE:
            # exact in int64, so numpy gives the same integers much faster
            prod = self._int64() @ other._int64()
            return IntMatrix._trusted(tuple(map(tuple, prod.tolist())), self.rows, other.cols)
        cols_b = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c) if a) for c in cols_b] for r in self._data),
            self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        if self.rows * self.cols > 64:
            w = [int(x) for x in v]
            if self._max_abs() * max(map(abs, w), default=0) * self.cols < _INT64_SAFE:
                return (self._int64() @ np.array(w, dtype=np.int64)).tolist()
        return [sum(a * b for a, b in zip(r, v) if a) for r in self._data]

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)),
                         self.rows, self.cols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(([-a for a in r] for r in self._data), self.rows, self.cols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix(([c * a for a in r] for r in self._data), self.rows, self.cols)

    def transpose(self) -> IntMatrix:
        return IntMatrix((self.column(j) for j in range(self.cols)), self.cols, self.rows)

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix((a + b for a, b in zip(self._data, other._data)),
                         self.rows, self.cols + other.cols)

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return IntMatrix(self._data + other._data, self.rows + other.rows, self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix(([self[i, j] for j in cols] for i in rows), len(rows), len(cols))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)

    def is_diagonal(self) -> bool:
        return all(a == 0 for i, r in enumerate(self._data) for j, a in enumerate(r) if i != j)

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]
