"""Dense integer matrices with exact (Python int) arithmetic."""

from __future__ import annotations

from typing import Iterable, Sequence


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers.

    Entries are stored row-major as a tuple of row tuples.  All arithmetic
    stays in Python ints, so nothing ever overflows or rounds.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(v) for v in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and rows and cols != width:
            raise ValueError(f"expected {cols} columns, got {width}")
        self._data = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, size: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(size)] for i in range(size)], cols=size)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> IntMatrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(zip(*columns))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int, cols: int) -> IntMatrix:
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls(out, cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(v for row in self._data for v in row)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self._data), cols=self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._data[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._data]!r})"

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], cols=self.cols
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self._data], cols=self.cols)

    def __matmul__(self, other):
        """Matrix product, or matrix-vector product when ``other`` is a sequence."""
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            other_cols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in other_cols] for r in self._data],
                cols=other.cols,
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} against {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._data)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix([r + s for r, s in zip(self._data, other._data)], cols=self.cols + other.cols)

    def submatrix(self, rows: slice, cols: slice) -> IntMatrix:
        data = [r[cols] for r in self._data[rows]]
        width = len(range(*cols.indices(self.cols)))
        return IntMatrix(data, cols=width)

    def max_abs(self) -> int:
        return max((abs(v) for r in self._data for v in r), default=0)

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        M = self.to_lists()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if M[k][k] == 0:
                for i in range(k + 1, n):
                    if M[i][k] != 0:
                        M[k], M[i] = M[i], M[k]
                        sign = -sign
                        break
                else:
                    return 0
            pivot = M[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
            prev = pivot
        return sign * M[n - 1][n - 1]

    def rank(self) -> int:
        """Rank over the rationals (fraction-free elimination)."""
        M = self.to_lists()
        rank = 0
        for c in range(self.cols):
            piv = next((i for i in range(rank, self.rows) if M[i][c] != 0), None)
            if piv is None:
                continue
            M[rank], M[piv] = M[piv], M[rank]
            p = M[rank][c]
            for i in range(rank + 1, self.rows):
                f = M[i][c]
                if f:
                    M[i] = [p * a - f * b for a, b in zip(M[i], M[rank])]
            rank += 1
            if rank == self.rows:
                break
        return rank


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix(A)
