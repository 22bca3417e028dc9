"""Smith normal form, integer linear systems and integer kernels.

Everything here is exact.  The SNF routine is the textbook
elimination with explicit accumulation of the unimodular transforms,
pivoting on the entry of smallest absolute value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intmatrix import IntMatrix, as_matrix


class ResourceLimitError(RuntimeError):
    """Raised when an exact computation exceeds its iteration budget."""


class NoIntegerSolution(ValueError):
    """The linear system has no solution over the integers."""


@dataclass(frozen=True)
class SNFDecomposition:
    """``P @ A @ Q == D`` with ``P``, ``Q`` unimodular."""

    D: IntMatrix
    P: IntMatrix
    Q: IntMatrix
    rank: int
    divisors: tuple[int, ...]


@dataclass(frozen=True)
class GeneralSolution:
    """Every integer solution is ``particular + sum(t_i * free_basis[i])``."""

    particular: tuple[int, ...]
    free_basis: tuple[tuple[int, ...], ...]

    @property
    def free_count(self) -> int:
        return len(self.free_basis)


def _nearest_quotient(a: int, b: int) -> int:
    # quotient leaving a remainder in (-|b|/2, |b|/2]
    if b < 0:
        a, b = -a, -b
    return (2 * a + b) // (2 * b)


def snf(A, max_steps: int = 10_000_000) -> SNFDecomposition:
    """Smith normal form of ``A`` with transforms.

    Parameters
    ----------
    A : IntMatrix or nested sequence
        An ``m x n`` integer matrix.
    max_steps : int
        Budget on elementary operations; exceeding it raises
        :class:`ResourceLimitError`.

    Returns
    -------
    SNFDecomposition
        ``D`` carries ``lambda_1 | lambda_2 | ... | lambda_r`` (all positive)
        on its leading diagonal.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        raise ValueError("snf needs a matrix with nonzero dimensions")
    D = A.to_lists()
    P = IntMatrix.identity(m).to_lists()
    # Q is stored transposed so column operations become row operations
    Qt = IntMatrix.identity(n).to_lists()
    steps = 0

    def row_op(dst: int, src: int, q: int) -> None:
        # row[dst] -= q * row[src]
        rd, rs = D[dst], D[src]
        for j in range(n):
            if rs[j]:
                rd[j] -= q * rs[j]
        pd, ps = P[dst], P[src]
        for j in range(m):
            if ps[j]:
                pd[j] -= q * ps[j]

    def col_op(dst: int, src: int, q: int) -> None:
        # col[dst] -= q * col[src]
        for row in D:
            if row[src]:
                row[dst] -= q * row[src]
        qd, qs = Qt[dst], Qt[src]
        for j in range(n):
            if qs[j]:
                qd[j] -= q * qs[j]

    def swap_rows(i: int, k: int) -> None:
        D[i], D[k] = D[k], D[i]
        P[i], P[k] = P[k], P[i]

    def swap_cols(j: int, k: int) -> None:
        for row in D:
            row[j], row[k] = row[k], row[j]
        Qt[j], Qt[k] = Qt[k], Qt[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)

        while True:
            steps += 1
            if steps > max_steps:
                raise ResourceLimitError(f"snf exceeded {max_steps} steps")
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    row_op(i, t, _nearest_quotient(D[i][t], piv))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    col_op(j, t, _nearest_quotient(D[t][j], piv))
                    if D[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row/column t onto the pivot
                cand = [(abs(D[i][t]), 0, i) for i in range(t + 1, m) if D[i][t]]
                cand += [(abs(D[t][j]), 1, j) for j in range(t + 1, n) if D[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            # pivot must divide the whole trailing block
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            P[t] = [-v for v in P[t]]
        t += 1

    rank = t
    divisors = tuple(D[i][i] for i in range(rank))
    return SNFDecomposition(
        D=IntMatrix(D, cols=n),
        P=IntMatrix(P, cols=m),
        Q=IntMatrix(Qt, cols=n).T,
        rank=rank,
        divisors=divisors,
    )


def solve_integer_system(A, b: Sequence[int], decomposition: SNFDecomposition | None = None) -> GeneralSolution:
    """All integer solutions of ``A x = b``.

    Raises
    ------
    NoIntegerSolution
        If ``c = P b`` has a nonzero entry past the rank, or some
        ``lambda_i`` does not divide ``c_i``.
    """
    A = as_matrix(A)
    b = tuple(int(v) for v in b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    dec = decomposition or snf(A)
    c = dec.P @ b
    r = dec.rank
    if any(c[r:]):
        raise NoIntegerSolution("inconsistent system: P b is nonzero past the rank")
    y = []
    for lam, ci in zip(dec.divisors, c):
        if ci % lam:
            raise NoIntegerSolution(f"elementary divisor {lam} does not divide {ci}")
        y.append(ci // lam)
    y += [0] * (A.cols - r)
    particular = dec.Q @ y
    return GeneralSolution(particular=particular, free_basis=tuple(_trailing_columns(dec)))


def _trailing_columns(dec: SNFDecomposition) -> list[tuple[int, ...]]:
    Q = dec.Q
    return [Q.column(j) for j in range(dec.rank, Q.cols)]


def kernel_basis(A, decomposition: SNFDecomposition | None = None) -> list[tuple[int, ...]]:
    """Basis of ``{x in Z^n : A x = 0}``: the last ``n - rank`` columns of ``Q``."""
    A = as_matrix(A)
    return _trailing_columns(decomposition or snf(A))
