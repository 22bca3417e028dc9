"""Lattice bases, exact LLL, Babai's nearest plane and the Lenstra embedding.

LLL here is the all-integer variant (Gram-Schmidt data kept as the
integers ``d_i`` and ``lambda_ij = d_j * mu_ij``), so reduction is exact
and the result can be checked bit-for-bit by :func:`check_lll`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .intmatrix import IntMatrix, as_matrix, dot

try:  # GMP division is far faster on the multi-thousand-bit Gram determinants
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int
from .linalg import NoIntegerSolution, solve_integer_system

DEFAULT_DELTA = Fraction(99, 100)


class DependentBasisError(ValueError):
    """Basis rows are linearly dependent."""


class EmbeddingFailure(RuntimeError):
    """The embedding lattice never exposed a solution row."""


@dataclass(frozen=True)
class LatticeBasis:
    vectors: tuple[tuple[int, ...], ...]
    delta: Fraction | None = None  # set when the basis is known LLL(delta)-reduced

    def __post_init__(self):
        if len({len(v) for v in self.vectors}) > 1:
            raise ValueError("basis vectors must all have the same length")

    @classmethod
    def of(cls, rows) -> LatticeBasis:
        if isinstance(rows, LatticeBasis):
            return rows
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return len(self.vectors[0]) if self.vectors else 0

    def matrix(self) -> IntMatrix:
        return IntMatrix(self.vectors, cols=self.dim)


@dataclass(frozen=True)
class EmbeddingParams:
    N1: int
    N2: int
    max_retries: int = 5

    def __post_init__(self):
        if self.N1 < 2 or self.N2 < 2:
            raise ValueError("N1 and N2 must be at least 2")


def round_half_up(x: Fraction) -> int:
    """Nearest integer, ties toward +infinity."""
    return math.floor(x + Fraction(1, 2))


def _round_div(a: int, b: int) -> int:
    # round_half_up(a / b) for b > 0
    return (2 * a + b) // (2 * b)


def _as_delta(delta) -> Fraction:
    d = Fraction(delta).limit_denominator(10**9) if isinstance(delta, float) else Fraction(delta)
    if not Fraction(1, 4) < d < 1:
        raise ValueError(f"delta must lie in (1/4, 1), got {delta}")
    return d


def integral_gso(vectors: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Integer Gram-Schmidt data of a basis.

    Returns ``(d, lam)`` where ``d[i+1]`` is the Gram determinant of the
    first ``i+1`` vectors (``d[0] = 1``) and ``lam[i][j] = d[j+1] * mu_ij``.
    ``|b*_i|^2 = d[i+1] / d[i]``.
    """
    k = len(vectors)
    d = [1] + [0] * k
    lam = [[0] * k for _ in range(k)]
    for i in range(k):
        bi = vectors[i]
        for j in range(i + 1):
            u = dot(bi, vectors[j])
            for l in range(j):
                u = (d[l + 1] * u - lam[i][l] * lam[j][l]) // d[l]
            if j < i:
                lam[i][j] = u
            else:
                if u == 0:
                    raise DependentBasisError(f"row {i} depends on the previous rows")
                d[i + 1] = u
    return d, lam


def lll_reduce(basis, delta=DEFAULT_DELTA, progressive: bool = True) -> LatticeBasis:
    """LLL-reduce the rows of ``basis``.

    Parameters
    ----------
    basis : LatticeBasis or nested sequence
        Linearly independent integer row vectors.
    delta : Fraction, float or str
        Lovasz parameter in ``(1/4, 1)``; floats are converted to a nearby
        rational.
    progressive : bool
        Reduce at ``delta = 1/2`` and ``3/4`` before the final pass.  The
        cheap early passes shrink the numbers the final pass works on, which
        is several times faster on embedding-style bases.

    Returns
    -------
    LatticeBasis
        Same lattice, size-reduced (``|mu_ij| <= 1/2``) and satisfying the
        Lovasz condition at ``delta``.
    """
    delta = _as_delta(delta)
    b = [[_big(x) for x in v] for v in LatticeBasis.of(basis).vectors]
    if not b:
        return LatticeBasis((), delta)
    schedule = [delta]
    if progressive and len(b) > 4:
        schedule = [s for s in (Fraction(1, 2), Fraction(3, 4)) if s < delta] + schedule
    for step in schedule:
        _lll_inplace(b, step.numerator, step.denominator)
    return LatticeBasis(tuple(tuple(int(x) for x in v) for v in b), delta)


def _lll_inplace(b: list[list], p: int, q: int) -> None:
    # Cohen, "A Course in Computational Algebraic Number Theory", Alg. 2.6.7
    n = len(b)
    d = [_big(1)] + [_big(0)] * n
    lam = [[_big(0)] * n for _ in range(n)]

    def gso_row(k: int) -> None:
        bk = b[k]
        for j in range(k + 1):
            u = dot(bk, b[j])
            lk, lj = lam[k], lam[j]
            for i in range(j):
                u = (d[i + 1] * u - lk[i] * lj[i]) // d[i]
            if j < k:
                lk[j] = u
            else:
                if u == 0:
                    raise DependentBasisError(f"row {k} depends on the previous rows")
                d[k + 1] = u

    def red(k: int, l: int) -> None:
        dl = d[l + 1]
        if 2 * abs(lam[k][l]) > dl:
            r = _round_div(lam[k][l], dl)
            bk, bl = b[k], b[l]
            for i in range(len(bk)):
                if bl[i]:
                    bk[i] -= r * bl[i]
            lam[k][l] -= r * dl
            lk, ll = lam[k], lam[l]
            for i in range(l):
                if ll[i]:
                    lk[i] -= r * ll[i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        dk, dk1, dk2 = d[k + 1], d[k], d[k - 1]
        B = (dk2 * dk + lk * lk) // dk1
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (dk * lam[i][k - 1] - lk * t) // dk1
            lam[i][k - 1] = (B * t + lk * lam[i][k]) // dk
        d[k] = B

    gso_row(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gso_row(k)
        red(k, k - 1)
        lk = lam[k][k - 1]
        # Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lambda^2, scaled by q
        if q * (d[k + 1] * d[k - 1] + lk * lk) < p * d[k] * d[k]:
            swap(k, kmax)
            k = max(1, k - 1)
            continue
        for l in range(k - 2, -1, -1):
            red(k, l)
        k += 1


def check_lll(basis, delta=DEFAULT_DELTA) -> bool:
    """Independent checker of the LLL conditions in rational arithmetic.

    Recomputes Gram-Schmidt from scratch with :class:`fractions.Fraction`
    (not with the integer recurrences used by :func:`lll_reduce`).
    """
    delta = _as_delta(delta)
    vecs = [[Fraction(v) for v in r] for r in LatticeBasis.of(basis).vectors]
    k = len(vecs)
    bstar: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        v = list(vecs[i])
        for j in range(i):
            mu[i][j] = sum(a * c for a, c in zip(vecs[i], bstar[j])) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, bstar[j])]
        nv = sum(a * a for a in v)
        if nv == 0:
            return False
        bstar.append(v)
        norms.append(nv)
    for i in range(k):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for i in range(1, k):
        if norms[i] < (delta - mu[i][i - 1] ** 2) * norms[i - 1]:
            return False
    return True


def _gso_projection(vectors, target) -> tuple[list[int], list[list[int]], list[Fraction], Fraction]:
    """Gram-Schmidt data plus the coordinates of ``target`` along each ``b*_i``.

    Returns ``(d, lam, tau, residual)``: ``tau[i] = <target, b*_i> / |b*_i|^2``
    and ``residual`` is the squared distance from ``target`` to the span.
    """
    d, lam = integral_gso(vectors)
    k = len(vectors)
    target = [Fraction(v) for v in target]
    # <t, b*_i> = <t, b_i> - sum_j mu_ij <t, b*_j>
    tb = [Fraction(0)] * k
    tau = [Fraction(0)] * k
    for i in range(k):
        s = sum(t * v for t, v in zip(target, vectors[i]) if v)
        for j in range(i):
            if lam[i][j]:
                s -= Fraction(lam[i][j], d[j + 1]) * tb[j]
        tb[i] = s
        tau[i] = s * d[i] / d[i + 1]
    residual = sum(t * t for t in target) - sum(tau[i] * tb[i] for i in range(k))
    return d, lam, tau, residual


def babai_nearest_plane(basis, target: Sequence, *, project: bool = False) -> tuple[int, ...]:
    """Lattice vector near ``target`` by Babai's nearest-plane rounding.

    ``target`` entries may be ints, Fractions or decimal strings.  If
    ``target`` is not in the rational span of the basis a ``ValueError`` is
    raised, unless ``project=True``, in which case it is replaced by its
    orthogonal projection onto the span.  Ties round toward +infinity.
    """
    vectors = LatticeBasis.of(basis).vectors
    if not vectors:
        raise ValueError("empty basis")
    if len(target) != len(vectors[0]):
        raise ValueError("target length does not match the ambient dimension")
    d, lam, tau, residual = _gso_projection(vectors, target)
    if residual != 0 and not project:
        raise ValueError("target lies outside the rational span of the basis")
    k = len(vectors)
    coeffs = [0] * k
    for i in range(k - 1, -1, -1):
        c = round_half_up(tau[i])
        coeffs[i] = c
        if c:
            for j in range(i):
                if lam[i][j]:
                    tau[j] -= c * Fraction(lam[i][j], d[j + 1])
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                out[i] += c * x
    return tuple(out)


def default_embedding_params(A, d: Sequence[int], bit_scale: int | None = None, max_retries: int = 5) -> EmbeddingParams:
    """Initial ``N1 = 2^(R+2)``, ``N2 = 2^(2(R + ceil(log2 n)))``.

    ``R`` is ``bit_scale`` or, when absent, the bit length of the largest
    absolute entry of ``(A | d)``.
    """
    A = as_matrix(A)
    if bit_scale is None:
        bit_scale = max(A.max_abs(), max((abs(v) for v in d), default=0)).bit_length()
    R = max(bit_scale, 1)
    logn = max(A.cols - 1, 0).bit_length()  # ceil(log2 n)
    return EmbeddingParams(N1=2 ** (R + 2), N2=2 ** (2 * (R + logn)), max_retries=max_retries)


def embedding_matrix(A, d: Sequence[int], N1: int, N2: int) -> IntMatrix:
    """The ``(n+1) x (n+m+1)`` matrix ``[[I_n, 0, N2 A^T], [0, N1, -N2 d]]``."""
    A = as_matrix(A)
    m, n = A.shape
    rows = []
    for i in range(n):
        rows.append([int(i == j) for j in range(n)] + [0] + [N2 * A[r, i] for r in range(m)])
    rows.append([0] * n + [N1] + [-N2 * v for v in d])
    return IntMatrix(rows, cols=n + m + 1)


def lenstra_particular_solution(A, d: Sequence[int], params: EmbeddingParams | None = None,
                                delta=DEFAULT_DELTA) -> tuple[int, ...]:
    """Short integer solution of ``A x = d`` from the reduced embedding lattice.

    Raises
    ------
    NoIntegerSolution
        When the system is unsolvable over the integers (checked up front).
    EmbeddingFailure
        When no row of the form ``(x, +-N1, 0, ..., 0)`` appears after
        ``max_retries`` doublings of the scaling exponents.
    """
    A = as_matrix(A)
    d = tuple(int(v) for v in d)
    if len(d) != A.rows:
        raise ValueError(f"right-hand side has length {len(d)}, matrix has {A.rows} rows")
    solve_integer_system(A, d)  # raises NoIntegerSolution
    params = params or default_embedding_params(A, d)
    m, n = A.shape
    N1, N2 = params.N1, params.N2
    for attempt in range(params.max_retries + 1):
        reduced = lll_reduce(embedding_matrix(A, d, N1, N2).to_lists(), delta)
        for row in reduced.vectors:
            if abs(row[n]) == N1 and not any(row[n + 1:]):
                x = row[:n] if row[n] == N1 else tuple(-v for v in row[:n])
                if A @ x == d:
                    return tuple(x)
        # double both exponents
        N1, N2 = N1 * N1, N2 * N2
    raise EmbeddingFailure(f"no solution row after {params.max_retries} retries")
