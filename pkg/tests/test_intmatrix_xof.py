import random

import pytest

from compact_knapsack.intmatrix import IntMatrix, dot
from compact_knapsack.xof import XofStream, derive_seed, random_bits, sample_interval

from oracles import det


def test_basic_ops():
    A = IntMatrix([[1, 2], [3, 4]])
    assert A.T == IntMatrix([[1, 3], [2, 4]])
    assert A @ A == IntMatrix([[7, 10], [15, 22]])
    assert A @ (1, 1) == (3, 7)
    assert (A + A) - A == A and -A == IntMatrix([[-1, -2], [-3, -4]])
    assert A.hstack(IntMatrix.identity(2)).shape == (2, 4)
    assert IntMatrix.from_columns([(1, 3), (2, 4)]) == A
    assert A.submatrix(slice(0, 1), slice(1, 2)) == IntMatrix([[2]])
    assert A.max_abs() == 4 and dot((1, 2), (3, 4)) == 11
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])


def test_determinant_and_rank_against_cofactors():
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(1, 5)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert IntMatrix(M).determinant() == det(M)
        assert (IntMatrix(M).rank() == n) == (det(M) != 0)


def test_xof_stream_deterministic():
    a, b = XofStream(b"seed"), XofStream(b"seed")
    assert a.read(300) == b.read(300)
    assert XofStream(b"seed").read(10) != XofStream(b"seee").read(10)
    with pytest.raises(ValueError):
        XofStream(b"s", b"short")


def test_interval_sampling_uniformish():
    s = XofStream(b"u")
    vals = [s.interval(3) for _ in range(4000)]
    assert set(vals) == {4, 5, 6, 7}
    for v in (4, 5, 6, 7):
        assert abs(vals.count(v) - 1000) < 150
    assert s.interval(1) == 1
    assert 2**79 <= sample_interval(random.Random(1), 80) < 2**80


def test_bits_and_seeds():
    assert len(random_bits(XofStream(b"b"), 13)) == 13
    assert set(random_bits(random.Random(2), 64)) == {0, 1}
    assert len(derive_seed(b"m", b"x", 16)) == 16
    assert derive_seed(b"m", b"x", 16) != derive_seed(b"m", b"a", 16)
