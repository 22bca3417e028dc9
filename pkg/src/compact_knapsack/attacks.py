"""Lattice attacks on the compact knapsack problem.

A solution space ``S_{a_1..a_k}(n, R)`` splits the ``n`` coordinates into
``k`` equal blocks; block ``j`` must hold integers with exactly ``a_j * R``
bits.  The CVP attack shifts a short particular solution along the lattice
vector closest to a centred target; the divide-and-conquer variant runs it
block by block against random splits of the right-hand side.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .intmatrix import IntMatrix, as_matrix
from .lattice import (
    EmbeddingFailure,
    babai_nearest_plane,
    lenstra_particular_solution,
    lll_reduce,
)
from .linalg import NoIntegerSolution, kernel_basis, snf, solve_integer_system
from .xof import sample_interval


def parse_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(1 << 20)
    return Fraction(str(value).strip())


def interval_bounds(bits: int) -> tuple[int, int]:
    """``I_bits = [2^(bits-1), 2^bits - 1]``."""
    return 1 << (bits - 1), (1 << bits) - 1


def centre(bits: int) -> int:
    """``t_bits = 2^(bits-1) + 2^(bits-2)``, the three-quarter point of ``I_bits``."""
    if bits < 2:
        raise ValueError(f"target undefined for {bits}-bit blocks")
    return (1 << (bits - 1)) + (1 << (bits - 2))


@dataclass(frozen=True)
class SolutionSpace:
    n: int
    R: int
    alphas: tuple[Fraction, ...]

    def __post_init__(self):
        alphas = tuple(parse_fraction(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if self.n < 1 or self.R < 1:
            raise ValueError("n and R must be positive")
        if not alphas:
            raise ValueError("need at least one block")
        if self.n % len(alphas):
            raise ValueError(f"{len(alphas)} blocks do not divide n={self.n}")
        for a in alphas:
            if a <= 0 or (a * self.R).denominator != 1:
                raise ValueError(f"alpha={a} with R={self.R} is not a positive bit count")

    @property
    def k(self) -> int:
        return len(self.alphas)

    @property
    def block_size(self) -> int:
        return self.n // self.k

    @property
    def block_bits(self) -> tuple[int, ...]:
        return tuple(int(a * self.R) for a in self.alphas)

    def coordinate_bits(self) -> tuple[int, ...]:
        return tuple(bits for bits in self.block_bits for _ in range(self.block_size))

    def block(self, j: int) -> SolutionSpace:
        """Block ``j`` on its own, as a one-block space of ``n/k`` coordinates."""
        return SolutionSpace(self.block_size, self.R, (self.alphas[j],))

    def label(self) -> str:
        return "S_" + ",".join(str(a) for a in self.alphas)

    def mask(self, v: Sequence[int]) -> tuple[bool, ...]:
        if len(v) != self.n:
            raise ValueError(f"vector of length {len(v)} for a space of dimension {self.n}")
        return tuple((1 << (b - 1)) <= x < (1 << b) for x, b in zip(v, self.coordinate_bits()))

    def __contains__(self, v) -> bool:
        return all(self.mask(v))

    def sample(self, rng) -> tuple[int, ...]:
        return tuple(sample_interval(rng, b) for b in self.coordinate_bits())

    def target(self) -> tuple[int, ...]:
        return tuple(centre(b) for b in self.coordinate_bits())

    def size_log2(self) -> int:
        """``log2 |S|``; every block interval has exactly ``2^(bits-1)`` elements."""
        return sum(b - 1 for b in self.coordinate_bits())


def sample(space: SolutionSpace, rng) -> tuple[int, ...]:
    return space.sample(rng)


def contains(space: SolutionSpace, v: Sequence[int]) -> tuple[bool, tuple[bool, ...]]:
    mask = space.mask(v)
    return all(mask), mask


def target_vector(space: SolutionSpace) -> tuple[int, ...]:
    return space.target()


@dataclass(frozen=True)
class KnapsackInstance:
    A: IntMatrix
    C: tuple[int, ...]
    space: SolutionSpace
    planted: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A))
        object.__setattr__(self, "C", tuple(int(c) for c in self.C))
        if self.A.cols != self.space.n or len(self.C) != self.A.rows:
            raise ValueError("instance dimensions do not match")
        if self.planted is not None:
            planted = tuple(int(v) for v in self.planted)
            object.__setattr__(self, "planted", planted)
            if planted not in self.space or self.A @ planted != self.C:
                raise ValueError("planted vector is not a solution in the space")

    @property
    def m(self) -> int:
        return self.A.rows

    def to_dict(self) -> dict:
        return {
            "n": self.space.n,
            "R": self.space.R,
            "alphas": [str(a) for a in self.space.alphas],
            "A": self.A.to_lists(),
            "C": list(self.C),
            "planted": None if self.planted is None else list(self.planted),
        }

    @classmethod
    def from_dict(cls, data: dict) -> KnapsackInstance:
        space = SolutionSpace(int(data["n"]), int(data["R"]), tuple(data["alphas"]))
        return cls(IntMatrix(data["A"]), tuple(data["C"]), space, data.get("planted"))


@dataclass(frozen=True)
class AttackConfig:
    search_width: int = 10
    dnc_betas: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.search_width < 1:
            raise ValueError("search_width must be at least 1")
        if self.dnc_betas is not None:
            object.__setattr__(self, "dnc_betas", tuple(parse_fraction(b) for b in self.dnc_betas))


@dataclass(frozen=True)
class AttackReport:
    candidate: tuple[int, ...]
    satisfied_coords: int
    total_coords: int
    full_solution: bool
    equality_holds: bool

    @property
    def fraction(self) -> float:
        return self.satisfied_coords / self.total_coords

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def generate_instance(space: SolutionSpace, m: int, entry_bits: int, rng) -> KnapsackInstance:
    """Random ``m x n`` matrix over ``I_entry_bits`` with a planted solution drawn from ``space``.

    ``A`` is drawn row-major first, then the planted vector.
    """
    if m > space.n:
        raise ValueError("need m <= n")
    A = IntMatrix([[sample_interval(rng, entry_bits) for _ in range(space.n)] for _ in range(m)])
    planted = space.sample(rng)
    return KnapsackInstance(A, A @ planted, space, planted)


def particular_solution(A: IntMatrix, C: Sequence[int], decomposition=None) -> tuple[int, ...]:
    """Short particular solution from the embedding, or the SNF one if the embedding gives up."""
    try:
        return lenstra_particular_solution(A, C)
    except EmbeddingFailure:
        return solve_integer_system(A, C, decomposition).particular


def _best_shift(y, b, space: SolutionSpace, width: int) -> tuple[tuple[int, ...], int]:
    bits = space.coordinate_bits()
    best = None
    for j in sorted(range(-width, width + 1), key=lambda j: (abs(j), j)):
        cand = tuple(yi + j * bi for yi, bi in zip(y, b))
        score = sum((1 << (w - 1)) <= x < (1 << w) for x, w in zip(cand, bits))
        # strict improvement only: ties keep the smaller |j|, then the smaller j
        if best is None or score > best[1]:
            best = (cand, score)
    return best


def _solve_block(A: IntMatrix, C: Sequence[int], space: SolutionSpace, width: int) -> tuple[tuple[int, ...], int]:
    """Steps 01-05 of the CVP attack; returns the best candidate and its score."""
    dec = snf(A)
    y = particular_solution(A, C, dec)
    kernel = kernel_basis(A, dec)
    if not kernel:
        return tuple(y), sum(space.mask(y))
    reduced = lll_reduce(kernel)
    # the centred target is generally off the kernel's span: project first
    b = babai_nearest_plane(reduced, space.target(), project=True)
    return _best_shift(y, b, space, width)


def cvp_attack(inst: KnapsackInstance, cfg: AttackConfig = AttackConfig()) -> AttackReport:
    """CVP attack: best of ``y + j b`` for ``|j| <= search_width``.

    ``y`` is a particular solution of ``A x = C`` and ``b`` is the kernel
    lattice vector closest to the space's target.  Raises
    :class:`NoIntegerSolution` when the system has no integer solution.
    """
    if inst.m >= inst.space.n:
        raise ValueError("the CVP attack needs m < n")
    cand, score = _solve_block(inst.A, inst.C, inst.space, cfg.search_width)
    n = inst.space.n
    eq = inst.A @ cand == inst.C
    return AttackReport(cand, score, n, score == n and eq, eq)


def divide_and_conquer_attack(inst: KnapsackInstance, cfg: AttackConfig = AttackConfig(), rng=None,
                              max_resamples: int = 10) -> AttackReport:
    """Split ``A = [A_1 | ... | A_k]`` and attack each block separately.

    Right-hand sides ``h_2..h_k`` are drawn from ``I_{beta_i R}^m`` and
    ``h_1 = C - sum(h_i)``.  If a block system has no integer solution all
    ``h_i`` are redrawn, at most ``max_resamples`` times.
    """
    space = inst.space
    k, width = space.k, space.block_size
    if inst.m >= width:
        raise ValueError(f"divide and conquer needs m < n/k = {width}")
    betas = cfg.dnc_betas if cfg.dnc_betas is not None else space.alphas[1:]
    if len(betas) != k - 1:
        raise ValueError(f"need {k - 1} betas, got {len(betas)}")
    beta_bits = []
    for beta in betas:
        bits = beta * space.R
        if bits.denominator != 1 or bits <= 0:
            raise ValueError(f"beta={beta} with R={space.R} is not a positive bit count")
        beta_bits.append(int(bits))
    if k > 1 and rng is None:
        raise ValueError("divide and conquer needs an rng when k > 1")

    blocks = [inst.A.submatrix(slice(None), slice(i * width, (i + 1) * width)) for i in range(k)]
    parts: list[tuple[int, ...] | None] = [None] * k
    for _ in range(max_resamples + 1):
        hs = [None] + [tuple(sample_interval(rng, bits) for _ in range(inst.m)) for bits in beta_bits]
        hs[0] = tuple(c - sum(h[r] for h in hs[1:]) for r, c in enumerate(inst.C))
        parts = [None] * k
        try:
            for i in range(k):
                parts[i], _ = _solve_block(blocks[i], hs[i], space.block(i), cfg.search_width)
        except NoIntegerSolution:
            continue
        break

    x = []
    for i in range(k):
        x.extend(parts[i] if parts[i] is not None else (0,) * width)
    x = tuple(x)
    score = sum(space.mask(x))
    eq = inst.A @ x == inst.C
    return AttackReport(x, score, space.n, score == space.n and eq, eq)
