"""Three-move identification scheme over the compact knapsack, in ``t``-round parallel form.

The prover holds ``x`` in ``S = S_alphas(n, R)`` with ``A x = b``.  Nonces
come from the smaller space ``S' = S_betas(n, R)``; a response column is
``k_i + e_i x``, which stays in ``S`` except with the small per-coordinate
probability ``eps_i = (3 * 2^(beta_i R - 1) - 1) / 2^(alpha_i R)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .attacks import SolutionSpace, parse_fraction
from .intmatrix import IntMatrix
from .xof import (
    TAG_MATRIX,
    TAG_SECRET,
    XofStream,
    derive_seed,
    ensure_rng,
    random_bits,
)

HASH_ID = "shake256"


@dataclass(frozen=True)
class SchemeParams:
    n: int
    m: int
    R: int
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]
    t: int = 80
    entry_bits: int = 24
    hash_id: str = HASH_ID

    def __post_init__(self):
        alphas = tuple(parse_fraction(a) for a in self.alphas)
        betas = tuple(parse_fraction(b) for b in self.betas)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)
        if len(alphas) != len(betas):
            raise ValueError("alphas and betas must have the same length")
        if self.m < 1 or self.t < 1 or self.entry_bits < 1:
            raise ValueError("m, t and entry_bits must be positive")
        # both spaces validate k | n and integral bit counts
        SolutionSpace(self.n, self.R, alphas)
        SolutionSpace(self.n, self.R, betas)
        for a_bits, b_bits in zip(self.alpha_bits, self.beta_bits):
            if not satisfies_hypothesis(a_bits, b_bits):
                raise ValueError(f"beta*R={b_bits} too large for alpha*R={a_bits}")
        if self.hash_id != HASH_ID:
            raise ValueError(f"unsupported hash {self.hash_id!r}")

    @property
    def k(self) -> int:
        return len(self.alphas)

    @property
    def alpha_bits(self) -> tuple[int, ...]:
        return tuple(int(a * self.R) for a in self.alphas)

    @property
    def beta_bits(self) -> tuple[int, ...]:
        return tuple(int(b * self.R) for b in self.betas)

    @property
    def space(self) -> SolutionSpace:
        return SolutionSpace(self.n, self.R, self.alphas)

    @property
    def nonce_space(self) -> SolutionSpace:
        return SolutionSpace(self.n, self.R, self.betas)

    def with_t(self, t: int) -> SchemeParams:
        return SchemeParams(self.n, self.m, self.R, self.alphas, self.betas, t, self.entry_bits, self.hash_id)


def satisfies_hypothesis(alpha_bits: int, beta_bits: int) -> bool:
    """``beta R <= log2(2^(alpha R - 1) + 1)``, i.e. the small interval fits the gap above the large one."""
    return (1 << beta_bits) <= (1 << (alpha_bits - 1)) + 1


def epsilon(alpha_bits: int, beta_bits: int) -> Fraction:
    """Exact ``Pr(k + x not in I_alphaR)`` for ``k`` uniform in ``I_betaR`` and ``x`` uniform in ``I_alphaR``."""
    return Fraction(3 * (1 << (beta_bits - 1)) - 1, 1 << alpha_bits)


DEFAULT_PARAMS = SchemeParams(48, 4, 192, (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 8), Fraction(1, 4)), 80, 24)
SMALL_PARAMS = SchemeParams(8, 2, 24, (Fraction(1, 2), Fraction(1)), (Fraction(1, 4), Fraction(1, 2)), 1, 8)


def choose_betas(alphas: Sequence, R: int, epsilons: Sequence) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Largest ``beta_i`` with ``beta_i R`` integral and achieved failure rate at most ``epsilons[i]``.

    Returns ``(betas, achieved)`` where ``achieved[i]`` is the exact
    per-coordinate failure probability for the chosen ``beta_i``.
    """
    alphas = [parse_fraction(a) for a in alphas]
    if len(epsilons) == 1 and len(alphas) > 1:
        epsilons = list(epsilons) * len(alphas)
    if len(epsilons) != len(alphas):
        raise ValueError("need one epsilon per block")
    betas, achieved = [], []
    for alpha, eps in zip(alphas, epsilons):
        eps = parse_fraction(eps) if not isinstance(eps, float) else Fraction(eps)
        if not 0 < eps < Fraction(1, 2):
            raise ValueError(f"epsilon must lie in (0, 1/2), got {eps}")
        a_bits = alpha * R
        if a_bits.denominator != 1 or a_bits < 2:
            raise ValueError(f"alpha={alpha} with R={R} is not a usable bit count")
        a_bits = int(a_bits)
        # floor(log2((eps 2^(aR+1) + 2) / 3)): largest b with 3 * 2^b <= eps 2^(aR+1) + 2
        bound = eps * (1 << (a_bits + 1)) + 2
        b = 0
        while 3 * (1 << (b + 1)) <= bound:
            b += 1
        if b < 1:
            raise ValueError(f"no positive beta*R reaches epsilon={float(eps):.3g} for alpha*R={a_bits}")
        assert satisfies_hypothesis(a_bits, b)
        beta = Fraction(b, R)
        betas.append(beta)
        achieved.append(epsilon(a_bits, b))
    return tuple(betas), tuple(achieved)


def suggest_betas(alphas: Sequence, R: int, epsilons: Sequence, per_block: int = 3) -> list[tuple[Fraction, ...]]:
    """Candidate ``beta`` tuples meeting the targets: the maximal choice plus smaller dyadic ones.

    Smaller nonces keep completeness at least as good and shorten
    signatures, at the cost of a weaker collision bound.
    """
    best, _ = choose_betas(alphas, R, epsilons)
    options = []
    for beta in best:
        vals = [beta]
        j = 1
        while len(vals) <= per_block:
            cand = Fraction(1, 1 << j)
            j += 1
            if cand * R < 1:
                break
            if cand < beta and (cand * R).denominator == 1:
                vals.append(cand)
        options.append(vals)
    return sorted(set(product(*options)), key=lambda bs: tuple(-b for b in bs))


def completeness_probability(params: SchemeParams) -> Fraction:
    """``prod_i (1 - eps_i)^(n/k)``: chance that ``x + k`` stays in ``S``, exactly."""
    width = params.n // params.k
    p = Fraction(1)
    for a_bits, b_bits in zip(params.alpha_bits, params.beta_bits):
        p *= (1 - epsilon(a_bits, b_bits)) ** width
    return p


def expected_accept_rate(params: SchemeParams) -> Fraction:
    """Accept rate of an honest ``t``-round run, averaged over uniform challenges.

    Only columns with ``e_i = 1`` can fail membership, so each round
    accepts with probability ``(1 + p) / 2``.
    """
    return ((1 + completeness_probability(params)) / 2) ** params.t


@dataclass(frozen=True)
class PublicKey:
    params: SchemeParams
    a_seed: bytes
    b: tuple[int, ...]
    A: IntMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.a_seed) != 32:
            raise ValueError("a_seed must be 32 bytes")
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if len(self.b) != self.params.m:
            raise ValueError("b has the wrong length")
        object.__setattr__(self, "A", derive_matrix(self.a_seed, self.params))


@dataclass(frozen=True)
class SecretKey:
    x: tuple[int, ...]
    x_seed: bytes

    def __post_init__(self):
        if len(self.x_seed) != 16:
            raise ValueError("x_seed must be 16 bytes")

    @classmethod
    def from_seed(cls, x_seed: bytes, params: SchemeParams) -> SecretKey:
        return cls(derive_secret(x_seed, params), bytes(x_seed))


@dataclass(frozen=True)
class Transcript:
    commitment: IntMatrix
    challenge: tuple[int, ...]
    response: IntMatrix


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def derive_matrix(a_seed: bytes, params: SchemeParams) -> IntMatrix:
    """``A`` with entries uniform in ``I_entry_bits``, expanded row-major from the seed."""
    stream = XofStream(a_seed, TAG_MATRIX)
    return IntMatrix([[stream.interval(params.entry_bits) for _ in range(params.n)] for _ in range(params.m)])


def derive_secret(x_seed: bytes, params: SchemeParams) -> tuple[int, ...]:
    return params.space.sample(XofStream(x_seed, TAG_SECRET))


def keygen(params: SchemeParams, master_seed: bytes | None = None) -> tuple[PublicKey, SecretKey]:
    """Deterministic in ``master_seed``; a fresh random seed when it is omitted."""
    if master_seed is None:
        master_seed = os.urandom(32)
    sk = SecretKey.from_seed(derive_seed(master_seed, b"x", 16), params)
    return public_key_from_secret(sk, params), sk


def public_key_from_secret(sk: SecretKey, params: SchemeParams) -> PublicKey:
    """The matrix seed is hashed from the secret seed, so a 16-byte secret rebuilds the whole key pair."""
    a_seed = derive_seed(sk.x_seed, b"a", 32)
    A = derive_matrix(a_seed, params)
    return PublicKey(params, a_seed, A @ sk.x)


def commit(sk: SecretKey, pk: PublicKey, rng=None) -> tuple[IntMatrix, IntMatrix]:
    """Nonce matrix ``K`` (columns uniform in ``S'``) and commitment ``A K``."""
    rng = ensure_rng(rng)
    p = pk.params
    K = IntMatrix.from_columns([p.nonce_space.sample(rng) for _ in range(p.t)], rows=p.n)
    return K, pk.A @ K


def respond(sk: SecretKey, nonces: IntMatrix, challenge: Sequence[int]) -> IntMatrix:
    if len(challenge) != nonces.cols:
        raise ValueError("challenge length does not match the nonce count")
    if any(e not in (0, 1) for e in challenge):
        raise ValueError("challenge must be a bit vector")
    cols = [tuple(k + e * xi for k, xi in zip(col, sk.x)) for col, e in zip(nonces.columns(), challenge)]
    return IntMatrix.from_columns(cols, rows=nonces.rows)


def check_column(pk: PublicKey, r: Sequence[int], e: int, s: Sequence[int]) -> Verdict:
    if pk.A @ s != tuple(ri + e * bi for ri, bi in zip(r, pk.b)):
        return Verdict(False, "equation")
    space = pk.params.space if e else pk.params.nonce_space
    if s not in space:
        return Verdict(False, "membership")
    return Verdict(True)


def verify(pk: PublicKey, transcript: Transcript) -> Verdict:
    """Accept iff every column satisfies ``A s_i = r_i + e_i b`` and the membership test for ``e_i``."""
    p = pk.params
    R, e, S = transcript.commitment, tuple(transcript.challenge), transcript.response
    t = len(e)
    if R.shape != (p.m, t) or S.shape != (p.n, t):
        raise ValueError(f"transcript shapes {R.shape}, {S.shape} do not match m={p.m}, n={p.n}, t={t}")
    if any(bit not in (0, 1) for bit in e):
        raise ValueError("challenge must be a bit vector")
    for i in range(t):
        v = check_column(pk, R.column(i), e[i], S.column(i))
        if not v:
            return Verdict(False, f"column {i}: {v.reason}")
    return Verdict(True)


def run_protocol(pk: PublicKey, sk: SecretKey, rng=None) -> tuple[Transcript, Verdict]:
    """One honest interactive run with a uniformly random challenge."""
    rng = ensure_rng(rng)
    K, R = commit(sk, pk, rng)
    e = random_bits(rng, pk.params.t)
    T = Transcript(R, e, respond(sk, K, e))
    return T, verify(pk, T)


def simulate_transcript(pk: PublicKey, challenge: Sequence[int], rng=None) -> Transcript:
    """Transcript for a given challenge without the secret: ``s`` from ``S'`` or ``S``, then ``r = A s - e b``."""
    rng = ensure_rng(rng)
    p = pk.params
    e = tuple(challenge)
    cols = [(p.space if bit else p.nonce_space).sample(rng) for bit in e]
    S = IntMatrix.from_columns(cols, rows=p.n)
    rs = [tuple(v - bit * bi for v, bi in zip(pk.A @ s, pk.b)) for s, bit in zip(cols, e)]
    return Transcript(IntMatrix.from_columns(rs, rows=p.m), e, S)


def extract_witness(T1: Transcript, T2: Transcript, pk: PublicKey) -> tuple[tuple[int, ...], bool]:
    """Knapsack solution from two accepting transcripts sharing a commitment.

    Always satisfies ``A x = b``; the flag reports whether it also lies in ``S``.
    """
    if T1.commitment != T2.commitment:
        raise ValueError("transcripts do not share a commitment")
    if tuple(T1.challenge) == tuple(T2.challenge):
        raise ValueError("challenges are identical")
    for T in (T1, T2):
        v = verify(pk, T)
        if not v:
            raise ValueError(f"transcript rejected ({v.reason})")
    j = next(i for i, (a, b) in enumerate(zip(T1.challenge, T2.challenge)) if a != b)
    one, zero = (T1, T2) if T1.challenge[j] else (T2, T1)
    x = tuple(a - b for a, b in zip(one.response.column(j), zero.response.column(j)))
    assert pk.A @ x == pk.b
    return x, x in pk.params.space


def guessing_adversary(pk: PublicKey, rng=None) -> tuple[IntMatrix, IntMatrix, tuple[int, ...]]:
    """Cheating prover without the secret: guess each challenge bit in advance.

    For a guessed 0 it commits to ``A s`` with ``s`` in ``S'``; for a guessed
    1 it commits to ``A s - b`` with ``s`` in ``S``.  Returns the commitment,
    the prepared response and the guess; it passes iff the verifier's
    challenge equals the guess.
    """
    rng = ensure_rng(rng)
    guess = random_bits(rng, pk.params.t)
    T = simulate_transcript(pk, guess, rng)
    return T.commitment, T.response, guess
