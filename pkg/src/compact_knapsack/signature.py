"""Fiat-Shamir signatures from the parallel identification scheme, plus key and signature files.

The challenge is ``e = H(R, msg)`` with ``H`` = SHAKE-256 over
``"CKSIGv1\\0" || canonical_bytes(R) || len(msg) as 8 bytes || msg``,
read least-significant bit first.  Signing restarts with fresh nonces
whenever some ``e_i = 1`` column leaves ``S``, so honest signatures always
verify.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction

from .encoding import (
    DecodeError,
    Reader,
    canonical_bytes,
    encoded_size,
    int_width,
    packed_bytes,
    read_canonical,
    read_packed,
    u32,
)
from .intmatrix import IntMatrix
from .sigma import (
    PublicKey,
    SchemeParams,
    SecretKey,
    Transcript,
    Verdict,
    check_column,
    commit,
    respond,
    verify,
)
from .xof import ensure_rng

SIG_TAG = b"CKSIGv1\x00"
PK_MAGIC = b"CKPK1"
SK_MAGIC = b"CKSK1"
SIG_MAGIC = b"CKSG1"
FORMAT_VERSION = 1
# version 1 stores both matrices with canonical_bytes; version 2 with 1-byte entry lengths
SIG_VERSION_CANONICAL = 1
SIG_VERSION_PACKED = 2
RESTART_BUDGET = 1000


class SigningError(RuntimeError):
    """Restart budget exhausted; the parameters make honest responses leave ``S`` too often."""


@dataclass(frozen=True)
class ChallengeHashConfig:
    t: int
    domain_tag: bytes = SIG_TAG
    algorithm_id: str = "shake256"

    def __post_init__(self):
        if self.algorithm_id != "shake256":
            raise ValueError(f"unsupported hash {self.algorithm_id!r}")
        if len(self.domain_tag) != 8:
            raise ValueError("domain tag must be 8 bytes")
        if self.t < 1:
            raise ValueError("t must be positive")


@dataclass(frozen=True)
class Signature:
    commitment: IntMatrix
    response: IntMatrix


def derive_challenge(cfg: ChallengeHashConfig, commitment: IntMatrix, msg: bytes) -> tuple[int, ...]:
    msg = bytes(msg)
    data = cfg.domain_tag + canonical_bytes(commitment) + len(msg).to_bytes(8, "big") + msg
    digest = hashlib.shake_256(data).digest((cfg.t + 7) // 8)
    return tuple((digest[i // 8] >> (i % 8)) & 1 for i in range(cfg.t))


def sign(sk: SecretKey, pk: PublicKey, msg: bytes, rng=None, budget: int = RESTART_BUDGET) -> Signature:
    sig, _ = sign_with_restarts(sk, pk, msg, rng, budget)
    return sig


def sign_with_restarts(sk: SecretKey, pk: PublicKey, msg: bytes, rng=None,
                       budget: int = RESTART_BUDGET) -> tuple[Signature, int]:
    """Like :func:`sign` but also returns how many nonce matrices were discarded."""
    rng = ensure_rng(rng)
    p = pk.params
    cfg = ChallengeHashConfig(p.t)
    for attempt in range(budget):
        K, R = commit(sk, pk, rng)
        e = derive_challenge(cfg, R, msg)
        S = respond(sk, K, e)
        if all(s in p.space for s, bit in zip(S.columns(), e) if bit):
            return Signature(R, S), attempt
    raise SigningError(f"no valid response after {budget} attempts")


def verify_signature(pk: PublicKey, msg: bytes, sig: Signature) -> Verdict:
    p = pk.params
    if sig.commitment.shape != (p.m, p.t) or sig.response.shape != (p.n, p.t):
        return Verdict(False, "shape")
    e = derive_challenge(ChallengeHashConfig(p.t), sig.commitment, msg)
    return verify(pk, Transcript(sig.commitment, e, sig.response))


def commitment_collision_bound(params: SchemeParams) -> Fraction:
    """``2^-(beta_min R)``: chance two nonces give the same commitment, at most."""
    return Fraction(1, 1 << min(params.beta_bits))


# -- files -----------------------------------------------------------------

def params_block(p: SchemeParams) -> bytes:
    out = b"".join(u32(v) for v in (p.n, p.m, p.R, p.t, p.k))
    out += b"".join(u32(v) for v in p.alpha_bits)
    out += b"".join(u32(v) for v in p.beta_bits)
    return out + u32(p.entry_bits)


def read_params(reader: Reader) -> SchemeParams:
    n, m, R, t, k = (reader.u32() for _ in range(5))
    if R == 0 or k == 0 or k > n:
        raise DecodeError("bad parameter block")
    alphas = tuple(Fraction(reader.u32(), R) for _ in range(k))
    betas = tuple(Fraction(reader.u32(), R) for _ in range(k))
    entry_bits = reader.u32()
    try:
        return SchemeParams(n, m, R, alphas, betas, t, entry_bits)
    except ValueError as exc:
        raise DecodeError(f"invalid parameters: {exc}") from exc


def _header(reader: Reader, magic: bytes, versions) -> int:
    reader.expect(magic)
    version = reader.u8()
    if version not in versions:
        raise DecodeError(f"unsupported version {version}")
    return version


def encode_public_key(pk: PublicKey) -> bytes:
    b = IntMatrix([[v] for v in pk.b], cols=1)
    return PK_MAGIC + bytes([FORMAT_VERSION]) + params_block(pk.params) + pk.a_seed + canonical_bytes(b)


def decode_public_key(data: bytes) -> PublicKey:
    r = Reader(data)
    _header(r, PK_MAGIC, (FORMAT_VERSION,))
    params = read_params(r)
    a_seed = r.take(32)
    b = read_canonical(r)
    r.done()
    if b.shape != (params.m, 1):
        raise DecodeError("b has the wrong shape")
    return PublicKey(params, a_seed, b.column(0))


def encode_secret_key(sk: SecretKey, params: SchemeParams) -> bytes:
    return SK_MAGIC + bytes([FORMAT_VERSION]) + params_block(params) + sk.x_seed


def decode_secret_key(data: bytes) -> tuple[SecretKey, SchemeParams]:
    r = Reader(data)
    _header(r, SK_MAGIC, (FORMAT_VERSION,))
    params = read_params(r)
    x_seed = r.take(16)
    r.done()
    return SecretKey.from_seed(x_seed, params), params


def encode_signature(sig: Signature, version: int = SIG_VERSION_PACKED) -> bytes:
    enc = {SIG_VERSION_CANONICAL: canonical_bytes, SIG_VERSION_PACKED: packed_bytes}[version]
    return SIG_MAGIC + bytes([version]) + enc(sig.commitment) + enc(sig.response)


def decode_signature(data: bytes) -> Signature:
    r = Reader(data)
    version = _header(r, SIG_MAGIC, (SIG_VERSION_CANONICAL, SIG_VERSION_PACKED))
    read = read_canonical if version == SIG_VERSION_CANONICAL else read_packed
    R = read(r)
    S = read(r)
    r.done()
    return Signature(R, S)


def signature_size(sig: Signature, version: int = SIG_VERSION_PACKED) -> int:
    """Serialized length computed from the entries, without encoding."""
    len_bytes = 4 if version == SIG_VERSION_CANONICAL else 1
    return 6 + encoded_size(sig.commitment, len_bytes) + encoded_size(sig.response, len_bytes)


def _interval_mean(bits: int) -> Fraction:
    return Fraction((1 << (bits - 1)) + (1 << bits) - 1, 2)


def expected_signature_size(params: SchemeParams, version: int = SIG_VERSION_PACKED) -> float:
    """Mean serialized length over random nonces and challenges.

    A response entry has ``beta R`` bits when ``e_i = 0`` and ``alpha R``
    (or, rarely, one more) bits when ``e_i = 1``; a commitment entry is a
    sum of ``n`` products, sized here by its expected magnitude.
    """
    len_bytes = 4 if version == SIG_VERSION_CANONICAL else 1
    width = params.n // params.k
    per_column = 0.0
    for a_bits, b_bits in zip(params.alpha_bits, params.beta_bits):
        per_column += width * (len_bytes + 0.5 * int_width(1 << (b_bits - 1)) + 0.5 * int_width(1 << (a_bits - 1)))
    mean_entry = _interval_mean(params.entry_bits)
    mean_r = sum(width * mean_entry * _interval_mean(b) for b in params.beta_bits)
    r_entry = len_bytes + int_width(int(mean_r))
    return 6 + 2 * 12 + params.t * (per_column + params.m * r_entry)
