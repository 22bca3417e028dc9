import random
from fractions import Fraction

import pytest

from compact_knapsack.intmatrix import IntMatrix
from compact_knapsack.sigma import (
    DEFAULT_PARAMS,
    SMALL_PARAMS,
    SchemeParams,
    Transcript,
    choose_betas,
    commit,
    completeness_probability,
    epsilon,
    expected_accept_rate,
    extract_witness,
    guessing_adversary,
    keygen,
    public_key_from_secret,
    respond,
    run_protocol,
    satisfies_hypothesis,
    simulate_transcript,
    suggest_betas,
    verify,
)
from compact_knapsack.xof import XofStream

TINY = SchemeParams(4, 1, 3, (Fraction(1),), (Fraction(1, 3),), 1, 4)


def params_t(t):
    return SMALL_PARAMS.with_t(t)


@pytest.fixture
def keys():
    return keygen(params_t(6), b"fixture")


def test_epsilon_exhaustive_small_intervals():
    for a_bits in range(2, 11):
        for b_bits in range(1, a_bits + 1):
            if not satisfies_hypothesis(a_bits, b_bits):
                continue
            lo_a, hi_a = 1 << (a_bits - 1), 1 << a_bits
            lo_b, hi_b = 1 << (b_bits - 1), 1 << b_bits
            bad = sum(1 for x in range(lo_a, hi_a) for k in range(lo_b, hi_b) if x + k >= hi_a)
            assert Fraction(bad, (hi_a - lo_a) * (hi_b - lo_b)) == epsilon(a_bits, b_bits)


def test_choose_betas_examples():
    betas, eps = choose_betas(("1/4", "1/2"), 192, [1e-7, 1e-7])
    assert betas[0] == Fraction(1, 8)
    assert betas[1] >= Fraction(1, 4)
    assert eps[0] == Fraction(3 * 2**23 - 1, 2**48)
    assert abs(float(eps[0]) - 8.94e-8) < 1e-10
    exact = [epsilon(48, 24), epsilon(96, 48)]
    assert choose_betas(("1/4", "1/2"), 192, exact)[0] == (Fraction(1, 8), Fraction(1, 4))
    assert (Fraction(1, 8), Fraction(1, 4)) in suggest_betas(("1/4", "1/2"), 192, [1e-7])


def test_choose_betas_rounds_down():
    # just below the achieved value of beta R = 24 forces 23
    betas, eps = choose_betas(("1/4",), 192, [epsilon(48, 24) - Fraction(1, 2**60)])
    assert betas == (Fraction(23, 192),)
    assert eps[0] < epsilon(48, 24)


def test_choose_betas_errors():
    with pytest.raises(ValueError):
        choose_betas(("1/4",), 192, [Fraction(1, 2**60)])
    with pytest.raises(ValueError):
        choose_betas(("1/4",), 192, [0.6])


def test_params_hypothesis_enforced():
    with pytest.raises(ValueError):
        SchemeParams(4, 1, 8, ("1/2",), ("1/2",), 1, 4)


def test_completeness_values():
    assert completeness_probability(TINY) == Fraction(3, 4) ** 4
    p = completeness_probability(DEFAULT_PARAMS)
    assert p >= 1 - Fraction(48, 10**7)
    assert expected_accept_rate(TINY) == ((1 + Fraction(3, 4) ** 4) / 2)


def test_keygen_deterministic_and_consistent():
    pk1, sk1 = keygen(DEFAULT_PARAMS, b"same")
    pk2, sk2 = keygen(DEFAULT_PARAMS, b"same")
    assert pk1 == pk2 and sk1 == sk2
    assert len(sk1.x_seed) == 16 and len(pk1.a_seed) == 32
    assert pk1.A @ sk1.x == pk1.b
    assert sk1.x in DEFAULT_PARAMS.space
    assert public_key_from_secret(sk1, DEFAULT_PARAMS) == pk1
    assert keygen(DEFAULT_PARAMS, b"other")[0] != pk1


def test_commit_and_respond(keys):
    pk, sk = keys
    K, R = commit(sk, pk, XofStream(b"n"))
    assert K.shape == (8, 6) and R.shape == (2, 6)
    for i, col in enumerate(K.columns()):
        assert col in pk.params.nonce_space
        assert pk.A @ col == R.column(i)
    assert respond(sk, K, (0,) * 6) == K
    ones = respond(sk, K, (1,) * 6)
    assert ones == K + IntMatrix.from_columns([sk.x] * 6)
    mixed = (1, 0, 0, 1, 1, 0)
    S = respond(sk, K, mixed)
    for i, e in enumerate(mixed):
        assert S.column(i) == tuple(k + e * x for k, x in zip(K.column(i), sk.x))
    with pytest.raises(ValueError):
        respond(sk, K, (0, 1))
    with pytest.raises(ValueError):
        respond(sk, K, (2,) * 6)


def test_t1_is_single_round():
    pk, sk = keygen(params_t(1), b"t1")
    T, verdict = run_protocol(pk, sk, XofStream(b"r"))
    assert T.commitment.shape == (2, 1) and len(T.challenge) == 1


def honest(pk, sk, e, seed=b"h"):
    K, R = commit(sk, pk, XofStream(seed))
    return K, Transcript(R, tuple(e), respond(sk, K, e))


def test_verify_accepts_and_rejects(keys):
    pk, sk = keys
    e = (0, 1, 0, 1, 1, 0)
    # find nonces whose e=1 columns stay in S
    for i in range(50):
        K, T = honest(pk, sk, e, bytes([i]))
        if verify(pk, T):
            break
    assert verify(pk, T)
    bumped = [list(r) for r in T.response]
    bumped[0][0] += 1
    v = verify(pk, Transcript(T.commitment, e, IntMatrix(bumped)))
    assert not v and "equation" in v.reason
    # a valid equation with an e=0 column outside S'
    s = tuple(x + 1 for x in pk.params.space.sample(XofStream(b"z")))
    r = pk.A @ s
    bad = Transcript(IntMatrix.from_columns([r]), (0,), IntMatrix.from_columns([s]))
    v = verify(pk.__class__(pk.params.with_t(1), pk.a_seed, pk.b), bad)
    assert not v and "membership" in v.reason


def test_verify_shape_mismatch(keys):
    pk, sk = keys
    _, T = honest(pk, sk, (0,) * 6)
    with pytest.raises(ValueError):
        verify(pk, Transcript(T.commitment, (0,) * 5, T.response))


def test_simulator_always_verifies(keys):
    pk, _ = keys
    rng = XofStream(b"sim")
    for _ in range(20):
        e = tuple(rng.randbits(1) for _ in range(6))
        T = simulate_transcript(pk, e, rng)
        assert verify(pk, T)
        for s, bit in zip(T.response.columns(), e):
            assert s in (pk.params.space if bit else pk.params.nonce_space)


def test_extractor(keys):
    pk, sk = keys
    rng = random.Random(9)
    done = 0
    while done < 10:
        K, R = commit(sk, pk, rng)
        e1 = tuple(rng.getrandbits(1) for _ in range(6))
        e2 = tuple(rng.getrandbits(1) for _ in range(6))
        if e1 == e2:
            continue
        T1 = Transcript(R, e1, respond(sk, K, e1))
        T2 = Transcript(R, e2, respond(sk, K, e2))
        if not (verify(pk, T1) and verify(pk, T2)):
            continue
        x, in_s = extract_witness(T1, T2, pk)
        assert x == sk.x and in_s
        with pytest.raises(ValueError):
            extract_witness(T1, T1, pk)
        done += 1


def test_extractor_rejects_mismatched_commitments(keys):
    pk, sk = keys
    _, T1 = honest(pk, sk, (0,) * 6, b"a")
    _, T2 = honest(pk, sk, (0,) * 5 + (1,), b"b")
    with pytest.raises(ValueError):
        extract_witness(T1, T2, pk)


def test_guessing_adversary_wins_only_on_matching_challenge(keys):
    pk, _ = keys
    R, S, guess = guessing_adversary(pk, XofStream(b"eve"))
    assert verify(pk, Transcript(R, guess, S))
    other = tuple(1 - guess[0] for _ in range(1)) + guess[1:]
    assert not verify(pk, Transcript(R, other, S))


def test_bit_one_responses_verify_and_lie_in_s(keys):
    pk, sk = keys
    rng = XofStream(b"bit one")
    e = (1,) * pk.params.t
    honest_ok = 0
    for _ in range(200):
        K, R = commit(sk, pk, rng)
        T = Transcript(R, e, respond(sk, K, e))
        if verify(pk, T):
            honest_ok += 1
            assert all(s in pk.params.space for s in T.response.columns())
        sim = simulate_transcript(pk, e, rng)
        assert verify(pk, sim)
        assert all(s in pk.params.space for s in sim.response.columns())
    assert honest_ok > 0
