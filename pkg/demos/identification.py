"""The identification protocol: honest runs, extraction and simulation.

Shows one honest run, the witness recovered from two accepting transcripts
that share a commitment, a transcript simulated without the secret, and
how rarely a prover who guesses the challenge gets through.
"""

import random

from compact_knapsack.sigma import (
    SMALL_PARAMS,
    Transcript,
    commit,
    completeness_probability,
    extract_witness,
    guessing_adversary,
    keygen,
    respond,
    run_protocol,
    simulate_transcript,
    verify,
)
from compact_knapsack.xof import XofStream, random_bits


def main():
    params = SMALL_PARAMS.with_t(8)
    pk, sk = keygen(params, b"id demo")
    rng = random.Random(1)
    print(f"n={params.n} m={params.m} R={params.R} t={params.t}, "
          f"per-round completeness {float(completeness_probability(params)):.4f}")

    T, verdict = run_protocol(pk, sk, rng)
    print(f"honest run with challenge {''.join(map(str, T.challenge))}: {'accept' if verdict else verdict.reason}")

    for _ in range(1000):
        K, R = commit(sk, pk, rng)
        e1, e2 = (0,) * params.t, (1,) + (0,) * (params.t - 1)
        T1, T2 = Transcript(R, e1, respond(sk, K, e1)), Transcript(R, e2, respond(sk, K, e2))
        if verify(pk, T1) and verify(pk, T2):
            break
    x, in_s = extract_witness(T1, T2, pk)
    print(f"extracted witness equals the secret: {x == sk.x}, lies in S: {in_s}")

    sim = simulate_transcript(pk, random_bits(rng, params.t), rng)
    print(f"simulated transcript verifies: {bool(verify(pk, sim))}")

    eve, wins, trials = XofStream(b"eve"), 0, 4096
    for _ in range(trials):
        R, S, _ = guessing_adversary(pk, eve)
        wins += bool(verify(pk, Transcript(R, random_bits(rng, params.t), S)))
    print(f"guessing prover: {wins}/{trials} accepted, about {trials / 2 ** params.t:.0f} expected")


if __name__ == "__main__":
    main()
