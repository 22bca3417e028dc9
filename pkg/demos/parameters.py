"""Choosing nonce sizes for a target completeness error.

For each block the nonce width beta R is the largest value whose
overflow probability stays under the target; the table lists the
candidates and what they cost in completeness and collision resistance.
"""

from compact_knapsack.sigma import SchemeParams, choose_betas, completeness_probability, suggest_betas


def main():
    alphas, R, n, m = ("1/4", "1/2"), 192, 48, 4
    betas, eps = choose_betas(alphas, R, [1e-7, 1e-7])
    print(f"maximal betas {[str(b) for b in betas]}, achieved eps {[f'{float(e):.3e}' for e in eps]}")
    for cand in suggest_betas(alphas, R, [1e-7, 1e-7]):
        p = SchemeParams(n, m, R, alphas, cand)
        bits = [int(b * R) for b in cand]
        print(f"  betas {[str(b) for b in cand]}: nonce bits {bits}, "
              f"completeness 1 - {float(1 - completeness_probability(p)):.2e}, collision bound 2^-{min(bits)}")


if __name__ == "__main__":
    main()
