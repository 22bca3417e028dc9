"""Lattice attack on a compact knapsack, step by step.

A planted solution x of A x = C is drawn from a solution space, then the
CVP attack recovers a candidate and the divide-and-conquer attack tries
block by block.  Full solutions come easily when every coordinate has the
same size; mixed block sizes leave about half the coordinates wrong.
"""

from compact_knapsack.attacks import (
    AttackConfig,
    SolutionSpace,
    cvp_attack,
    divide_and_conquer_attack,
    generate_instance,
)
from compact_knapsack.xof import XofStream


def show(title, inst, report):
    print(f"{title}: {report.satisfied_coords}/{report.total_coords} coordinates in range, "
          f"full solution {report.full_solution}, A y = C {report.equality_holds}")


def main():
    rng = XofStream(b"walkthrough")
    uniform = SolutionSpace(50, 80, ("1",))
    inst = generate_instance(uniform, 10, 10, rng)
    print(f"space {uniform.label()}, m = {inst.m}")
    show("  cvp", inst, cvp_attack(inst))

    mixed = SolutionSpace(50, 80, ("1", "1/2"))
    inst = generate_instance(mixed, 10, 10, rng)
    print(f"space {mixed.label()}, m = {inst.m}")
    show("  cvp", inst, cvp_attack(inst))
    show("  divide and conquer", inst, divide_and_conquer_attack(inst, AttackConfig(), rng))


if __name__ == "__main__":
    main()
